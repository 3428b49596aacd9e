//! CR vector fields and tangential calculus: the polynomial cross basis,
//! iterated tangential derivatives, the gradient families they generate, the
//! bordered Levi determinant, and Lie brackets.

use crate::arena::VariableArena;
use crate::elim::determinant;
use crate::hypersurface::HypersurfaceSpec;
use crate::num::GaussianRational;
use crate::poly::Polynomial;
use std::sync::Arc;

/// A vector field with polynomial coefficients on the complexified ring:
/// `sum z_coeffs[k] d/dZ_k + sum zeta_coeffs[k] d/d(conj Z_k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyField {
    arena: Arc<VariableArena>,
    pub z_coeffs: Vec<Polynomial>,
    pub zeta_coeffs: Vec<Polynomial>,
}

impl PolyField {
    pub fn new(
        arena: &Arc<VariableArena>,
        z_coeffs: Vec<Polynomial>,
        zeta_coeffs: Vec<Polynomial>,
    ) -> Self {
        let n = arena.dim();
        assert_eq!(z_coeffs.len(), n);
        assert_eq!(zeta_coeffs.len(), n);
        PolyField { arena: arena.clone(), z_coeffs, zeta_coeffs }
    }

    pub fn zero(arena: &Arc<VariableArena>) -> Self {
        let n = arena.dim();
        PolyField {
            arena: arena.clone(),
            z_coeffs: vec![Polynomial::zero(arena); n],
            zeta_coeffs: vec![Polynomial::zero(arena); n],
        }
    }

    pub fn arena(&self) -> &Arc<VariableArena> {
        &self.arena
    }

    pub fn is_zero(&self) -> bool {
        self.z_coeffs.iter().all(|c| c.is_zero()) && self.zeta_coeffs.iter().all(|c| c.is_zero())
    }

    /// Action as a derivation.
    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        let n = self.arena.dim();
        let mut acc = Polynomial::zero(&self.arena);
        for k in 0..n {
            if !self.z_coeffs[k].is_zero() {
                acc = acc.add(&self.z_coeffs[k].mul(&f.partial(self.arena.holo(k))));
            }
            if !self.zeta_coeffs[k].is_zero() {
                acc = acc.add(&self.zeta_coeffs[k].mul(&f.partial(self.arena.anti(k))));
            }
        }
        acc
    }

    /// Commutator of derivations: `[A, B](f) = A(B(f)) - B(A(f))`.
    ///
    /// Bilinear and antisymmetric; the Jacobi identity holds.
    pub fn bracket(&self, other: &PolyField) -> PolyField {
        let n = self.arena.dim();
        let mut z = Vec::with_capacity(n);
        let mut zeta = Vec::with_capacity(n);
        for k in 0..n {
            z.push(self.apply(&other.z_coeffs[k]).sub(&other.apply(&self.z_coeffs[k])));
            zeta.push(self.apply(&other.zeta_coeffs[k]).sub(&other.apply(&self.zeta_coeffs[k])));
        }
        PolyField { arena: self.arena.clone(), z_coeffs: z, zeta_coeffs: zeta }
    }

    /// Conjugate field: coefficients conjugated, holomorphic and
    /// antiholomorphic blocks exchanged.
    pub fn conjugate(&self) -> PolyField {
        PolyField {
            arena: self.arena.clone(),
            z_coeffs: self.zeta_coeffs.iter().map(|c| c.conjugate_swap()).collect(),
            zeta_coeffs: self.z_coeffs.iter().map(|c| c.conjugate_swap()).collect(),
        }
    }

    pub fn add_field(&self, other: &PolyField) -> PolyField {
        PolyField {
            arena: self.arena.clone(),
            z_coeffs: self
                .z_coeffs
                .iter()
                .zip(&other.z_coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
            zeta_coeffs: self
                .zeta_coeffs
                .iter()
                .zip(&other.zeta_coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    /// Coefficient vector at a point, as a `2N`-vector (Z block then conj block).
    pub fn eval(&self, full_point: &[GaussianRational]) -> Vec<GaussianRational> {
        self.z_coeffs
            .iter()
            .chain(self.zeta_coeffs.iter())
            .map(|c| c.eval(full_point))
            .collect()
    }
}

/// A CR vector field: a (0,1) field tangent to the hypersurface.
#[derive(Clone, Debug)]
pub struct CRField {
    pub field: PolyField,
    /// Index of the pivot coordinate used by the cross construction.
    pub pivot: usize,
}

/// A derivation on an arbitrary arena: `sum coeffs[k] * d/d(var_k)`.
///
/// Unlike [`PolyField`] this is not tied to the holomorphic/antiholomorphic
/// block structure, so it also serves chart rings with auxiliary variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    arena: Arc<VariableArena>,
    coeffs: Vec<(crate::arena::VarId, Polynomial)>,
}

impl Derivation {
    pub fn new(arena: &Arc<VariableArena>, coeffs: Vec<(crate::arena::VarId, Polynomial)>) -> Self {
        for (_, c) in &coeffs {
            assert_eq!(c.arena(), arena);
        }
        Derivation { arena: arena.clone(), coeffs }
    }

    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        let mut acc = Polynomial::zero(&self.arena);
        for (v, c) in &self.coeffs {
            if !c.is_zero() {
                acc = acc.add(&c.mul(&f.partial(*v)));
            }
        }
        acc
    }
}

/// Apply `ops[0]` `alpha[0]` times, then `ops[1]`, and so on.
pub fn apply_derivation_multiindex(
    ops: &[Derivation],
    alpha: &[u32],
    f: &Polynomial,
) -> Polynomial {
    assert_eq!(ops.len(), alpha.len());
    let mut acc = f.clone();
    for (op, &times) in ops.iter().zip(alpha) {
        for _ in 0..times {
            acc = op.apply(&acc);
        }
    }
    acc
}

/// Basis of CR vector fields on `M` via the polynomial cross construction:
/// with pivot `k0` chosen so the pivot derivative is nonzero at the base point
/// (preferring the last coordinate),
/// `L_j = rho_{conj z_k0} d/d(conj z_j) - rho_{conj z_j} d/d(conj z_k0)`.
///
/// Tangency `L_j(rho) = 0` holds exactly by antisymmetry.
pub fn cr_basis(m: &HypersurfaceSpec) -> Vec<CRField> {
    let arena = m.arena();
    let n = m.dim();
    let full = m.full_point(m.base_point());
    let grad_zeta: Vec<Polynomial> = (0..n).map(|k| m.rho().partial(arena.anti(k))).collect();
    let pivot = if !grad_zeta[n - 1].eval(&full).is_zero() {
        n - 1
    } else {
        (0..n)
            .find(|&k| !grad_zeta[k].eval(&full).is_zero())
            .expect("validated spec has a nonzero antiholomorphic gradient component")
    };
    (0..n)
        .filter(|&j| j != pivot)
        .map(|j| {
            let mut zeta_coeffs = vec![Polynomial::zero(arena); n];
            zeta_coeffs[j] = grad_zeta[pivot].clone();
            zeta_coeffs[pivot] = grad_zeta[j].neg();
            CRField {
                field: PolyField::new(arena, vec![Polynomial::zero(arena); n], zeta_coeffs),
                pivot,
            }
        })
        .collect()
}

/// Apply `fields[0]` `alpha[0]` times, then `fields[1]` `alpha[1]` times, and
/// so on (first-index-first; CR fields need not commute, so the order is part
/// of the contract).
pub fn apply_multiindex(fields: &[PolyField], alpha: &[u32], f: &Polynomial) -> Polynomial {
    assert_eq!(fields.len(), alpha.len());
    let mut acc = f.clone();
    for (field, &times) in fields.iter().zip(alpha) {
        for _ in 0..times {
            acc = field.apply(&acc);
        }
    }
    acc
}

/// Gradient of `rho` with respect to the holomorphic variables.
pub fn holomorphic_gradient(m: &HypersurfaceSpec) -> Vec<Polynomial> {
    let arena = m.arena();
    (0..m.dim()).map(|k| m.rho().partial(arena.holo(k))).collect()
}

/// The family `V_alpha = L^alpha rho_Z`, componentwise.
pub fn v_alpha(m: &HypersurfaceSpec, basis: &[CRField], alpha: &[u32]) -> Vec<Polynomial> {
    let fields: Vec<PolyField> = basis.iter().map(|b| b.field.clone()).collect();
    holomorphic_gradient(m)
        .iter()
        .map(|g| apply_multiindex(&fields, alpha, g))
        .collect()
}

/// `c_alpha(Z, p0, conj p0)`: specialize the CR-basis coefficients at the base
/// point, apply the resulting Segre-tangent fields to the shifted defining
/// polynomial `rho(Z + p0, zeta)`, then substitute `zeta = conj p0`.
///
/// The result is a polynomial in the holomorphic variables vanishing at 0.
pub fn c_alpha(
    m: &HypersurfaceSpec,
    basis: &[CRField],
    p0: &[GaussianRational],
    alpha: &[u32],
) -> Polynomial {
    let arena = m.arena();
    let n = m.dim();
    assert_eq!(p0.len(), n);
    let z_assign: Vec<_> = (0..n).map(|k| (arena.holo(k), p0[k].clone())).collect();
    let segre_fields: Vec<PolyField> = basis
        .iter()
        .map(|b| {
            PolyField::new(
                arena,
                vec![Polynomial::zero(arena); n],
                b.field.zeta_coeffs.iter().map(|c| c.eval_partial(&z_assign)).collect(),
            )
        })
        .collect();
    let shifted = m.rho().shift(
        &(0..n)
            .map(|k| (arena.holo(k), p0[k].clone()))
            .collect::<Vec<_>>(),
    );
    let applied = apply_multiindex(&segre_fields, alpha, &shifted);
    let zeta_assign: Vec<_> = (0..n)
        .map(|k| (arena.anti(k), p0[k].conj()))
        .collect();
    applied.eval_partial(&zeta_assign)
}

/// Bordered Levi determinant: `det [rho_Z; L_1 rho_Z; ...; L_n rho_Z]`.
///
/// A nonvanishing multiple of the classical Levi determinant; its radical
/// membership in `(rho)` decides generic Levi degeneracy.
pub fn levi_determinant(m: &HypersurfaceSpec) -> Polynomial {
    let basis = cr_basis(m);
    let grad = holomorphic_gradient(m);
    let mut rows = vec![grad.clone()];
    for b in &basis {
        rows.push(grad.iter().map(|g| b.field.apply(g)).collect());
    }
    determinant(&rows)
}

/// Transport a polynomial that only involves holomorphic variables into a
/// fresh N-variable ring (for local-ring computations).
pub fn restrict_to_holo(p: &Polynomial, local: &Arc<VariableArena>) -> Polynomial {
    let arena = p.arena();
    let n = arena.dim();
    assert_eq!(local.len(), n, "local ring needs N variables");
    let terms = p
        .terms()
        .iter()
        .map(|(e, c)| {
            for v in n..e.len() {
                assert_eq!(e[v], 0, "polynomial involves non-holomorphic variables");
            }
            (e[..n].to_vec(), c.clone())
        })
        .collect::<Vec<_>>();
    Polynomial::from_terms(local, terms)
}

/// Fresh N-variable ring for local computations in the holomorphic slots.
pub fn local_ring(n: usize) -> Arc<VariableArena> {
    let names: Vec<String> = (1..=n).map(|k| format!("z{k}")).collect();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    VariableArena::aux_only(&refs)
}
