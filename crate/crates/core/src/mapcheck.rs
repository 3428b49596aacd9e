//! Verification of CR map candidates: maps-into certificates, Jacobian
//! nonvanishing, algebraicity certificates, and the sphere-target reflection
//! system.

use crate::arena::{VarId, VariableArena};
use crate::crcalc::{apply_derivation_multiindex, Derivation};
use crate::elim::determinant;
use crate::hypersurface::{HypersurfaceSpec, RigidNormalForm, ValidateError};
use crate::ideal::{radical_membership, IdealError, IdealPresentation, MonomialOrder};
use crate::invariants::multi_indices;
use crate::num::GaussianRational;
use crate::poly::Polynomial;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MapError {
    #[error("map has {got} components, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("map component {index} involves antiholomorphic variables")]
    NonHolomorphicComponent { index: usize },
    #[error("auxiliary components present where a polynomial map is required")]
    AuxiliaryNotSupported,
    #[error("annihilating polynomial is trivial in the function indeterminate")]
    TrivialCertificate,
    #[error("map does not send the hypersurface into the target")]
    NotIntoTarget,
    #[error("map does not vanish at the base point")]
    NotNormalized,
    #[error("no multi-index of length <= {bound} gives a nonvanishing tangential derivative")]
    NoIndexFound { bound: u32 },
    #[error("derivative matrix is not invertible at the base point")]
    VNotInvertibleAtPoint,
    #[error("triangularization requires a rotation outside the Gaussian rationals")]
    RotationObstruction,
    #[error("chart denominator 1 + i*phi_s vanishes at the base point")]
    ChartDegenerate,
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Validate(#[from] ValidateError),
}

/// An auxiliary algebraic-function generator: a fresh variable constrained by
/// a polynomial relation (its minimal polynomial over the coordinate ring).
#[derive(Clone, Debug)]
pub struct AuxRelation {
    pub var: VarId,
    pub relation: Polynomial,
}

/// A CR map candidate with polynomial components (optionally involving
/// auxiliary algebraic generators).
#[derive(Clone, Debug)]
pub struct PolyMap {
    arena: Arc<VariableArena>,
    components: Vec<Polynomial>,
    aux: Vec<AuxRelation>,
}

impl PolyMap {
    pub fn new(components: Vec<Polynomial>, aux: Vec<AuxRelation>) -> Result<Self, MapError> {
        let arena = components
            .first()
            .expect("map needs at least one component")
            .arena()
            .clone();
        let n = arena.dim();
        for (index, c) in components.iter().enumerate() {
            assert_eq!(c.arena(), &arena);
            for k in 0..n {
                if c.involves(arena.anti(k)) {
                    return Err(MapError::NonHolomorphicComponent { index });
                }
            }
        }
        Ok(PolyMap { arena, components, aux })
    }

    pub fn arena(&self) -> &Arc<VariableArena> {
        &self.arena
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn aux(&self) -> &[AuxRelation] {
        &self.aux
    }

    pub fn target_dim(&self) -> usize {
        self.components.len()
    }

    /// Value at a point of the source (auxiliaries not supported here).
    pub fn eval(&self, m: &HypersurfaceSpec, p: &[GaussianRational]) -> Vec<GaussianRational> {
        assert!(self.aux.is_empty(), "evaluation with auxiliaries is not defined pointwise");
        let mut full = m.full_point(p);
        full.resize(self.arena.len(), GaussianRational::zero());
        self.components.iter().map(|c| c.eval(&full)).collect()
    }
}

/// The unit-sphere target in the affine realization
/// `Z_N' + conj(Z_N') + sum_{j<N'} |Z_j|^2 = 0`.
pub fn sphere_target(target_dim: usize) -> HypersurfaceSpec {
    let a = VariableArena::complex_space(target_dim);
    let mut rho = Polynomial::var(&a, a.holo(target_dim - 1))
        .add(&Polynomial::var(&a, a.anti(target_dim - 1)));
    for j in 0..target_dim - 1 {
        rho = rho.add(&Polynomial::var(&a, a.holo(j)).mul(&Polynomial::var(&a, a.anti(j))));
    }
    HypersurfaceSpec::validate(
        rho,
        vec![GaussianRational::zero(); target_dim],
        Some("sphere".into()),
    )
    .expect("sphere defining polynomial is valid")
}

/// Pull the target defining polynomial back through the map:
/// `rho'(H(Z), conj H(zeta))` over the source ring (plus auxiliaries).
pub fn target_pullback(mp: &HypersurfaceSpec, h: &PolyMap) -> Polynomial {
    let np = mp.dim();
    assert_eq!(h.target_dim(), np);
    let mut images = Vec::with_capacity(2 * np);
    for k in 0..np {
        images.push(h.components[k].clone());
    }
    for k in 0..np {
        images.push(h.components[k].conjugate_swap());
    }
    mp.rho().map_into(&h.arena, &images)
}

/// Membership ideal for "vanishes on M" in the presence of auxiliaries:
/// `rho` plus every auxiliary relation and its conjugate.
fn graph_ideal(m: &HypersurfaceSpec, h: &PolyMap) -> Vec<Polynomial> {
    let mut gens = vec![m.rho().lift_to(&h.arena)];
    for aux in &h.aux {
        gens.push(aux.relation.clone());
        let conj = aux.relation.conjugate_swap();
        if conj != aux.relation {
            gens.push(conj);
        }
    }
    gens
}

/// True iff `H` maps `M` into `M'`: the pullback of the target defining
/// polynomial lies in the radical of the graph ideal.
pub fn maps_into(
    m: &HypersurfaceSpec,
    mp: &HypersurfaceSpec,
    h: &PolyMap,
    spair_budget: usize,
) -> Result<bool, MapError> {
    if h.target_dim() != mp.dim() {
        return Err(MapError::DimensionMismatch { expected: mp.dim(), got: h.target_dim() });
    }
    let pb = target_pullback(mp, h);
    let gens = graph_ideal(m, h);
    if gens.len() == 1 {
        // Principal square-free case: radical membership is divisibility.
        return Ok(pb.is_zero() || pb.divisible_by(&gens[0]));
    }
    let ideal = IdealPresentation::new(gens, MonomialOrder::GradedLex)?;
    Ok(radical_membership(&pb, &ideal, spair_budget)?)
}

/// Holomorphic Jacobian determinant plus the verdict that it does not vanish
/// identically on `M` (radical membership of the determinant).
pub fn jacobian_determinant(
    m: &HypersurfaceSpec,
    h: &PolyMap,
) -> Result<(Polynomial, bool), MapError> {
    let n = m.dim();
    if h.target_dim() != n {
        return Err(MapError::DimensionMismatch { expected: n, got: h.target_dim() });
    }
    if !h.aux.is_empty() {
        return Err(MapError::AuxiliaryNotSupported);
    }
    let arena = &h.arena;
    let mat: Vec<Vec<Polynomial>> = (0..n)
        .map(|i| (0..n).map(|j| h.components[i].partial(arena.holo(j))).collect())
        .collect();
    let jac = determinant(&mat);
    let verdict = !jac.is_zero() && !jac.divisible_by(&m.rho().lift_to(arena));
    Ok((jac, verdict))
}

/// Algebraicity certificate: `P(Z, f)` vanishes on `M` (modulo auxiliary
/// relations), where `P` is a polynomial in the holomorphic variables and the
/// function indeterminate `x_var`.
pub fn algebraicity_certificate(
    m: &HypersurfaceSpec,
    h_aux: &[AuxRelation],
    f: &Polynomial,
    p_rel: &Polynomial,
    x_var: VarId,
    spair_budget: usize,
) -> Result<bool, MapError> {
    if p_rel.degree_in(x_var) == 0 {
        return Err(MapError::TrivialCertificate);
    }
    let arena = p_rel.arena().clone();
    assert_eq!(f.arena(), &arena);
    let images: Vec<Polynomial> = (0..arena.len())
        .map(|v| if v == x_var { f.clone() } else { Polynomial::var(&arena, v) })
        .collect();
    let substituted = p_rel.map_into(&arena, &images);
    let mut gens = vec![m.rho().lift_to(&arena)];
    for aux in h_aux {
        let r = aux.relation.lift_to(&arena);
        gens.push(r.clone());
        let conj = r.conjugate_swap();
        if conj != r {
            gens.push(conj);
        }
    }
    if gens.len() == 1 {
        return Ok(substituted.is_zero() || substituted.divisible_by(&gens[0]));
    }
    let ideal = IdealPresentation::new(gens, MonomialOrder::GradedLex)?;
    Ok(radical_membership(&substituted, &ideal, spair_budget)?)
}

/// The reflection system extracted from a sphere-valued map: selected
/// multi-indices, the tangential-derivative matrix, the solved vectors and
/// scalars (as numerators over the cleared determinant denominators), and the
/// residual report.
#[derive(Clone, Debug)]
pub struct ReflectionSystem {
    pub betas: Vec<Vec<u32>>,
    /// Unitary rotation applied to the first `n+1` target components.
    pub rotation: Vec<Vec<GaussianRational>>,
    /// Rotated components, parametrized over the source chart.
    pub chart_components: Vec<Polynomial>,
    pub v_matrix: Vec<Vec<Polynomial>>,
    /// `det V` over the chart; the denominator of `xi` and `eta`.
    pub denominator: Polynomial,
    pub xi_numerator: Vec<Polynomial>,
    pub eta_numerator: Vec<Polynomial>,
    /// Numerators of `a = eta . conj xi`, `b = 1 + |eta|^2`, `c = |xi|^2` over
    /// the common denominator `det V * conj det V`.
    pub scalar_a_numerator: Polynomial,
    pub scalar_b_numerator: Polynomial,
    pub scalar_c_numerator: Polynomial,
    pub scalar_denominator: Polynomial,
    /// Componentwise residual of the solved linear system (reflection
    /// identity): must vanish identically over the chart.
    pub residual_reflection_ok: bool,
    /// Residual of the sphere pullback identity over the chart.
    pub residual_sphere_ok: bool,
    /// Residual of the rearranged scalar identity over the chart.
    pub residual_rearranged_ok: bool,
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let sq_num = int_sqrt(r.numer())?;
    let sq_den = int_sqrt(r.denom())?;
    Some(BigRational::new(sq_num, sq_den))
}

fn int_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    if n.is_zero() {
        return Some(BigInt::from(0));
    }
    let mut lo = BigInt::from(0);
    let mut hi = n.clone() + 1;
    while &lo + 1 < hi {
        let mid: BigInt = (&lo + &hi) / 2;
        if &mid * &mid <= *n {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if &lo * &lo == *n {
        Some(lo)
    } else {
        None
    }
}

/// Unitary matrix `A` (over the Gaussian rationals) with `A v = c e_0`,
/// built from signed permutations and embedded two-by-two rotations; fails
/// when a required norm is not a rational square.
fn triangularizing_conjugate_rotation(
    v: &[GaussianRational],
) -> Result<Vec<Vec<GaussianRational>>, MapError> {
    let k = v.len();
    let mut a: Vec<Vec<GaussianRational>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| if i == j { GaussianRational::one() } else { GaussianRational::zero() })
                .collect()
        })
        .collect();
    let mut w: Vec<GaussianRational> = v.to_vec();
    loop {
        let nz: Vec<usize> = (0..k).filter(|&i| !w[i].is_zero()).collect();
        match nz.len() {
            0 => return Err(MapError::VNotInvertibleAtPoint),
            1 => {
                if nz[0] != 0 {
                    a.swap(0, nz[0]);
                    w.swap(0, nz[0]);
                }
                return Ok(a);
            }
            _ => {
                let (p, q) = (nz[0], nz[1]);
                let norm = &w[p].norm_sqr() + &w[q].norm_sqr();
                let c = rational_sqrt(&norm).ok_or(MapError::RotationObstruction)?;
                let c = GaussianRational::from_rational(c);
                let c_inv = c.inv().unwrap();
                // Rows p, q of the embedded rotation sending (w_p, w_q) to (c, 0).
                let g_pp = &w[p].conj() * &c_inv;
                let g_pq = &w[q].conj() * &c_inv;
                let g_qp = &(-&w[q]) * &c_inv;
                let g_qq = &w[p] * &c_inv;
                let row_p: Vec<GaussianRational> = (0..k)
                    .map(|j| &(&g_pp * &a[p][j]) + &(&g_pq * &a[q][j]))
                    .collect();
                let row_q: Vec<GaussianRational> = (0..k)
                    .map(|j| &(&g_qp * &a[p][j]) + &(&g_qq * &a[q][j]))
                    .collect();
                a[p] = row_p;
                a[q] = row_q;
                let wp = &(&g_pp * &w[p]) + &(&g_pq * &w[q]);
                let wq = &(&g_qp * &w[p]) + &(&g_qq * &w[q]);
                w[p] = wp;
                w[q] = wq;
            }
        }
    }
}

/// Adjugate of a square polynomial matrix (transpose of cofactors).
fn adjugate(m: &[Vec<Polynomial>]) -> Vec<Vec<Polynomial>> {
    let n = m.len();
    let arena = m[0][0].arena().clone();
    if n == 1 {
        return vec![vec![Polynomial::one(&arena)]];
    }
    let mut adj = vec![vec![Polynomial::zero(&arena); n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<Polynomial>> = (0..n)
                .filter(|&r| r != i)
                .map(|r| {
                    (0..n)
                        .filter(|&c| c != j)
                        .map(|c| m[r][c].clone())
                        .collect()
                })
                .collect();
            let mut cof = determinant(&minor);
            if (i + j) % 2 == 1 {
                cof = cof.neg();
            }
            adj[j][i] = cof;
        }
    }
    adj
}

/// Build the reflection system for a map of the rigid hypersurface into the
/// sphere of one dimension higher.
///
/// The computation runs over the graph chart `(z, conj z, s)` of `M`, where
/// every identity that holds on `M` holds as an exact polynomial identity;
/// "vanishes on M" checks below are therefore exact zero tests in the chart
/// ring (equivalently, radical membership in the ambient ring).
pub fn reflection_system(
    m: &HypersurfaceSpec,
    rigid: &RigidNormalForm,
    h: &PolyMap,
    p: &[GaussianRational],
    m_bound: u32,
    spair_budget: usize,
) -> Result<ReflectionSystem, MapError> {
    let nn = m.dim();
    let n = nn - 1;
    let np = nn + 1;
    if h.target_dim() != np {
        return Err(MapError::DimensionMismatch { expected: np, got: h.target_dim() });
    }
    if !h.aux.is_empty() {
        return Err(MapError::AuxiliaryNotSupported);
    }
    let sphere = sphere_target(np);
    if !maps_into(m, &sphere, h, spair_budget)? {
        return Err(MapError::NotIntoTarget);
    }
    if h.eval(m, p).iter().any(|c| !c.is_zero()) {
        return Err(MapError::NotNormalized);
    }

    // Parametrize the map over the chart.
    let chart = &rigid.chart;
    let images = rigid.ambient_to_chart_images();
    let chart_h: Vec<Polynomial> = h
        .components
        .iter()
        .map(|c| c.map_into(chart, &images))
        .collect();
    let chart_point = rigid.chart_point(p);

    // Cleared tangential operators (denominator 1 + i*phi_s multiplied out).
    let s = chart.lookup("s").unwrap();
    let phi_s = rigid.phi.partial(s);
    let u_factor = Polynomial::one(chart).add(&phi_s.scale(&GaussianRational::i()));
    if u_factor.eval(&chart_point).is_zero() {
        return Err(MapError::ChartDegenerate);
    }
    let operators: Vec<Derivation> = (0..n)
        .map(|j| {
            let phi_chi = rigid.phi.partial(chart.anti(j));
            Derivation::new(
                chart,
                vec![
                    (chart.anti(j), u_factor.clone()),
                    (s, phi_chi.scale(&-GaussianRational::i())),
                ],
            )
        })
        .collect();

    // Greedy triangular selection with exact unitary rotations.
    let mut g: Vec<Polynomial> = chart_h.clone();
    let mut rotation: Vec<Vec<GaussianRational>> = (0..np - 1)
        .map(|i| {
            (0..np - 1)
                .map(|j| if i == j { GaussianRational::one() } else { GaussianRational::zero() })
                .collect()
        })
        .collect();
    let mut betas: Vec<Vec<u32>> = Vec::new();
    let candidate_betas: Vec<Vec<u32>> = multi_indices(n, m_bound)
        .into_iter()
        .filter(|b| b.iter().sum::<u32>() >= 1)
        .collect();
    for j in 0..n {
        let mut chosen: Option<(Vec<u32>, Vec<GaussianRational>)> = None;
        for beta in &candidate_betas {
            let vals: Vec<GaussianRational> = (j..np - 1)
                .map(|k| {
                    let gbar = g[k].conjugate_swap();
                    apply_derivation_multiindex(&operators, beta, &gbar).eval(&chart_point)
                })
                .collect();
            if vals.iter().any(|v| !v.is_zero()) {
                chosen = Some((beta.clone(), vals));
                break;
            }
        }
        let Some((beta, vals)) = chosen else {
            return Err(MapError::NoIndexFound { bound: m_bound });
        };
        // Rotate components j..n+1 so only the j-th derivative survives at p.
        let a = triangularizing_conjugate_rotation(&vals)?;
        let w: Vec<Vec<GaussianRational>> = a
            .iter()
            .map(|row| row.iter().map(|c| c.conj()).collect())
            .collect();
        let block = vals.len();
        let old_g: Vec<Polynomial> = g[j..j + block].to_vec();
        for (r, slot) in (j..j + block).enumerate() {
            let mut acc = Polynomial::zero(chart);
            for (cidx, og) in old_g.iter().enumerate() {
                acc = acc.add(&og.scale(&w[r][cidx]));
            }
            g[slot] = acc;
        }
        let old_rot = rotation.clone();
        for (r, slot) in (j..j + block).enumerate() {
            for col in 0..np - 1 {
                let mut acc = GaussianRational::zero();
                for (cidx, orow) in (j..j + block).enumerate() {
                    acc = &acc + &(&w[r][cidx] * &old_rot[orow][col]);
                }
                rotation[slot][col] = acc;
            }
        }
        betas.push(beta);
    }

    // Tangential derivative matrix and right-hand-side vectors.
    let gbar: Vec<Polynomial> = g.iter().map(|c| c.conjugate_swap()).collect();
    let v_matrix: Vec<Vec<Polynomial>> = betas
        .iter()
        .map(|beta| {
            (0..n)
                .map(|k| apply_derivation_multiindex(&operators, beta, &gbar[k]))
                .collect()
        })
        .collect();
    let v_at_p: Vec<Vec<GaussianRational>> = v_matrix
        .iter()
        .map(|row| row.iter().map(|e| e.eval(&chart_point)).collect())
        .collect();
    if crate::elim::determinant_scalar(&v_at_p).is_zero() {
        return Err(MapError::VNotInvertibleAtPoint);
    }
    let vxi: Vec<Polynomial> = betas
        .iter()
        .map(|beta| apply_derivation_multiindex(&operators, beta, &gbar[np - 1]))
        .collect();
    let veta: Vec<Polynomial> = betas
        .iter()
        .map(|beta| apply_derivation_multiindex(&operators, beta, &gbar[np - 2]))
        .collect();

    let denom = determinant(&v_matrix);
    let adj = adjugate(&v_matrix);
    let mat_vec = |mat: &[Vec<Polynomial>], vec: &[Polynomial]| -> Vec<Polynomial> {
        (0..n)
            .map(|i| {
                let mut acc = Polynomial::zero(chart);
                for (k, v) in vec.iter().enumerate() {
                    acc = acc.add(&mat[i][k].mul(v));
                }
                acc
            })
            .collect()
    };
    let xi_num = mat_vec(&adj, &vxi);
    let eta_num = mat_vec(&adj, &veta);

    // Reflection identity, denominators cleared:
    // det(V)*F_j + (adj V vxi)_j + H_{n+1} (adj V veta)_j = 0 on M.
    let residual_reflection_ok = (0..n).all(|j| {
        denom
            .mul(&g[j])
            .add(&xi_num[j])
            .add(&g[np - 2].mul(&eta_num[j]))
            .is_zero()
    });

    // Sphere pullback over the chart.
    let mut sphere_chart = g[np - 1].add(&gbar[np - 1]);
    for k in 0..np - 1 {
        sphere_chart = sphere_chart.add(&g[k].mul(&gbar[k]));
    }
    let residual_sphere_ok = sphere_chart.is_zero();

    // Scalars and the rearranged identity, cleared by det V * conj det V.
    let denom_bar = denom.conjugate_swap();
    let dd = denom.mul(&denom_bar);
    let xi_num_bar: Vec<Polynomial> = xi_num.iter().map(|p| p.conjugate_swap()).collect();
    let eta_num_bar: Vec<Polynomial> = eta_num.iter().map(|p| p.conjugate_swap()).collect();
    let dot = |a: &[Polynomial], b: &[Polynomial]| -> Polynomial {
        a.iter()
            .zip(b)
            .fold(Polynomial::zero(chart), |acc, (x, y)| acc.add(&x.mul(y)))
    };
    let a_num = dot(&eta_num, &xi_num_bar);
    let b_num = dd.add(&dot(&eta_num, &eta_num_bar));
    let c_num = dot(&xi_num, &xi_num_bar);
    let a_num_bar = a_num.conjugate_swap();
    let h_top = &g[np - 1];
    let h_top_bar = &gbar[np - 1];
    let h_mid = &g[np - 2];
    let h_mid_bar = &gbar[np - 2];
    let rearranged = h_top
        .add(h_top_bar)
        .mul(&dd)
        .add(&h_mid.mul(&a_num.add(&h_mid_bar.mul(&b_num))))
        .add(&h_mid_bar.mul(&a_num_bar))
        .add(&c_num);
    let residual_rearranged_ok = rearranged.is_zero();

    Ok(ReflectionSystem {
        betas,
        rotation,
        chart_components: g,
        v_matrix,
        denominator: denom,
        xi_numerator: xi_num,
        eta_numerator: eta_num,
        scalar_a_numerator: a_num,
        scalar_b_numerator: b_num,
        scalar_c_numerator: c_num,
        scalar_denominator: dd,
        residual_reflection_ok,
        residual_sphere_ok,
        residual_rearranged_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypersurface::recognize_rigid_form;
    use crate::ideal::DEFAULT_SPAIR_BUDGET;
    use crate::parse::parse_expression;

    fn q(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    fn surf(n: usize, expr: &str) -> HypersurfaceSpec {
        let a = VariableArena::complex_space(n);
        let rho = parse_expression(expr, &a).unwrap();
        HypersurfaceSpec::validate(rho, vec![q(0); n], None).unwrap()
    }

    fn heisenberg2() -> HypersurfaceSpec {
        surf(2, "z2 + conj(z2) + z1*conj(z1)")
    }

    fn map(m: &HypersurfaceSpec, exprs: &[&str]) -> PolyMap {
        let comps = exprs
            .iter()
            .map(|e| parse_expression(e, m.arena()).unwrap())
            .collect();
        PolyMap::new(comps, Vec::new()).unwrap()
    }

    #[test]
    fn identity_maps_sphere_into_itself() {
        let m = heisenberg2();
        let h = map(&m, &["z1", "z2"]);
        assert!(maps_into(&m, &m, &h, DEFAULT_SPAIR_BUDGET).unwrap());
    }

    #[test]
    fn scaled_map_into_heisenberg() {
        let m = heisenberg2();
        let h = map(&m, &["2*z1", "4*z2"]);
        assert!(maps_into(&m, &m, &h, DEFAULT_SPAIR_BUDGET).unwrap());
        let bad = map(&m, &["z1", "z2 + 1"]);
        assert!(!maps_into(&m, &m, &bad, DEFAULT_SPAIR_BUDGET).unwrap());
    }

    #[test]
    fn jacobian_cases() {
        let m = heisenberg2();
        let (jac, verdict) = jacobian_determinant(&m, &map(&m, &["z1", "z2"])).unwrap();
        assert_eq!(jac, Polynomial::one(m.arena()));
        assert!(verdict);
        let (jac, verdict) = jacobian_determinant(&m, &map(&m, &["z1", "z1"])).unwrap();
        assert!(jac.is_zero());
        assert!(!verdict);
        // The map (zw, w^2) has Jacobian 2w^2.
        let m33 = surf(2, "(w - conj(w))/(2*i) - ((w + conj(w))/2)^3*z1*conj(z1)");
        let h = map(&m33, &["z1*z2", "z2^2"]);
        let (jac, verdict) = jacobian_determinant(&m33, &h).unwrap();
        assert_eq!(jac, parse_expression("2*z2^2", m33.arena()).unwrap());
        assert!(verdict);
    }

    #[test]
    fn algebraicity_cases() {
        let m = heisenberg2();
        let ext = m.arena().extend_aux(&["X"]);
        let x = ext.lookup("X").unwrap();
        let f = parse_expression("z1", &ext).unwrap();
        let p = parse_expression("X - z1", &ext).unwrap();
        assert!(algebraicity_certificate(&m, &[], &f, &p, x, DEFAULT_SPAIR_BUDGET).unwrap());

        // On Im w = 0, conj(w) agrees with w.
        let lf = surf(2, "(w - conj(w))/(2*i)");
        let ext = lf.arena().extend_aux(&["X"]);
        let x = ext.lookup("X").unwrap();
        let f = parse_expression("conj(z2)", &ext).unwrap();
        let p = parse_expression("X - z2", &ext).unwrap();
        assert!(algebraicity_certificate(&lf, &[], &f, &p, x, DEFAULT_SPAIR_BUDGET).unwrap());

        // |z1|^2 is not the holomorphic polynomial z2 on the sphere.
        let ext = m.arena().extend_aux(&["X"]);
        let x = ext.lookup("X").unwrap();
        let f = parse_expression("z1*conj(z1)", &ext).unwrap();
        let p = parse_expression("X - z2", &ext).unwrap();
        assert!(!algebraicity_certificate(&m, &[], &f, &p, x, DEFAULT_SPAIR_BUDGET).unwrap());

        // Auxiliary generator: u with u^2 = z1 certifies X^2 - z1 for f = u.
        let ext = m.arena().extend_aux(&["u", "X"]);
        let u = ext.lookup("u").unwrap();
        let x = ext.lookup("X").unwrap();
        let rel = parse_expression("u^2 - z1", &ext).unwrap();
        let aux = AuxRelation { var: u, relation: rel };
        let f = Polynomial::var(&ext, u);
        let p = parse_expression("X^2 - z1", &ext).unwrap();
        assert!(algebraicity_certificate(&m, &[aux], &f, &p, x, DEFAULT_SPAIR_BUDGET).unwrap());

        // Trivial certificates are rejected.
        let p = parse_expression("z1", &ext).unwrap();
        assert_eq!(
            algebraicity_certificate(&m, &[], &f, &p, x, DEFAULT_SPAIR_BUDGET).unwrap_err(),
            MapError::TrivialCertificate
        );
    }

    fn reflection_fixture(
        m: &HypersurfaceSpec,
        exprs: &[&str],
    ) -> Result<ReflectionSystem, MapError> {
        let rigid = recognize_rigid_form(m).unwrap();
        let h = map(m, exprs);
        reflection_system(m, &rigid, &h, &[q(0), q(0)], 4, DEFAULT_SPAIR_BUDGET)
    }

    #[test]
    fn reflection_basic_map() {
        // H = (z, 0, w) into the sphere in C^3: beta = (1), V = [unit], and
        // the reflection identity gives F = -xi exactly.
        let m = heisenberg2();
        let r = reflection_fixture(&m, &["z1", "0", "z2"]).unwrap();
        assert_eq!(r.betas, vec![vec![1]]);
        assert!(r.residual_reflection_ok);
        assert!(r.residual_sphere_ok);
        assert!(r.residual_rearranged_ok);
        // eta = 0 for this map.
        assert!(r.eta_numerator[0].is_zero());
        // xi / det V = -z1: xi_num + det V * z1 = 0.
        let chart = r.denominator.arena().clone();
        let z1 = Polynomial::var(&chart, 0);
        assert!(r.xi_numerator[0].add(&r.denominator.mul(&z1)).is_zero());
    }

    #[test]
    fn reflection_scaled_map() {
        let m = heisenberg2();
        let r = reflection_fixture(&m, &["2*z1", "0", "4*z2"]).unwrap();
        assert!(r.residual_reflection_ok && r.residual_sphere_ok && r.residual_rearranged_ok);
        // xi / det V = -2*z1.
        let chart = r.denominator.arena().clone();
        let two_z1 = Polynomial::var(&chart, 0).scale(&q(2));
        assert!(r.xi_numerator[0].add(&r.denominator.mul(&two_z1)).is_zero());
    }

    #[test]
    fn reflection_rotated_map() {
        // Components (3/5 z, -4/5 z, w) need a genuine rational rotation.
        let m = heisenberg2();
        let r = reflection_fixture(&m, &["3/5*z1", "-4/5*z1", "z2"]).unwrap();
        assert!(r.residual_reflection_ok && r.residual_sphere_ok && r.residual_rearranged_ok);
        // After rotation the first chart component is z1 again.
        let chart = r.denominator.arena().clone();
        assert_eq!(r.chart_components[0], Polynomial::var(&chart, 0));
        assert!(r.chart_components[1].is_zero());
    }

    #[test]
    fn reflection_zero_map_has_no_index() {
        let m = heisenberg2();
        match reflection_fixture(&m, &["0", "0", "0"]) {
            Err(MapError::NoIndexFound { bound: 4 }) => {}
            other => panic!("expected NoIndexFound, got {other:?}"),
        }
    }

    #[test]
    fn reflection_rejects_non_sphere_map() {
        let m = heisenberg2();
        match reflection_fixture(&m, &["z1", "z1", "z2"]) {
            Err(MapError::NotIntoTarget) => {}
            other => panic!("expected NotIntoTarget, got {other:?}"),
        }
    }

    #[test]
    fn jacobian_multiplicative_under_composition() {
        use rand::{rngs::StdRng, Rng, SeedableRng};
        let m = heisenberg2();
        let arena = m.arena().clone();
        let mut rng = StdRng::seed_from_u64(23);
        let random_component = |rng: &mut StdRng| {
            let mut p = Polynomial::zero(&arena);
            for _ in 0..3 {
                let e = vec![rng.gen_range(0..3u32), rng.gen_range(0..2u32), 0, 0];
                p = p.add(&Polynomial::monomial(
                    &arena,
                    e,
                    GaussianRational::from_int(rng.gen_range(-2..=2)),
                ));
            }
            p
        };
        for _ in 0..10 {
            let g = vec![random_component(&mut rng), random_component(&mut rng)];
            let h = vec![random_component(&mut rng), random_component(&mut rng)];
            // Compose: (h o g)(Z) = h(g(Z)).
            let mut images: Vec<Polynomial> = g.clone();
            images.push(Polynomial::zero(&arena));
            images.push(Polynomial::zero(&arena));
            let composed: Vec<Polynomial> =
                h.iter().map(|c| c.map_into(&arena, &images)).collect();
            let jac_of = |comps: &[Polynomial]| -> Polynomial {
                let mat: Vec<Vec<Polynomial>> = (0..2)
                    .map(|i| (0..2).map(|j| comps[i].partial(arena.holo(j))).collect())
                    .collect();
                determinant(&mat)
            };
            // Chain rule at the determinant level:
            // Jac(h o g) = (Jac h)(g) * Jac g.
            let jac_h_at_g = jac_of(&h).map_into(&arena, &images);
            assert_eq!(jac_of(&composed), jac_h_at_g.mul(&jac_of(&g)));
        }
    }

    #[test]
    fn reflection_invariant_under_exact_unitary_rotation() {
        // Rotating the first two target components changes the chart data but
        // never the residual verdicts.
        let m = heisenberg2();
        for exprs in [
            ["z1", "0", "z2"],
            ["4/5*z1", "3/5*z1", "z2"],
            ["-3/5*z1", "4/5*z1", "z2"],
        ] {
            let r = reflection_fixture(&m, &exprs).unwrap();
            assert!(r.residual_reflection_ok);
            assert!(r.residual_sphere_ok);
            assert!(r.residual_rearranged_ok);
        }
    }

    #[test]
    fn rotation_helper_cases() {
        // Single nonzero: permutation.
        let v = vec![q(0), q(3)];
        let a = triangularizing_conjugate_rotation(&v).unwrap();
        assert_eq!(a[0][1], q(1));
        // Rational rotation for (3/5, -4/5).
        let v = vec![GaussianRational::ratio(3, 5), GaussianRational::ratio(-4, 5)];
        let a = triangularizing_conjugate_rotation(&v).unwrap();
        let applied: Vec<GaussianRational> = (0..2)
            .map(|i| {
                let mut acc = GaussianRational::zero();
                for j in 0..2 {
                    acc = &acc + &(&a[i][j] * &v[j]);
                }
                acc
            })
            .collect();
        assert_eq!(applied[0], q(1));
        assert!(applied[1].is_zero());
        // Irrational norm obstruction: (1, 1) has norm sqrt(2).
        let v = vec![q(1), q(1)];
        assert!(matches!(
            triangularizing_conjugate_rotation(&v),
            Err(MapError::RotationObstruction)
        ));
    }
}
