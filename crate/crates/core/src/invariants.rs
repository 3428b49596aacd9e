//! Decision procedures for hypersurface invariants: holomorphic
//! (non)degeneracy, Levi type, pointwise nondegeneracy order, essential
//! finiteness, tangent-field witness search, and bounded Bloom-Graham type.
//!
//! Generic (ideal-level) verdicts are decided by radical membership over the
//! complexified variety; no numeric sampling enters the decision path.

use crate::crcalc::{
    c_alpha, cr_basis, holomorphic_gradient, local_ring, restrict_to_holo, v_alpha, CRField,
    PolyField,
};
use crate::hypersurface::HypersurfaceSpec;
use crate::ideal::{
    finite_codimension_at_origin, CodimResult, IdealError, IdealPresentation, MonomialOrder,
};
use crate::linalg::{kernel_basis, rank, RowReducer};
use crate::num::GaussianRational;
use crate::poly::Polynomial;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InvariantError {
    #[error("point does not lie on the hypersurface")]
    OffSurface,
    #[error("every antiholomorphic gradient component vanishes at the point; no CR basis pivot")]
    PivotDegenerate,
    #[error(transparent)]
    Ideal(#[from] IdealError),
}

/// Enumerate multi-indices over `n` letters with `1 <= |alpha| <= max_deg`,
/// plus the zero index first; ordered by degree then lexicographically.
pub fn multi_indices(n: usize, max_deg: u32) -> Vec<Vec<u32>> {
    fn of_degree(n: usize, deg: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 1 {
            let mut m = prefix.clone();
            m.push(deg);
            out.push(m);
            return;
        }
        for d in (0..=deg).rev() {
            prefix.push(d);
            of_degree(n - 1, deg - d, prefix, out);
            prefix.pop();
        }
    }
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for deg in 0..=max_deg {
        of_degree(n, deg, &mut Vec::new(), &mut out);
    }
    out
}

/// CR basis with the pivot chosen at an arbitrary on-surface point.
pub fn cr_basis_at(
    m: &HypersurfaceSpec,
    p: &[GaussianRational],
) -> Result<Vec<CRField>, InvariantError> {
    if !m.contains(p) {
        return Err(InvariantError::OffSurface);
    }
    let arena = m.arena();
    let n = m.dim();
    let full = m.full_point(p);
    let grad: Vec<Polynomial> = (0..n).map(|k| m.rho().partial(arena.anti(k))).collect();
    let pivot = if !grad[n - 1].eval(&full).is_zero() {
        n - 1
    } else {
        (0..n)
            .find(|&k| !grad[k].eval(&full).is_zero())
            .ok_or(InvariantError::PivotDegenerate)?
    };
    Ok((0..n)
        .filter(|&j| j != pivot)
        .map(|j| {
            let mut zeta = vec![Polynomial::zero(arena); n];
            zeta[j] = grad[pivot].clone();
            zeta[pivot] = grad[j].neg();
            CRField {
                field: PolyField::new(arena, vec![Polynomial::zero(arena); n], zeta),
                pivot,
            }
        })
        .collect())
}

/// A holomorphic vector field tangent to `M`, together with the exact
/// multiplier of the tangency identity `X(rho) = multiplier * rho`.
#[derive(Clone, Debug)]
pub struct TangentWitness {
    /// Coefficients of `d/dZ_k`, polynomials in the holomorphic variables.
    pub coefficients: Vec<Polynomial>,
    pub multiplier: Polynomial,
}

#[derive(Clone, Debug)]
pub enum WitnessOutcome {
    Found(TangentWitness),
    NoneUpTo(u32),
}

/// Search for a nonzero holomorphic vector field tangent to `M` with
/// coefficient degree at most `deg_bound`, by exact linear algebra.
///
/// Tangency of the holomorphic field means `X(rho)` vanishes on `M`, i.e.
/// `X(rho) = q * rho` for some polynomial multiplier `q`. Reducing each
/// candidate contribution modulo `rho` eliminates the multiplier unknowns,
/// and the remaining homogeneous system in the field coefficients is solved
/// over the Gaussian rationals; the multiplier is recovered by exact
/// division. (The weaker condition that the real field `X + conj X` be
/// tangent also admits infinitesimal automorphisms such as rotation fields,
/// which exist on nondegenerate hypersurfaces; those are not degeneracy
/// witnesses.)
pub fn degeneracy_witness(m: &HypersurfaceSpec, deg_bound: u32) -> WitnessOutcome {
    let arena = m.arena();
    let n = m.dim();
    let grad = holomorphic_gradient(m);

    // Candidate monomials in the holomorphic variables.
    let monoms: Vec<Vec<u32>> = multi_indices(n, deg_bound);
    let mut unknown_templates: Vec<(usize, Vec<u32>)> = Vec::new();
    for k in 0..n {
        for e in &monoms {
            unknown_templates.push((k, e.clone()));
        }
    }

    // Reduce each contribution modulo rho; remainders are linear in the
    // unknowns, so the membership condition is a linear system.
    let rho = m.rho();
    let reduce = |p: &Polynomial| -> Polynomial {
        crate::ideal::division_remainder(p, std::slice::from_ref(rho), MonomialOrder::GradedLex)
    };
    let mut contributions: Vec<Polynomial> = Vec::with_capacity(unknown_templates.len());
    for (k, e) in &unknown_templates {
        let mut full_e = vec![0u32; arena.len()];
        full_e[..n].copy_from_slice(e);
        let mono = Polynomial::monomial(arena, full_e, GaussianRational::one());
        contributions.push(reduce(&mono.mul(&grad[*k])));
    }

    // Collect the monomial support of all remainders.
    let mut support: std::collections::BTreeMap<Vec<u32>, usize> = Default::default();
    for p in &contributions {
        for (e, _) in p.terms() {
            let next = support.len();
            support.entry(e.clone()).or_insert(next);
        }
    }

    let nu = unknown_templates.len();
    let mut rows: Vec<Vec<GaussianRational>> = Vec::new();
    let zero = GaussianRational::zero();
    for mono in support.keys() {
        let mut row = vec![zero.clone(); nu];
        for (j, c) in contributions.iter().enumerate() {
            row[j] = coeff_of(c, mono);
        }
        rows.push(row);
    }

    // Pre-reduce to at most `nu` pivot rows, then extract the kernel.
    let mut rr = RowReducer::new();
    let mut kept: Vec<Vec<GaussianRational>> = Vec::new();
    for row in rows {
        let sparse: Vec<(usize, GaussianRational)> = row
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, c.clone()))
            .collect();
        if rr.insert(sparse) {
            kept.push(row);
        }
    }
    let kernel = kernel_basis(&kept, nu);
    let Some(sol) = kernel.first() else {
        return WitnessOutcome::NoneUpTo(deg_bound);
    };

    // Assemble the field from the kernel vector.
    let mut coefficients = vec![Polynomial::zero(arena); n];
    for (j, (k, e)) in unknown_templates.iter().enumerate() {
        if sol[j].is_zero() {
            continue;
        }
        let mut full_e = vec![0u32; arena.len()];
        full_e[..n].copy_from_slice(e);
        coefficients[*k] =
            coefficients[*k].add(&Polynomial::monomial(arena, full_e, sol[j].clone()));
    }
    if coefficients.iter().all(|c| c.is_zero()) {
        return WitnessOutcome::NoneUpTo(deg_bound);
    }

    // Recover the multiplier and verify the identity exactly.
    let x_rho = coefficients
        .iter()
        .zip(&grad)
        .fold(Polynomial::zero(arena), |acc, (a, g)| acc.add(&a.mul(g)));
    let multiplier = x_rho
        .exact_div(rho)
        .expect("kernel solution satisfies the tangency identity");
    WitnessOutcome::Found(TangentWitness { coefficients, multiplier })
}

fn coeff_of(p: &Polynomial, mono: &[u32]) -> GaussianRational {
    for (e, c) in p.terms() {
        if e == mono {
            return c.clone();
        }
    }
    GaussianRational::zero()
}

#[derive(Clone, Debug)]
pub struct NondegeneracyVerdict {
    pub nondegenerate: bool,
    /// First nonvanishing minor (lexicographic row/column order) when
    /// nondegenerate.
    pub certifying_minor: Option<Polynomial>,
    /// Tangent field found by the bounded cross-check when degenerate.
    pub witness: Option<TangentWitness>,
    /// Multi-index bound used for the row stack.
    pub alpha_bound: u32,
    /// Degree bound used by the witness search.
    pub witness_degree: u32,
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Stack the rows `V_alpha` for `|alpha| <= alpha_bound`.
fn v_alpha_stack(
    m: &HypersurfaceSpec,
    basis: &[CRField],
    alpha_bound: u32,
) -> Vec<Vec<Polynomial>> {
    multi_indices(basis.len(), alpha_bound)
        .iter()
        .map(|alpha| v_alpha(m, basis, alpha))
        .collect()
}

/// First `N x N` minor of the stack lying outside the radical of `(rho)`,
/// scanning row combinations in lexicographic order.
fn first_generic_minor(
    m: &HypersurfaceSpec,
    rows: &[Vec<Polynomial>],
) -> Option<Polynomial> {
    let n = m.dim();
    if rows.len() < n {
        return None;
    }
    for combo in combinations(rows.len(), n) {
        let mat: Vec<Vec<Polynomial>> = combo.iter().map(|&i| rows[i].clone()).collect();
        let det = crate::elim::determinant(&mat);
        if det.is_zero() {
            continue;
        }
        if !m.vanishes_on_complexification(&det) {
            return Some(det);
        }
    }
    None
}

/// Holomorphic nondegeneracy: the `V_alpha` with `|alpha| <= N-1` span
/// generically iff some `N x N` minor avoids the radical of `(rho)`.
/// When no minor does, the bounded witness search is run as a cross-check.
pub fn holomorphic_nondegeneracy(
    m: &HypersurfaceSpec,
    witness_degree: u32,
) -> NondegeneracyVerdict {
    let basis = cr_basis(m);
    let alpha_bound = (m.dim() - 1) as u32;
    let rows = v_alpha_stack(m, &basis, alpha_bound);
    match first_generic_minor(m, &rows) {
        Some(minor) => NondegeneracyVerdict {
            nondegenerate: true,
            certifying_minor: Some(minor),
            witness: None,
            alpha_bound,
            witness_degree,
        },
        None => {
            let witness = match degeneracy_witness(m, witness_degree) {
                WitnessOutcome::Found(w) => Some(w),
                WitnessOutcome::NoneUpTo(_) => None,
            };
            NondegeneracyVerdict {
                nondegenerate: false,
                certifying_minor: None,
                witness,
                alpha_bound,
                witness_degree,
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LeviTypeResult {
    /// The generic minimal derivative order, between 1 and N-1.
    Type(usize),
    Degenerate,
}

/// Levi type: smallest `k <= N-1` such that the `|alpha| <= k` stack has a
/// minor outside the radical; `Degenerate` when none exists at `k = N-1`.
pub fn levi_type(m: &HypersurfaceSpec) -> LeviTypeResult {
    let basis = cr_basis(m);
    for k in 1..m.dim().max(2) {
        let rows = v_alpha_stack(m, &basis, k as u32);
        if first_generic_minor(m, &rows).is_some() {
            return LeviTypeResult::Type(k);
        }
    }
    LeviTypeResult::Degenerate
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointwiseOrder {
    Order(usize),
    NoneUpTo(usize),
}

/// Minimal `k` such that the normalized `V_alpha(p, conj p)` with
/// `|alpha| <= k` span `C^N`; evaluation refuses points where the CR-basis
/// pivot derivative vanishes.
pub fn pointwise_nondegeneracy_order(
    m: &HypersurfaceSpec,
    p: &[GaussianRational],
    bound: usize,
) -> Result<PointwiseOrder, InvariantError> {
    let basis = cr_basis_at(m, p)?;
    let full = m.full_point(p);
    let n = m.dim();
    let pivot_val = m
        .rho()
        .partial(m.arena().anti(basis.first().map(|b| b.pivot).unwrap_or(n - 1)))
        .eval(&full);
    if pivot_val.is_zero() {
        return Err(InvariantError::PivotDegenerate);
    }
    let pivot_inv = pivot_val.inv().unwrap();
    for k in 1..=bound {
        let mut rows: Vec<Vec<GaussianRational>> = Vec::new();
        for alpha in multi_indices(basis.len(), k as u32) {
            let weight: u32 = alpha.iter().sum();
            let norm = pivot_inv.pow(weight);
            rows.push(
                v_alpha(m, &basis, &alpha)
                    .iter()
                    .map(|p| &p.eval(&full) * &norm)
                    .collect(),
            );
        }
        if rank(&rows) == n {
            return Ok(PointwiseOrder::Order(k));
        }
    }
    Ok(PointwiseOrder::NoneUpTo(bound))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EssentialFiniteness {
    Certified { ell: usize, codimension: usize, certifying_degree: usize },
    NotDetected { ell_max: usize, d_max: usize },
}

/// Essential finiteness at `p0`: feed the ideals generated by
/// `{c_alpha : |alpha| <= ell}` to the local finite-codimension test, for
/// `ell = 1..=ell_max`; the first certified level is the invariant.
pub fn essential_finiteness_at(
    m: &HypersurfaceSpec,
    p0: &[GaussianRational],
    ell_max: usize,
    d_max: usize,
) -> Result<EssentialFiniteness, InvariantError> {
    let basis = cr_basis_at(m, p0)?;
    let local = local_ring(m.dim());
    for ell in 1..=ell_max {
        let mut gens = Vec::new();
        for alpha in multi_indices(basis.len(), ell as u32) {
            let c = c_alpha(m, &basis, p0, &alpha);
            if !c.is_zero() {
                gens.push(restrict_to_holo(&c, &local));
            }
        }
        if gens.is_empty() {
            continue;
        }
        let ideal = IdealPresentation::new(gens, MonomialOrder::GradedLex)?;
        match finite_codimension_at_origin(&ideal, d_max)? {
            CodimResult::FiniteCertified { codimension, certifying_degree } => {
                return Ok(EssentialFiniteness::Certified { ell, codimension, certifying_degree })
            }
            CodimResult::NotDetectedUpTo(_) => continue,
        }
    }
    Ok(EssentialFiniteness::NotDetected { ell_max, d_max })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiniteType {
    Type(usize),
    ExceedsBound(usize),
}

/// Bloom-Graham finite type at `p`: least bracket word length at which the
/// evaluated CR fields and conjugates span the complexified tangent space of
/// `M` (dimension `2N - 1`).
pub fn bloom_graham_type_at(
    m: &HypersurfaceSpec,
    p: &[GaussianRational],
    length_bound: usize,
) -> Result<FiniteType, InvariantError> {
    let basis = cr_basis_at(m, p)?;
    let full = m.full_point(p);
    let target = 2 * m.dim() - 1;
    let mut generation: Vec<PolyField> = Vec::new();
    for b in &basis {
        generation.push(b.field.clone());
        generation.push(b.field.conjugate());
    }
    let atoms = generation.clone();
    let mut reducer = RowReducer::new();
    let insert_eval = |f: &PolyField, reducer: &mut RowReducer| {
        let v = f.eval(&full);
        let sparse: Vec<(usize, GaussianRational)> = v
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        reducer.insert(sparse);
    };
    // A field found at a given word length makes every scalar multiple of it
    // at later lengths redundant: the later copy's brackets are scalar
    // multiples of brackets already scheduled. Deduplicate up to scalar by a
    // monic normal form.
    let normal_form = |f: &PolyField| -> Vec<Polynomial> {
        let mut coeffs: Vec<Polynomial> = f
            .z_coeffs
            .iter()
            .chain(f.zeta_coeffs.iter())
            .cloned()
            .collect();
        if let Some(first) = coeffs.iter().find(|c| !c.is_zero()) {
            let (_, lead) = first.leading_term(crate::poly::grlex_cmp).unwrap();
            let inv = lead.inv().unwrap();
            for c in coeffs.iter_mut() {
                *c = c.scale(&inv);
            }
        }
        coeffs
    };
    let mut seen: std::collections::HashSet<Vec<Polynomial>> = Default::default();
    for f in &generation {
        insert_eval(f, &mut reducer);
        seen.insert(normal_form(f));
    }
    if reducer.rank() == target {
        return Ok(FiniteType::Type(1));
    }
    for length in 2..=length_bound {
        let mut next = Vec::new();
        for a in &atoms {
            for g in &generation {
                let br = a.bracket(g);
                if br.is_zero() || !seen.insert(normal_form(&br)) {
                    continue;
                }
                insert_eval(&br, &mut reducer);
                next.push(br);
            }
        }
        if reducer.rank() == target {
            return Ok(FiniteType::Type(length));
        }
        generation = next;
        if generation.is_empty() {
            break;
        }
    }
    Ok(FiniteType::ExceedsBound(length_bound))
}

/// Apply an invertible linear change `Z -> A Z` (and the conjugate change to
/// the antiholomorphic block) to a polynomial; used by the coordinate
/// invariance checks.
pub fn linear_change(p: &Polynomial, a: &[Vec<GaussianRational>]) -> Polynomial {
    let arena = p.arena();
    let n = arena.dim();
    assert_eq!(a.len(), n);
    let mut images: Vec<Polynomial> = Vec::with_capacity(arena.len());
    for k in 0..n {
        let mut img = Polynomial::zero(arena);
        for j in 0..n {
            img = img.add(&Polynomial::var(arena, arena.holo(j)).scale(&a[k][j]));
        }
        images.push(img);
    }
    for k in 0..n {
        let mut img = Polynomial::zero(arena);
        for j in 0..n {
            img = img.add(&Polynomial::var(arena, arena.anti(j)).scale(&a[k][j].conj()));
        }
        images.push(img);
    }
    for v in 2 * n..arena.len() {
        images.push(Polynomial::var(arena, v));
    }
    p.map_into(arena, &images)
}

pub use crate::crcalc::levi_determinant;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::VariableArena;
    use crate::parse::parse_expression;

    fn q(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    fn surf(n: usize, expr: &str) -> HypersurfaceSpec {
        let a = VariableArena::complex_space(n);
        let rho = parse_expression(expr, &a).unwrap();
        HypersurfaceSpec::validate(rho, vec![q(0); n], None).unwrap()
    }

    fn sphere2() -> HypersurfaceSpec {
        surf(2, "z2 + conj(z2) + z1*conj(z1)")
    }

    fn sphere3() -> HypersurfaceSpec {
        surf(3, "z3 + conj(z3) + z1*conj(z1) + z2*conj(z2)")
    }

    fn levi_flat2() -> HypersurfaceSpec {
        surf(2, "(w - conj(w))/(2*i)")
    }

    fn im_w_z1sq_c3() -> HypersurfaceSpec {
        surf(3, "(w - conj(w))/(2*i) - z1*conj(z1)")
    }

    fn im_w_zz2_c2() -> HypersurfaceSpec {
        surf(2, "(w - conj(w))/(2*i) - z1^2*conj(z1)^2")
    }

    fn ex_3_3_m() -> HypersurfaceSpec {
        surf(2, "(w - conj(w))/(2*i) - ((w + conj(w))/2)^3*z1*conj(z1)")
    }

    fn ex_2_10_mprime() -> HypersurfaceSpec {
        surf(2, "(w - conj(w))/(2*i) - ((w + conj(w))/2)*z1*conj(z1)")
    }

    #[test]
    fn sphere_is_nondegenerate_with_constant_minor() {
        let v = holomorphic_nondegeneracy(&sphere2(), 3);
        assert!(v.nondegenerate);
        let minor = v.certifying_minor.unwrap();
        assert_eq!(minor.as_constant(), Some(q(-1)));
    }

    #[test]
    fn independent_coordinate_is_a_witness() {
        let m = im_w_z1sq_c3();
        let v = holomorphic_nondegeneracy(&m, 3);
        assert!(!v.nondegenerate);
        let w = v.witness.expect("witness found at degree 0");
        // Verify the tangency identity exactly.
        let grad = holomorphic_gradient(&m);
        let x_rho = w
            .coefficients
            .iter()
            .zip(&grad)
            .fold(Polynomial::zero(m.arena()), |acc, (a, g)| acc.add(&a.mul(g)));
        assert_eq!(x_rho, w.multiplier.mul(m.rho()));
        // The real field X + conj X is then tangent as well.
        let real_lhs = x_rho.add(&x_rho.conjugate_swap());
        assert!(m.vanishes_on_complexification(&real_lhs));
        assert!(w.coefficients.iter().any(|c| !c.is_zero()));
    }

    #[test]
    fn example_3_3_is_nondegenerate() {
        let v = holomorphic_nondegeneracy(&ex_3_3_m(), 3);
        assert!(v.nondegenerate);
    }

    #[test]
    fn no_witness_on_sphere_at_low_degree() {
        match degeneracy_witness(&sphere2(), 2) {
            WitnessOutcome::NoneUpTo(2) => {}
            other => panic!("expected no witness, got {other:?}"),
        }
    }

    #[test]
    fn levi_types() {
        assert_eq!(levi_type(&sphere2()), LeviTypeResult::Type(1));
        assert_eq!(levi_type(&sphere3()), LeviTypeResult::Type(1));
        assert_eq!(levi_type(&ex_3_3_m()), LeviTypeResult::Type(1));
        assert_eq!(levi_type(&levi_flat2()), LeviTypeResult::Degenerate);
    }

    #[test]
    fn pointwise_orders() {
        let m = sphere2();
        assert_eq!(
            pointwise_nondegeneracy_order(&m, &[q(0), q(0)], 1).unwrap(),
            PointwiseOrder::Order(1)
        );
        let lf = levi_flat2();
        assert_eq!(
            pointwise_nondegeneracy_order(&lf, &[q(0), q(0)], 1).unwrap(),
            PointwiseOrder::NoneUpTo(1)
        );
        // Im w = (z conj z)^2 at (1, i): Levi form nonzero away from z = 0.
        let m = im_w_zz2_c2();
        let p = vec![q(1), GaussianRational::i()];
        assert!(m.contains(&p));
        assert_eq!(
            pointwise_nondegeneracy_order(&m, &p, 1).unwrap(),
            PointwiseOrder::Order(1)
        );
        // At the origin the gradient family degenerates.
        assert_eq!(
            pointwise_nondegeneracy_order(&m, &[q(0), q(0)], 1).unwrap(),
            PointwiseOrder::NoneUpTo(1)
        );
    }

    #[test]
    fn essential_finiteness_cases() {
        assert_eq!(
            essential_finiteness_at(&sphere2(), &[q(0), q(0)], 1, 12).unwrap(),
            EssentialFiniteness::Certified { ell: 1, codimension: 1, certifying_degree: 1 }
        );
        assert_eq!(
            essential_finiteness_at(&ex_2_10_mprime(), &[q(0), q(0)], 1, 12).unwrap(),
            EssentialFiniteness::NotDetected { ell_max: 1, d_max: 12 }
        );
        assert_eq!(
            essential_finiteness_at(&levi_flat2(), &[q(0), q(0)], 1, 8).unwrap(),
            EssentialFiniteness::NotDetected { ell_max: 1, d_max: 8 }
        );
    }

    #[test]
    fn bloom_graham_types() {
        assert_eq!(
            bloom_graham_type_at(&sphere2(), &[q(0), q(0)], 8).unwrap(),
            FiniteType::Type(2)
        );
        assert_eq!(
            bloom_graham_type_at(&im_w_zz2_c2(), &[q(0), q(0)], 8).unwrap(),
            FiniteType::Type(4)
        );
        assert_eq!(
            bloom_graham_type_at(&ex_2_10_mprime(), &[q(0), q(0)], 8).unwrap(),
            FiniteType::ExceedsBound(8)
        );
    }

    #[test]
    fn gradient_relation_between_c_alpha_and_v_alpha() {
        // With the shared polynomial basis, the Z-gradient of c_alpha at 0
        // equals V_alpha evaluated at the base point, for every alpha.
        let m = sphere2();
        let basis = cr_basis(&m);
        let points = vec![
            vec![q(0), q(0)],
            vec![q(1), GaussianRational::ratio(-1, 2)],
        ];
        for p in points {
            assert!(m.contains(&p));
            let basis_p = cr_basis_at(&m, &p).unwrap();
            let full = m.full_point(&p);
            let zero_full = m.full_point(&[q(0), q(0)]);
            for alpha in multi_indices(basis.len(), 2) {
                let c = c_alpha(&m, &basis_p, &p, &alpha);
                let grad_c: Vec<GaussianRational> = (0..m.dim())
                    .map(|k| c.partial(m.arena().holo(k)).eval(&zero_full))
                    .collect();
                let v: Vec<GaussianRational> = v_alpha(&m, &basis_p, &alpha)
                    .iter()
                    .map(|vp| vp.eval(&full))
                    .collect();
                assert_eq!(grad_c, v, "alpha = {alpha:?}, p = {p:?}");
            }
        }
    }

    #[test]
    fn levi_radical_verdict_invariant_under_linear_changes() {
        let m = ex_3_3_m();
        let det = levi_determinant(&m);
        let base_verdict = m.vanishes_on_complexification(&det);
        use rand::{rngs::StdRng, Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(11);
        let mut tried = 0;
        while tried < 5 {
            let a: Vec<Vec<GaussianRational>> = (0..2)
                .map(|_| (0..2).map(|_| q(rng.gen_range(-2..=2))).collect())
                .collect();
            let det_a = &(&a[0][0] * &a[1][1]) - &(&a[0][1] * &a[1][0]);
            if det_a.is_zero() {
                continue;
            }
            tried += 1;
            let rho2 = linear_change(m.rho(), &a);
            let m2 = HypersurfaceSpec::validate(rho2, vec![q(0), q(0)], None).unwrap();
            let det2 = levi_determinant(&m2);
            assert_eq!(m2.vanishes_on_complexification(&det2), base_verdict);
        }
    }
}
