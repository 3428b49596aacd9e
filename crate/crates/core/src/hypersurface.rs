//! Validated real algebraic hypersurfaces: reality, square-freeness and base
//! point checks, point membership, Segre varieties, and recognition of the
//! rigid graph normal form.

use crate::arena::VariableArena;
use crate::gcd::is_squarefree;
use crate::ideal::{IdealPresentation, MonomialOrder};
use crate::num::GaussianRational;
use crate::poly::{print_expr, Polynomial};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ValidateError {
    #[error("defining polynomial is not real (conjugation changes it)")]
    NotReal,
    #[error("defining polynomial is identically zero or constant")]
    DegenerateDefining,
    #[error("defining polynomial has a repeated factor")]
    NotSquareFree,
    #[error("base point does not lie on the hypersurface")]
    BasePointOffSurface,
    #[error("gradient of the defining polynomial vanishes at the base point")]
    SingularBasePoint,
    #[error("expected {expected} complex coordinates, got {got}")]
    WrongPointArity { expected: usize, got: usize },
    #[error("Segre variety generator is zero at this point")]
    DegenerateSegre,
}

/// A validated hypersurface `{rho = 0}` in `C^N` with a distinguished base
/// point with Gaussian-rational coordinates.
#[derive(Clone, Debug)]
pub struct HypersurfaceSpec {
    arena: Arc<VariableArena>,
    rho: Polynomial,
    dim: usize,
    degree: u32,
    base_point: Vec<GaussianRational>,
    name: Option<String>,
}

impl HypersurfaceSpec {
    /// Check every invariant: reality, square-freeness, base point membership
    /// and smoothness there.
    pub fn validate(
        rho: Polynomial,
        base_point: Vec<GaussianRational>,
        name: Option<String>,
    ) -> Result<Self, ValidateError> {
        let arena = rho.arena().clone();
        let dim = arena.dim();
        if base_point.len() != dim {
            return Err(ValidateError::WrongPointArity { expected: dim, got: base_point.len() });
        }
        if rho.is_constant() {
            return Err(ValidateError::DegenerateDefining);
        }
        if !rho.is_real() {
            return Err(ValidateError::NotReal);
        }
        if !is_squarefree(&rho) {
            return Err(ValidateError::NotSquareFree);
        }
        let spec = HypersurfaceSpec {
            degree: rho.total_degree().unwrap(),
            arena,
            rho,
            dim,
            base_point,
            name,
        };
        if !spec.contains(&spec.base_point) {
            return Err(ValidateError::BasePointOffSurface);
        }
        let full = spec.full_point(&spec.base_point);
        let grad_z_zero = (0..dim).all(|k| spec.rho.partial(spec.arena.holo(k)).eval(&full).is_zero());
        let grad_zeta_zero =
            (0..dim).all(|k| spec.rho.partial(spec.arena.anti(k)).eval(&full).is_zero());
        if grad_z_zero && grad_zeta_zero {
            return Err(ValidateError::SingularBasePoint);
        }
        Ok(spec)
    }

    pub fn arena(&self) -> &Arc<VariableArena> {
        &self.arena
    }

    pub fn rho(&self) -> &Polynomial {
        &self.rho
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn base_point(&self) -> &[GaussianRational] {
        &self.base_point
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Assemble the evaluation vector `(p, conj p)` over the 2N arena slots.
    pub fn full_point(&self, p: &[GaussianRational]) -> Vec<GaussianRational> {
        assert_eq!(p.len(), self.dim);
        let mut full = Vec::with_capacity(2 * self.dim);
        full.extend(p.iter().cloned());
        full.extend(p.iter().map(|c| c.conj()));
        full
    }

    /// Exact point membership: `rho(p, conj p) == 0`.
    pub fn contains(&self, p: &[GaussianRational]) -> bool {
        self.rho.eval(&self.full_point(p)).is_zero()
    }

    /// Membership of `f` in the radical of `(rho)` over the complexified ring.
    ///
    /// Because a validated `rho` is square-free, `(rho)` is already radical and
    /// membership is an exact divisibility test; the general Rabinowitsch
    /// route in the ideal engine cross-validates this on small instances.
    pub fn vanishes_on_complexification(&self, f: &Polynomial) -> bool {
        if f.is_zero() {
            return true;
        }
        f.divisible_by(&self.rho)
    }

    /// Segre variety through the conjugate of `p`: the principal ideal
    /// `(rho(p, zeta))` in the antiholomorphic variables.
    pub fn segre_variety(&self, p: &[GaussianRational]) -> Result<IdealPresentation, ValidateError> {
        if p.len() != self.dim {
            return Err(ValidateError::WrongPointArity { expected: self.dim, got: p.len() });
        }
        let assignments: Vec<_> = (0..self.dim)
            .map(|k| (self.arena.holo(k), p[k].clone()))
            .collect();
        let gen = self.rho.eval_partial(&assignments);
        if gen.is_zero() {
            return Err(ValidateError::DegenerateSegre);
        }
        Ok(IdealPresentation::new(vec![gen], MonomialOrder::GradedLex).unwrap())
    }
}

/// Rigid graph form `t = phi(z, conj z, s)` for `w = s + i t` the last
/// coordinate, with the normality identities `phi(0, conj z, s) = 0` and
/// `phi(z, 0, s) = 0`.
#[derive(Clone, Debug)]
pub struct RigidNormalForm {
    /// Chart ring: `z1..zn`, their conjugates, and the real parameter `s`.
    pub chart: Arc<VariableArena>,
    /// Graph polynomial in the chart ring.
    pub phi: Polynomial,
    /// `rho = unit * (t - phi)` after the rewrite.
    pub unit: GaussianRational,
    /// Whether the exact rotation `w -> i*w` was applied before rewriting.
    pub rotated: bool,
    source_dim: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RigidError {
    #[error("not rigid: witness monomial {witness}")]
    NotRigid { witness: String },
    #[error("rigid rewriting needs at least two complex dimensions")]
    DimensionTooSmall,
}

impl RigidNormalForm {
    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn tangential_dim(&self) -> usize {
        self.source_dim - 1
    }

    /// Images of the 2N ambient variables inside the chart ring, using the
    /// graph relation `w = s + i*phi` (and its conjugate), so that any ambient
    /// polynomial restricted to the hypersurface becomes a chart polynomial.
    pub fn ambient_to_chart_images(&self) -> Vec<Polynomial> {
        let n = self.source_dim - 1;
        let chart = &self.chart;
        let s = chart.lookup("s").unwrap();
        let sp = Polynomial::var(chart, s);
        let i = GaussianRational::i();
        let (w_img, wbar_img) = if self.rotated {
            // w = i*(s + i*phi) and conj(w) = -i*(s - i*phi).
            (
                sp.scale(&i).sub(&self.phi),
                sp.scale(&-i.clone()).sub(&self.phi),
            )
        } else {
            // w = s + i*phi, conj(w) = s - i*phi.
            (
                sp.add(&self.phi.scale(&i)),
                sp.sub(&self.phi.scale(&i)),
            )
        };
        let mut images = Vec::with_capacity(2 * self.source_dim);
        for k in 0..self.source_dim {
            if k < n {
                images.push(Polynomial::var(chart, chart.holo(k)));
            } else {
                images.push(w_img.clone());
            }
        }
        for k in 0..self.source_dim {
            if k < n {
                images.push(Polynomial::var(chart, chart.anti(k)));
            } else {
                images.push(wbar_img.clone());
            }
        }
        images
    }

    /// Chart coordinates of an ambient point: `(z, conj z, s)` with `s` the
    /// real part of `w` (or of `-i*w` in the rotated convention).
    pub fn chart_point(&self, p: &[GaussianRational]) -> Vec<GaussianRational> {
        let nn = self.source_dim;
        assert_eq!(p.len(), nn);
        let n = nn - 1;
        let mut out = Vec::with_capacity(2 * n + 1);
        for k in 0..n {
            out.push(p[k].clone());
        }
        for k in 0..n {
            out.push(p[k].conj());
        }
        let w = &p[nn - 1];
        let s = if self.rotated {
            // Re(-i*w) = Im(w).
            w.im.clone()
        } else {
            w.re.clone()
        };
        out.push(GaussianRational::from_rational(s));
        out
    }

    /// Rebuild the defining polynomial from `phi` in the ambient ring; equals
    /// the original `rho` by construction.
    pub fn reconstruct_rho(&self, ambient: &Arc<VariableArena>) -> Polynomial {
        let nn = self.source_dim;
        let n = nn - 1;
        let i = GaussianRational::i();
        let half = GaussianRational::ratio(1, 2);
        let w = Polynomial::var(ambient, ambient.holo(nn - 1));
        let wb = Polynomial::var(ambient, ambient.anti(nn - 1));
        let (s_expr, t_expr) = if self.rotated {
            // v = -i*w: s = (v + conj v)/2 = -i(w - conj w)/2,
            //           t = (v - conj v)/(2i) = -(w + conj w)/2.
            (
                w.sub(&wb).scale(&(&-i.clone() * &half)),
                w.add(&wb).scale(&-half.clone()),
            )
        } else {
            (
                w.add(&wb).scale(&half),
                w.sub(&wb).scale(&(&GaussianRational::i().inv().unwrap() * &half)),
            )
        };
        // Map chart variables into the ambient ring.
        let mut images = Vec::new();
        for k in 0..n {
            images.push(Polynomial::var(ambient, ambient.holo(k)));
        }
        for k in 0..n {
            images.push(Polynomial::var(ambient, ambient.anti(k)));
        }
        images.push(s_expr);
        let phi_amb = self.phi.map_into(ambient, &images);
        t_expr.sub(&phi_amb).scale(&self.unit)
    }
}

/// Attempt the rigid rewrite of `rho`, trying the direct convention first and
/// the `w -> i*w` rotation second.
pub fn recognize_rigid_form(m: &HypersurfaceSpec) -> Result<RigidNormalForm, RigidError> {
    let nn = m.dim();
    if nn < 2 {
        return Err(RigidError::DimensionTooSmall);
    }
    let n = nn - 1;
    let chart = VariableArena::complex_space(n).extend_aux(&["s"]);
    let work = chart.extend_aux(&["t"]);
    let s = work.lookup("s").unwrap();
    let t = work.lookup("t").unwrap();
    let sp = Polynomial::var(&work, s);
    let tp = Polynomial::var(&work, t);
    let i = GaussianRational::i();

    let attempt = |rotated: bool| -> Result<RigidNormalForm, String> {
        // sigma = rho with w substituted by the chart expression.
        let (w_img, wb_img) = if rotated {
            (
                sp.scale(&i).sub(&tp),
                sp.scale(&-i.clone()).sub(&tp),
            )
        } else {
            (
                sp.add(&tp.scale(&i)),
                sp.sub(&tp.scale(&i)),
            )
        };
        let mut images = Vec::new();
        for k in 0..nn {
            if k < n {
                images.push(Polynomial::var(&work, work.holo(k)));
            } else {
                images.push(w_img.clone());
            }
        }
        for k in 0..nn {
            if k < n {
                images.push(Polynomial::var(&work, work.anti(k)));
            } else {
                images.push(wb_img.clone());
            }
        }
        let sigma = m.rho().map_into(&work, &images);
        let coeffs = sigma.coeffs_in(t);
        if coeffs.len() > 2 {
            // A term of t-degree >= 2 obstructs the graph form.
            let witness = coeffs.last().unwrap().clone();
            return Err(format!("t^{}*({})", coeffs.len() - 1, print_expr(&witness)));
        }
        if coeffs.len() < 2 {
            return Err("t does not occur".to_string());
        }
        let unit = match coeffs[1].as_constant() {
            Some(c) if !c.is_zero() => c,
            _ => return Err(format!("t*({})", print_expr(&coeffs[1]))),
        };
        // sigma = unit*t + B, so phi = -B/unit.
        let inv = unit.inv().unwrap();
        let phi_work = coeffs[0].scale(&-inv);
        debug_assert!(!phi_work.involves(t));
        // Normality: phi vanishes when all z are zero, and when all conj z are.
        let zero_assign_z: Vec<_> = (0..n)
            .map(|k| (work.holo(k), GaussianRational::zero()))
            .collect();
        let zero_assign_c: Vec<_> = (0..n)
            .map(|k| (work.anti(k), GaussianRational::zero()))
            .collect();
        let at_c0 = phi_work.eval_partial(&zero_assign_c);
        if !at_c0.is_zero() {
            return Err(print_expr_first_monomial(&at_c0));
        }
        let at_z0 = phi_work.eval_partial(&zero_assign_z);
        if !at_z0.is_zero() {
            return Err(print_expr_first_monomial(&at_z0));
        }
        // Transport phi from the working ring (with t) down to the chart ring.
        let mut chart_images = Vec::new();
        for k in 0..n {
            chart_images.push(Polynomial::var(&chart, chart.holo(k)));
        }
        for k in 0..n {
            chart_images.push(Polynomial::var(&chart, chart.anti(k)));
        }
        chart_images.push(Polynomial::var(&chart, chart.lookup("s").unwrap()));
        chart_images.push(Polynomial::zero(&chart)); // t never occurs in phi
        let phi = phi_work.map_into(&chart, &chart_images);
        Ok(RigidNormalForm { chart: chart.clone(), phi, unit, rotated, source_dim: nn })
    };

    match attempt(false) {
        Ok(r) => Ok(r),
        Err(first_witness) => match attempt(true) {
            Ok(r) => Ok(r),
            Err(_) => Err(RigidError::NotRigid { witness: first_witness }),
        },
    }
}

fn print_expr_first_monomial(p: &Polynomial) -> String {
    match p.terms().first() {
        None => "0".to_string(),
        Some((e, c)) => {
            let m = Polynomial::monomial(p.arena(), e.clone(), c.clone());
            print_expr(&m)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_expression;

    fn q(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    fn sphere2() -> HypersurfaceSpec {
        let a = VariableArena::complex_space(2);
        let rho = parse_expression("z2 + conj(z2) + z1*conj(z1)", &a).unwrap();
        HypersurfaceSpec::validate(rho, vec![q(0), q(0)], Some("sphere2".into())).unwrap()
    }

    #[test]
    fn validate_sphere() {
        let m = sphere2();
        assert_eq!(m.degree(), 2);
        assert_eq!(m.dim(), 2);
    }

    #[test]
    fn validate_rejects_non_real() {
        let a = VariableArena::complex_space(1);
        let rho = parse_expression("i*z1", &a).unwrap();
        assert_eq!(
            HypersurfaceSpec::validate(rho, vec![q(0)], None).unwrap_err(),
            ValidateError::NotReal
        );
    }

    #[test]
    fn validate_example_2_10_mprime() {
        let a = VariableArena::complex_space(2);
        let rho = parse_expression(
            "(w - conj(w))/(2*i) - ((w + conj(w))/2)*z1*conj(z1)",
            &a,
        )
        .unwrap();
        let m = HypersurfaceSpec::validate(rho, vec![q(0), q(0)], None).unwrap();
        assert_eq!(m.degree(), 3);
    }

    #[test]
    fn validate_rejects_off_surface_and_singular() {
        let a = VariableArena::complex_space(2);
        let rho = parse_expression("z2 + conj(z2) + z1*conj(z1)", &a).unwrap();
        assert_eq!(
            HypersurfaceSpec::validate(rho.clone(), vec![q(1), q(0)], None).unwrap_err(),
            ValidateError::BasePointOffSurface
        );
        let sq = rho.mul(&rho);
        assert_eq!(
            HypersurfaceSpec::validate(sq, vec![q(0), q(0)], None).unwrap_err(),
            ValidateError::NotSquareFree
        );
        // z1*conj(z1) + ... has singular gradient at 0 for the cone-like case.
        let cone = parse_expression("z1*conj(z1) - z2*conj(z2)", &a).unwrap();
        assert_eq!(
            HypersurfaceSpec::validate(cone, vec![q(0), q(0)], None).unwrap_err(),
            ValidateError::SingularBasePoint
        );
    }

    #[test]
    fn point_membership_cases() {
        let m = sphere2();
        assert!(m.contains(&[q(0), q(0)]));
        // (1, -1/2): 1*1 + (-1/2) + (-1/2) = 0.
        assert!(m.contains(&[q(1), GaussianRational::ratio(-1, 2)]));
        assert!(!m.contains(&[q(1), q(0)]));
    }

    #[test]
    fn segre_at_origin_and_off_origin() {
        let m = sphere2();
        let a = m.arena().clone();
        let s0 = m.segre_variety(&[q(0), q(0)]).unwrap();
        assert_eq!(s0.generators().len(), 1);
        assert_eq!(s0.generators()[0], parse_expression("conj(z2)", &a).unwrap());
        let s1 = m
            .segre_variety(&[q(1), GaussianRational::ratio(-1, 2)])
            .unwrap();
        assert_eq!(
            s1.generators()[0],
            parse_expression("conj(z1) + conj(z2) - 1/2", &a).unwrap()
        );
        // The Segre generator vanishes at the conjugate of the point.
        let p = [q(1), GaussianRational::ratio(-1, 2)];
        let full = m.full_point(&p);
        assert!(s1.generators()[0].eval(&full).is_zero());

        // Only the linear term survives at the origin of Im w = (Re w)|z|^2.
        let mp = HypersurfaceSpec::validate(
            parse_expression("(w - conj(w))/(2*i) - ((w + conj(w))/2)*z1*conj(z1)", &a).unwrap(),
            vec![q(0), q(0)],
            None,
        )
        .unwrap();
        let s0 = mp.segre_variety(&[q(0), q(0)]).unwrap();
        let zeta2 = parse_expression("conj(z2)", &a).unwrap();
        assert!(s0.generators()[0].divisible_by(&zeta2));
        assert_eq!(s0.generators()[0].total_degree(), Some(1));
    }

    #[test]
    fn rigid_form_direct_convention() {
        // Im w = (Re w)^3 |z|^2 has phi = s^3 * z * conj(z).
        let a = VariableArena::complex_space(2);
        let rho = parse_expression(
            "(w - conj(w))/(2*i) - ((w + conj(w))/2)^3*z1*conj(z1)",
            &a,
        )
        .unwrap();
        let m = HypersurfaceSpec::validate(rho.clone(), vec![q(0), q(0)], None).unwrap();
        let r = recognize_rigid_form(&m).unwrap();
        assert!(!r.rotated);
        assert_eq!(r.unit, GaussianRational::one());
        let expect = parse_expression("s^3*z1*conj(z1)", &r.chart).unwrap();
        assert_eq!(r.phi, expect);
        assert_eq!(r.reconstruct_rho(&a), rho);
    }

    #[test]
    fn rigid_form_rotated_convention() {
        // The unbounded sphere realization w + conj(w) + |z|^2 requires the
        // rotation w -> i*w; phi = z*conj(z)/2, unit -2.
        let m = sphere2();
        let r = recognize_rigid_form(&m).unwrap();
        assert!(r.rotated);
        assert_eq!(r.unit, q(-2));
        let expect = parse_expression("z1*conj(z1)/2", &r.chart).unwrap();
        assert_eq!(r.phi, expect);
        assert_eq!(&r.reconstruct_rho(m.arena()), m.rho());
    }

    #[test]
    fn rigid_form_rejects_normality_violation() {
        let a = VariableArena::complex_space(2);
        let rho = parse_expression(
            "(w - conj(w))/(2*i) - z1^2 - conj(z1)^2",
            &a,
        )
        .unwrap();
        let m = HypersurfaceSpec::validate(rho, vec![q(0), q(0)], None).unwrap();
        match recognize_rigid_form(&m) {
            Err(RigidError::NotRigid { witness }) => {
                assert!(witness.contains("z1^2"), "witness was {witness}");
            }
            other => panic!("expected NotRigid, got {other:?}"),
        }
    }

    #[test]
    fn validate_idempotent() {
        let m = sphere2();
        let again = HypersurfaceSpec::validate(
            m.rho().clone(),
            m.base_point().to_vec(),
            m.name().map(|s| s.to_string()),
        )
        .unwrap();
        assert_eq!(again.rho(), m.rho());
        assert_eq!(again.base_point(), m.base_point());
        assert_eq!(again.degree(), m.degree());
    }
}
