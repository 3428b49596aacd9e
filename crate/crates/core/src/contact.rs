//! Orders of contact of holomorphic curves with a hypersurface: the
//! vanishing-order ratio test and a certified lower-bound search for the
//! contact-order invariant at a point.

use crate::arena::VariableArena;
use crate::hypersurface::HypersurfaceSpec;
use crate::linalg::{kernel_basis, solve};
use crate::num::GaussianRational;
use crate::parse::{parse_expression, ParseError};
use crate::poly::{print_expr, Polynomial};
use num_rational::BigRational;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ContactError {
    #[error("curve is constant")]
    ConstantCurve,
    #[error("curve has {got} components, hypersurface lives in C^{expected}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("curve base point does not lie on the hypersurface")]
    BasePointMismatch,
    #[error("curve component failed to parse: {0}")]
    Parse(#[from] ParseError),
}

/// A parametrized holomorphic curve `t -> (gamma_1(t), ..., gamma_N(t))` with
/// Gaussian-rational polynomial components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoloCurve {
    /// Bivariate ring in `t` (holomorphic slot) and its formal conjugate.
    arena: Arc<VariableArena>,
    /// Components involve only the holomorphic slot.
    components: Vec<Polynomial>,
}

impl HoloCurve {
    /// Build from components over the curve ring; they must involve only `t`.
    pub fn new(components: Vec<Polynomial>) -> Result<Self, ContactError> {
        let arena = components
            .first()
            .expect("at least one component")
            .arena()
            .clone();
        for c in &components {
            assert!(!c.involves(arena.anti(0)), "components are holomorphic in t");
        }
        let curve = HoloCurve { arena, components };
        if curve.order().is_none() {
            return Err(ContactError::ConstantCurve);
        }
        Ok(curve)
    }

    /// The shared `t`/`conj t` ring used by curve computations.
    pub fn curve_ring() -> Arc<VariableArena> {
        VariableArena::complex_space(1)
    }

    /// Parse comma-free component expressions written in the variable `t`.
    pub fn from_exprs(exprs: &[&str]) -> Result<Self, ContactError> {
        let t_arena = VariableArena::aux_only(&["t"]);
        let ring = Self::curve_ring();
        let mut components = Vec::new();
        for text in exprs {
            let p = parse_expression(text, &t_arena)?;
            let terms: Vec<(Vec<u32>, GaussianRational)> = p
                .terms()
                .iter()
                .map(|(e, c)| (vec![e[0], 0], c.clone()))
                .collect();
            components.push(Polynomial::from_terms(&ring, terms));
        }
        HoloCurve::new(components)
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    /// Printable component expressions in the variable `t`.
    pub fn component_strings(&self) -> Vec<String> {
        let t_arena = VariableArena::aux_only(&["t"]);
        self.components
            .iter()
            .map(|c| {
                let terms: Vec<(Vec<u32>, GaussianRational)> = c
                    .terms()
                    .iter()
                    .map(|(e, k)| (vec![e[0]], k.clone()))
                    .collect();
                print_expr(&Polynomial::from_terms(&t_arena, terms))
            })
            .collect()
    }

    pub fn base_point(&self) -> Vec<GaussianRational> {
        let zero = vec![GaussianRational::zero(); 2];
        self.components.iter().map(|c| c.eval(&zero)).collect()
    }

    /// Order of vanishing of `gamma(t) - gamma(0)`; `None` for constants.
    pub fn order(&self) -> Option<u32> {
        self.components
            .iter()
            .filter_map(|c| {
                c.terms()
                    .iter()
                    .filter(|(e, _)| e[0] > 0)
                    .map(|(e, _)| e[0])
                    .min()
            })
            .min()
    }

    /// Substitute `t -> t^k`.
    pub fn reparametrize(&self, k: u32) -> HoloCurve {
        let components = self
            .components
            .iter()
            .map(|c| {
                let terms: Vec<(Vec<u32>, GaussianRational)> = c
                    .terms()
                    .iter()
                    .map(|(e, coef)| (vec![e[0] * k, 0], coef.clone()))
                    .collect();
                Polynomial::from_terms(&self.arena, terms)
            })
            .collect();
        HoloCurve { arena: self.arena.clone(), components }
    }
}

/// `rho(gamma(t), conj gamma(conj t))` as a bivariate polynomial in the curve
/// ring, treating `t` and its conjugate as independent variables.
pub fn pullback(m: &HypersurfaceSpec, curve: &HoloCurve) -> Polynomial {
    let n = m.dim();
    assert_eq!(curve.components.len(), n);
    let ring = curve.arena.clone();
    let mut images = Vec::with_capacity(2 * n);
    for k in 0..n {
        images.push(curve.components[k].clone());
    }
    for k in 0..n {
        images.push(curve.components[k].conjugate_swap());
    }
    m.rho().map_into(&ring, &images)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ContactRatio {
    Finite { ord_rho: u32, ord_curve: u32, ratio: BigRational },
    /// The pullback vanishes identically: the curve lies inside `M`.
    InsideM,
}

/// The vanishing-order ratio of `rho` along the curve.
pub fn contact_ratio(m: &HypersurfaceSpec, curve: &HoloCurve) -> Result<ContactRatio, ContactError> {
    if curve.components.len() != m.dim() {
        return Err(ContactError::ArityMismatch { expected: m.dim(), got: curve.components.len() });
    }
    if !m.contains(&curve.base_point()) {
        return Err(ContactError::BasePointMismatch);
    }
    let pb = pullback(m, curve);
    if pb.is_zero() {
        return Ok(ContactRatio::InsideM);
    }
    let ord_rho = pb.min_total_degree().unwrap();
    let ord_curve = curve.order().ok_or(ContactError::ConstantCurve)?;
    let ratio = BigRational::new(ord_rho.into(), ord_curve.into());
    Ok(ContactRatio::Finite { ord_rho, ord_curve, ratio })
}

#[derive(Clone, Debug)]
pub enum MpEstimate {
    /// Certified lower bound: the maximal ratio found over the search space.
    LowerBound { bound: BigRational, witness: HoloCurve },
    /// A polynomial curve inside `M` (infinite order of contact).
    InfiniteContact { witness: HoloCurve },
}

/// Deterministic direction templates: coordinate directions first, then
/// pairwise sums, differences, and i-twisted combinations.
fn direction_templates(n: usize) -> Vec<Vec<GaussianRational>> {
    let mut out = Vec::new();
    let zero = GaussianRational::zero();
    let one = GaussianRational::one();
    for k in 0..n {
        let mut v = vec![zero.clone(); n];
        v[k] = one.clone();
        out.push(v);
    }
    for j in 0..n {
        for k in j + 1..n {
            for c in [one.clone(), -&one, GaussianRational::i()] {
                let mut v = vec![zero.clone(); n];
                v[j] = one.clone();
                v[k] = c;
                out.push(v);
            }
        }
    }
    out
}

/// Coefficient of the monomial `t^a conj(t)^b` in a curve-ring polynomial.
fn coeff_at(p: &Polynomial, a: u32, b: u32) -> GaussianRational {
    for (e, c) in p.terms() {
        if e[0] == a && e[1] == b {
            return c.clone();
        }
    }
    GaussianRational::zero()
}

/// One greedy order-raising pass: try to append `u * t^j` so that every
/// pullback coefficient of total degree `<= d` vanishes. Valid only for
/// `2j > d` (the quadratic terms in `u` then live above degree `d`).
fn try_raise(
    m: &HypersurfaceSpec,
    curve: &HoloCurve,
    d: u32,
    j: u32,
) -> Option<HoloCurve> {
    let n = m.dim();
    let ring = &curve.arena;
    // Gradients along the curve.
    let mut g = Vec::with_capacity(n); // d rho / d Z_k pulled back
    let mut h = Vec::with_capacity(n); // d rho / d zeta_k pulled back
    {
        let mut images = Vec::with_capacity(2 * n);
        for k in 0..n {
            images.push(curve.components[k].clone());
        }
        for k in 0..n {
            images.push(curve.components[k].conjugate_swap());
        }
        for k in 0..n {
            g.push(m.rho().partial(m.arena().holo(k)).map_into(ring, &images));
            h.push(m.rho().partial(m.arena().anti(k)).map_into(ring, &images));
        }
    }
    let pb = pullback(m, curve);

    // Realified unknowns (x_k, y_k) with u_k = x_k + i y_k.
    let ncols = 2 * n;
    let mut rows: Vec<Vec<GaussianRational>> = Vec::new();
    let mut rhs: Vec<GaussianRational> = Vec::new();
    for total in j..=d {
        for a in 0..=total {
            let b = total - a;
            // Contribution of u_k t^j: g_k's (a-j, b) coefficient; of conj u_k:
            // h_k's (a, b-j) coefficient.
            let mut row_re = vec![GaussianRational::zero(); ncols];
            let mut row_im = vec![GaussianRational::zero(); ncols];
            let mut nonzero = false;
            for k in 0..n {
                let alpha = if a >= j { coeff_at(&g[k], a - j, b) } else { GaussianRational::zero() };
                let beta = if b >= j { coeff_at(&h[k], a, b - j) } else { GaussianRational::zero() };
                if alpha.is_zero() && beta.is_zero() {
                    continue;
                }
                nonzero = true;
                row_re[2 * k] = GaussianRational::from_rational(&alpha.re + &beta.re);
                row_re[2 * k + 1] = GaussianRational::from_rational(&beta.im - &alpha.im);
                row_im[2 * k] = GaussianRational::from_rational(&alpha.im + &beta.im);
                row_im[2 * k + 1] = GaussianRational::from_rational(&alpha.re - &beta.re);
            }
            let c = coeff_at(&pb, a, b);
            if !nonzero && c.is_zero() {
                continue;
            }
            rows.push(row_re);
            rhs.push(GaussianRational::from_rational(-&c.re));
            rows.push(row_im);
            rhs.push(GaussianRational::from_rational(-&c.im));
        }
    }
    let sol = solve(&rows, &rhs)?;
    let kernel = kernel_basis(&rows, ncols);
    // Candidate perturbations: the particular solution, then kernel shifts
    // (used to keep the curve nonconstant when the solution collapses it).
    let mut candidates = vec![sol.clone()];
    for k in &kernel {
        let shifted: Vec<GaussianRational> =
            sol.iter().zip(k).map(|(a, b)| a + b).collect();
        candidates.push(shifted);
    }
    'cand: for cand in candidates {
        let mut components = curve.components.clone();
        for k in 0..n {
            let u = GaussianRational::new(cand[2 * k].re.clone(), cand[2 * k + 1].re.clone());
            if u.is_zero() {
                continue;
            }
            let tj = Polynomial::monomial(ring, vec![j, 0], u);
            components[k] = components[k].add(&tj);
        }
        let raised = match HoloCurve::new(components) {
            Ok(c) => c,
            Err(_) => continue 'cand,
        };
        if raised.order() != curve.order() {
            // Degree-raising must not change the parametrization order.
            continue 'cand;
        }
        let new_pb = pullback(m, &raised);
        if new_pb.is_zero() || new_pb.min_total_degree().unwrap() > d {
            return Some(raised);
        }
    }
    None
}

/// Certified lower bound for the contact-order invariant at `p`: enumerate
/// direction templates, greedily raise the pullback order by exact linear
/// solving for jet coefficients up to degree `jet_degree`, stop at
/// `order_cap`, and report the maximal ratio (or a curve inside `M`).
pub fn estimate_mp(
    m: &HypersurfaceSpec,
    p: &[GaussianRational],
    jet_degree: u32,
    order_cap: u32,
) -> Result<MpEstimate, ContactError> {
    if !m.contains(p) {
        return Err(ContactError::BasePointMismatch);
    }
    let ring = HoloCurve::curve_ring();
    let n = m.dim();
    let mut best: Option<(BigRational, HoloCurve)> = None;
    for dir in direction_templates(n) {
        let mut components = Vec::with_capacity(n);
        for k in 0..n {
            let mut c = Polynomial::constant(&ring, p[k].clone());
            c = c.add(&Polynomial::monomial(&ring, vec![1, 0], dir[k].clone()));
            components.push(c);
        }
        let mut curve = match HoloCurve::new(components) {
            Ok(c) => c,
            Err(_) => continue,
        };
        loop {
            let pb = pullback(m, &curve);
            if pb.is_zero() {
                return Ok(MpEstimate::InfiniteContact { witness: curve });
            }
            let d = pb.min_total_degree().unwrap();
            let ord_curve = curve.order().unwrap();
            let ratio = BigRational::new(d.into(), ord_curve.into());
            let better = match &best {
                None => true,
                Some((b, _)) => ratio > *b,
            };
            if better {
                best = Some((ratio, curve.clone()));
            }
            if d >= order_cap {
                break;
            }
            // Linear raising step: j must satisfy 2j > d and j <= jet_degree.
            let j_min = d / 2 + 1;
            let mut raised = None;
            for j in j_min..=jet_degree.min(d) {
                if let Some(r) = try_raise(m, &curve, d, j) {
                    raised = Some(r);
                    break;
                }
            }
            match raised {
                Some(r) => curve = r,
                None => break,
            }
        }
    }
    let (bound, witness) = best.expect("at least one direction template");
    Ok(MpEstimate::LowerBound { bound, witness })
}
