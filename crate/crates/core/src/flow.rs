//! Numeric integration of holomorphic vector-field flows in complex time:
//! classical fourth-order Runge-Kutta along straight segments, with tangency
//! and reparametrization residual reporting. This is the only floating-point
//! component of the crate.

use crate::hypersurface::HypersurfaceSpec;
use crate::num::GaussianRational;
use crate::poly::Polynomial;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FlowError {
    #[error("field has {got} components, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("reparametrization function must vanish at the origin when the start point is 0")]
    ReparamNotNormalized,
    #[error("steps must be at least 1")]
    NoSteps,
}

/// A polynomial compiled for fast numeric evaluation on the holomorphic slots.
#[derive(Clone, Debug)]
struct NumericPoly {
    nvars: usize,
    terms: Vec<(Vec<u32>, Complex64)>,
}

impl NumericPoly {
    /// Compile a polynomial, reading only the first `nvars` variable slots
    /// (all later slots must be absent).
    fn compile(p: &Polynomial, nvars: usize) -> Self {
        let terms = p
            .terms()
            .iter()
            .map(|(e, c)| {
                for v in nvars..e.len() {
                    assert_eq!(e[v], 0, "polynomial involves out-of-range variables");
                }
                let (re, im) = c.to_f64_pair();
                (e[..nvars].to_vec(), Complex64::new(re, im))
            })
            .collect();
        NumericPoly { nvars, terms }
    }

    fn eval(&self, point: &[Complex64]) -> Complex64 {
        debug_assert_eq!(point.len(), self.nvars);
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = *c;
            for (v, &exp) in e.iter().enumerate() {
                for _ in 0..exp {
                    t *= point[v];
                }
            }
            acc += t;
        }
        acc
    }
}

/// A holomorphic vector field compiled for numeric work: component `k` is the
/// coefficient of `d/dZ_k`, a polynomial in the holomorphic variables.
#[derive(Clone, Debug)]
pub struct NumericField {
    dim: usize,
    components: Vec<NumericPoly>,
}

impl NumericField {
    pub fn from_polynomials(coeffs: &[Polynomial]) -> Self {
        let dim = coeffs.len();
        let components = coeffs.iter().map(|c| NumericPoly::compile(c, dim)).collect();
        NumericField { dim, components }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, z: &[Complex64]) -> Vec<Complex64> {
        self.components.iter().map(|c| c.eval(z)).collect()
    }
}

/// Defining polynomial compiled for numeric residuals: evaluated at
/// `(z, conj z)`.
#[derive(Clone, Debug)]
pub struct NumericSurface {
    dim: usize,
    rho: NumericPoly,
}

impl NumericSurface {
    pub fn from_spec(m: &HypersurfaceSpec) -> Self {
        NumericSurface { dim: m.dim(), rho: NumericPoly::compile(m.rho(), 2 * m.dim()) }
    }

    pub fn residual(&self, z: &[Complex64]) -> f64 {
        let mut full = Vec::with_capacity(2 * self.dim);
        full.extend_from_slice(z);
        full.extend(z.iter().map(|c| c.conj()));
        self.rho.eval(&full).norm()
    }
}

/// A recorded complex-time trajectory: samples `(t_k, Z(t_k))` along the
/// straight segment from 0 to the requested endpoint.
#[derive(Clone, Debug)]
pub struct FlowTrajectory {
    pub samples: Vec<(Complex64, Vec<Complex64>)>,
    pub step: Complex64,
}

impl FlowTrajectory {
    pub fn final_state(&self) -> &[Complex64] {
        &self.samples.last().unwrap().1
    }

    /// Largest central-difference defect `|dZ/dt - A(Z)|` over interior
    /// samples.
    pub fn ode_defect(&self, field: &NumericField) -> f64 {
        let mut worst: f64 = 0.0;
        for w in self.samples.windows(3) {
            let (t0, ref z0) = w[0];
            let (t2, ref z2) = w[2];
            let (_, ref z1) = w[1];
            let dt = t2 - t0;
            let a = field.eval(z1);
            let defect: f64 = (0..z1.len())
                .map(|k| ((z2[k] - z0[k]) / dt - a[k]).norm_sqr())
                .sum::<f64>()
                .sqrt();
            worst = worst.max(defect);
        }
        worst
    }

    /// Largest surface residual along the run.
    pub fn surface_residual(&self, surface: &NumericSurface) -> f64 {
        self.samples
            .iter()
            .map(|(_, z)| surface.residual(z))
            .fold(0.0, f64::max)
    }
}

fn rk4_step<F: Fn(&[Complex64]) -> Vec<Complex64>>(
    f: &F,
    z: &[Complex64],
    h: Complex64,
) -> Vec<Complex64> {
    let k1 = f(z);
    let z2: Vec<Complex64> = z.iter().zip(&k1).map(|(a, k)| a + 0.5 * h * k).collect();
    let k2 = f(&z2);
    let z3: Vec<Complex64> = z.iter().zip(&k2).map(|(a, k)| a + 0.5 * h * k).collect();
    let k3 = f(&z3);
    let z4: Vec<Complex64> = z.iter().zip(&k3).map(|(a, k)| a + h * k).collect();
    let k4 = f(&z4);
    (0..z.len())
        .map(|i| z[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect()
}

/// Integrate `dZ/dt = A(Z)` from `z0` along the straight segment `[0, t_end]`
/// in complex time, recording every step.
pub fn integrate_flow(
    field: &NumericField,
    z0: &[Complex64],
    t_end: Complex64,
    steps: usize,
) -> Result<FlowTrajectory, FlowError> {
    if steps == 0 {
        return Err(FlowError::NoSteps);
    }
    if z0.len() != field.dim() {
        return Err(FlowError::DimensionMismatch { expected: field.dim(), got: z0.len() });
    }
    let h = t_end / steps as f64;
    let mut samples = Vec::with_capacity(steps + 1);
    let mut z = z0.to_vec();
    samples.push((Complex64::new(0.0, 0.0), z.clone()));
    let f = |w: &[Complex64]| field.eval(w);
    for k in 1..=steps {
        z = rk4_step(&f, &z, h);
        samples.push((h * k as f64, z.clone()));
    }
    Ok(FlowTrajectory { samples, step: h })
}

/// Residual summary of a reparametrized co-integration run.
#[derive(Clone, Debug)]
pub struct FlowResiduals {
    /// Largest `|rho|` along the reparametrized trajectory.
    pub max_rho_residual: f64,
    /// Largest central-difference defect of the reparametrized flow equation
    /// `d psi/dt = h(psi) A(psi)`.
    pub max_reparam_defect: f64,
}

/// Co-integrate the time-change ODE `dK/dt = h(phi(K, Z))`, `K(0) = 0`, where
/// `phi` is evaluated by an inner flow integration, and report the defects of
/// the composed trajectory `psi(t) = phi(K(t), Z)` against its flow equation.
///
/// Only time-direction defects are measured; tangential regularity of the
/// family in the space variable is outside numeric reach and not asserted.
pub fn integrate_reparam(
    h_poly: &Polynomial,
    field: &NumericField,
    m: &HypersurfaceSpec,
    z0: &[Complex64],
    t_end: Complex64,
    steps: usize,
    inner_steps: usize,
) -> Result<(FlowTrajectory, FlowResiduals), FlowError> {
    if steps == 0 || inner_steps == 0 {
        return Err(FlowError::NoSteps);
    }
    let n = field.dim();
    if z0.len() != n {
        return Err(FlowError::DimensionMismatch { expected: n, got: z0.len() });
    }
    let h_num = NumericPoly::compile(h_poly, n);
    if z0.iter().all(|c| c.norm() == 0.0) {
        let at0 = h_num.eval(&vec![Complex64::new(0.0, 0.0); n]);
        if at0.norm() > 0.0 {
            return Err(FlowError::ReparamNotNormalized);
        }
    }
    let phi = |k: Complex64| -> Vec<Complex64> {
        if k.norm() == 0.0 {
            return z0.to_vec();
        }
        integrate_flow(field, z0, k, inner_steps)
            .expect("inner integration parameters already validated")
            .final_state()
            .to_vec()
    };
    let rhs = |k: &[Complex64]| -> Vec<Complex64> { vec![h_num.eval(&phi(k[0]))] };

    let step = t_end / steps as f64;
    let mut k_val = vec![Complex64::new(0.0, 0.0)];
    let mut k_samples = Vec::with_capacity(steps + 1);
    let mut psi_samples = Vec::with_capacity(steps + 1);
    k_samples.push((Complex64::new(0.0, 0.0), k_val.clone()));
    psi_samples.push((Complex64::new(0.0, 0.0), z0.to_vec()));
    for idx in 1..=steps {
        k_val = rk4_step(&rhs, &k_val, step);
        let t = step * idx as f64;
        k_samples.push((t, k_val.clone()));
        psi_samples.push((t, phi(k_val[0])));
    }

    let surface = NumericSurface::from_spec(m);
    let psi_traj = FlowTrajectory { samples: psi_samples, step };
    let max_rho_residual = psi_traj.surface_residual(&surface);
    // Defect of d psi/dt = h(psi) A(psi) by central differences.
    let mut max_reparam_defect: f64 = 0.0;
    for w in psi_traj.samples.windows(3) {
        let (t0, ref p0) = w[0];
        let (_, ref p1) = w[1];
        let (t2, ref p2) = w[2];
        let dt = t2 - t0;
        let hv = h_num.eval(p1);
        let av = field.eval(p1);
        let defect: f64 = (0..n)
            .map(|k| ((p2[k] - p0[k]) / dt - hv * av[k]).norm_sqr())
            .sum::<f64>()
            .sqrt();
        max_reparam_defect = max_reparam_defect.max(defect);
    }
    let k_traj = FlowTrajectory { samples: k_samples, step };
    Ok((k_traj, FlowResiduals { max_rho_residual, max_reparam_defect }))
}

/// Richardson-style convergence factor: the ratio of endpoint differences
/// when the step count doubles twice. Fourth-order integration gives a
/// factor near 16 on smooth runs.
pub fn convergence_factor(
    field: &NumericField,
    z0: &[Complex64],
    t_end: Complex64,
    base_steps: usize,
) -> Result<f64, FlowError> {
    let a = integrate_flow(field, z0, t_end, base_steps)?;
    let b = integrate_flow(field, z0, t_end, base_steps * 2)?;
    let c = integrate_flow(field, z0, t_end, base_steps * 4)?;
    let dist = |x: &[Complex64], y: &[Complex64]| -> f64 {
        x.iter()
            .zip(y)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    };
    let e1 = dist(a.final_state(), b.final_state());
    let e2 = dist(b.final_state(), c.final_state());
    Ok(e1 / e2)
}

/// Convert an exact point to complex floating coordinates.
pub fn to_complex(p: &[GaussianRational]) -> Vec<Complex64> {
    p.iter()
        .map(|c| {
            let (re, im) = c.to_f64_pair();
            Complex64::new(re, im)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::VariableArena;
    use crate::parse::parse_expression;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn field_c1_linear() -> NumericField {
        // A(Z) = Z on C^1.
        let a = VariableArena::complex_space(1);
        NumericField::from_polynomials(&[Polynomial::var(&a, a.holo(0))])
    }

    #[test]
    fn exponential_flow() {
        let f = field_c1_linear();
        let traj = integrate_flow(&f, &[c(1.0, 0.0)], c(1.0, 0.0), 1000).unwrap();
        let e = std::f64::consts::E;
        assert!((traj.final_state()[0] - c(e, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn constant_field_complex_time() {
        let a = VariableArena::complex_space(2);
        let f = NumericField::from_polynomials(&[Polynomial::one(&a), Polynomial::zero(&a)]);
        let traj = integrate_flow(&f, &[c(0.0, 0.0), c(0.0, 0.0)], c(0.0, 1.0), 64).unwrap();
        assert!((traj.final_state()[0] - c(0.0, 1.0)).norm() < 1e-12);
        assert!(traj.final_state()[1].norm() < 1e-12);
    }

    #[test]
    fn tangent_coordinate_flow_stays_on_surface() {
        // Im w = |z1|^2 in C^3 is independent of z2; flowing d/dz2 stays on it.
        let arena = VariableArena::complex_space(3);
        let rho = parse_expression("(w - conj(w))/(2*i) - z1*conj(z1)", &arena).unwrap();
        let m = crate::hypersurface::HypersurfaceSpec::validate(
            rho,
            vec![GaussianRational::zero(); 3],
            None,
        )
        .unwrap();
        let f = NumericField::from_polynomials(&[
            Polynomial::zero(&arena),
            Polynomial::one(&arena),
            Polynomial::zero(&arena),
        ]);
        let z0 = [c(1.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)];
        let traj = integrate_flow(&f, &z0, c(1.0, 0.0), 1000).unwrap();
        let s = NumericSurface::from_spec(&m);
        assert!(traj.surface_residual(&s) <= 1e-10);
    }

    #[test]
    fn group_law() {
        // A(Z) = Z^2 with exact solution z0/(1 - z0 t).
        let a = VariableArena::complex_space(1);
        let f = NumericField::from_polynomials(&[Polynomial::var(&a, a.holo(0)).pow(2)]);
        let z0 = [c(0.5, 0.0)];
        let t = c(0.3, 0.1);
        let s = c(0.2, -0.05);
        let first = integrate_flow(&f, &z0, t, 400).unwrap();
        let second = integrate_flow(&f, first.final_state(), s, 400).unwrap();
        let direct = integrate_flow(&f, &z0, t + s, 800).unwrap();
        let d = (second.final_state()[0] - direct.final_state()[0]).norm();
        assert!(d < 1e-8, "group law defect {d}");
    }

    #[test]
    fn rk4_order_measured() {
        let f = field_c1_linear();
        let factor = convergence_factor(&f, &[c(1.0, 0.0)], c(1.0, 0.0), 20).unwrap();
        assert!((12.0..=20.0).contains(&factor), "factor {factor}");
    }

    #[test]
    fn reparam_constant_one_reproduces_flow() {
        let arena = VariableArena::complex_space(1);
        let f = NumericField::from_polynomials(&[Polynomial::var(&arena, arena.holo(0))]);
        let m = crate::hypersurface::HypersurfaceSpec::validate(
            parse_expression("(z1 - conj(z1))/(2*i)", &arena).unwrap(),
            vec![GaussianRational::zero(); 1],
            None,
        )
        .unwrap();
        let h = Polynomial::one(&arena);
        let z0 = [c(1.0, 0.0)];
        let (k, res) = integrate_reparam(&h, &f, &m, &z0, c(0.5, 0.0), 1000, 64).unwrap();
        // K(t) = t exactly.
        assert!((k.final_state()[0] - c(0.5, 0.0)).norm() < 1e-12);
        assert!(res.max_reparam_defect < 1e-6);
    }

    #[test]
    fn reparam_zero_freezes() {
        let arena = VariableArena::complex_space(1);
        let f = NumericField::from_polynomials(&[Polynomial::var(&arena, arena.holo(0))]);
        let m = crate::hypersurface::HypersurfaceSpec::validate(
            parse_expression("(z1 - conj(z1))/(2*i)", &arena).unwrap(),
            vec![GaussianRational::zero(); 1],
            None,
        )
        .unwrap();
        let h = Polynomial::zero(&arena);
        let z0 = [c(2.0, 0.0)];
        let (k, _res) = integrate_reparam(&h, &f, &m, &z0, c(1.0, 0.0), 100, 32).unwrap();
        assert!(k.final_state()[0].norm() == 0.0);
    }

    #[test]
    fn reparam_fixture_defect() {
        // h = w, A = d/dz2 on Im w = |z1|^2 from (1, 1, i): K'(t) = i, so
        // psi(t) = (1, 1 + i t, i) stays on the surface.
        let arena = VariableArena::complex_space(3);
        let rho = parse_expression("(w - conj(w))/(2*i) - z1*conj(z1)", &arena).unwrap();
        let m = crate::hypersurface::HypersurfaceSpec::validate(
            rho,
            vec![GaussianRational::zero(); 3],
            None,
        )
        .unwrap();
        let f = NumericField::from_polynomials(&[
            Polynomial::zero(&arena),
            Polynomial::one(&arena),
            Polynomial::zero(&arena),
        ]);
        let h = Polynomial::var(&arena, arena.holo(2));
        let z0 = [c(1.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)];
        let (_k, res) =
            integrate_reparam(&h, &f, &m, &z0, c(1.0, 0.0), 1000, 64).unwrap();
        assert!(res.max_reparam_defect <= 1e-6, "defect {}", res.max_reparam_defect);
        assert!(res.max_rho_residual <= 1e-10, "rho residual {}", res.max_rho_residual);
    }
}
