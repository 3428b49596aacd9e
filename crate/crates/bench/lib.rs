//! Shared fixtures for the benchmark suite.

use crlab_core::arena::VariableArena;
use crlab_core::hypersurface::HypersurfaceSpec;
use crlab_core::num::GaussianRational;
use crlab_core::parse::parse_expression;

pub fn sphere(dim: usize) -> HypersurfaceSpec {
    let arena = VariableArena::complex_space(dim);
    let mut expr = format!("z{dim} + conj(z{dim})", dim = dim);
    for k in 1..dim {
        expr.push_str(&format!(" + z{k}*conj(z{k})"));
    }
    let rho = parse_expression(&expr, &arena).unwrap();
    HypersurfaceSpec::validate(rho, vec![GaussianRational::zero(); dim], None).unwrap()
}

pub fn flat_quartic() -> HypersurfaceSpec {
    let arena = VariableArena::complex_space(2);
    let rho = parse_expression("(w - conj(w))/(2*i) - z1^2*conj(z1)^2", &arena).unwrap();
    HypersurfaceSpec::validate(rho, vec![GaussianRational::zero(); 2], None).unwrap()
}
