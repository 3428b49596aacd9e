use criterion::{black_box, criterion_group, criterion_main, Criterion};
use crlab_bench::{flat_quartic, sphere};
use crlab_core::arena::VariableArena;
use crlab_core::crcalc::levi_determinant;
use crlab_core::flow::{integrate_flow, NumericField};
use crlab_core::ideal::{
    finite_codimension_at_origin, groebner_basis, IdealPresentation, MonomialOrder,
    DEFAULT_SPAIR_BUDGET,
};
use crlab_core::invariants::{bloom_graham_type_at, degeneracy_witness};
use crlab_core::num::GaussianRational;
use crlab_core::parse::parse_expression;
use crlab_core::poly::{print_expr, Polynomial};
use num_complex::Complex64;

fn bench_parse_print(c: &mut Criterion) {
    let arena = VariableArena::complex_space(2);
    let text = "(w - conj(w))/(2*i) - ((w + conj(w))/2)^3*z1*conj(z1)";
    c.bench_function("parse_print_round_trip", |b| {
        b.iter(|| {
            let p = parse_expression(black_box(text), &arena).unwrap();
            black_box(print_expr(&p))
        })
    });
}

fn bench_groebner(c: &mut Criterion) {
    let arena = VariableArena::aux_only(&["x", "y", "u"]);
    let gens = ["x^2 + y*u - 1", "y^2 - x*u", "u^2 - x*y"]
        .iter()
        .map(|e| parse_expression(e, &arena).unwrap())
        .collect::<Vec<_>>();
    c.bench_function("groebner_three_quadrics", |b| {
        b.iter(|| {
            let ideal =
                IdealPresentation::new(black_box(gens.clone()), MonomialOrder::GradedLex).unwrap();
            black_box(groebner_basis(&ideal, DEFAULT_SPAIR_BUDGET).unwrap())
        })
    });
}

fn bench_levi(c: &mut Criterion) {
    let m = sphere(3);
    c.bench_function("levi_determinant_sphere3", |b| {
        b.iter(|| black_box(levi_determinant(black_box(&m))))
    });
}

fn bench_codim(c: &mut Criterion) {
    let arena = VariableArena::aux_only(&["x", "y"]);
    let gens = ["x^3", "x*y", "y^4"]
        .iter()
        .map(|e| parse_expression(e, &arena).unwrap())
        .collect::<Vec<_>>();
    let ideal = IdealPresentation::new(gens, MonomialOrder::GradedLex).unwrap();
    c.bench_function("codimension_staircase", |b| {
        b.iter(|| black_box(finite_codimension_at_origin(black_box(&ideal), 10).unwrap()))
    });
}

fn bench_witness(c: &mut Criterion) {
    let m = sphere(2);
    c.bench_function("witness_search_sphere2_deg3", |b| {
        b.iter(|| black_box(degeneracy_witness(black_box(&m), 3)))
    });
}

fn bench_bloom_graham(c: &mut Criterion) {
    let m = flat_quartic();
    let p = vec![GaussianRational::zero(); 2];
    c.bench_function("bloom_graham_quartic", |b| {
        b.iter(|| black_box(bloom_graham_type_at(black_box(&m), &p, 6).unwrap()))
    });
}

fn bench_rk4(c: &mut Criterion) {
    let arena = VariableArena::complex_space(1);
    let field = NumericField::from_polynomials(&[Polynomial::var(&arena, arena.holo(0))]);
    let z0 = [Complex64::new(1.0, 0.0)];
    c.bench_function("rk4_exponential_1000_steps", |b| {
        b.iter(|| {
            black_box(
                integrate_flow(black_box(&field), &z0, Complex64::new(1.0, 0.0), 1000).unwrap(),
            )
        })
    });
}

criterion_group!(
    benches,
    bench_parse_print,
    bench_groebner,
    bench_levi,
    bench_codim,
    bench_witness,
    bench_bloom_graham,
    bench_rk4
);
criterion_main!(benches);
