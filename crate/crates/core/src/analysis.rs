//! Analysis pipelines behind the CLI subcommands: each returns a
//! deterministic [`AnalysisReport`].

use crate::artin::AnnihilatingPolynomial;
use crate::contact::{contact_ratio, estimate_mp, ContactRatio, MpEstimate};
use crate::fixture::Fixture;
use crate::flow::{
    convergence_factor, integrate_flow, integrate_reparam, to_complex, NumericField,
    NumericSurface,
};
use crate::hypersurface::recognize_rigid_form;
use crate::ideal::IdealError;
use crate::invariants::{
    bloom_graham_type_at, essential_finiteness_at, holomorphic_nondegeneracy, levi_type,
    EssentialFiniteness, FiniteType, InvariantError, LeviTypeResult, PointwiseOrder,
};
use crate::mapcheck::{
    jacobian_determinant, maps_into, reflection_system, MapError, ReflectionSystem,
};
use crate::num::GaussianRational;
use crate::poly::print_expr;
use crate::report::{AnalysisReport, Json, ReportEntry};
use num_complex::Complex64;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AnalysisError {
    /// Malformed or invalid input: CLI exit code 2.
    #[error("{0}")]
    Input(String),
    /// Resource-limited unknown result: CLI exit code 3.
    #[error("resource limit: {0}")]
    Resource(String),
}

impl From<IdealError> for AnalysisError {
    fn from(e: IdealError) -> Self {
        match e {
            IdealError::BudgetExceeded { .. } => AnalysisError::Resource(e.to_string()),
            other => AnalysisError::Input(other.to_string()),
        }
    }
}

impl From<InvariantError> for AnalysisError {
    fn from(e: InvariantError) -> Self {
        match e {
            InvariantError::Ideal(IdealError::BudgetExceeded { budget }) => {
                AnalysisError::Resource(format!("S-pair budget of {budget} exceeded"))
            }
            other => AnalysisError::Input(other.to_string()),
        }
    }
}

impl From<MapError> for AnalysisError {
    fn from(e: MapError) -> Self {
        match e {
            MapError::Ideal(IdealError::BudgetExceeded { budget }) => {
                AnalysisError::Resource(format!("S-pair budget of {budget} exceeded"))
            }
            other => AnalysisError::Input(other.to_string()),
        }
    }
}

/// Bounds every invariant computation runs under; reported with each entry.
#[derive(Clone, Copy, Debug)]
pub struct AnalysisBounds {
    /// Ladder bound for essential finiteness; 0 means "use N-1".
    pub ell_max: usize,
    /// Truncation degree for the local codimension certificate.
    pub d_max: usize,
    /// Bracket word-length bound for finite type.
    pub bracket_max: usize,
    /// Coefficient degree bound for the tangent-field witness search.
    pub witness_degree: u32,
    /// S-pair budget for Groebner runs.
    pub spair_budget: usize,
    /// Jet degree for the contact-order search.
    pub jet_degree: u32,
    /// Vanishing-order cap for the contact-order search.
    pub order_cap: u32,
    /// Multi-index length bound for the reflection system.
    pub m_bound: u32,
}

impl Default for AnalysisBounds {
    fn default() -> Self {
        AnalysisBounds {
            ell_max: 0,
            d_max: 12,
            bracket_max: 8,
            witness_degree: 3,
            spair_budget: crate::ideal::DEFAULT_SPAIR_BUDGET,
            jet_degree: 3,
            order_cap: 12,
            m_bound: 4,
        }
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, u128) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_millis())
}

fn point_string(p: &[GaussianRational]) -> String {
    let parts: Vec<String> = p.iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// The `analyze` pipeline: validate, Levi type, holomorphic nondegeneracy,
/// essential finiteness at the base point, Bloom-Graham type at the base
/// point.
pub fn analyze_fixture(
    fixture: &Fixture,
    bounds: &AnalysisBounds,
) -> Result<AnalysisReport, AnalysisError> {
    let m = &fixture.spec;
    let n = m.dim();
    let ell_max = if bounds.ell_max == 0 { (n - 1).max(1) } else { bounds.ell_max };
    let mut report = AnalysisReport::new(&fixture.name, &fixture.source);

    let (_, ms) = timed(|| ());
    let mut validate_entry = ReportEntry::new("validate", "valid")
        .with_detail("dim", Json::Int(n as i64))
        .with_detail("degree", Json::Int(m.degree() as i64))
        .with_detail("base_point", Json::Str(point_string(m.base_point())));
    validate_entry.wall_ms = ms;
    report.push(validate_entry);

    let (lt, ms) = timed(|| levi_type(m));
    let mut entry = match lt {
        LeviTypeResult::Type(k) => ReportEntry::new("levi_type", k.to_string()),
        LeviTypeResult::Degenerate => ReportEntry::new("levi_type", "degenerate"),
    }
    .with_bound("alpha_max", (n - 1) as i64);
    entry.wall_ms = ms;
    report.push(entry);

    let (vd, ms) = timed(|| holomorphic_nondegeneracy(m, bounds.witness_degree));
    let mut entry = ReportEntry::new(
        "holomorphic_nondegeneracy",
        if vd.nondegenerate { "nondegenerate" } else { "degenerate" },
    )
    .with_bound("alpha_max", vd.alpha_bound as i64)
    .with_bound("witness_degree", vd.witness_degree as i64);
    if let Some(minor) = &vd.certifying_minor {
        entry = entry.with_certificate(print_expr(minor));
    }
    if let Some(w) = &vd.witness {
        let comps: Vec<String> = w.coefficients.iter().map(print_expr).collect();
        entry = entry.with_certificate(format!("tangent field ({})", comps.join(", ")));
    }
    entry.wall_ms = ms;
    report.push(entry);

    let (ef, ms) = timed(|| essential_finiteness_at(m, m.base_point(), ell_max, bounds.d_max));
    let mut entry = match ef? {
        EssentialFiniteness::Certified { ell, codimension, certifying_degree } => {
            ReportEntry::new("essential_finiteness", "certified")
                .with_detail("ell", Json::Int(ell as i64))
                .with_detail("codimension", Json::Int(codimension as i64))
                .with_detail("certifying_degree", Json::Int(certifying_degree as i64))
        }
        EssentialFiniteness::NotDetected { .. } => {
            ReportEntry::new("essential_finiteness", "not_detected")
        }
    }
    .with_bound("ell_max", ell_max as i64)
    .with_bound("codim_degree_max", bounds.d_max as i64);
    entry.wall_ms = ms;
    report.push(entry);

    let (bg, ms) = timed(|| bloom_graham_type_at(m, m.base_point(), bounds.bracket_max));
    let mut entry = match bg? {
        FiniteType::Type(t) => ReportEntry::new("bloom_graham_type", t.to_string()),
        FiniteType::ExceedsBound(b) => {
            ReportEntry::new("bloom_graham_type", format!("exceeds_bound_{b}"))
        }
    }
    .with_bound("bracket_max", bounds.bracket_max as i64);
    entry.wall_ms = ms;
    report.push(entry);

    Ok(report)
}

/// Pointwise order entry used by the `analyze --at` extension.
pub fn pointwise_entry(
    m: &crate::hypersurface::HypersurfaceSpec,
    p: &[GaussianRational],
) -> Result<ReportEntry, AnalysisError> {
    let bound = m.dim() - 1;
    let (res, ms) = timed(|| crate::invariants::pointwise_nondegeneracy_order(m, p, bound.max(1)));
    let mut entry = match res? {
        PointwiseOrder::Order(k) => ReportEntry::new("pointwise_order", k.to_string()),
        PointwiseOrder::NoneUpTo(b) => {
            ReportEntry::new("pointwise_order", format!("none_up_to_{b}"))
        }
    }
    .with_bound("alpha_max", bound.max(1) as i64)
    .with_detail("point", Json::Str(point_string(p)));
    entry.wall_ms = ms;
    Ok(entry)
}

/// The `contact` pipeline: ratio of every fixture curve plus the bounded
/// contact-order search at the base point.
pub fn contact_report(
    fixture: &Fixture,
    bounds: &AnalysisBounds,
) -> Result<AnalysisReport, AnalysisError> {
    let m = &fixture.spec;
    let mut report = AnalysisReport::new(&fixture.name, &fixture.source);
    for (idx, curve) in fixture.curves.iter().enumerate() {
        let (cr, ms) = timed(|| contact_ratio(m, curve));
        let cr = cr.map_err(|e| AnalysisError::Input(e.to_string()))?;
        let mut entry = match cr {
            ContactRatio::Finite { ord_rho, ord_curve, ratio } => {
                ReportEntry::new(&format!("contact_ratio_{idx}"), ratio.to_string())
                    .with_detail("ord_rho", Json::Int(ord_rho as i64))
                    .with_detail("ord_curve", Json::Int(ord_curve as i64))
            }
            ContactRatio::InsideM => {
                ReportEntry::new(&format!("contact_ratio_{idx}"), "inside_m")
            }
        }
        .with_detail(
            "curve",
            Json::Str(curve.component_strings().join(", ")),
        );
        entry.wall_ms = ms;
        report.push(entry);
    }
    let (mp, ms) = timed(|| estimate_mp(m, m.base_point(), bounds.jet_degree, bounds.order_cap));
    let mp = mp.map_err(|e| AnalysisError::Input(e.to_string()))?;
    let mut entry = match mp {
        MpEstimate::LowerBound { bound, witness } => {
            ReportEntry::new("contact_order_bound", format!("lower_bound_{bound}"))
                .with_certificate(witness.component_strings().join(", "))
        }
        MpEstimate::InfiniteContact { witness } => {
            ReportEntry::new("contact_order_bound", "infinite_contact")
                .with_certificate(witness.component_strings().join(", "))
        }
    }
    .with_bound("jet_degree", bounds.jet_degree as i64)
    .with_bound("order_cap", bounds.order_cap as i64);
    entry.wall_ms = ms;
    report.push(entry);
    Ok(report)
}

/// The `map-check` pipeline: maps-into, Jacobian (equidimensional case), and
/// the reflection system (sphere target of one extra dimension).
pub fn map_check_report(
    fixture: &Fixture,
    target: Option<&Fixture>,
    bounds: &AnalysisBounds,
) -> Result<AnalysisReport, AnalysisError> {
    let m = &fixture.spec;
    let mut report = AnalysisReport::new(&fixture.name, &fixture.source);
    if fixture.maps.is_empty() {
        return Err(AnalysisError::Input("fixture has no map lines".into()));
    }
    for (idx, h) in fixture.maps.iter().enumerate() {
        let tag = |s: &str| format!("{s}_{idx}");
        let np = h.target_dim();
        let n = m.dim();

        // Determine the target: explicit fixture, or the sphere when the map
        // has one extra component.
        enum Target<'a> {
            Explicit(&'a crate::hypersurface::HypersurfaceSpec),
            Sphere(crate::hypersurface::HypersurfaceSpec),
        }
        let target_spec = match target {
            Some(t) => Target::Explicit(&t.spec),
            None if np == n + 1 => Target::Sphere(crate::mapcheck::sphere_target(np)),
            None if np == n => Target::Explicit(m),
            None => {
                return Err(AnalysisError::Input(format!(
                    "map {idx} has {np} components; supply a target fixture"
                )))
            }
        };
        let target_ref = match &target_spec {
            Target::Explicit(t) => t,
            Target::Sphere(s) => s,
        };

        let (ok, ms) = timed(|| maps_into(m, target_ref, h, bounds.spair_budget));
        let mut entry = ReportEntry::new(&tag("maps_into"), if ok? { "true" } else { "false" })
            .with_bound("spair_budget", bounds.spair_budget as i64)
            .with_detail(
                "target",
                Json::Str(target_ref.name().unwrap_or("implicit").to_string()),
            );
        entry.wall_ms = ms;
        report.push(entry);

        if np == n && h.aux().is_empty() {
            let (jd, ms) = timed(|| jacobian_determinant(m, h));
            let (jac, verdict) = jd?;
            let mut entry = ReportEntry::new(
                &tag("jacobian_nonvanishing"),
                if verdict { "true" } else { "false" },
            )
            .with_certificate(print_expr(&jac));
            entry.wall_ms = ms;
            report.push(entry);
        }

        if np == n + 1 && h.aux().is_empty() {
            let rigid = match recognize_rigid_form(m) {
                Ok(r) => r,
                Err(e) => {
                    let entry = ReportEntry::new(&tag("reflection_system"), "not_rigid")
                        .with_certificate(e.to_string())
                        .with_bound("m_bound", bounds.m_bound as i64);
                    report.push(entry);
                    continue;
                }
            };
            let (res, ms) = timed(|| -> Result<ReflectionSystem, MapError> {
                reflection_system(m, &rigid, h, m.base_point(), bounds.m_bound, bounds.spair_budget)
            });
            let mut entry = match res {
                Ok(r) => {
                    let betas: Vec<String> = r
                        .betas
                        .iter()
                        .map(|b| format!("({})", b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
                        .collect();
                    ReportEntry::new(&tag("reflection_system"), "ok")
                        .with_detail("betas", Json::Str(betas.join(" ")))
                        .with_detail(
                            "residual_reflection",
                            Json::Bool(r.residual_reflection_ok),
                        )
                        .with_detail("residual_sphere", Json::Bool(r.residual_sphere_ok))
                        .with_detail(
                            "residual_rearranged",
                            Json::Bool(r.residual_rearranged_ok),
                        )
                        .with_detail("denominator", Json::Str(print_expr(&r.denominator)))
                }
                Err(MapError::NoIndexFound { bound }) => ReportEntry::new(
                    &tag("reflection_system"),
                    format!("no_index_found_{bound}"),
                ),
                Err(e) => return Err(e.into()),
            }
            .with_bound("m_bound", bounds.m_bound as i64);
            entry.wall_ms = ms;
            report.push(entry);
        }
    }
    Ok(report)
}

/// The `artin` pipeline over a single annihilating polynomial expression.
pub fn artin_report(expr: &str) -> Result<AnalysisReport, AnalysisError> {
    use crate::arena::VariableArena;
    use crate::parse::parse_expression;
    let arena = VariableArena::aux_only(&["x", "z1", "z2", "z3", "t", "u", "X", "Y"]);
    let p = parse_expression(expr, &arena).map_err(|e| AnalysisError::Input(e.to_string()))?;
    let y = if p.involves(arena.lookup("Y").unwrap()) {
        arena.lookup("Y").unwrap()
    } else if p.involves(arena.lookup("X").unwrap()) {
        arena.lookup("X").unwrap()
    } else {
        return Err(AnalysisError::Input(
            "expression involves neither Y nor X as the function indeterminate".into(),
        ));
    };
    let ann = AnnihilatingPolynomial::new(p, y).map_err(|e| AnalysisError::Input(e.to_string()))?;
    let mut report = AnalysisReport::new("artin", expr.as_bytes());

    let mut entry = ReportEntry::new("total_degree", ann.total_degree().to_string());
    entry.wall_ms = 0;
    report.push(entry);
    report.push(ReportEntry::new("degree_in_y", ann.degree_y().to_string()));
    report.push(
        ReportEntry::new("monicization", "computed").with_certificate(print_expr(&ann.monicize())),
    );
    let disc = ann
        .discriminant()
        .map_err(|e| AnalysisError::Input(e.to_string()))?;
    report.push(ReportEntry::new("discriminant", "computed").with_certificate(print_expr(&disc)));
    let check = ann
        .scaling_discriminant_check()
        .map_err(|e| AnalysisError::Input(e.to_string()))?;
    report.push(ReportEntry::new(
        "scaling_discriminant_check",
        if check { "true" } else { "false" },
    ));
    let r = ann
        .gap_bound_r()
        .map_err(|e| AnalysisError::Input(e.to_string()))?;
    // The printed formula can land on a half-integer; the reported bound is
    // its ceiling, and the exact formula value is carried alongside.
    let d1 = disc.total_degree().unwrap_or(0);
    let d2 = ann.leading_coefficient().total_degree().unwrap_or(0);
    let j = ann.degree_y();
    let numerator = d1 + d2 * j * (j - 1) + 1;
    report.push(
        ReportEntry::new("gap_bound_r", r.to_string())
            .with_detail("formula_value", Json::Str(format!("{numerator}/2")))
            .with_detail("rounding", Json::Str("ceiling".into())),
    );
    Ok(report)
}

/// The `flow` pipeline: integrate a field (and optionally a reparametrized
/// co-flow) from the fixture base point, reporting residuals as floats.
pub fn flow_report(
    fixture: &Fixture,
    field_exprs: &[String],
    h_expr: Option<&str>,
    t_end: Complex64,
    steps: usize,
    from: Option<&[GaussianRational]>,
) -> Result<AnalysisReport, AnalysisError> {
    use crate::parse::parse_expression;
    let m = &fixture.spec;
    let n = m.dim();
    if field_exprs.len() != n {
        return Err(AnalysisError::Input(format!(
            "field needs {n} components, got {}",
            field_exprs.len()
        )));
    }
    let mut coeffs = Vec::with_capacity(n);
    for e in field_exprs {
        let p = parse_expression(e, m.arena()).map_err(|e| AnalysisError::Input(e.to_string()))?;
        for k in 0..n {
            if p.involves(m.arena().anti(k)) {
                return Err(AnalysisError::Input(
                    "field coefficients must be holomorphic".into(),
                ));
            }
        }
        coeffs.push(p);
    }
    let field = NumericField::from_polynomials(&coeffs);
    let start: Vec<GaussianRational> = match from {
        Some(p) => {
            if p.len() != n {
                return Err(AnalysisError::Input(format!(
                    "start point needs {n} coordinates, got {}",
                    p.len()
                )));
            }
            if !m.contains(p) {
                return Err(AnalysisError::Input(
                    "start point does not lie on the hypersurface".into(),
                ));
            }
            p.to_vec()
        }
        None => m.base_point().to_vec(),
    };
    let z0 = to_complex(&start);
    let surface = NumericSurface::from_spec(m);
    let mut report = AnalysisReport::new(&fixture.name, &fixture.source);

    let (traj, ms) = timed(|| integrate_flow(&field, &z0, t_end, steps));
    let traj = traj.map_err(|e| AnalysisError::Input(e.to_string()))?;
    let mut entry = ReportEntry::new("flow", "integrated")
        .with_bound("steps", steps as i64)
        .with_detail("rho_residual", Json::Float(traj.surface_residual(&surface)))
        .with_detail("ode_defect", Json::Float(traj.ode_defect(&field)))
        .with_detail(
            "final",
            Json::Str(format!(
                "({})",
                traj.final_state()
                    .iter()
                    .map(|c| format!("{:.16e}+{:.16e}i", c.re, c.im))
                    .collect::<Vec<_>>()
                    .join(", ")
            )),
        );
    entry.wall_ms = ms;
    report.push(entry);

    let (factor, ms) = timed(|| convergence_factor(&field, &z0, t_end, 20));
    let mut entry = ReportEntry::new("rk4_convergence_factor", "measured")
        .with_bound("base_steps", 20)
        .with_detail("factor", Json::Float(factor.map_err(|e| AnalysisError::Input(e.to_string()))?));
    entry.wall_ms = ms;
    report.push(entry);

    if let Some(h_text) = h_expr {
        let h = parse_expression(h_text, m.arena())
            .map_err(|e| AnalysisError::Input(e.to_string()))?;
        let (res, ms) = timed(|| integrate_reparam(&h, &field, m, &z0, t_end, steps, 64));
        let (_k, residuals) = res.map_err(|e| AnalysisError::Input(e.to_string()))?;
        let mut entry = ReportEntry::new("reparametrized_flow", "integrated")
            .with_bound("steps", steps as i64)
            .with_bound("inner_steps", 64)
            .with_detail("rho_residual", Json::Float(residuals.max_rho_residual))
            .with_detail("reparam_defect", Json::Float(residuals.max_reparam_defect));
        entry.wall_ms = ms;
        report.push(entry);
    }
    Ok(report)
}
