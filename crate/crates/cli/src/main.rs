//! `crlab`: exact invariants of real algebraic hypersurfaces and CR map
//! checks, with deterministic JSON reports.
//!
//! Exit codes: 0 = analysis completed (all mathematical verdicts, including
//! "not detected", are still 0); 2 = input error; 3 = resource-limited
//! unknown.

use clap::{Args, Parser, Subcommand, ValueEnum};
use crlab_core::analysis::{
    analyze_fixture, artin_report, contact_report, flow_report, map_check_report,
    pointwise_entry, AnalysisBounds, AnalysisError,
};
use crlab_core::fixture::{load_fixture, Fixture};
use crlab_core::num::GaussianRational;
use crlab_core::report::AnalysisReport;
use num_complex::Complex64;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "crlab", version, about = "Invariants of real algebraic hypersurfaces and CR maps")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args, Clone)]
struct BoundArgs {
    /// Ladder bound for essential finiteness (default: N-1).
    #[arg(long, default_value_t = 0)]
    ell_max: usize,
    /// Truncation degree bound for local codimension certificates.
    #[arg(long, default_value_t = 12)]
    codim_degree_max: usize,
    /// Bracket word-length bound for finite type.
    #[arg(long, default_value_t = 8)]
    bracket_max: usize,
    /// Coefficient degree bound for the tangent-field witness search.
    #[arg(long, default_value_t = 3)]
    witness_degree: u32,
    /// S-pair budget for Groebner runs.
    #[arg(long, default_value_t = 50_000)]
    spair_budget: usize,
    /// Jet degree for the contact-order search.
    #[arg(long, default_value_t = 3)]
    jet_degree: u32,
    /// Vanishing-order cap for the contact-order search.
    #[arg(long, default_value_t = 12)]
    order_cap: u32,
    /// Multi-index length bound for the reflection system.
    #[arg(long, default_value_t = 4)]
    m_bound: u32,
}

impl BoundArgs {
    fn to_bounds(&self) -> AnalysisBounds {
        AnalysisBounds {
            ell_max: self.ell_max,
            d_max: self.codim_degree_max,
            bracket_max: self.bracket_max,
            witness_degree: self.witness_degree,
            spair_budget: self.spair_budget,
            jet_degree: self.jet_degree,
            order_cap: self.order_cap,
            m_bound: self.m_bound,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the invariant pipeline on hypersurface fixtures.
    Analyze {
        paths: Vec<PathBuf>,
        /// Also classify this point (re,im pairs): pointwise order.
        #[arg(long)]
        at: Option<String>,
        #[command(flatten)]
        bounds: BoundArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Analyze fixtures in parallel (output order is input order).
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Verify the map candidates carried by a fixture.
    MapCheck {
        path: PathBuf,
        /// Target fixture (defaults to the fixture's own `target =` line,
        /// the sphere for maps with one extra component, or the source).
        #[arg(long)]
        target: Option<PathBuf>,
        #[command(flatten)]
        bounds: BoundArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Orders of contact for fixture curves plus the bounded search.
    Contact {
        path: PathBuf,
        #[command(flatten)]
        bounds: BoundArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Annihilating-polynomial arithmetic for one expression.
    Artin {
        expr: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Integrate a holomorphic vector-field flow from the fixture base point.
    Flow {
        path: PathBuf,
        /// Field components, comma-separated holomorphic expressions.
        #[arg(long)]
        field: String,
        /// Optional reparametrization function (holomorphic expression).
        #[arg(long)]
        h: Option<String>,
        /// Complex endpoint, e.g. "1", "0.5+0.25i", "i".
        #[arg(long, default_value = "1")]
        t_end: String,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        /// Start point (re,im pairs); defaults to the fixture base point.
        #[arg(long)]
        from: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

fn parse_complex(text: &str) -> Result<Complex64, String> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty complex literal".into());
    }
    // Split into real and imaginary parts at the last +/- that is not an
    // exponent sign or the leading sign.
    let bytes = t.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        let c = bytes[i];
        if (c == b'+' || c == b'-') && bytes[i - 1] != b'e' && bytes[i - 1] != b'E' {
            split = Some(i);
            break;
        }
    }
    let (re_text, im_text) = match split {
        Some(i) if t.ends_with('i') => (&t[..i], &t[i..]),
        _ if t.ends_with('i') => ("", t.as_str()),
        _ => (t.as_str(), ""),
    };
    let re = if re_text.is_empty() {
        0.0
    } else {
        re_text.parse::<f64>().map_err(|_| format!("bad real part `{re_text}`"))?
    };
    let im = if im_text.is_empty() {
        0.0
    } else {
        let stripped = &im_text[..im_text.len() - 1];
        match stripped {
            "" | "+" => 1.0,
            "-" => -1.0,
            s => s.parse::<f64>().map_err(|_| format!("bad imaginary part `{im_text}`"))?,
        }
    };
    Ok(Complex64::new(re, im))
}

fn parse_point(text: &str, dim: usize) -> Result<Vec<GaussianRational>, String> {
    let parts: Vec<&str> = text.split(',').map(|s| s.trim()).collect();
    if parts.len() != 2 * dim {
        return Err(format!("point needs {} rationals, got {}", 2 * dim, parts.len()));
    }
    let parse_ratio = |s: &str| -> Result<num_rational::BigRational, String> {
        let (neg, s) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let (n, d) = match s.split_once('/') {
            Some((a, b)) => (a, b),
            None => (s, "1"),
        };
        let n: num_bigint::BigInt = n.parse().map_err(|_| format!("bad rational `{s}`"))?;
        let d: num_bigint::BigInt = d.parse().map_err(|_| format!("bad rational `{s}`"))?;
        let r = num_rational::BigRational::new(n, d);
        Ok(if neg { -r } else { r })
    };
    let mut out = Vec::with_capacity(dim);
    for k in 0..dim {
        out.push(GaussianRational::new(
            parse_ratio(parts[2 * k])?,
            parse_ratio(parts[2 * k + 1])?,
        ));
    }
    Ok(out)
}

enum Failure {
    Input(String),
    Resource(String),
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Input(m) => Failure::Input(m),
            AnalysisError::Resource(m) => Failure::Resource(m),
        }
    }
}

fn load(path: &PathBuf) -> Result<Fixture, Failure> {
    load_fixture(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn render(report: &AnalysisReport, format: Format) -> String {
    match format {
        Format::Json => report.render_json(),
        Format::Text => report.render_text(),
    }
}

fn run() -> Result<String, Failure> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Analyze { paths, at, bounds, format, jobs } => {
            if paths.is_empty() {
                return Err(Failure::Input("no fixture paths given".into()));
            }
            let bounds = bounds.to_bounds();
            let run_one = |path: &PathBuf| -> Result<AnalysisReport, Failure> {
                let fixture = load(path)?;
                let mut report = analyze_fixture(&fixture, &bounds)?;
                if let Some(at_text) = &at {
                    let p = parse_point(at_text, fixture.spec.dim())
                        .map_err(Failure::Input)?;
                    report.push(pointwise_entry(&fixture.spec, &p)?);
                }
                Ok(report)
            };
            let results: Vec<Result<AnalysisReport, Failure>> = if jobs <= 1 || paths.len() == 1 {
                paths.iter().map(run_one).collect()
            } else {
                let mut slots: Vec<Option<Result<AnalysisReport, Failure>>> =
                    (0..paths.len()).map(|_| None).collect();
                let next = std::sync::atomic::AtomicUsize::new(0);
                let slots_mutex = std::sync::Mutex::new(&mut slots);
                std::thread::scope(|scope| {
                    for _ in 0..jobs.min(paths.len()) {
                        scope.spawn(|| loop {
                            let idx = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                            if idx >= paths.len() {
                                break;
                            }
                            let res = run_one(&paths[idx]);
                            slots_mutex.lock().unwrap()[idx] = Some(res);
                        });
                    }
                });
                slots.into_iter().map(|s| s.expect("every slot filled")).collect()
            };
            let mut out = String::new();
            for r in results {
                out.push_str(&render(&r?, format));
                out.push('\n');
            }
            Ok(out)
        }
        Cmd::MapCheck { path, target, bounds, format } => {
            let fixture = load(&path)?;
            let target_path = target.or_else(|| {
                fixture.target.as_ref().map(|rel| {
                    let mut base = path.clone();
                    base.pop();
                    base.join(rel)
                })
            });
            let target_fixture = match &target_path {
                Some(p) => Some(load(p)?),
                None => None,
            };
            let report =
                map_check_report(&fixture, target_fixture.as_ref(), &bounds.to_bounds())?;
            Ok(render(&report, format) + "\n")
        }
        Cmd::Contact { path, bounds, format } => {
            let fixture = load(&path)?;
            let report = contact_report(&fixture, &bounds.to_bounds())?;
            Ok(render(&report, format) + "\n")
        }
        Cmd::Artin { expr, format } => {
            let report = artin_report(&expr)?;
            Ok(render(&report, format) + "\n")
        }
        Cmd::Flow { path, field, h, t_end, steps, from, format } => {
            let fixture = load(&path)?;
            let t = parse_complex(&t_end).map_err(Failure::Input)?;
            let fields: Vec<String> = crlab_core::parse::split_top_level(&field);
            let start = match &from {
                Some(text) => Some(
                    parse_point(text, fixture.spec.dim()).map_err(Failure::Input)?,
                ),
                None => None,
            };
            let report =
                flow_report(&fixture, &fields, h.as_deref(), t, steps, start.as_deref())?;
            Ok(render(&report, format) + "\n")
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Resource(msg)) => {
            eprintln!("unknown (resource limit): {msg}");
            ExitCode::from(3)
        }
    }
}
