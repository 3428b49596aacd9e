//! Exact symbolic toolkit for real algebraic hypersurfaces in complex space.
//!
//! The crate computes biholomorphic invariants of hypersurfaces defined by
//! real polynomials — Levi type, holomorphic (non)degeneracy, essential
//! finiteness, Bloom–Graham finite type, orders of contact — and verifies
//! identities satisfied by CR map candidates (Jacobian nonvanishing,
//! algebraicity certificates, sphere-target reflection systems). All symbolic
//! computation is exact over the Gaussian rationals; the flow integrator is
//! the single numeric component.

pub mod analysis;
pub mod arena;
pub mod artin;
pub mod contact;
pub mod crcalc;
pub mod elim;
pub mod fixture;
pub mod flow;
pub mod gcd;
pub mod hypersurface;
pub mod ideal;
pub mod invariants;
pub mod linalg;
pub mod mapcheck;
pub mod num;
pub mod parse;
pub mod poly;
pub mod report;

pub use arena::{VarId, VarKind, VariableArena};
pub use contact::{ContactRatio, HoloCurve, MpEstimate};
pub use crcalc::{CRField, Derivation, PolyField};
pub use fixture::{load_fixture, parse_fixture, Fixture};
pub use hypersurface::{HypersurfaceSpec, RigidNormalForm, ValidateError};
pub use ideal::{CodimResult, IdealPresentation, MonomialOrder};
pub use invariants::{
    EssentialFiniteness, FiniteType, LeviTypeResult, NondegeneracyVerdict, PointwiseOrder,
    TangentWitness,
};
pub use mapcheck::{AuxRelation, PolyMap, ReflectionSystem};
pub use num::GaussianRational;
pub use parse::{parse_expression, ParseError};
pub use poly::{print_expr, Polynomial};
pub use report::{AnalysisReport, Json, ReportEntry};
