//! Exact combinatorial and local-analytic tools for double covers of
//! rational scrolls and of the weighted projective space P(1,1,1,2,3).
//!
//! The crate models linear systems on these ambients as exact monomial data:
//! divisor classes, monomial bases, sign involutions and their fixed loci,
//! base loci of generic members, and the local geometry of the associated
//! double covers. On top of those primitives it rebuilds, from first
//! principles, the classification of the scroll degrees that admit the
//! degree-two contraction studied here.

pub mod ambient;
pub mod classify;
pub mod germ;
pub mod involution;
pub mod linsys;
pub mod poly;
pub mod strata;

pub use ambient::{
    AmbientError, AmbientKind, CoxAmbient, DivisorClass, FanoInvariants, Monomial,
};
pub use classify::{
    classification_table, classify_all, classify_all_with, enumerate_positive_d3,
    enumerate_zero_d3, exclude_veronese_cone, CandidateReport, Classification, ClassifyError,
    ExclusionReport, TableRow, ACCEPTED_TUPLES, DEFAULT_BOUND,
};
pub use germ::ade::{ade_type, AdeOutcome, AdeType};
pub use germ::blowup::{weighted_blowup_chart, weighted_discrepancy};
pub use germ::scan::{singular_scan_fp, ScanOutcome};
pub use germ::verdict::{
    assess_point, canonical_verdict, canonical_verdict_with, cdv_verdict, CanonicalReport,
    CanonicalVerdict, CdvReport, CdvVerdict, PointAssessment, DEFAULT_SCAN_PRIME, DEFAULT_SEEDS,
};
pub use germ::{local_cover_germ, FiberPoint, GermError, GermFamily};
pub use involution::SignInvolution;
pub use linsys::{MonomialSystem, ParityDecomposition};
pub use strata::{
    base_locus, fixed_locus, generic_avoidance, AvoidanceVerdict, Stratum, StratumSet,
};
