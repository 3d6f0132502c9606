//! Verification harness: the De Giorgi recurrence, embedding and
//! gradient-truncation ratio checks, and fitted-constant tests of a-priori
//! inequalities over families of runs.

mod contraction;
mod degiorgi;
mod embedding;
mod fitting;
mod luk;
mod properties;
mod registry;
mod report;

pub use contraction::{verify_contraction, ContractionReport, DECAY_FRACTION, INITIAL_SECTION};
pub use degiorgi::{degiorgi_sequence, RecurrenceOutcome, RecurrenceSpec, CONVERGED_BELOW};
pub use embedding::{
    check_sob4, check_weighted_embedding, coefficient_weight, refinement_drift, smooth_corpus, sob4_ratio,
    weighted_ratio, CorpusField, RatioStats, RefinementDrift,
};
pub use fitting::{fit_constants, FittedConstants, ShapeSample};
pub use luk::{check_luk, LukOutcome};
pub use properties::{verify_run_properties, IdentityFit, PropertyReport, MARGIN_TOLERANCE};
pub use registry::{
    collect_samples, fit_theorem_constant, shape, Domain, InequalityCheck, ProbeSettings, Probe, RunView, Shape,
    Window, DEFAULT_SHAPES, SHAPES,
};
pub use report::{render_text, write_report, REPORT_CSV, REPORT_TXT};
