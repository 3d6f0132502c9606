use crate::error::{Error, Result};
use crate::solver::RunRecord;

/// Section of the configuration echo allowed to differ between the two runs.
pub const INITIAL_SECTION: &str = "initial";

/// Required decay of the gap over the run.
pub const DECAY_FRACTION: f64 = 0.01;

#[derive(Debug, Clone, PartialEq)]
pub struct ContractionReport {
    pub times: Vec<f64>,
    /// `max|p₁ − p₂|` at each common snapshot.
    pub gap: Vec<f64>,
    /// Largest step-to-step increase of the gap.
    pub max_increase: f64,
    /// Tolerance the increase was compared against.
    pub tolerance: f64,
    pub monotone: bool,
    /// `gap(t_end) / gap(0)`, zero when both runs start equal.
    pub decay: f64,
    pub decayed: bool,
}

impl ContractionReport {
    pub fn passed(&self) -> bool {
        self.monotone && self.decayed
    }
}

fn strip_initial(config: &toml::Table) -> toml::Table {
    let mut c = config.clone();
    c.remove(INITIAL_SECTION);
    c
}

/// Gap series between two runs that differ only in the initial state.
///
/// The gap is read from the snapshots, so runs should keep one per step.
/// An increase counts as a violation once it exceeds
/// `slack · max(1, ‖p₁‖_∞, ‖p₂‖_∞)`.
pub fn verify_contraction(a: &RunRecord, b: &RunRecord, slack: f64) -> Result<ContractionReport> {
    if strip_initial(&a.config) != strip_initial(&b.config) {
        return Err(Error::Config("runs differ in more than the initial state".into()));
    }
    if a.grid != b.grid {
        return Err(Error::Config("runs use different grids".into()));
    }
    if a.snapshots.len() != b.snapshots.len() {
        return Err(Error::Config(format!(
            "runs hold {} and {} snapshots",
            a.snapshots.len(),
            b.snapshots.len()
        )));
    }
    let mut times = Vec::with_capacity(a.snapshots.len());
    let mut gap = Vec::with_capacity(a.snapshots.len());
    let mut scale: f64 = 1.0;
    for (p, q) in a.snapshots.iter().zip(&b.snapshots) {
        if (p.t() - q.t()).abs() > 1e-12 * p.t().abs().max(1.0) {
            return Err(Error::Config(format!("snapshot times {} and {} differ", p.t(), q.t())));
        }
        scale = scale.max(p.max_abs()).max(q.max_abs());
        times.push(p.t());
        gap.push(p.max_abs_diff(q));
    }
    if gap.is_empty() {
        return Err(Error::Precondition("runs hold no snapshots".into()));
    }
    let max_increase = gap.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    let tolerance = slack * scale;
    let first = gap[0];
    let last = *gap.last().unwrap();
    let decay = if first == 0.0 { 0.0 } else { last / first };
    Ok(ContractionReport {
        monotone: max_increase <= tolerance,
        decayed: if first == 0.0 { last == 0.0 } else { decay < DECAY_FRACTION },
        times,
        gap,
        max_increase,
        tolerance,
        decay,
    })
}
