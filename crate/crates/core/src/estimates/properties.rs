use crate::error::{Error, Result};
use crate::functionals::{ExponentBundle, FunctionalSeries};
use crate::solver::RunRecord;

use super::fitting::{fit_constants, FittedConstants, ShapeSample};
use super::registry::{shape, Probe, RunView};

/// Margins below `-MARGIN_TOLERANCE` (already scaled) violate the maximum principle.
pub const MARGIN_TOLERANCE: f64 = 1e-8;

/// Single-run fit of an integral identity over every recorded time.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityFit {
    pub id: &'static str,
    pub fitted: FittedConstants,
    pub samples: usize,
    /// `true` when the fitted constant is finite.
    pub bounded: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyReport {
    /// Smallest recorded maximum-principle margin.
    pub min_margin: f64,
    pub margin_ok: bool,
    /// Largest relative increase of `‖p̄‖_{L²}` between steps; `None` when the
    /// boundary data is not static or the column is absent.
    pub energy_increase: Option<f64>,
    pub energy_monotone: Option<bool>,
    pub h_integral: Option<IdentityFit>,
    pub energy: Option<IdentityFit>,
    /// The record stopped early; checks cover the completed steps only.
    pub partial: bool,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.margin_ok
            && self.energy_monotone != Some(false)
            && self.h_integral.as_ref().is_none_or(|f| f.bounded)
            && self.energy.as_ref().is_none_or(|f| f.bounded)
    }
}

fn static_data(series: &FunctionalSeries) -> bool {
    series.column("psi_t_sup").is_ok_and(|c| c.iter().all(|v| *v == 0.0))
}

fn identity_fit(id: &'static str, view: &RunView<'_>) -> Result<Option<IdentityFit>> {
    let shape = shape(id)?;
    let mut samples = Vec::new();
    for &t in &view.series.times()[1..] {
        let (lhs, fixed, factor, exponent) = match view.evaluate(shape, &Probe::Time(t)) {
            Ok(v) => v,
            Err(Error::MissingFunctional(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        samples.push(ShapeSample {
            run: 0,
            probe: Probe::Time(t).to_string(),
            lhs,
            fixed,
            factor,
            exponent,
        });
    }
    if samples.is_empty() {
        return Ok(None);
    }
    let fitted = fit_constants(&samples);
    Ok(Some(IdentityFit {
        id,
        bounded: fitted.c.is_finite(),
        fitted,
        samples: samples.len(),
    }))
}

/// Maximum-principle margins, `‖p̄‖_{L²}` monotonicity for static data, and
/// single-run fits of the `h_integral` and `energy` shapes.
///
/// Monotonicity allows a relative slack of `slack` per step, which should
/// reflect the nonlinear solver tolerance.
pub fn verify_run_properties(record: &RunRecord, bundle: &ExponentBundle, slack: f64) -> Result<PropertyReport> {
    let series = &record.series;
    if series.len() < 2 {
        return Err(Error::Precondition("record holds fewer than two samples".into()));
    }
    let margins = series.column("mp_margin")?;
    // The first row precedes any step and carries no margin.
    let min_margin = margins[1..].iter().cloned().fold(f64::INFINITY, f64::min);

    let energy_increase = if static_data(series) {
        series.column("pbar_L2").ok().map(|c| {
            let floor = 1e3 * f64::EPSILON * c[0].max(f64::MIN_POSITIVE);
            c.windows(2)
                .map(|w| (w[1] - w[0]) / w[0].max(floor))
                .fold(f64::NEG_INFINITY, f64::max)
        })
    } else {
        None
    };

    let view = RunView::new(series, bundle);
    Ok(PropertyReport {
        min_margin,
        margin_ok: min_margin >= -MARGIN_TOLERANCE,
        energy_monotone: energy_increase.map(|d| d <= slack),
        energy_increase,
        h_integral: identity_fit("h_integral", &view)?,
        energy: identity_fit("energy", &view)?,
        partial: !record.complete,
    })
}
