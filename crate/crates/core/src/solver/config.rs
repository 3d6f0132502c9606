use serde::{Deserialize, Serialize};

use crate::constitutive::ConstitutiveLaw;
use crate::discretization::Grid;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    ImplicitPicard,
    Explicit,
}

/// Coefficients of `φ p_t = κ ∇·(K∇p) + K|∇p|²`.
///
/// Integrated in the rescaled time `τ = κ t / φ`, in which the equation reads
/// `p_τ = ∇·(K∇p) + K|∇p|²/κ` and tends to the reduced equation as `κ → ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FullEquation {
    pub kappa: f64,
    pub phi: f64,
}

impl FullEquation {
    pub fn validate(&self) -> Result<()> {
        if !(self.kappa > 0.0) || !self.kappa.is_finite() {
            return Err(Error::Config(format!("kappa must be positive, got {}", self.kappa)));
        }
        if !(self.phi > 0.0 && self.phi < 1.0) {
            return Err(Error::Config(format!("phi must lie in (0, 1), got {}", self.phi)));
        }
        Ok(())
    }

    /// Physical time corresponding to rescaled time `tau`.
    pub fn physical_time(&self, tau: f64) -> f64 {
        tau * self.phi / self.kappa
    }
}

/// When field snapshots are kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnapshotCadence {
    /// Initial state plus this many evenly spaced steps.
    Count(usize),
    /// Every `n`-th step, plus the initial and final states.
    Every(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub scheme: Scheme,
    pub dt: f64,
    pub t_end: f64,
    pub picard_tolerance: f64,
    pub picard_max_iterations: usize,
    pub linear_tolerance: f64,
    pub full_equation: Option<FullEquation>,
    pub snapshots: SnapshotCadence,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            scheme: Scheme::ImplicitPicard,
            dt: 1e-3,
            t_end: 0.1,
            picard_tolerance: 1e-10,
            picard_max_iterations: 50,
            linear_tolerance: 1e-12,
            full_equation: None,
            snapshots: SnapshotCadence::Count(32),
        }
    }
}

/// Explicit-scheme step bound `0.45 h² a₀ / (2n)`, from `K ≤ 1/a₀`.
pub fn cfl_limit(grid: &Grid, law: &ConstitutiveLaw) -> f64 {
    let h = grid.min_spacing();
    0.45 * h * h * law.poly().a0() / (2.0 * grid.dim() as f64)
}

impl SolverConfig {
    pub fn implicit(dt: f64, t_end: f64) -> Self {
        Self {
            dt,
            t_end,
            ..Self::default()
        }
    }

    pub fn explicit(dt: f64, t_end: f64) -> Self {
        Self {
            scheme: Scheme::Explicit,
            dt,
            t_end,
            ..Self::default()
        }
    }

    pub fn with_snapshots(mut self, cadence: SnapshotCadence) -> Self {
        self.snapshots = cadence;
        self
    }

    pub fn with_full_equation(mut self, full: FullEquation) -> Self {
        self.full_equation = Some(full);
        self
    }

    pub fn validate(&self, grid: &Grid, law: &ConstitutiveLaw) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            return Err(Error::Config(format!("t_end must be nonnegative, got {}", self.t_end)));
        }
        if !(self.picard_tolerance > 0.0) || !(self.linear_tolerance > 0.0) {
            return Err(Error::Config("solver tolerances must be positive".into()));
        }
        if self.picard_max_iterations == 0 {
            return Err(Error::Config("picard_max_iterations must be at least 1".into()));
        }
        match self.snapshots {
            SnapshotCadence::Count(0) | SnapshotCadence::Every(0) => {
                return Err(Error::Config("snapshot cadence must be positive".into()))
            }
            _ => {}
        }
        if let Some(full) = &self.full_equation {
            full.validate()?;
        }
        if self.scheme == Scheme::Explicit {
            let limit = cfl_limit(grid, law);
            if self.dt > limit {
                return Err(Error::Config(format!(
                    "explicit dt = {} exceeds the stability limit {limit:e} = 0.45 h² a0 / (2n)",
                    self.dt
                )));
            }
        }
        Ok(())
    }

    /// Step count and the time of step `k`; the last step lands on `t_end`.
    pub fn steps(&self) -> usize {
        if self.t_end == 0.0 {
            return 0;
        }
        let n = (self.t_end / self.dt - 1e-9).ceil();
        (n as usize).max(1)
    }

    pub fn time_of(&self, k: usize) -> f64 {
        let n = self.steps();
        if k >= n {
            self.t_end
        } else {
            k as f64 * self.dt
        }
    }

    pub fn snapshot_steps(&self) -> Vec<usize> {
        let n = self.steps();
        let mut steps = vec![0];
        match self.snapshots {
            SnapshotCadence::Count(c) => {
                for k in 1..=c {
                    let s = ((k as f64) * n as f64 / c as f64).round() as usize;
                    if s > *steps.last().unwrap() && s <= n {
                        steps.push(s);
                    }
                }
            }
            SnapshotCadence::Every(m) => {
                let mut s = m;
                while s < n {
                    steps.push(s);
                    s += m;
                }
                if n > 0 {
                    steps.push(n);
                }
            }
        }
        steps
    }
}
