use std::sync::Arc;

use crate::constitutive::ConstitutiveLaw;
use crate::discretization::{BoundaryData, Derivative, Grid, ScalarField, SpaceTimeFn};
use crate::error::{Error, Result};
use crate::functionals::{FunctionalParams, FunctionalSeries, Tracker};

use super::config::{Scheme, SnapshotCadence, SolverConfig};
use super::record::RunRecord;
use super::step::{step_with, Problem};

/// What to record besides the fields.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub params: FunctionalParams,
    /// Functional ids to record; `None` records every supported id.
    pub tracked: Option<Vec<String>>,
    /// Configuration echo stored in the record; defaults to the solver settings.
    pub echo: Option<toml::Table>,
}

/// The solver settings as a TOML table.
pub fn solver_echo(config: &SolverConfig) -> toml::Table {
    let mut t = toml::Table::new();
    let scheme = match config.scheme {
        Scheme::ImplicitPicard => "implicit-picard",
        Scheme::Explicit => "explicit",
    };
    t.insert("scheme".into(), scheme.into());
    t.insert("dt".into(), config.dt.into());
    t.insert("t_end".into(), config.t_end.into());
    t.insert("picard_tolerance".into(), config.picard_tolerance.into());
    t.insert("picard_max_iterations".into(), (config.picard_max_iterations as i64).into());
    t.insert("linear_tolerance".into(), config.linear_tolerance.into());
    match config.snapshots {
        SnapshotCadence::Count(c) => t.insert("snapshots".into(), (c as i64).into()),
        SnapshotCadence::Every(m) => t.insert("snapshot_every".into(), (m as i64).into()),
    };
    if let Some(full) = &config.full_equation {
        t.insert("kappa".into(), full.kappa.into());
        t.insert("phi".into(), full.phi.into());
    }
    let mut root = toml::Table::new();
    root.insert("solver".into(), t.into());
    root
}

fn integrate(problem: &Problem<'_>, config: &SolverConfig, p0: ScalarField, options: &RunOptions) -> Result<RunRecord> {
    let grid = *p0.grid();
    config.validate(&grid, problem.law)?;
    let mut tracker = Tracker::new(
        problem.law,
        problem.boundary,
        problem.source,
        options.params.clone(),
        options.tracked.as_deref(),
        grid.dim(),
    )?;
    let mut series = FunctionalSeries::new(tracker.columns().to_vec());
    let p0 = p0.with_time(0.0);
    series.push(0.0, &tracker.row(&p0, 0.0)?)?;

    let n = config.steps();
    let snapshot_steps = config.snapshot_steps();
    let mut next_snapshot = 1;
    let mut snapshots = vec![p0.clone()];
    let mut state = p0;
    let mut failure = None;
    let mut steps = 0;
    for k in 0..n {
        let dt = config.time_of(k + 1) - config.time_of(k);
        let outcome = step_with(problem, &state, dt, config)
            .and_then(|o| tracker.row(&o.field, o.margin).map(|row| (o, row)));
        let (outcome, row) = match outcome {
            Ok(v) => v,
            Err(e) => {
                log::warn!("step {} at t = {:.6e} failed: {e}", k + 1, state.t());
                failure = Some(e.to_string());
                break;
            }
        };
        let t = config.time_of(k + 1);
        state = outcome.field.with_time(t);
        series.push(t, &row)?;
        steps = k + 1;
        if snapshot_steps.get(next_snapshot) == Some(&steps) {
            snapshots.push(state.clone());
            next_snapshot += 1;
        }
    }
    if failure.is_some() && snapshots.last().map(|s| s.t()) != Some(state.t()) {
        snapshots.push(state);
    }
    Ok(RunRecord {
        config: options.echo.clone().unwrap_or_else(|| solver_echo(config)),
        grid,
        series,
        snapshots,
        steps,
        complete: failure.is_none(),
        failure,
    })
}

/// Integrate `p_t = ∇·(K(|∇p|)∇p)` from `p0` with Dirichlet data from `boundary`.
///
/// A failing step ends the run early and yields a record with
/// `complete = false`; configuration errors are returned as `Err`.
pub fn run_ibvp(
    config: &SolverConfig,
    law: &ConstitutiveLaw,
    p0: ScalarField,
    boundary: &BoundaryData,
    options: &RunOptions,
) -> Result<RunRecord> {
    let mut reduced = config.clone();
    reduced.full_equation = None;
    integrate(&Problem::new(law, boundary), &reduced, p0, options)
}

/// As [`run_ibvp`] with a source term `f(x, t)` added to the right-hand side.
pub fn run_with_source(
    config: &SolverConfig,
    law: &ConstitutiveLaw,
    p0: ScalarField,
    boundary: &BoundaryData,
    source: &SpaceTimeFn,
    options: &RunOptions,
) -> Result<RunRecord> {
    integrate(&Problem::new(law, boundary).with_source(source), config, p0, options)
}

/// Integrate the full equation in rescaled time; `config.full_equation` must be set.
pub fn run_full_equation(
    config: &SolverConfig,
    law: &ConstitutiveLaw,
    p0: ScalarField,
    boundary: &BoundaryData,
    options: &RunOptions,
) -> Result<RunRecord> {
    if config.full_equation.is_none() {
        return Err(Error::Config("full-equation run needs kappa and phi".into()));
    }
    integrate(&Problem::new(law, boundary), config, p0, options)
}

/// Source `f = p*_t − ∇·(K(|∇p*|)∇p*)` for an exact solution given with its
/// first and second derivatives.
///
/// Uses `∇·(K(|u|)u) = K Δp* + K′(|u|) uᵀ(∇²p*)u / |u|` with `u = ∇p*`.
pub fn manufactured_source(law: &ConstitutiveLaw, exact: &BoundaryData, dim: usize) -> Result<SpaceTimeFn> {
    exact.require(dim, &[Derivative::T, Derivative::X, Derivative::Y, Derivative::XX, Derivative::XY, Derivative::YY])?;
    let law = law.clone();
    let exact = exact.clone();
    Ok(Arc::new(move |x: [f64; 2], t: f64| {
        let eval = || -> Result<f64> {
            let pt = exact.eval(Derivative::T, x, t)?;
            let [ux, uy] = exact.gradient(dim, x, t)?;
            let [hxx, hxy, hyy] = exact.hessian(dim, x, t)?;
            let xi = ux.hypot(uy);
            let (k, kp) = law.eval_with_derivative(xi)?;
            let mut div = k * (hxx + hyy);
            if xi > 0.0 {
                div += kp * (ux * ux * hxx + 2.0 * ux * uy * hxy + uy * uy * hyy) / xi;
            }
            Ok(pt - div)
        };
        eval().unwrap_or(f64::NAN)
    }))
}

/// Grid sequences and step sizes of a manufactured-solution study.
#[derive(Debug, Clone)]
pub struct ManufacturedStudy {
    pub t_end: f64,
    /// Grids for the spatial study, coarse to fine; `Δt = dt_factor · h²`.
    pub spatial_grids: Vec<Grid>,
    pub dt_factor: f64,
    /// Fixed fine grid and step sizes (large to small) for the temporal study.
    pub temporal_grid: Grid,
    pub temporal_dts: Vec<f64>,
    pub picard_tolerance: f64,
}

impl ManufacturedStudy {
    /// The 1D study on `[0, 1]`: grids 64/128 with `Δt = h²`, and
    /// `Δt ∈ {1e-3, 5e-4}` on 1024 cells.
    pub fn standard_1d(t_end: f64) -> Result<Self> {
        Ok(Self {
            t_end,
            spatial_grids: vec![Grid::new_1d(64, 1.0)?, Grid::new_1d(128, 1.0)?],
            dt_factor: 1.0,
            temporal_grid: Grid::new_1d(1024, 1.0)?,
            temporal_dts: vec![1e-3, 5e-4],
            picard_tolerance: 1e-12,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub cells: usize,
    pub h: f64,
    pub dt: f64,
    /// Max-norm error at `t_end`.
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub spatial: Vec<ConvergenceRow>,
    /// Observed orders between consecutive spatial rows.
    pub spatial_orders: Vec<f64>,
    pub temporal: Vec<ConvergenceRow>,
    pub temporal_orders: Vec<f64>,
}

impl ConvergenceReport {
    pub fn table(&self) -> String {
        let mut out = String::from("study     cells        h           dt          error       order\n");
        for (name, rows, orders) in [
            ("space", &self.spatial, &self.spatial_orders),
            ("time", &self.temporal, &self.temporal_orders),
        ] {
            for (k, r) in rows.iter().enumerate() {
                let order = if k == 0 { "-".to_string() } else { format!("{:.4}", orders[k - 1]) };
                out.push_str(&format!(
                    "{name:<9} {:>6}  {:.4e}  {:.4e}  {:.4e}  {order}\n",
                    r.cells, r.h, r.dt, r.error
                ));
            }
        }
        out
    }
}

fn observed_orders(rows: &[ConvergenceRow], scale: impl Fn(&ConvergenceRow) -> f64) -> Vec<f64> {
    rows.windows(2)
        .map(|w| (w[0].error / w[1].error).ln() / (scale(&w[0]) / scale(&w[1])).ln())
        .collect()
}

/// Max-norm error at `t_end` of an implicit run driven by the manufactured source.
pub fn manufactured_error(
    law: &ConstitutiveLaw,
    exact: &BoundaryData,
    grid: Grid,
    dt: f64,
    t_end: f64,
    picard_tolerance: f64,
) -> Result<f64> {
    let source = manufactured_source(law, exact, grid.dim())?;
    let p0 = ScalarField::from_fn(grid, 0.0, |x| exact.psi(x, 0.0))?;
    let mut config = SolverConfig::implicit(dt, t_end).with_snapshots(SnapshotCadence::Count(1));
    config.picard_tolerance = picard_tolerance;
    let options = RunOptions {
        tracked: Some(vec!["sup_p".into()]),
        ..RunOptions::default()
    };
    let record = run_with_source(&config, law, p0, exact, &source, &options)?;
    if !record.complete {
        return Err(Error::Numerical(format!(
            "manufactured run failed: {}",
            record.failure.unwrap_or_default()
        )));
    }
    let last = record.final_state().expect("record holds the final state");
    Ok(grid
        .centers()
        .zip(last.values())
        .fold(0.0, |m, (x, p)| m.max((p - exact.psi(x, last.t())).abs())))
}

/// Errors and observed convergence orders in space and time for the exact
/// solution `exact` (which doubles as the Dirichlet data).
pub fn run_manufactured(study: &ManufacturedStudy, law: &ConstitutiveLaw, exact: &BoundaryData) -> Result<ConvergenceReport> {
    let mut spatial = Vec::new();
    for grid in &study.spatial_grids {
        let h = grid.min_spacing();
        let dt = study.dt_factor * h * h;
        let error = manufactured_error(law, exact, *grid, dt, study.t_end, study.picard_tolerance)?;
        spatial.push(ConvergenceRow {
            cells: grid.len(),
            h,
            dt,
            error,
        });
    }
    let mut temporal = Vec::new();
    for &dt in &study.temporal_dts {
        let grid = study.temporal_grid;
        let error = manufactured_error(law, exact, grid, dt, study.t_end, study.picard_tolerance)?;
        temporal.push(ConvergenceRow {
            cells: grid.len(),
            h: grid.min_spacing(),
            dt,
            error,
        });
    }
    Ok(ConvergenceReport {
        spatial_orders: observed_orders(&spatial, |r| r.h),
        temporal_orders: observed_orders(&temporal, |r| r.dt),
        spatial,
        temporal,
    })
}
