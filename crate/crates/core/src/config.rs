//! Run configuration files.
//!
//! A configuration is a TOML document with the sections `[polynomial]`,
//! `[grid]`, `[boundary]`, `[initial]`, `[solver]`, `[functionals]`,
//! `[verify]` and `[mms]`. Unknown keys are rejected.
//!
//! ```toml
//! [polynomial]
//! exponents = [0.0, 1.0]
//! coefficients = [1.0, 1.0]
//!
//! [grid]
//! cells = [64]
//! extent = [1.0]
//!
//! [boundary]
//! psi = "1 + 0.5 * x"
//! psi_x = "0.5"
//! psi_xx = "0"
//!
//! [initial]
//! random = { modes = 3, amplitude = 1.0 }
//! seed = 7
//!
//! [solver]
//! dt = 1e-3
//! t_end = 1.0
//! ```

use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::constitutive::{ConstitutiveLaw, ForchheimerPolynomial};
use crate::discretization::{BoundaryData, BoundaryExpressions, Grid, ScalarField};
use crate::error::{Error, Result};
use crate::estimates::{shape, ProbeSettings, Window, DEFAULT_SHAPES};
use crate::expr::Expr;
use crate::functionals::{all_columns, exponent_bundle, ExponentBundle, FunctionalParams};
use crate::solver::{
    run_full_equation, run_ibvp, FullEquation, ManufacturedStudy, RunOptions, RunRecord, Scheme, SnapshotCadence,
    SolverConfig,
};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolynomialSection {
    pub exponents: Vec<f64>,
    pub coefficients: Vec<f64>,
    /// Optional lookup table for the solver coefficient: `[xi_max, target_error]`.
    pub table: Option<[f64; 2]>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub cells: Vec<usize>,
    pub extent: Vec<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundarySection {
    pub psi: String,
    pub psi_t: Option<String>,
    pub psi_x: Option<String>,
    pub psi_y: Option<String>,
    pub psi_xx: Option<String>,
    pub psi_xy: Option<String>,
    pub psi_yy: Option<String>,
    pub psi_xt: Option<String>,
    pub psi_yt: Option<String>,
}

impl BoundarySection {
    pub fn expressions(&self) -> BoundaryExpressions {
        BoundaryExpressions {
            psi: self.psi.clone(),
            psi_t: self.psi_t.clone(),
            psi_x: self.psi_x.clone(),
            psi_y: self.psi_y.clone(),
            psi_xx: self.psi_xx.clone(),
            psi_xy: self.psi_xy.clone(),
            psi_yy: self.psi_yy.clone(),
            psi_xt: self.psi_xt.clone(),
            psi_yt: self.psi_yt.clone(),
        }
    }
}

/// Random perturbation `Σ c_k sin(kπx/L)` (times `sin(kπy/L)` in 2D) of `Ψ(·, 0)`.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomInitial {
    pub modes: u32,
    pub amplitude: f64,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSection {
    /// `p₀(x, y)`; defaults to `Ψ(·, 0)`.
    pub expr: Option<String>,
    pub random: Option<RandomInitial>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSection {
    pub scheme: Scheme,
    pub dt: f64,
    pub t_end: f64,
    pub picard_tolerance: f64,
    pub picard_max_iterations: usize,
    pub linear_tolerance: f64,
    pub snapshots: Option<usize>,
    pub snapshot_every: Option<usize>,
    pub kappa: Option<f64>,
    pub phi: Option<f64>,
}

impl Default for SolverSection {
    fn default() -> Self {
        let d = SolverConfig::default();
        Self {
            scheme: d.scheme,
            dt: d.dt,
            t_end: d.t_end,
            picard_tolerance: d.picard_tolerance,
            picard_max_iterations: d.picard_max_iterations,
            linear_tolerance: d.linear_tolerance,
            snapshots: None,
            snapshot_every: None,
            kappa: None,
            phi: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FunctionalsSection {
    pub tracked: Option<Vec<String>>,
    pub alpha: f64,
    pub p1: f64,
    pub s0: f64,
    pub s: Vec<f64>,
}

impl Default for FunctionalsSection {
    fn default() -> Self {
        let p = FunctionalParams::default();
        Self {
            tracked: None,
            alpha: p.alpha,
            p1: p.p1,
            s0: p.s0,
            s: p.s,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifySection {
    pub theorems: Vec<String>,
    /// Number of run directories used for fitting; the rest are holdout.
    pub train: Option<usize>,
    /// `[T0, T, theta]` triples.
    pub windows: Vec<[f64; 3]>,
    pub times: Vec<f64>,
    pub holdout_factor: f64,
    /// Shuffles the run directories before the split when set.
    pub seed: Option<u64>,
    /// Separate constants for the six terms of `pbar_sup_local`.
    pub per_term_constants: bool,
}

impl Default for VerifySection {
    fn default() -> Self {
        let p = ProbeSettings::default();
        Self {
            theorems: DEFAULT_SHAPES.iter().map(|s| s.to_string()).collect(),
            train: None,
            windows: p.windows.iter().map(|w| [w.t0, w.t, w.theta]).collect(),
            times: p.times,
            holdout_factor: p.holdout_factor,
            seed: None,
            per_term_constants: p.per_term,
        }
    }
}

impl VerifySection {
    pub fn probe_settings(&self) -> ProbeSettings {
        ProbeSettings {
            windows: self.windows.iter().map(|w| Window::new(w[0], w[1], w[2])).collect(),
            times: self.times.clone(),
            holdout_factor: self.holdout_factor,
            per_term: self.per_term_constants,
        }
    }
}

/// Exact solution `p*` with the derivatives the manufactured source needs.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MmsSection {
    pub p: String,
    pub p_t: String,
    pub p_x: String,
    pub p_xx: String,
    pub p_y: Option<String>,
    pub p_xy: Option<String>,
    pub p_yy: Option<String>,
    pub t_end: f64,
    #[serde(default = "default_spatial_cells")]
    pub spatial_cells: Vec<usize>,
    #[serde(default = "one")]
    pub dt_factor: f64,
    #[serde(default = "default_temporal_cells")]
    pub temporal_cells: usize,
    #[serde(default = "default_temporal_dts")]
    pub temporal_dts: Vec<f64>,
    #[serde(default = "default_mms_tolerance")]
    pub picard_tolerance: f64,
}

fn default_spatial_cells() -> Vec<usize> {
    vec![64, 128]
}
fn one() -> f64 {
    1.0
}
fn default_temporal_cells() -> usize {
    1024
}
fn default_temporal_dts() -> Vec<f64> {
    vec![1e-3, 5e-4]
}
fn default_mms_tolerance() -> f64 {
    1e-12
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct Sections {
    polynomial: PolynomialSection,
    grid: GridSection,
    boundary: Option<BoundarySection>,
    initial: Option<InitialSection>,
    #[serde(default)]
    solver: SolverSection,
    #[serde(default)]
    functionals: FunctionalsSection,
    verify: Option<VerifySection>,
    mms: Option<MmsSection>,
}

/// A parsed and validated configuration together with its source table.
#[derive(Debug, Clone)]
pub struct RunConfig {
    table: toml::Table,
    pub polynomial: PolynomialSection,
    pub grid: GridSection,
    pub boundary: Option<BoundarySection>,
    pub initial: InitialSection,
    pub solver: SolverSection,
    pub functionals: FunctionalsSection,
    pub verify: VerifySection,
    pub mms: Option<MmsSection>,
}

fn config_err(e: impl std::fmt::Display) -> Error {
    Error::Config(e.to_string())
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let table: toml::Table = text
            .parse()
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_table(table)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        Self::from_table(text.parse().map_err(config_err)?)
    }

    pub fn from_table(table: toml::Table) -> Result<Self> {
        let s: Sections = table.clone().try_into().map_err(config_err)?;
        let config = Self {
            table,
            polynomial: s.polynomial,
            grid: s.grid,
            boundary: s.boundary,
            initial: s.initial.unwrap_or_default(),
            solver: s.solver,
            functionals: s.functionals,
            verify: s.verify.unwrap_or_default(),
            mms: s.mms,
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<()> {
        self.law()?;
        self.grid()?;
        if let Some(b) = &self.boundary {
            BoundaryData::from_expressions(&b.expressions())?;
        }
        if let Some(tracked) = &self.functionals.tracked {
            let known = all_columns(&self.params());
            if let Some(bad) = tracked.iter().find(|id| !known.contains(id)) {
                return Err(Error::Config(format!("unknown functional id `{bad}`")));
            }
        }
        for id in &self.verify.theorems {
            shape(id)?;
        }
        let init = &self.initial;
        if init.expr.is_some() && init.random.is_some() {
            return Err(Error::Config("[initial] takes either `expr` or `random`, not both".into()));
        }
        if let Some(e) = &init.expr {
            Expr::parse(e)?;
        }
        if init.random.is_some() && init.seed.is_none() {
            return Err(Error::Config("[initial] random initial state needs a `seed`".into()));
        }
        if self.solver.snapshots.is_some() && self.solver.snapshot_every.is_some() {
            return Err(Error::Config("[solver] takes `snapshots` or `snapshot_every`, not both".into()));
        }
        if self.solver.kappa.is_some() != self.solver.phi.is_some() {
            return Err(Error::Config("[solver] full equation needs both `kappa` and `phi`".into()));
        }
        Ok(())
    }

    /// The source table, as echoed into run records.
    pub fn table(&self) -> &toml::Table {
        &self.table
    }

    pub fn law(&self) -> Result<ConstitutiveLaw> {
        let p = &self.polynomial;
        let law = ConstitutiveLaw::new(ForchheimerPolynomial::new(p.exponents.clone(), p.coefficients.clone())?);
        match p.table {
            Some([xi_max, err]) => law.with_table(xi_max, err),
            None => Ok(law),
        }
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.grid.cells.len(), &self.grid.cells, &self.grid.extent)
    }

    pub fn boundary(&self) -> Result<BoundaryData> {
        let b = self
            .boundary
            .as_ref()
            .ok_or_else(|| Error::Config("missing [boundary] section".into()))?;
        BoundaryData::from_expressions(&b.expressions())
    }

    pub fn initial_state(&self, grid: &Grid, boundary: &BoundaryData) -> Result<ScalarField> {
        let init = &self.initial;
        if let Some(e) = &init.expr {
            let e = Expr::parse(e)?;
            return ScalarField::from_fn(*grid, 0.0, |x| e.eval(x[0], x[1], 0.0));
        }
        let perturbation = match (init.random, init.seed) {
            (Some(r), Some(seed)) => random_modes(grid, r, seed),
            _ => Vec::new(),
        };
        let extent = [grid.extent()[0], grid.extent().get(1).copied().unwrap_or(1.0)];
        ScalarField::from_fn(*grid, 0.0, |x| {
            let mut v = boundary.psi(x, 0.0);
            for &(kx, ky, c) in &perturbation {
                let sy = if grid.dim() == 2 { (ky as f64 * PI * x[1] / extent[1]).sin() } else { 1.0 };
                v += c * (kx as f64 * PI * x[0] / extent[0]).sin() * sy;
            }
            v
        })
    }

    pub fn params(&self) -> FunctionalParams {
        let f = &self.functionals;
        FunctionalParams {
            alpha: f.alpha,
            p1: f.p1,
            s0: f.s0,
            s: f.s.clone(),
        }
    }

    pub fn solver_config(&self) -> SolverConfig {
        let s = &self.solver;
        SolverConfig {
            scheme: s.scheme,
            dt: s.dt,
            t_end: s.t_end,
            picard_tolerance: s.picard_tolerance,
            picard_max_iterations: s.picard_max_iterations,
            linear_tolerance: s.linear_tolerance,
            full_equation: s.kappa.zip(s.phi).map(|(kappa, phi)| FullEquation { kappa, phi }),
            snapshots: match (s.snapshots, s.snapshot_every) {
                (_, Some(m)) => SnapshotCadence::Every(m),
                (Some(c), None) => SnapshotCadence::Count(c),
                (None, None) => SolverConfig::default().snapshots,
            },
        }
    }

    pub fn run_options(&self) -> RunOptions {
        RunOptions {
            params: self.params(),
            tracked: self.functionals.tracked.clone(),
            echo: Some(self.table.clone()),
        }
    }

    pub fn bundle(&self) -> Result<ExponentBundle> {
        let law = self.law()?;
        let f = &self.functionals;
        exponent_bundle(law.degree_exponent(), self.grid.cells.len(), f.alpha, f.p1, f.s0)
    }

    /// Run the configured problem: the full equation when `kappa` and `phi`
    /// are set, the reduced one otherwise.
    pub fn execute(&self) -> Result<RunRecord> {
        let law = self.law()?;
        let grid = self.grid()?;
        let boundary = self.boundary()?;
        let p0 = self.initial_state(&grid, &boundary)?;
        let config = self.solver_config();
        let options = self.run_options();
        if config.full_equation.is_some() {
            run_full_equation(&config, &law, p0, &boundary, &options)
        } else {
            run_ibvp(&config, &law, p0, &boundary, &options)
        }
    }

    /// The manufactured-solution study and its exact solution.
    pub fn mms_study(&self) -> Result<(ManufacturedStudy, BoundaryData)> {
        let m = self.mms.as_ref().ok_or_else(|| Error::Config("missing [mms] section".into()))?;
        let dim = self.grid.cells.len();
        let extent = &self.grid.extent;
        let grid_with = |n: usize| Grid::new(dim, &vec![n; dim], extent);
        let exact = BoundaryData::from_expressions(&BoundaryExpressions {
            psi: m.p.clone(),
            psi_t: Some(m.p_t.clone()),
            psi_x: Some(m.p_x.clone()),
            psi_xx: Some(m.p_xx.clone()),
            psi_y: m.p_y.clone(),
            psi_xy: m.p_xy.clone(),
            psi_yy: m.p_yy.clone(),
            ..Default::default()
        })?;
        let study = ManufacturedStudy {
            t_end: m.t_end,
            spatial_grids: m.spatial_cells.iter().map(|&n| grid_with(n)).collect::<Result<_>>()?,
            dt_factor: m.dt_factor,
            temporal_grid: grid_with(m.temporal_cells)?,
            temporal_dts: m.temporal_dts.clone(),
            picard_tolerance: m.picard_tolerance,
        };
        Ok((study, exact))
    }
}

fn random_modes(grid: &Grid, r: RandomInitial, seed: u64) -> Vec<(u32, u32, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for kx in 1..=r.modes {
        let kys = if grid.dim() == 2 { r.modes } else { 1 };
        for ky in 1..=kys {
            let decay = (kx * ky) as f64;
            out.push((kx, ky, r.amplitude * rng.gen_range(-1.0..=1.0) / decay));
        }
    }
    out
}

/// Set `dotted.key = value` in a table, creating intermediate tables.
///
/// `value` is read as a TOML value; text that does not parse is kept as a string.
pub fn apply_override(table: &mut toml::Table, key: &str, value: &str) -> Result<()> {
    let parsed: toml::Value = format!("v = {value}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(value.to_string()));
    let mut parts: Vec<&str> = key.split('.').collect();
    let leaf = parts.pop().filter(|l| !l.is_empty()).ok_or_else(|| Error::Config(format!("bad key `{key}`")))?;
    let mut cur = table;
    for p in parts {
        let entry = cur.entry(p.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = entry
            .as_table_mut()
            .ok_or_else(|| Error::Config(format!("`{p}` in `{key}` is not a table")))?;
    }
    cur.insert(leaf.to_string(), parsed);
    Ok(())
}
