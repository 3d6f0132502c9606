use crate::constitutive::ConstitutiveLaw;
use crate::discretization::{
    apply_operator, cell_gradient, face_coefficients, gradient, BoundaryData, BoundaryFrame, Grid, ScalarField,
    SpaceTimeFn, XI_CLAMP,
};
use crate::error::{Error, Result};
use crate::linalg::{conjugate_gradient, StencilMatrix};

use super::config::{FullEquation, Scheme, SolverConfig};

/// Everything a step needs besides the state.
#[derive(Clone, Copy)]
pub struct Problem<'a> {
    pub law: &'a ConstitutiveLaw,
    pub boundary: &'a BoundaryData,
    pub source: Option<&'a SpaceTimeFn>,
}

impl<'a> Problem<'a> {
    pub fn new(law: &'a ConstitutiveLaw, boundary: &'a BoundaryData) -> Self {
        Self {
            law,
            boundary,
            source: None,
        }
    }

    pub fn with_source(mut self, source: &'a SpaceTimeFn) -> Self {
        self.source = Some(source);
        self
    }

    pub fn frame(&self, grid: &Grid, t: f64) -> BoundaryFrame {
        BoundaryFrame::from_data(grid, self.boundary, t)
    }

    fn source_values(&self, grid: &Grid, t: f64) -> Option<Vec<f64>> {
        self.source.map(|f| grid.centers().map(|x| f(x, t)).collect())
    }

    /// Discrete rate `∇_h·(K∇_h p) + f` at the field's time.
    pub fn rate(&self, state: &ScalarField) -> Result<Vec<f64>> {
        let frame = self.frame(state.grid(), state.t());
        let mut rate = apply_operator(state, self.law, &frame)?;
        if let Some(f) = self.source_values(state.grid(), state.t()) {
            rate.iter_mut().zip(f).for_each(|(r, f)| *r += f);
        }
        Ok(rate)
    }
}

#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub field: ScalarField,
    pub picard_iterations: usize,
    pub linear_iterations: usize,
    /// Final relative Picard update (0 for explicit steps).
    pub residual: f64,
    /// `min(p − lo, hi − p)` over cells, where `[lo, hi]` spans the previous
    /// state and the new boundary values, scaled by `max(1, |lo|, |hi|)`.
    pub margin: f64,
}

/// `K|∇p|²/κ` at cells, the explicit full-equation term in rescaled time.
fn quadratic_term(state: &ScalarField, frame: &BoundaryFrame, law: &ConstitutiveLaw, full: &FullEquation) -> Result<Vec<f64>> {
    cell_gradient(state, frame)
        .into_iter()
        .map(|[gx, gy]| {
            let sq = gx * gx + gy * gy;
            Ok(law.coefficient(sq.sqrt().min(XI_CLAMP))? * sq / full.kappa)
        })
        .collect()
}

fn margin(previous: &ScalarField, frame: &BoundaryFrame, next: &[f64]) -> f64 {
    let (blo, bhi) = frame.range();
    let (lo, hi) = previous
        .values()
        .iter()
        .fold((blo, bhi), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let scale = 1.0_f64.max(lo.abs()).max(hi.abs());
    next.iter().fold(f64::INFINITY, |m, &p| m.min(p - lo).min(hi - p)) / scale
}

/// Assemble `(I/Δt + A(K)) u = rhs` with `K` frozen at faces.
fn assemble(grid: &Grid, k: &crate::discretization::FaceField, frame: &BoundaryFrame, dt: f64, rhs: &mut [f64]) -> StencilMatrix {
    let mut a = StencilMatrix::zeros(*grid);
    let (nx, ny) = (grid.nx(), grid.ny());
    let (hx, hy) = (grid.h(0), grid.h(1));
    a.diagonal.iter_mut().for_each(|d| *d = 1.0 / dt);
    let (cx, cy) = (1.0 / (hx * hx), 1.0 / (hy * hy));
    for j in 0..ny {
        for i in 0..=nx {
            let f = grid.x_face(i, j);
            let w = k.x[f] * cx;
            if i == 0 {
                let c = grid.index(0, j);
                a.diagonal[c] += 2.0 * w;
                rhs[c] += 2.0 * w * frame.west[j];
            } else if i == nx {
                let c = grid.index(nx - 1, j);
                a.diagonal[c] += 2.0 * w;
                rhs[c] += 2.0 * w * frame.east[j];
            } else {
                a.coupling_x[f] = w;
                a.diagonal[grid.index(i - 1, j)] += w;
                a.diagonal[grid.index(i, j)] += w;
            }
        }
    }
    if grid.dim() == 2 {
        for j in 0..=ny {
            for i in 0..nx {
                let f = grid.y_face(i, j);
                let w = k.y[f] * cy;
                if j == 0 {
                    let c = grid.index(i, 0);
                    a.diagonal[c] += 2.0 * w;
                    rhs[c] += 2.0 * w * frame.south[i];
                } else if j == ny {
                    let c = grid.index(i, ny - 1);
                    a.diagonal[c] += 2.0 * w;
                    rhs[c] += 2.0 * w * frame.north[i];
                } else {
                    a.coupling_y[f] = w;
                    a.diagonal[grid.index(i, j - 1)] += w;
                    a.diagonal[grid.index(i, j)] += w;
                }
            }
        }
    }
    a
}

/// One backward-Euler step, nonlinearity resolved by Picard iteration with
/// `K` frozen at the previous iterate.
pub fn step_implicit_with(problem: &Problem<'_>, state: &ScalarField, dt: f64, config: &SolverConfig) -> Result<StepOutcome> {
    let grid = *state.grid();
    let t_new = state.t() + dt;
    let frame = problem.frame(&grid, t_new);
    let mut base: Vec<f64> = state.values().iter().map(|p| p / dt).collect();
    if let Some(f) = problem.source_values(&grid, t_new) {
        base.iter_mut().zip(f).for_each(|(b, f)| *b += f);
    }
    if let Some(full) = &config.full_equation {
        let old_frame = problem.frame(&grid, state.t());
        base.iter_mut()
            .zip(quadratic_term(state, &old_frame, problem.law, full)?)
            .for_each(|(b, q)| *b += q);
    }
    let max_cg = 10 * grid.len() + 100;
    let mut iterate = state.values().to_vec();
    let mut linear_iterations = 0;
    let mut update = f64::INFINITY;
    for it in 1..=config.picard_max_iterations {
        let current = ScalarField::new(grid, iterate.clone(), t_new)?;
        let k = face_coefficients(&gradient(&current, &frame), problem.law)?;
        let mut rhs = base.clone();
        let a = assemble(&grid, &k, &frame, dt, &mut rhs);
        let mut next = iterate.clone();
        linear_iterations += conjugate_gradient(&a, &rhs, &mut next, config.linear_tolerance, max_cg)?.iterations;
        let norm = next.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
        update = next.iter().zip(&iterate).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs())) / norm;
        iterate = next;
        if update < config.picard_tolerance {
            let margin = margin(state, &frame, &iterate);
            return Ok(StepOutcome {
                field: ScalarField::new(grid, iterate, t_new)?,
                picard_iterations: it,
                linear_iterations,
                residual: update,
                margin,
            });
        }
    }
    Err(Error::PicardNotConverged {
        t: t_new,
        iterations: config.picard_max_iterations,
        residual: update,
    })
}

/// One forward-Euler step with fluxes at the old time.
pub fn step_explicit_with(problem: &Problem<'_>, state: &ScalarField, dt: f64, config: &SolverConfig) -> Result<StepOutcome> {
    let grid = *state.grid();
    let limit = super::config::cfl_limit(&grid, problem.law);
    if dt > limit * (1.0 + 1e-12) {
        return Err(Error::Config(format!("explicit dt = {dt} exceeds the stability limit {limit:e}")));
    }
    let mut rate = problem.rate(state)?;
    if let Some(full) = &config.full_equation {
        let frame = problem.frame(&grid, state.t());
        rate.iter_mut()
            .zip(quadratic_term(state, &frame, problem.law, full)?)
            .for_each(|(r, q)| *r += q);
    }
    let next: Vec<f64> = state.values().iter().zip(&rate).map(|(p, r)| p + dt * r).collect();
    let t_new = state.t() + dt;
    let frame = problem.frame(&grid, t_new);
    let margin = margin(state, &frame, &next);
    Ok(StepOutcome {
        field: ScalarField::new(grid, next, t_new).map_err(|e| Error::Numerical(format!("explicit step: {e}")))?,
        picard_iterations: 0,
        linear_iterations: 0,
        residual: 0.0,
        margin,
    })
}

pub fn step_with(problem: &Problem<'_>, state: &ScalarField, dt: f64, config: &SolverConfig) -> Result<StepOutcome> {
    match config.scheme {
        Scheme::ImplicitPicard => step_implicit_with(problem, state, dt, config),
        Scheme::Explicit => step_explicit_with(problem, state, dt, config),
    }
}

/// Implicit step of the reduced equation with default tolerances and no source.
pub fn step_implicit(state: &ScalarField, law: &ConstitutiveLaw, boundary: &BoundaryData, dt: f64) -> Result<ScalarField> {
    let config = SolverConfig::implicit(dt, dt);
    Ok(step_implicit_with(&Problem::new(law, boundary), state, dt, &config)?.field)
}

/// Explicit step of the reduced equation; rejects steps above the stability limit.
pub fn step_explicit(state: &ScalarField, law: &ConstitutiveLaw, boundary: &BoundaryData, dt: f64) -> Result<ScalarField> {
    let config = SolverConfig::explicit(dt, dt);
    Ok(step_explicit_with(&Problem::new(law, boundary), state, dt, &config)?.field)
}
