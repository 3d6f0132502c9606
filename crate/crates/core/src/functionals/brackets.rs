use crate::discretization::{cell_gradient, BoundaryFrame, Grid, ScalarField};
use crate::error::{Error, Result};

use super::norms::lp_values;
use super::series::FunctionalSeries;

/// A field sampled on a grid at a set of times, with quadrature weights in
/// time and cell gradients at every sample.
#[derive(Debug, Clone)]
pub struct SpaceTimeSamples {
    pub grid: Grid,
    pub times: Vec<f64>,
    pub weights: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    pub gradients: Vec<Vec<[f64; 2]>>,
}

impl SpaceTimeSamples {
    /// Sample `u` at the midpoints of `slabs` equal slabs of `[0, t_end]`;
    /// boundary values for the gradients come from `u` itself.
    pub fn from_fn(grid: Grid, t_end: f64, slabs: usize, u: impl Fn([f64; 2], f64) -> f64) -> Result<Self> {
        if slabs == 0 || !(t_end > 0.0) {
            return Err(Error::Domain("space-time sampling needs t_end > 0 and at least one slab".into()));
        }
        let dt = t_end / slabs as f64;
        let mut out = Self {
            grid,
            times: Vec::with_capacity(slabs),
            weights: vec![dt; slabs],
            values: Vec::with_capacity(slabs),
            gradients: Vec::with_capacity(slabs),
        };
        for k in 0..slabs {
            let t = (k as f64 + 0.5) * dt;
            let field = ScalarField::from_fn(grid, t, |x| u(x, t))?;
            let frame = BoundaryFrame::sample(&grid, t, &u);
            out.gradients.push(cell_gradient(&field, &frame));
            out.values.push(field.into_values());
            out.times.push(t);
        }
        Ok(out)
    }

    /// Trapezoidal weights over a sequence of fields with matching frames.
    pub fn from_fields(fields: &[ScalarField], frames: &[BoundaryFrame]) -> Result<Self> {
        if fields.len() < 2 || fields.len() != frames.len() {
            return Err(Error::Domain("space-time samples need at least two fields with frames".into()));
        }
        let grid = *fields[0].grid();
        let times: Vec<f64> = fields.iter().map(|f| f.t()).collect();
        let mut weights = vec![0.0; times.len()];
        for k in 1..times.len() {
            let dt = times[k] - times[k - 1];
            if !(dt > 0.0) {
                return Err(Error::Domain("field times must increase".into()));
            }
            weights[k - 1] += 0.5 * dt;
            weights[k] += 0.5 * dt;
        }
        Ok(Self {
            grid,
            gradients: fields.iter().zip(frames).map(|(f, fr)| cell_gradient(f, fr)).collect(),
            values: fields.iter().map(|f| f.values().to_vec()).collect(),
            times,
            weights,
        })
    }

    pub fn duration(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().flatten().for_each(|v| *v *= c);
        out.gradients.iter_mut().flatten().for_each(|g| {
            g[0] *= c;
            g[1] *= c;
        });
        out
    }

    /// `∫∫ f(u, |∇u|) dx dt`.
    pub fn integrate(&self, f: impl Fn(f64, f64) -> f64) -> f64 {
        let vol = self.grid.cell_volume();
        self.values
            .iter()
            .zip(&self.gradients)
            .zip(&self.weights)
            .map(|((u, g), w)| w * vol * u.iter().zip(g).map(|(u, g)| f(*u, g[0].hypot(g[1]))).sum::<f64>())
            .sum()
    }

    /// `‖u‖_{L^p(Q_T)}`.
    pub fn lp(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self.sup_in_time(f64::INFINITY);
        }
        self.integrate(|u, _| u.abs().powf(p)).powf(1.0 / p)
    }

    /// `sup_t ‖u(t)‖_{L^α}`.
    pub fn sup_in_time(&self, alpha: f64) -> f64 {
        self.values.iter().map(|u| lp_values(&self.grid, u, alpha)).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().flatten().all(|v| *v == 0.0)
    }
}

/// `[[u]] = sup_t ‖u‖_{L^α} + (∫∫ |u|^{α−2} |∇u|^{2−a})^{1/(α−a)}`.
pub fn double_bracket(u: &SpaceTimeSamples, alpha: f64, a: f64) -> f64 {
    let integral = u.integrate(|v, g| v.abs().powf(alpha - 2.0) * g.powf(2.0 - a));
    u.sup_in_time(alpha) + integral.powf(1.0 / (alpha - a))
}

/// `[[u]]_{2,W;T} = sup_t ‖u‖_{L²} + (∫∫ W |∇u|²)^{1/2}`, with `W` given per
/// time sample and cell.
pub fn weighted_bracket(u: &SpaceTimeSamples, weight: &[Vec<f64>]) -> f64 {
    let vol = u.grid.cell_volume();
    let integral: f64 = u
        .gradients
        .iter()
        .zip(weight)
        .zip(&u.weights)
        .map(|((g, w), dt)| dt * vol * g.iter().zip(w).map(|(g, w)| w * (g[0] * g[0] + g[1] * g[1])).sum::<f64>())
        .sum();
    u.sup_in_time(2.0) + integral.sqrt()
}

/// `λ = (∫_{lo}^{hi} ∫_U (1+|∇p|)^{a s₀/(2−s₀)})^{(2−s₀)/s₀}` from the
/// per-time spatial integrals stored in the `lambda` column.
pub fn lambda_quantity(series: &FunctionalSeries, lo: f64, hi: f64, s0: f64) -> Result<f64> {
    Ok(series.integrate("lambda", lo, hi)?.powf((2.0 - s0) / s0))
}

/// `(d₀, 𝒟)` over `[lo, hi]`: `N₀ = sup ‖p‖_∞`, `M_b = sup ‖∇p‖_{L^∞(Γ)}`,
/// `d₀ = N₀⁴ (θT)⁻² + M_b⁴`, `𝒟 = (θT)⁻¹ N₀² + M_b²`.
#[allow(non_snake_case)]
pub fn d0_and_D(series: &FunctionalSeries, lo: f64, hi: f64, theta_t: f64) -> Result<(f64, f64)> {
    if !(theta_t > 0.0) {
        return Err(Error::Domain(format!("theta*T must be positive, got {theta_t}")));
    }
    let n0 = series.sup("sup_p", lo, hi)?;
    let mb = series.sup("bdry_grad_sup", lo, hi)?;
    Ok((n0.powi(4) / (theta_t * theta_t) + mb.powi(4), n0 * n0 / theta_t + mb * mb))
}
