use crate::discretization::{BoundaryData, Derivative, Grid};
use crate::error::{Error, Result};

use super::exponents::r0;
use super::norms::{integral, lp_values};

/// `Ψ` and whichever derivatives are registered, sampled at cell centers.
#[derive(Debug, Clone)]
pub struct DataSamples {
    pub t: f64,
    pub psi: Vec<f64>,
    pub psi_t: Option<Vec<f64>>,
    pub grad: Option<Vec<[f64; 2]>>,
    pub hessian: Option<Vec<[f64; 3]>>,
    pub grad_t: Option<Vec<[f64; 2]>>,
}

fn needs(dim: usize, list: &[Derivative], data: &BoundaryData) -> bool {
    list.iter().all(|d| (dim == 1 && d.involves_y()) || data.has(*d))
}

impl DataSamples {
    pub fn sample(grid: &Grid, data: &BoundaryData, t: f64) -> Self {
        let dim = grid.dim();
        let centers: Vec<[f64; 2]> = grid.centers().collect();
        let psi = centers.iter().map(|&x| data.psi(x, t)).collect();
        let psi_t = data
            .has(Derivative::T)
            .then(|| centers.iter().map(|&x| data.eval(Derivative::T, x, t).unwrap()).collect());
        let grad = needs(dim, &[Derivative::X, Derivative::Y], data)
            .then(|| centers.iter().map(|&x| data.gradient(dim, x, t).unwrap()).collect());
        let hessian = needs(dim, &[Derivative::XX, Derivative::XY, Derivative::YY], data)
            .then(|| centers.iter().map(|&x| data.hessian(dim, x, t).unwrap()).collect());
        let grad_t = needs(dim, &[Derivative::XT, Derivative::YT], data)
            .then(|| centers.iter().map(|&x| data.gradient_t(dim, x, t).unwrap()).collect());
        Self {
            t,
            psi,
            psi_t,
            grad,
            hessian,
            grad_t,
        }
    }

    pub fn psi_t(&self) -> Result<&[f64]> {
        self.psi_t.as_deref().ok_or_else(|| missing(Derivative::T))
    }

    pub fn grad(&self) -> Result<&[[f64; 2]]> {
        self.grad.as_deref().ok_or_else(|| missing(Derivative::X))
    }

    pub fn hessian(&self) -> Result<&[[f64; 3]]> {
        self.hessian.as_deref().ok_or_else(|| missing(Derivative::XX))
    }

    pub fn grad_t(&self) -> Result<&[[f64; 2]]> {
        self.grad_t.as_deref().ok_or_else(|| missing(Derivative::XT))
    }

    pub fn grad_magnitudes(&self) -> Result<Vec<f64>> {
        Ok(self.grad()?.iter().map(|g| g[0].hypot(g[1])).collect())
    }

    pub fn grad_t_magnitudes(&self) -> Result<Vec<f64>> {
        Ok(self.grad_t()?.iter().map(|g| g[0].hypot(g[1])).collect())
    }

    /// Frobenius norm of the Hessian at each cell.
    pub fn hessian_magnitudes(&self) -> Result<Vec<f64>> {
        Ok(self
            .hessian()?
            .iter()
            .map(|h| (h[0] * h[0] + 2.0 * h[1] * h[1] + h[2] * h[2]).sqrt())
            .collect())
    }
}

fn missing(d: Derivative) -> Error {
    Error::Config(format!("boundary derivative `{}` is not registered", d.name()))
}

fn check_a(a: f64) -> Result<()> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::Domain(format!("degree exponent must lie in (0, 1), got {a}")));
    }
    Ok(())
}

/// `A(α, t) = [∫|∇Ψ|^{α(2−a)/2}]^{2(α−a)/(α(2−a))} + [∫|Ψ_t|^α]^{(α−a)/(α(1−a))}`.
pub fn compute_a_from(grid: &Grid, samples: &DataSamples, a: f64, alpha: f64) -> Result<f64> {
    check_a(a)?;
    if !(alpha >= 1.0) {
        return Err(Error::Domain(format!("A(alpha, t) needs alpha >= 1, got {alpha}")));
    }
    let g = samples.grad_magnitudes()?;
    let q = alpha * (2.0 - a) / 2.0;
    let first = integral(grid, &g.iter().map(|v| v.powf(q)).collect::<Vec<_>>())
        .powf(2.0 * (alpha - a) / (alpha * (2.0 - a)));
    let second = integral(grid, &samples.psi_t()?.iter().map(|v| v.abs().powf(alpha)).collect::<Vec<_>>())
        .powf((alpha - a) / (alpha * (1.0 - a)));
    Ok(first + second)
}

#[allow(non_snake_case)]
pub fn compute_A(boundary: &BoundaryData, grid: &Grid, a: f64, alpha: f64, t: f64) -> Result<f64> {
    compute_a_from(grid, &DataSamples::sample(grid, boundary, t), a, alpha)
}

/// Which of the gradient-estimate data functionals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GFunctional {
    G1,
    G2,
    G3,
}

/// `G₁ = ∫|∇Ψ|² + [∫|Ψ_t|^{r₀}]^{(2−a)/(r₀(1−a))} + [∫|Ψ_t|^{r₀}]^{1/r₀}`,
/// `G₂ = ∫|∇Ψ_t|² + ∫|Ψ_t|²`, `G₃ = G₁ + G₂`.
pub fn compute_g_from(grid: &Grid, samples: &DataSamples, a: f64, which: GFunctional) -> Result<f64> {
    check_a(a)?;
    let g1 = || -> Result<f64> {
        let r = r0(a, grid.dim());
        let grad_sq: Vec<f64> = samples.grad_magnitudes()?.iter().map(|v| v * v).collect();
        let m = integral(grid, &samples.psi_t()?.iter().map(|v| v.abs().powf(r)).collect::<Vec<_>>());
        Ok(integral(grid, &grad_sq) + m.powf((2.0 - a) / (r * (1.0 - a))) + m.powf(1.0 / r))
    };
    let g2 = || -> Result<f64> {
        let gt: Vec<f64> = samples.grad_t_magnitudes()?.iter().map(|v| v * v).collect();
        Ok(integral(grid, &gt) + lp_values(grid, samples.psi_t()?, 2.0).powi(2))
    };
    match which {
        GFunctional::G1 => g1(),
        GFunctional::G2 => g2(),
        GFunctional::G3 => Ok(g1()? + g2()?),
    }
}

#[allow(non_snake_case)]
pub fn compute_G(boundary: &BoundaryData, grid: &Grid, a: f64, t: f64, which: GFunctional) -> Result<f64> {
    compute_g_from(grid, &DataSamples::sample(grid, boundary, t), a, which)
}
