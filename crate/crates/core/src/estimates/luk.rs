use crate::constitutive::ConstitutiveLaw;
use crate::discretization::{boundary_gradient_magnitudes, cell_gradient, cell_hessian, BoundaryFrame, ScalarField};
use crate::error::{Error, Result};
use crate::functionals::integral;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LukOutcome {
    /// `∫ K(|∇w|) v^{s+1}`.
    pub lhs: f64,
    /// `max|w−k|² ∫ K|∇²w|² v^{s−1} + M⁴ ∫ K v^{s−1}`.
    pub rhs: f64,
}

impl LukOutcome {
    /// `lhs / rhs`, zero when `v ≡ 0`.
    pub fn ratio(&self) -> f64 {
        if self.lhs == 0.0 {
            0.0
        } else {
            self.lhs / self.rhs
        }
    }
}

/// Both sides of the gradient-truncation inequality for `w`, with
/// `v = max{|∇w|² − M², 0}`. Requires `|∇w| ≤ M` on the boundary.
pub fn check_luk(
    w: &ScalarField,
    frame: &BoundaryFrame,
    law: &ConstitutiveLaw,
    m: f64,
    s: f64,
    k: f64,
) -> Result<LukOutcome> {
    if !(s >= 1.0) {
        return Err(Error::Domain(format!("s must be at least 1, got {s}")));
    }
    if !(m >= 0.0) {
        return Err(Error::Domain(format!("M must be nonnegative, got {m}")));
    }
    let bdry = boundary_gradient_magnitudes(w, frame).into_iter().fold(0.0, f64::max);
    if bdry > m * (1.0 + 1e-12) + 1e-14 {
        return Err(Error::Precondition(format!(
            "boundary gradient {bdry:e} exceeds M = {m:e}"
        )));
    }
    let grid = w.grid();
    let grads = cell_gradient(w, frame);
    let hess = cell_hessian(w, frame);
    let mut lhs = Vec::with_capacity(grid.len());
    let mut hess_term = Vec::with_capacity(grid.len());
    let mut m_term = Vec::with_capacity(grid.len());
    for (g, h) in grads.iter().zip(&hess) {
        let sq = g[0] * g[0] + g[1] * g[1];
        let kk = law.eval_K(sq.sqrt())?;
        let v = (sq - m * m).max(0.0);
        let h2 = h[0] * h[0] + 2.0 * h[1] * h[1] + h[2] * h[2];
        let vs1 = v.powf(s - 1.0);
        lhs.push(kk * v.powf(s + 1.0));
        hess_term.push(kk * h2 * vs1);
        m_term.push(kk * vs1);
    }
    let spread = w.values().iter().fold(0.0_f64, |acc, v| acc.max((v - k).abs()));
    Ok(LukOutcome {
        lhs: integral(grid, &lhs),
        rhs: spread * spread * integral(grid, &hess_term) + m.powi(4) * integral(grid, &m_term),
    })
}
