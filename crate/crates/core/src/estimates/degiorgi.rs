use rand::Rng;

use crate::error::{Error, Result};

/// Fast-decay recurrence `Y_{i+1} = Σ_k A_k B^i Y_i^{1+μ_k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceSpec {
    pub a: Vec<f64>,
    pub mu: Vec<f64>,
    pub b: f64,
    pub y0: f64,
    pub max_iter: usize,
}

/// Level below which a sequence counts as converged.
pub const CONVERGED_BELOW: f64 = 1e-12;

impl RecurrenceSpec {
    pub fn new(a: Vec<f64>, mu: Vec<f64>, b: f64, y0: f64, max_iter: usize) -> Result<Self> {
        let spec = Self { a, mu, b, y0, max_iter };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.a.is_empty() || self.a.len() != self.mu.len() {
            return Err(Error::Domain("recurrence needs matching, nonempty A and mu lists".into()));
        }
        if self.a.iter().chain(&self.mu).any(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(Error::Domain("recurrence coefficients A_k and mu_k must be positive".into()));
        }
        if !(self.b > 1.0) || !self.b.is_finite() {
            return Err(Error::Domain(format!("recurrence base B must exceed 1, got {}", self.b)));
        }
        if !(self.y0 >= 0.0) || !self.y0.is_finite() {
            return Err(Error::Domain(format!("Y0 must be finite and nonnegative, got {}", self.y0)));
        }
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.a.len()
    }

    /// `min_k (m⁻¹ A_k⁻¹ B^{−1/μ})^{1/μ_k}` with `μ = min_k μ_k`.
    pub fn threshold(&self) -> f64 {
        let m = self.m() as f64;
        let mu = self.mu.iter().cloned().fold(f64::INFINITY, f64::min);
        self.a
            .iter()
            .zip(&self.mu)
            .map(|(a, mk)| (1.0 / (m * a) * self.b.powf(-1.0 / mu)).powf(1.0 / mk))
            .fold(f64::INFINITY, f64::min)
    }

    /// Random spec with `m ∈ 1..=4`, `A_k ∈ [0.1, 10]`, `μ_k ∈ [0.1, 2]`,
    /// `B ∈ [1.5, 8]` and `Y₀ = factor · threshold`.
    pub fn random(rng: &mut impl Rng, factor: f64, max_iter: usize) -> Self {
        let m = rng.gen_range(1..=4);
        let mut spec = Self {
            a: (0..m).map(|_| rng.gen_range(0.1..=10.0)).collect(),
            mu: (0..m).map(|_| rng.gen_range(0.1..=2.0)).collect(),
            b: rng.gen_range(1.5..=8.0),
            y0: 0.0,
            max_iter,
        };
        spec.y0 = factor * spec.threshold();
        spec
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceOutcome {
    /// `Y_0, …, Y_last`.
    pub sequence: Vec<f64>,
    /// Final value below [`CONVERGED_BELOW`].
    pub converged: bool,
    /// First index at which the sequence left the finite range.
    pub diverged_at: Option<usize>,
    pub threshold: f64,
}

impl RecurrenceOutcome {
    /// First index with `Y_i < 1e-12`.
    pub fn iterations_to_converge(&self) -> Option<usize> {
        self.sequence.iter().position(|y| *y < CONVERGED_BELOW)
    }
}

/// Iterate the recurrence for `max_iter` steps, stopping early at exact zero
/// or on overflow.
pub fn degiorgi_sequence(spec: &RecurrenceSpec) -> Result<RecurrenceOutcome> {
    spec.validate()?;
    let mut sequence = Vec::with_capacity(spec.max_iter + 1);
    sequence.push(spec.y0);
    let mut y = spec.y0;
    let mut diverged_at = None;
    for i in 0..spec.max_iter {
        let bi = spec.b.powi(i as i32);
        y = spec.a.iter().zip(&spec.mu).map(|(a, mu)| a * bi * y.powf(1.0 + mu)).sum();
        if !y.is_finite() {
            diverged_at = Some(i + 1);
            break;
        }
        sequence.push(y);
        if y == 0.0 {
            break;
        }
    }
    let last = *sequence.last().unwrap();
    Ok(RecurrenceOutcome {
        converged: diverged_at.is_none() && last < CONVERGED_BELOW,
        diverged_at,
        threshold: spec.threshold(),
        sequence,
    })
}
