use std::ops::Range;

use crate::error::{Error, Result};

/// Named time series sharing one strictly increasing time axis.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalSeries {
    columns: Vec<String>,
    times: Vec<f64>,
    data: Vec<Vec<f64>>,
}

/// Relative slack when matching window endpoints to sample times.
const TIME_SLACK: f64 = 1e-9;

impl FunctionalSeries {
    pub fn new(columns: Vec<String>) -> Self {
        let data = vec![Vec::new(); columns.len()];
        Self {
            columns,
            times: Vec::new(),
            data,
        }
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn has(&self, name: &str) -> bool {
        self.columns.iter().any(|c| c == name)
    }

    pub fn push(&mut self, t: f64, row: &[f64]) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::invariant(
                "functional series",
                format!("row has {} values for {} columns", row.len(), self.columns.len()),
            ));
        }
        if let Some(&last) = self.times.last() {
            if !(t > last) {
                return Err(Error::invariant(
                    "functional series",
                    format!("time stamps must increase strictly ({t} after {last})"),
                ));
            }
        }
        self.times.push(t);
        for (col, v) in self.data.iter_mut().zip(row) {
            col.push(*v);
        }
        Ok(())
    }

    pub fn column(&self, name: &str) -> Result<&[f64]> {
        self.columns
            .iter()
            .position(|c| c == name)
            .map(|k| self.data[k].as_slice())
            .ok_or_else(|| Error::MissingFunctional(name.to_string()))
    }

    pub fn row(&self, k: usize) -> Vec<f64> {
        self.data.iter().map(|c| c[k]).collect()
    }

    /// Index range of samples with `lo ≤ t ≤ hi` (up to a small slack).
    pub fn window(&self, lo: f64, hi: f64) -> Range<usize> {
        let slack = TIME_SLACK * hi.abs().max(1.0);
        let start = self.times.partition_point(|&t| t < lo - slack);
        let end = self.times.partition_point(|&t| t <= hi + slack);
        start..end.max(start)
    }

    /// `sup` of a column over `[lo, hi]`.
    pub fn sup(&self, name: &str, lo: f64, hi: f64) -> Result<f64> {
        let col = self.column(name)?;
        let w = self.window(lo, hi);
        if w.is_empty() {
            return Err(Error::Precondition(format!("no samples of `{name}` in [{lo}, {hi}]")));
        }
        Ok(col[w].iter().cloned().fold(f64::NEG_INFINITY, f64::max))
    }

    /// Trapezoidal `∫_lo^hi f(column) dt` over the samples in the window.
    pub fn integrate_with(&self, name: &str, lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> Result<f64> {
        let col = self.column(name)?;
        let w = self.window(lo, hi);
        if w.len() < 2 {
            return Ok(0.0);
        }
        let mut sum = 0.0;
        for k in w.start + 1..w.end {
            sum += 0.5 * (self.times[k] - self.times[k - 1]) * (f(col[k]) + f(col[k - 1]));
        }
        Ok(sum)
    }

    pub fn integrate(&self, name: &str, lo: f64, hi: f64) -> Result<f64> {
        self.integrate_with(name, lo, hi, |v| v)
    }

    /// Right-endpoint rule `Σ (t_k − t_{k−1}) f(v_k)` over the window, the
    /// quadrature matching backward-Euler rates.
    pub fn integrate_right(&self, name: &str, lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> Result<f64> {
        let col = self.column(name)?;
        let w = self.window(lo, hi);
        Ok((w.start + 1..w.end).map(|k| (self.times[k] - self.times[k - 1]) * f(col[k])).sum())
    }

    /// `sup` over `[lo, hi]` of `f` applied to the named columns row by row.
    pub fn sup_combined(&self, names: &[&str], lo: f64, hi: f64, f: impl Fn(&[f64]) -> f64) -> Result<f64> {
        let cols: Vec<&[f64]> = names.iter().map(|n| self.column(n)).collect::<Result<_>>()?;
        let w = self.window(lo, hi);
        if w.is_empty() {
            return Err(Error::Precondition(format!("no samples in [{lo}, {hi}]")));
        }
        let mut buf = vec![0.0; cols.len()];
        let mut best = f64::NEG_INFINITY;
        for k in w {
            for (b, c) in buf.iter_mut().zip(&cols) {
                *b = c[k];
            }
            best = best.max(f(&buf));
        }
        Ok(best)
    }

    /// Sample value at the time closest to `t`.
    pub fn value_at(&self, name: &str, t: f64) -> Result<f64> {
        let col = self.column(name)?;
        if self.times.is_empty() {
            return Err(Error::Precondition("empty series".into()));
        }
        let k = self.times.partition_point(|&s| s < t);
        let k = if k == self.times.len() {
            k - 1
        } else if k > 0 && (t - self.times[k - 1]) < (self.times[k] - t) {
            k - 1
        } else {
            k
        };
        Ok(col[k])
    }
}

/// Smallest nondecreasing majorant on samples (the running maximum).
pub fn env(values: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    let mut m = f64::NEG_INFINITY;
    for &v in values {
        m = m.max(v);
        out.push(m);
    }
    out
}

/// Finite-horizon surrogate of `limsup [A']⁻`: the largest
/// `max(−ΔA/Δt, 0)` over consecutive samples with `t ≥ tail_start`.
pub fn compute_beta(times: &[f64], values: &[f64], tail_start: f64) -> Result<f64> {
    let start = times.partition_point(|&t| t < tail_start);
    if times.len() - start < 3 {
        return Err(Error::Precondition(format!(
            "beta needs at least 3 samples in the tail window, got {}",
            times.len() - start
        )));
    }
    let mut beta: f64 = 0.0;
    for k in start + 1..times.len() {
        let rate = -(values[k] - values[k - 1]) / (times[k] - times[k - 1]);
        beta = beta.max(rate);
    }
    Ok(beta)
}

/// Smoothness diagnostic for `compute_beta`: the largest jump between
/// consecutive finite-difference slopes over `t ≥ tail_start`, relative to
/// `max(1, max |slope|)`. Small values are consistent with a `C¹` signal.
pub fn slope_jump(times: &[f64], values: &[f64], tail_start: f64) -> Result<f64> {
    let start = times.partition_point(|&t| t < tail_start);
    if times.len() - start < 3 {
        return Err(Error::Precondition(format!(
            "slope diagnostic needs at least 3 samples in the tail window, got {}",
            times.len() - start
        )));
    }
    let slopes: Vec<f64> = (start + 1..times.len())
        .map(|k| (values[k] - values[k - 1]) / (times[k] - times[k - 1]))
        .collect();
    let scale = slopes.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    Ok(slopes.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max) / scale)
}

/// Tail window `[t_end − fraction·t_end, t_end]`.
pub fn tail_window(t_end: f64, fraction: f64) -> (f64, f64) {
    (t_end * (1.0 - fraction), t_end)
}
