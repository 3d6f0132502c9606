use crate::error::{Error, Result};

use super::ConstitutiveLaw;

const INITIAL_INTERVALS: usize = 64;
const MIN_WIDTH: f64 = 1e-12;
const MAX_INTERVALS: usize = 1 << 20;

/// Piecewise cubic Hermite table of `s(ξ)` in the coordinate `y = log(1+ξ)`.
///
/// Intervals are bisected until the relative error measured at interior
/// check points is below the target. Intervals near `ξ = 0` that cannot be
/// certified (fractional `α_1` makes `s` non-smooth there) are dropped and
/// evaluation below `lower_limit` falls back to the direct root solve.
#[derive(Debug, Clone)]
pub struct LookupTable {
    ys: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
    certified_error: f64,
}

impl LookupTable {
    pub fn build(law: &ConstitutiveLaw, xi_max: f64, target_error: f64) -> Result<Self> {
        if !(xi_max > 0.0) || !xi_max.is_finite() {
            return Err(Error::Domain(format!("table range must be positive, got {xi_max}")));
        }
        if !(target_error > 0.0) {
            return Err(Error::Domain("table target error must be positive".into()));
        }
        let node = |y: f64| -> Result<(f64, f64)> {
            let xi = y.exp_m1();
            let s = law.solve_s(xi)?;
            let poly = law.poly();
            let slope = (1.0 + xi) / (poly.eval_unchecked(s) + s * poly.derivative_unchecked(s));
            Ok((s, slope))
        };
        let y_max = xi_max.ln_1p();
        // Work list of intervals left-to-right: (y0, s0, m0, y1, s1, m1).
        let mut pending: Vec<[f64; 6]> = Vec::new();
        let mut prev = (0.0, node(0.0)?);
        for k in 1..=INITIAL_INTERVALS {
            let y = y_max * k as f64 / INITIAL_INTERVALS as f64;
            let cur = (y, node(y)?);
            pending.push([prev.0, prev.1 .0, prev.1 .1, cur.0, cur.1 .0, cur.1 .1]);
            prev = cur;
        }
        pending.reverse();

        let mut accepted: Vec<([f64; 6], f64)> = Vec::new();
        let mut cutoff: Option<f64> = None;
        while let Some(iv) = pending.pop() {
            let err = interval_error(law, &iv)?;
            if err <= target_error {
                accepted.push((iv, err));
                continue;
            }
            if iv[3] - iv[0] < MIN_WIDTH {
                cutoff = Some(cutoff.map_or(iv[3], |c: f64| c.max(iv[3])));
                continue;
            }
            if accepted.len() + pending.len() > MAX_INTERVALS {
                return Err(Error::Numerical(
                    "lookup table refinement exceeded its interval budget".into(),
                ));
            }
            let ym = 0.5 * (iv[0] + iv[3]);
            let (sm, mm) = node(ym)?;
            pending.push([ym, sm, mm, iv[3], iv[4], iv[5]]);
            pending.push([iv[0], iv[1], iv[2], ym, sm, mm]);
        }
        if let Some(c) = cutoff {
            accepted.retain(|(iv, _)| iv[0] >= c);
        }
        if accepted.is_empty() {
            return Err(Error::Numerical("no table interval could be certified".into()));
        }
        let mut ys = vec![accepted[0].0[0]];
        let mut values = vec![accepted[0].0[1]];
        let mut slopes = vec![accepted[0].0[2]];
        let mut certified_error: f64 = 0.0;
        for (iv, err) in &accepted {
            ys.push(iv[3]);
            values.push(iv[4]);
            slopes.push(iv[5]);
            certified_error = certified_error.max(*err);
        }
        Ok(Self {
            ys,
            values,
            slopes,
            certified_error,
        })
    }

    pub fn certified_error(&self) -> f64 {
        self.certified_error
    }

    pub fn len(&self) -> usize {
        self.ys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ys.is_empty()
    }

    /// Covered `ξ` range.
    pub fn range(&self) -> (f64, f64) {
        (self.ys[0].exp_m1(), self.ys[self.ys.len() - 1].exp_m1())
    }

    pub fn interpolate(&self, xi: f64) -> Option<f64> {
        if !(xi >= 0.0) {
            return None;
        }
        let y = xi.ln_1p();
        let last = self.ys.len() - 1;
        if y < self.ys[0] || y > self.ys[last] {
            return None;
        }
        let k = self.ys.partition_point(|&v| v <= y).clamp(1, last);
        Some(hermite(
            self.ys[k - 1],
            self.values[k - 1],
            self.slopes[k - 1],
            self.ys[k],
            self.values[k],
            self.slopes[k],
            y,
        ))
    }
}

fn hermite(y0: f64, s0: f64, m0: f64, y1: f64, s1: f64, m1: f64, y: f64) -> f64 {
    let h = y1 - y0;
    let t = (y - y0) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + t;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    h00 * s0 + h10 * h * m0 + h01 * s1 + h11 * h * m1
}

fn interval_error(law: &ConstitutiveLaw, iv: &[f64; 6]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for frac in [0.2, 0.5, 0.8] {
        let y = iv[0] + frac * (iv[3] - iv[0]);
        let exact = law.solve_s(y.exp_m1())?;
        if exact == 0.0 {
            continue;
        }
        let approx = hermite(iv[0], iv[1], iv[2], iv[3], iv[4], iv[5], y);
        worst = worst.max(((approx - exact) / exact).abs());
    }
    Ok(worst)
}
