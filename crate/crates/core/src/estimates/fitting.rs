/// One evaluation of an inequality `L ≤ F + C·P·exp(C′Q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeSample {
    /// Index of the run inside its family.
    pub run: usize,
    /// Window or time the sample was taken at.
    pub probe: String,
    pub lhs: f64,
    /// Constant-free part of the right-hand side.
    pub fixed: f64,
    /// Factor multiplying `C`.
    pub factor: f64,
    /// Argument of the exponential, for shapes that have one.
    pub exponent: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FittedConstants {
    pub c: f64,
    pub c_prime: Option<f64>,
}

impl FittedConstants {
    /// `F + C·P·exp(C′Q)`, evaluated in log space.
    pub fn rhs(&self, s: &ShapeSample) -> f64 {
        if self.c == 0.0 || s.factor == 0.0 {
            return s.fixed;
        }
        let q = match (self.c_prime, s.exponent) {
            (Some(cp), Some(q)) => cp * q,
            _ => 0.0,
        };
        s.fixed + (self.c.ln() + s.factor.ln() + q).exp()
    }

    pub fn ratio(&self, s: &ShapeSample) -> f64 {
        let rhs = self.rhs(s);
        if s.lhs == 0.0 {
            0.0
        } else {
            s.lhs / rhs
        }
    }
}

/// Minimal constants covering every sample.
///
/// Without an exponential, `C = max (L−F)/P`. With one, `C′ ≥ 0` minimizes
/// the summed log right-hand side `Σ_i (ln C(C′) + C′Q_i)` where
/// `ln C(C′) = max_i (b_i − C′Q_i)` and `b_i = ln((L_i−F_i)/P_i)`; the
/// objective is piecewise linear and convex, so its minimum sits at `C′ = 0`
/// or at a pairwise breakpoint. Samples with `L ≤ F` need no constant.
pub fn fit_constants(samples: &[ShapeSample]) -> FittedConstants {
    let has_exp = samples.iter().any(|s| s.exponent.is_some());
    let mut active: Vec<(f64, f64)> = samples
        .iter()
        .filter(|s| s.lhs > s.fixed && s.factor > 0.0)
        .map(|s| (((s.lhs - s.fixed) / s.factor).ln(), s.exponent.unwrap_or(0.0)))
        .collect();
    if active.is_empty() {
        return FittedConstants {
            c: 0.0,
            c_prime: has_exp.then_some(0.0),
        };
    }
    if !has_exp {
        let b = active.iter().map(|(b, _)| *b).fold(f64::NEG_INFINITY, f64::max);
        return FittedConstants {
            c: b.exp(),
            c_prime: None,
        };
    }
    // Canonical order makes the sums independent of the input order.
    active.sort_by(|x, y| x.1.total_cmp(&y.1).then(x.0.total_cmp(&y.0)));
    let n = active.len() as f64;
    let q_sum: f64 = active.iter().map(|(_, q)| q).sum();
    let log_c = |cp: f64| active.iter().map(|(b, q)| b - cp * q).fold(f64::NEG_INFINITY, f64::max);
    let objective = |cp: f64| n * log_c(cp) + cp * q_sum;
    let mut candidates = vec![0.0];
    for (i, (bi, qi)) in active.iter().enumerate() {
        for (bj, qj) in &active[i + 1..] {
            if qi != qj {
                let cp = (bi - bj) / (qi - qj);
                if cp > 0.0 && cp.is_finite() {
                    candidates.push(cp);
                }
            }
        }
    }
    candidates.sort_by(f64::total_cmp);
    let mut best = (objective(0.0), 0.0);
    for &cp in &candidates {
        let v = objective(cp);
        if v < best.0 - 1e-12 * best.0.abs().max(1.0) {
            best = (v, cp);
        }
    }
    FittedConstants {
        c: log_c(best.1).exp(),
        c_prime: Some(best.1),
    }
}
