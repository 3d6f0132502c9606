use crate::error::{Error, Result};

/// `α_* = a n / (2 − a)`.
pub fn alpha_star(a: f64, n: usize) -> f64 {
    a * n as f64 / (2.0 - a)
}

/// `r₀ = n(2−a) / ((2−a)(n+1) − n)`.
pub fn r0(a: f64, n: usize) -> f64 {
    let n = n as f64;
    n * (2.0 - a) / ((2.0 - a) * (n + 1.0) - n)
}

/// `μ₀ = 2 / (2 − a)`.
pub fn mu0(a: f64) -> f64 {
    2.0 / (2.0 - a)
}

/// Sobolev conjugate `r* = n r / (n − r)`, taken as `+∞` when `r ≥ n`.
pub fn sobolev_star(r: f64, n: usize) -> f64 {
    let n = n as f64;
    if r >= n {
        f64::INFINITY
    } else {
        n * r / (n - r)
    }
}

/// `ϱ(r) = 4(1 − 1/r*)`.
pub fn rho(r: f64, n: usize) -> f64 {
    4.0 * (1.0 - 1.0 / sobolev_star(r, n))
}

/// `s̃`: `max{(s+a)/2, s/(2−a) − 1}` for `2−a ≤ s ≤ 3(2−a)`, else `s/(2−a)`.
pub fn s_tilde(s: f64, a: f64) -> f64 {
    if s >= 2.0 - a && s <= 3.0 * (2.0 - a) {
        ((s + a) / 2.0).max(s / (2.0 - a) - 1.0)
    } else {
        s / (2.0 - a)
    }
}

/// Every derived exponent for given `(a, n, α, p₁, s₀)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentBundle {
    pub a: f64,
    pub n: usize,
    pub alpha: f64,
    pub p1: f64,
    pub s0: f64,

    pub alpha_star: f64,
    pub alpha_hat: f64,
    pub r0: f64,
    pub r1: f64,
    /// Conjugate of `p₁`; infinite when `p₁ = 1`.
    pub q1: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub delta3: f64,
    pub delta4: f64,
    pub z1: f64,
    pub z2: f64,
    pub z3: f64,
    pub mu0: f64,
    pub s0_star: f64,
    pub s1: f64,
    pub s2: f64,
    pub s2_tilde: f64,
    pub s3: f64,
    pub nu0: f64,
    pub nu1: f64,
    /// `ϱ(s₀)`.
    pub rho: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub kappa3: f64,
    pub kappa4: f64,
    pub kappa5: f64,
    pub kappa6: f64,
}

fn inadmissible(msg: String) -> Error {
    Error::Domain(format!("inadmissible exponents: {msg}"))
}

pub fn exponent_bundle(a: f64, n: usize, alpha: f64, p1: f64, s0: f64) -> Result<ExponentBundle> {
    if !(a > 0.0 && a < 1.0) {
        return Err(inadmissible(format!("a = {a} must lie in (0, 1)")));
    }
    if n == 0 {
        return Err(inadmissible("dimension n must be at least 1".into()));
    }
    let nf = n as f64;
    let alpha_star = alpha_star(a, n);
    if !(alpha >= 2.0) || !(alpha > alpha_star) {
        return Err(inadmissible(format!(
            "need alpha >= 2 and alpha > alpha_* = {alpha_star}, got alpha = {alpha}"
        )));
    }
    let s0_lo = 2.0 * nf / (nf + 2.0);
    if !(s0 > s0_lo && s0 < 2.0) {
        return Err(inadmissible(format!("need {s0_lo} < s0 < 2, got s0 = {s0}")));
    }
    let r1 = alpha * (1.0 + (2.0 - a) / nf) - a;
    if !(p1 >= 1.0 && p1 < r1 / alpha) {
        return Err(inadmissible(format!("need 1 <= p1 < r1/alpha = {}, got p1 = {p1}", r1 / alpha)));
    }
    let q1 = if p1 == 1.0 { f64::INFINITY } else { p1 / (p1 - 1.0) };
    let delta1 = 1.0 - alpha / r1;
    let delta2 = alpha / (alpha - a) - alpha / r1;
    let delta3 = 1.0 / p1 - alpha / r1;
    let delta4 = alpha / ((alpha - a) * p1) - alpha / r1;
    let z1 = (alpha - 1.0) / ((alpha - a) * (1.0 + delta4));
    let z2 = alpha / ((alpha - a) * (1.0 + delta4));
    let z3 = 1.0_f64.max(delta2 / (1.0 + delta3));
    let mu0 = mu0(a);
    let s0_star = sobolev_star(s0, n);
    let s1 = 1.0 / (1.0 - 2.0 / s0_star);
    let nu0 = 4.0 * (1.0 - 1.0 / s0_star);
    let s2 = 2.0_f64.max(a * s0 / (2.0 - s0)) + 1.0;
    let s2_tilde = s_tilde(s2, a);
    let s3 = s1 * (2.0 - s0) / s0 + 1.0;
    let kappa1 = (2.0 * mu0).max(1.0 + 2.0 / delta1);
    let kappa2 = 1.0 + s1 + s2_tilde * kappa1 * s3;
    let kappa3 = s2_tilde * z3 + alpha / 2.0;
    let kappa4 = 1.0 + s1 + s2_tilde * kappa1 * (s3 - 1.0);
    let kappa5 = (s2_tilde * z3 + 1.0) * (s3 - 1.0) + 1.0;
    let kappa6 = kappa3 * (s3 - 1.0) + alpha / 2.0;
    Ok(ExponentBundle {
        a,
        n,
        alpha,
        p1,
        s0,
        alpha_star,
        alpha_hat: alpha.max(2.0).max(alpha_star),
        r0: r0(a, n),
        r1,
        q1,
        delta1,
        delta2,
        delta3,
        delta4,
        z1,
        z2,
        z3,
        mu0,
        s0_star,
        s1,
        s2,
        s2_tilde,
        s3,
        nu0,
        nu1: s3 - 1.0,
        rho: rho(s0, n),
        kappa1,
        kappa2,
        kappa3,
        kappa4,
        kappa5,
        kappa6,
    })
}

impl ExponentBundle {
    pub fn s_tilde(&self, s: f64) -> f64 {
        s_tilde(s, self.a)
    }

    /// `α q₁`, the Lebesgue exponent of the data norms.
    pub fn alpha_q1(&self) -> f64 {
        self.alpha * self.q1
    }

    /// Residuals of the three additive identities linking `δ₁…δ₄`.
    pub fn identity_residuals(&self) -> [f64; 3] {
        let (al, a, p1) = (self.alpha, self.a, self.p1);
        [
            (1.0 / p1 + self.delta1 - (1.0 + self.delta3)).abs(),
            (al / (al - a) + self.delta1 - (1.0 + self.delta2)).abs(),
            (al / ((al - a) * p1) + self.delta1 - (1.0 + self.delta4)).abs(),
        ]
    }

    /// `δ₂ > δ₁ ≥ δ₃` and `δ₂ ≥ δ₄ > δ₃`.
    pub fn delta_ordering_holds(&self) -> bool {
        self.delta2 > self.delta1
            && self.delta1 >= self.delta3
            && self.delta2 >= self.delta4
            && self.delta4 > self.delta3
    }
}
