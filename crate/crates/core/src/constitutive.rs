//! Forchheimer polynomial and the implicit nonlinear-Darcy coefficient.
//!
//! The momentum law `g(|v|) v = -∇p` is inverted into `v = -K(|∇p|) ∇p`
//! where `K(ξ) = 1 / g(s(ξ))` and `s(ξ) ≥ 0` is the unique root of
//! `s g(s) = ξ`. Everything else in the crate evaluates `K` through
//! [`ConstitutiveLaw`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

mod table;

pub use table::LookupTable;

/// Generalized polynomial `g(s) = Σ a_i s^{α_i}` with `α_0 = 0 < α_1 < … < α_N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForchheimerPolynomial {
    exponents: Vec<f64>,
    coefficients: Vec<f64>,
}

/// `s^e` for `s ≥ 0`, evaluated in log space when `s > 0`.
#[inline]
pub(crate) fn pow_nonneg(s: f64, e: f64) -> f64 {
    if e == 0.0 {
        1.0
    } else if s == 0.0 {
        if e > 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (e * s.ln()).exp()
    }
}

impl ForchheimerPolynomial {
    pub fn new(exponents: Vec<f64>, coefficients: Vec<f64>) -> Result<Self> {
        const WHAT: &str = "Forchheimer polynomial";
        if exponents.len() != coefficients.len() {
            return Err(Error::invariant(
                WHAT,
                format!(
                    "{} exponents but {} coefficients",
                    exponents.len(),
                    coefficients.len()
                ),
            ));
        }
        if exponents.len() < 2 {
            return Err(Error::invariant(
                WHAT,
                "at least two terms are required (N >= 1); for a near-Darcy law add a tiny second coefficient such as 1e-12",
            ));
        }
        if exponents[0] != 0.0 {
            return Err(Error::invariant(WHAT, "the first exponent must be exactly 0"));
        }
        if exponents.iter().chain(&coefficients).any(|v| !v.is_finite()) {
            return Err(Error::invariant(WHAT, "exponents and coefficients must be finite"));
        }
        if let Some(w) = exponents.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::invariant(
                WHAT,
                format!("exponents must be strictly increasing ({} then {})", w[0], w[1]),
            ));
        }
        if let Some(c) = coefficients.iter().find(|&&c| c <= 0.0) {
            return Err(Error::invariant(WHAT, format!("coefficient {c} is not positive")));
        }
        Ok(Self {
            exponents,
            coefficients,
        })
    }

    /// Forchheimer's two-term law `g(s) = a0 + a1 s`.
    pub fn two_term(a0: f64, a1: f64) -> Result<Self> {
        Self::new(vec![0.0, 1.0], vec![a0, a1])
    }

    pub fn exponents(&self) -> &[f64] {
        &self.exponents
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// The constant coefficient `a_0`; `K` maps `[0, ∞)` onto `(0, 1/a_0]`.
    pub fn a0(&self) -> f64 {
        self.coefficients[0]
    }

    pub fn leading(&self) -> (f64, f64) {
        let n = self.exponents.len() - 1;
        (self.exponents[n], self.coefficients[n])
    }

    /// Degree exponent `a = α_N / (1 + α_N)`.
    pub fn degree_exponent(&self) -> f64 {
        let (alpha_n, _) = self.leading();
        alpha_n / (1.0 + alpha_n)
    }

    pub fn eval(&self, s: f64) -> Result<f64> {
        if !(s >= 0.0) || !s.is_finite() {
            return Err(Error::Domain(format!("g(s) requires finite s >= 0, got {s}")));
        }
        Ok(self.eval_unchecked(s))
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, s: f64) -> f64 {
        self.exponents
            .iter()
            .zip(&self.coefficients)
            .map(|(&e, &c)| c * pow_nonneg(s, e))
            .sum()
    }

    /// `g'(s)`; infinite at `s = 0` when `α_1 < 1`.
    pub(crate) fn derivative_unchecked(&self, s: f64) -> f64 {
        self.exponents
            .iter()
            .zip(&self.coefficients)
            .skip(1)
            .map(|(&e, &c)| c * e * pow_nonneg(s, e - 1.0))
            .sum()
    }

    /// `s g(s)` and its derivative `g(s) + s g'(s)`.
    #[inline]
    fn flux_and_slope(&self, s: f64) -> (f64, f64) {
        let mut value = 0.0;
        let mut slope = 0.0;
        for (&e, &c) in self.exponents.iter().zip(&self.coefficients) {
            let p = c * pow_nonneg(s, e);
            value += p * s;
            slope += (1.0 + e) * p;
        }
        (value, slope)
    }
}

/// `g(s)` for `s ≥ 0`.
pub fn eval_g(poly: &ForchheimerPolynomial, s: f64) -> Result<f64> {
    poly.eval(s)
}

pub fn degree_exponent(poly: &ForchheimerPolynomial) -> f64 {
    poly.degree_exponent()
}

/// Evaluator bundle for `s(ξ)`, `K`, `K'` and `H`.
///
/// Immutable after construction; evaluation is pure, so a law can be shared
/// across threads freely.
#[derive(Debug, Clone)]
pub struct ConstitutiveLaw {
    poly: ForchheimerPolynomial,
    root_tolerance: f64,
    quadrature_tolerance: f64,
    table: Option<LookupTable>,
}

const MAX_ROOT_ITERATIONS: usize = 200;

impl ConstitutiveLaw {
    pub const DEFAULT_ROOT_TOLERANCE: f64 = 1e-12;
    pub const DEFAULT_QUADRATURE_TOLERANCE: f64 = 1e-10;

    pub fn new(poly: ForchheimerPolynomial) -> Self {
        Self {
            poly,
            root_tolerance: Self::DEFAULT_ROOT_TOLERANCE,
            quadrature_tolerance: Self::DEFAULT_QUADRATURE_TOLERANCE,
            table: None,
        }
    }

    pub fn with_tolerances(mut self, root_tolerance: f64, quadrature_tolerance: f64) -> Result<Self> {
        if !(root_tolerance > 0.0) || !(quadrature_tolerance > 0.0) {
            return Err(Error::invariant("constitutive law", "tolerances must be positive"));
        }
        self.root_tolerance = root_tolerance;
        self.quadrature_tolerance = quadrature_tolerance;
        Ok(self)
    }

    /// Attach a certified lookup table for `s(ξ)` on `[0, xi_max]`, used only
    /// by [`ConstitutiveLaw::coefficient`].
    pub fn with_table(mut self, xi_max: f64, target_error: f64) -> Result<Self> {
        let table = LookupTable::build(&self, xi_max, target_error)?;
        self.table = Some(table);
        Ok(self)
    }

    pub fn poly(&self) -> &ForchheimerPolynomial {
        &self.poly
    }

    pub fn table(&self) -> Option<&LookupTable> {
        self.table.as_ref()
    }

    pub fn root_tolerance(&self) -> f64 {
        self.root_tolerance
    }

    pub fn degree_exponent(&self) -> f64 {
        self.poly.degree_exponent()
    }

    /// The unique `s ≥ 0` with `s g(s) = ξ`.
    ///
    /// `s g(s)` is a sum of powers `s^{1+α_i}` with `1+α_i ≥ 1`, so it is
    /// convex and increasing; Newton started from an upper bound descends
    /// monotonically. Bisection takes over whenever a step leaves the bracket.
    pub fn solve_s(&self, xi: f64) -> Result<f64> {
        if !xi.is_finite() {
            return Err(Error::Domain(format!("s(xi) requires finite xi, got {xi}")));
        }
        if xi < 0.0 {
            return Err(Error::Domain(format!("s(xi) requires xi >= 0, got {xi}")));
        }
        if xi == 0.0 {
            return Ok(0.0);
        }
        let poly = &self.poly;
        let a0 = poly.a0();
        let (alpha_n, a_n) = poly.leading();
        // s g(s) >= a0 s and >= a_N s^{1+α_N}, so both inversions bound the root from above.
        let mut hi = (xi / a0).min(pow_nonneg(xi / a_n, 1.0 / (1.0 + alpha_n)));
        if poly.flux_and_slope(hi).0 < xi {
            hi = (xi / a0).max(1.0);
        }
        let mut lo = 0.0_f64;
        let mut s = hi;
        let target = self.root_tolerance * xi;
        for _ in 0..MAX_ROOT_ITERATIONS {
            let (value, slope) = poly.flux_and_slope(s);
            let residual = value - xi;
            if residual.abs() <= target {
                return Ok(s);
            }
            if residual > 0.0 {
                hi = s;
            } else {
                lo = s;
            }
            if hi - lo <= 4.0 * f64::EPSILON * hi {
                return Ok(s);
            }
            let newton = s - residual / slope;
            s = if newton > lo && newton < hi && newton.is_finite() {
                newton
            } else {
                0.5 * (lo + hi)
            };
        }
        Err(Error::RootNotConverged {
            xi,
            iterations: MAX_ROOT_ITERATIONS,
            lo,
            hi,
        })
    }

    #[allow(non_snake_case)]
    pub fn eval_K(&self, xi: f64) -> Result<f64> {
        let s = self.solve_s(xi)?;
        Ok(1.0 / self.poly.eval_unchecked(s))
    }

    /// `dK/dξ` by implicit differentiation of `s g(s) = ξ`.
    ///
    /// At `ξ = 0` this is `-∞` when `α_1 < 1`.
    #[allow(non_snake_case)]
    pub fn eval_K_prime(&self, xi: f64) -> Result<f64> {
        let s = self.solve_s(xi)?;
        Ok(self.k_prime_at(s))
    }

    /// `K(ξ)` and `K'(ξ)` sharing one root solve.
    pub fn eval_with_derivative(&self, xi: f64) -> Result<(f64, f64)> {
        let s = self.solve_s(xi)?;
        Ok((1.0 / self.poly.eval_unchecked(s), self.k_prime_at(s)))
    }

    fn k_prime_at(&self, s: f64) -> f64 {
        let g = self.poly.eval_unchecked(s);
        let dg = self.poly.derivative_unchecked(s);
        if dg.is_infinite() {
            return f64::NEG_INFINITY;
        }
        let ds = 1.0 / (g + s * dg);
        -dg * ds / (g * g)
    }

    /// Hot-loop coefficient evaluation: uses the lookup table when one is
    /// attached and `ξ` is inside its range, otherwise [`Self::eval_K`].
    pub fn coefficient(&self, xi: f64) -> Result<f64> {
        if let Some(table) = &self.table {
            if let Some(s) = table.interpolate(xi) {
                return Ok(1.0 / self.poly.eval_unchecked(s));
            }
        }
        self.eval_K(xi)
    }

    /// `H(ξ) = ∫_0^{ξ²} K(√s) ds`.
    ///
    /// Evaluated as `∫_0^{min(ξ,1)} 2u K(u) du` (the `u = √s` substitution),
    /// plus `∫_0^{ln ξ} 2 e^{2w} K(e^w) dw` for the part beyond `u = 1`.
    #[allow(non_snake_case)]
    pub fn eval_H(&self, xi: f64) -> Result<f64> {
        if !xi.is_finite() || xi < 0.0 {
            return Err(Error::Domain(format!("H(xi) requires finite xi >= 0, got {xi}")));
        }
        if xi == 0.0 {
            return Ok(0.0);
        }
        // H >= K(ξ) ξ², which sets the scale for the absolute tolerance.
        let scale = self.eval_K(xi)? * xi * xi;
        let tol = self.quadrature_tolerance * scale;
        let inner_end = xi.min(1.0);
        let inner_share = if xi > 1.0 { 0.5 } else { 1.0 };
        let mut total = adaptive_simpson(
            |u| Ok(2.0 * u * self.eval_K(u)?),
            0.0,
            inner_end,
            tol * inner_share,
        )?;
        if xi > 1.0 {
            total += adaptive_simpson(
                |w| {
                    let u = w.exp();
                    Ok(2.0 * u * u * self.eval_K(u)?)
                },
                0.0,
                xi.ln(),
                tol * 0.5,
            )?;
        }
        Ok(total)
    }

    /// Power-law bound constants fitted by sampling; see [`fit_bounds`].
    pub fn fit_bounds(&self, xi_max: f64, samples: usize) -> Result<BoundFit> {
        fit_bounds(self, xi_max, samples)
    }
}

const SIMPSON_MAX_DEPTH: u32 = 48;
const SIMPSON_INITIAL_PANELS: usize = 8;

fn adaptive_simpson<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if hi <= lo {
        return Ok(0.0);
    }
    let width = (hi - lo) / SIMPSON_INITIAL_PANELS as f64;
    let mut total = 0.0;
    let mut converged = true;
    for k in 0..SIMPSON_INITIAL_PANELS {
        let a = lo + width * k as f64;
        let b = if k + 1 == SIMPSON_INITIAL_PANELS { hi } else { a + width };
        let m = 0.5 * (a + b);
        let (fa, fm, fb) = (f(a)?, f(m)?, f(b)?);
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        total += simpson_panel(
            &f,
            (a, fa),
            (m, fm),
            (b, fb),
            whole,
            tol / SIMPSON_INITIAL_PANELS as f64,
            SIMPSON_MAX_DEPTH,
            &mut converged,
        )?;
    }
    if !converged {
        return Err(Error::QuadratureNotConverged {
            lo,
            hi,
            tolerance: tol,
        });
    }
    Ok(total)
}

#[allow(clippy::too_many_arguments)]
fn simpson_panel<F>(
    f: &F,
    (a, fa): (f64, f64),
    (m, fm): (f64, f64),
    (b, fb): (f64, f64),
    whole: f64,
    tol: f64,
    depth: u32,
    converged: &mut bool,
) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm)?, f(rm)?);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        *converged = false;
        return Ok(left + right + delta / 15.0);
    }
    let l = simpson_panel(f, (a, fa), (lm, flm), (m, fm), left, 0.5 * tol, depth - 1, converged)?;
    let r = simpson_panel(f, (m, fm), (rm, frm), (b, fb), right, 0.5 * tol, depth - 1, converged)?;
    Ok(l + r)
}

/// Fitted constants of the power-law bounds on `K`:
/// `d1 (1+ξ)^{-a} ≤ K(ξ) ≤ d2 (1+ξ)^{-a}` and `d3 (ξ^{2-a} - 1) ≤ K(ξ) ξ²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundFit {
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub xi_max: f64,
    pub samples: usize,
}

impl BoundFit {
    /// Whether the fitted two-sided bound holds at `xi`, allowing a relative slack.
    pub fn certifies(&self, law: &ConstitutiveLaw, xi: f64, slack: f64) -> Result<bool> {
        let a = law.degree_exponent();
        let k = law.eval_K(xi)?;
        let weight = (1.0 + xi).powf(a);
        Ok(k * weight >= self.d1 * (1.0 - slack) && k * weight <= self.d2 * (1.0 + slack))
    }
}

/// Sample points `ξ_i` spaced uniformly in `log(1+ξ)` on `[0, xi_max]`.
pub fn log_spaced(xi_max: f64, samples: usize) -> Vec<f64> {
    let top = xi_max.ln_1p();
    (0..samples)
        .map(|i| (top * i as f64 / (samples - 1) as f64).exp_m1())
        .collect()
}

/// Fit `d1`, `d2`, `d3` by sampling, then polish each extremum with a
/// golden-section search between the neighbouring samples.
pub fn fit_bounds(law: &ConstitutiveLaw, xi_max: f64, samples: usize) -> Result<BoundFit> {
    if !(xi_max > 0.0) || !xi_max.is_finite() {
        return Err(Error::Domain(format!("xi_max must be positive and finite, got {xi_max}")));
    }
    if samples < 100 {
        return Err(Error::Domain(format!("at least 100 samples are required, got {samples}")));
    }
    let a = law.degree_exponent();
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::invariant("constitutive law", format!("degree exponent {a} outside (0,1)")));
    }
    let xs = log_spaced(xi_max, samples);
    let weighted = |xi: f64| -> Result<f64> { Ok(law.eval_K(xi)? * (1.0 + xi).powf(a)) };
    let lower_ratio = |xi: f64| -> Result<f64> {
        let denom = xi.powf(2.0 - a) - 1.0;
        Ok(law.eval_K(xi)? * xi * xi / denom)
    };

    let values = xs.iter().map(|&x| weighted(x)).collect::<Result<Vec<_>>>()?;
    let (i_min, _) = extremum(&values, |a, b| a < b);
    let (i_max, _) = extremum(&values, |a, b| a > b);
    let d1 = polish(&xs, &values, i_min, &weighted, true)?;
    let d2 = polish(&xs, &values, i_max, &weighted, false)?;

    let threshold = 2.0_f64.powf(1.0 / (2.0 - a));
    let tail: Vec<f64> = xs.iter().copied().filter(|&x| x > threshold).collect();
    if tail.len() < 2 {
        return Err(Error::Domain(format!(
            "xi_max = {xi_max} leaves no samples with xi^(2-a) > 2 for the d3 fit"
        )));
    }
    let tail_values = tail.iter().map(|&x| lower_ratio(x)).collect::<Result<Vec<_>>>()?;
    let (i3, _) = extremum(&tail_values, |a, b| a < b);
    let d3 = polish(&tail, &tail_values, i3, &lower_ratio, true)?;

    if !(d1 > 0.0 && d2 > 0.0 && d3 > 0.0) {
        return Err(Error::invariant(
            "constitutive law",
            format!("degenerate bound fit d1={d1}, d2={d2}, d3={d3}"),
        ));
    }
    Ok(BoundFit {
        d1,
        d2,
        d3,
        xi_max,
        samples,
    })
}

fn extremum(values: &[f64], better: impl Fn(f64, f64) -> bool) -> (usize, f64) {
    values
        .iter()
        .copied()
        .enumerate()
        .fold((0, values[0]), |acc, (i, v)| if better(v, acc.1) { (i, v) } else { acc })
}

fn polish(
    xs: &[f64],
    values: &[f64],
    index: usize,
    f: &dyn Fn(f64) -> Result<f64>,
    minimize: bool,
) -> Result<f64> {
    let sampled = values[index];
    if index == 0 || index + 1 == xs.len() {
        return Ok(sampled);
    }
    let sign = if minimize { 1.0 } else { -1.0 };
    let (mut lo, mut hi) = (xs[index - 1].ln_1p(), xs[index + 1].ln_1p());
    let phi = 0.5 * (5.0_f64.sqrt() - 1.0);
    let eval = |y: f64| -> Result<f64> { Ok(sign * f(y.exp_m1())?) };
    let mut c = hi - phi * (hi - lo);
    let mut d = lo + phi * (hi - lo);
    let (mut fc, mut fd) = (eval(c)?, eval(d)?);
    for _ in 0..80 {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - phi * (hi - lo);
            fc = eval(c)?;
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + phi * (hi - lo);
            fd = eval(d)?;
        }
    }
    let best = sign * fc.min(fd);
    Ok(if minimize { sampled.min(best) } else { sampled.max(best) })
}
