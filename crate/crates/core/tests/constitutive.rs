use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use forchlab::constitutive::{degree_exponent, eval_g, ConstitutiveLaw, ForchheimerPolynomial};
use forchlab::Error;

fn two_term() -> ConstitutiveLaw {
    ConstitutiveLaw::new(ForchheimerPolynomial::two_term(1.0, 1.0).unwrap())
}

/// Closed-form `K` for `g(s) = 1 + s`: `s = (√(1+4ξ) - 1)/2`.
fn k_closed(xi: f64) -> f64 {
    2.0 / (1.0 + (1.0 + 4.0 * xi).sqrt())
}

#[test]
fn g_evaluates_sums() {
    let p = ForchheimerPolynomial::two_term(1.0, 1.0).unwrap();
    assert_eq!(eval_g(&p, 0.0).unwrap(), 1.0);
    assert_eq!(eval_g(&p, 3.0).unwrap(), 4.0);
    let q = ForchheimerPolynomial::new(vec![0.0, 0.5, 2.0], vec![1.0, 2.0, 1.0]).unwrap();
    assert!((eval_g(&q, 4.0).unwrap() - 21.0).abs() < 1e-12);
    assert!(matches!(eval_g(&q, -1.0), Err(Error::Domain(_))));
}

#[test]
fn degree_exponent_values() {
    let p = ForchheimerPolynomial::two_term(1.0, 1.0).unwrap();
    assert!((degree_exponent(&p) - 0.5).abs() < 1e-15);
    let q = ForchheimerPolynomial::new(vec![0.0, 2.0], vec![1.0, 1.0]).unwrap();
    assert!((degree_exponent(&q) - 2.0 / 3.0).abs() < 1e-15);
    let tiny = ForchheimerPolynomial::new(vec![0.0, 1e-9], vec![1.0, 1.0]).unwrap();
    assert!((degree_exponent(&tiny) - 1e-9).abs() < 1e-17);
}

#[test]
fn polynomial_invariants_rejected() {
    assert!(ForchheimerPolynomial::new(vec![0.0], vec![1.0]).is_err());
    assert!(ForchheimerPolynomial::new(vec![0.1, 1.0], vec![1.0, 1.0]).is_err());
    assert!(ForchheimerPolynomial::new(vec![0.0, 1.0, 1.0], vec![1.0, 1.0, 1.0]).is_err());
    assert!(ForchheimerPolynomial::new(vec![0.0, 1.0], vec![1.0, 0.0]).is_err());
    assert!(ForchheimerPolynomial::new(vec![0.0, 1.0], vec![1.0]).is_err());
}

#[test]
fn quadratic_root_oracle() {
    let law = two_term();
    assert_eq!(law.solve_s(0.0).unwrap(), 0.0);
    assert!((law.solve_s(2.0).unwrap() - 1.0).abs() < 1e-12);
    assert!((law.solve_s(6.0).unwrap() - 2.0).abs() < 1e-12);
    assert!((law.eval_K(0.0).unwrap() - 1.0).abs() < 1e-15);
    assert!((law.eval_K(2.0).unwrap() - 0.5).abs() < 1e-12);
    assert!((law.eval_K(6.0).unwrap() - 1.0 / 3.0).abs() < 1e-12);
}

#[test]
fn solve_rejects_bad_input() {
    let law = two_term();
    assert!(matches!(law.solve_s(f64::NAN), Err(Error::Domain(_))));
    assert!(matches!(law.solve_s(f64::INFINITY), Err(Error::Domain(_))));
    assert!(matches!(law.solve_s(-1.0), Err(Error::Domain(_))));
}

#[test]
fn k_prime_matches_hand_value_and_finite_difference() {
    let law = two_term();
    let kp = law.eval_K_prime(2.0).unwrap();
    assert!((kp + 1.0 / 12.0).abs() < 1e-13);
    let h = 1e-5;
    let fd = (law.eval_K(2.0 + h).unwrap() - law.eval_K(2.0 - h).unwrap()) / (2.0 * h);
    assert!(((fd - kp) / kp).abs() < 1e-6);
    // α_1 = 1: K'(0) = -a1 / a0^3.
    assert!((law.eval_K_prime(0.0).unwrap() + 1.0).abs() < 1e-15);
    let frac = ConstitutiveLaw::new(ForchheimerPolynomial::new(vec![0.0, 0.5], vec![1.0, 1.0]).unwrap());
    assert_eq!(frac.eval_K_prime(0.0).unwrap(), f64::NEG_INFINITY);
}

/// Composite Simpson in `u` using the closed-form `K` (independent of the root solver).
fn h_simpson_closed(xi: f64, panels: usize) -> f64 {
    let f = |u: f64| 2.0 * u * k_closed(u);
    let h = xi / panels as f64;
    let mut sum = f(0.0) + f(xi);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(h * i as f64);
    }
    sum * h / 3.0
}

#[test]
fn h_matches_independent_simpson() {
    let law = two_term();
    assert_eq!(law.eval_H(0.0).unwrap(), 0.0);
    for &xi in &[0.3, 2.0, 17.0] {
        let h = law.eval_H(xi).unwrap();
        let oracle = h_simpson_closed(xi, 20_000);
        assert!(((h - oracle) / oracle).abs() < 1e-8, "xi={xi}: {h} vs {oracle}");
    }
}

#[test]
fn h_constant_integrand_limit() {
    let law = ConstitutiveLaw::new(ForchheimerPolynomial::new(vec![0.0, 40.0], vec![2.0, 1.0]).unwrap());
    let xi = 1e-3;
    let h = law.eval_H(xi).unwrap();
    assert!((h - xi * xi / 2.0).abs() < 1e-12 * xi * xi);
}

#[test]
fn h_sandwich_bounds() {
    let law = ConstitutiveLaw::new(ForchheimerPolynomial::new(vec![0.0, 0.5, 1.7], vec![1.0, 0.3, 2.0]).unwrap());
    for &xi in &[1e-6, 0.01, 0.5, 1.0, 3.0, 1e3, 1e6] {
        let h = law.eval_H(xi).unwrap();
        let kx2 = law.eval_K(xi).unwrap() * xi * xi;
        assert!(kx2 <= h * (1.0 + 1e-8), "xi={xi}");
        assert!(h <= 2.0 * kx2 * (1.0 + 1e-8), "xi={xi}");
    }
}

#[test]
fn bound_fit_two_term() {
    let law = two_term();
    let fit = law.fit_bounds(1e6, 10_000).unwrap();
    assert!(fit.d1.is_finite() && fit.d2.is_finite());
    assert!(fit.d2 / fit.d1 < 10.0);
    // Closed form: K(1+ξ)^{1/2} has minimum sqrt(3)/2 at ξ = 2 and supremum 1.
    assert!((fit.d1 - 3f64.sqrt() / 2.0).abs() < 1e-10);
    assert!((fit.d2 - 1.0).abs() < 1e-12);
    let refit = law.fit_bounds(1e6, 20_000).unwrap();
    assert!(((refit.d1 - fit.d1) / fit.d1).abs() < 0.01);
    assert!(((refit.d2 - fit.d2) / fit.d2).abs() < 0.01);
    assert!(fit.d3 > 0.0);
}

#[test]
fn bound_fit_near_darcy() {
    let law = ConstitutiveLaw::new(ForchheimerPolynomial::new(vec![0.0, 1e-3], vec![1.0, 1e-9]).unwrap());
    let fit = law.fit_bounds(1e3, 500).unwrap();
    assert!(fit.d2 / fit.d1 < 1.01);
    assert!(fit.d1 > 0.0);
}

#[test]
fn bound_fit_rejects_tiny_range() {
    assert!(two_term().fit_bounds(1e-3, 200).is_err());
    assert!(two_term().fit_bounds(10.0, 50).is_err());
}

fn probe(law: &ConstitutiveLaw, xi_max: f64) -> f64 {
    let table = law.table().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (lo, hi) = table.range();
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let y = rng.gen_range(lo.ln_1p()..hi.ln_1p().min(xi_max.ln_1p()));
        let xi = y.exp_m1();
        let exact = law.solve_s(xi).unwrap();
        let approx = table.interpolate(xi).unwrap();
        if exact > 0.0 {
            worst = worst.max(((approx - exact) / exact).abs());
        }
    }
    worst
}

#[test]
fn table_certified_for_two_term_law() {
    let law = ConstitutiveLaw::new(ForchheimerPolynomial::two_term(1.0, 1.0).unwrap())
        .with_table(1e8, 1e-10)
        .unwrap();
    let table = law.table().unwrap();
    assert!(table.certified_error() < 1e-8);
    assert!(probe(&law, 1e8) < 1e-8);
    assert!(table.range().0 == 0.0);
}

#[test]
fn table_with_fractional_exponent_falls_back_near_zero() {
    let law = ConstitutiveLaw::new(
        ForchheimerPolynomial::new(vec![0.0, 0.5, 1.5], vec![1.0, 0.7, 0.2]).unwrap(),
    )
    .with_table(1e6, 1e-10)
    .unwrap();
    assert!(probe(&law, 1e6) < 1e-8);
    // Below the covered range the coefficient comes from the direct solve.
    let (lo, _) = law.table().unwrap().range();
    if lo > 0.0 {
        let xi = 0.5 * lo;
        assert!(law.table().unwrap().interpolate(xi).is_none());
        assert_eq!(law.coefficient(xi).unwrap(), law.eval_K(xi).unwrap());
    }
}
