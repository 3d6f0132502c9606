use forchlab::constitutive::{ConstitutiveLaw, ForchheimerPolynomial};
use forchlab::discretization::{BoundaryData, Grid, ScalarField};
use forchlab::functionals::{
    all_columns, alpha_star, compute_beta, env, slope_jump, exponent_bundle, lp_norm, lp_values, mu0, s_tilde, sobolev_star,
    FunctionalParams, FunctionalSeries, Tracker,
};
use forchlab::Error;
use proptest::prelude::*;

fn series(times: &[f64], values: &[f64]) -> FunctionalSeries {
    let mut s = FunctionalSeries::new(vec!["v".into()]);
    for (t, v) in times.iter().zip(values) {
        s.push(*t, &[*v]).unwrap();
    }
    s
}

#[test]
fn series_times_must_increase() {
    let mut s = FunctionalSeries::new(vec!["a".into(), "b".into()]);
    s.push(0.0, &[1.0, 2.0]).unwrap();
    assert!(s.push(0.0, &[1.0, 2.0]).is_err());
    assert!(s.push(-1.0, &[1.0, 2.0]).is_err());
    assert!(s.push(1.0, &[1.0]).is_err());
    assert!(matches!(s.column("c"), Err(Error::MissingFunctional(c)) if c == "c"));
}

#[test]
fn series_window_queries() {
    let s = series(&[0.0, 0.5, 1.0, 1.5, 2.0], &[4.0, 1.0, 3.0, 2.0, 5.0]);
    assert_eq!(s.sup("v", 0.4, 1.6).unwrap(), 3.0);
    assert_eq!(s.window(0.5, 1.5), 1..4);
    // Trapezoid over [0.5, 1.5]: 0.5·(1+3)/2 + 0.5·(3+2)/2.
    assert!((s.integrate("v", 0.5, 1.5).unwrap() - 2.25).abs() < 1e-15);
    // Right-endpoint rule: 0.5·3 + 0.5·2.
    assert!((s.integrate_right("v", 0.5, 1.5, |v| v).unwrap() - 2.5).abs() < 1e-15);
    assert_eq!(s.value_at("v", 1.1).unwrap(), 3.0);
    assert!(matches!(s.sup("v", 3.0, 4.0), Err(Error::Precondition(_))));
}

#[test]
fn beta_over_tail() {
    let t = [0.0, 1.0, 2.0, 3.0, 4.0];
    let v = [10.0, 8.0, 7.0, 6.5, 6.4];
    assert!((compute_beta(&t, &v, 2.0).unwrap() - 0.5).abs() < 1e-15);
    assert!(compute_beta(&t, &v, 3.5).is_err());
}

#[test]
fn slope_jump_separates_smooth_and_kinked_signals() {
    let t: Vec<f64> = (0..=100).map(|k| k as f64 / 100.0).collect();
    let smooth: Vec<f64> = t.iter().map(|t| (-t).exp()).collect();
    let kinked: Vec<f64> = t.iter().map(|t| (t - 0.5).abs()).collect();
    assert!(slope_jump(&t, &smooth, 0.0).unwrap() < 0.02);
    assert!(slope_jump(&t, &kinked, 0.0).unwrap() > 1.0);
    assert!(slope_jump(&t, &smooth, 0.995).is_err());
}

#[test]
fn exponent_helpers() {
    assert!((alpha_star(0.5, 2) - 2.0 / 3.0).abs() < 1e-15);
    assert!((mu0(0.5) - 4.0 / 3.0).abs() < 1e-15);
    assert_eq!(sobolev_star(2.0, 2), f64::INFINITY);
    assert!((sobolev_star(1.0, 2) - 2.0).abs() < 1e-15);
    assert!((sobolev_star(1.5, 2) - 6.0).abs() < 1e-14);
    // Middle range takes the larger branch; outside it s/(2−a).
    assert!((s_tilde(3.0, 0.5) - 1.75).abs() < 1e-15);
    assert!((s_tilde(4.4, 0.1) - (4.4_f64 / 1.9 - 1.0).max(2.25)).abs() < 1e-15);
    assert!((s_tilde(1.0, 0.5) - 1.0 / 1.5).abs() < 1e-15);
}

#[test]
fn inadmissible_bundles_are_rejected() {
    assert!(exponent_bundle(1.0, 1, 4.0, 1.0, 1.5).is_err());
    assert!(exponent_bundle(0.5, 1, 1.5, 1.0, 1.5).is_err());
    assert!(exponent_bundle(0.5, 2, 4.0, 1.0, 0.9).is_err());
    assert!(exponent_bundle(0.5, 2, 4.0, 10.0, 1.5).is_err());
    assert!(exponent_bundle(0.5, 0, 4.0, 1.0, 1.5).is_err());
}

#[test]
fn norms_of_constants() {
    let g = Grid::new_2d(4, 8, 2.0, 0.5).unwrap();
    let f = ScalarField::constant(g, -3.0, 0.0);
    assert!((lp_norm(&f, 2.0) - 3.0).abs() < 1e-14);
    assert!((lp_norm(&f, 4.0) - 3.0).abs() < 1e-14);
    assert_eq!(lp_norm(&f, f64::INFINITY), 3.0);
    assert_eq!(lp_values(&g, &[], f64::INFINITY), 0.0);
}

#[test]
fn tracker_rejects_unknown_and_unsupported_ids() {
    let law = ConstitutiveLaw::new(ForchheimerPolynomial::two_term(1.0, 1.0).unwrap());
    let static_only = BoundaryData::constant(1.0);
    let params = FunctionalParams::default();
    let unknown = Tracker::new(&law, &static_only, None, params.clone(), Some(&["nonsense".into()]), 1);
    assert!(matches!(unknown, Err(Error::Config(m)) if m.contains("nonsense")));
    let all = all_columns(&params);
    let tracker = Tracker::new(&law, &static_only, None, params.clone(), None, 1).unwrap();
    assert!(tracker.columns().len() <= all.len());
    assert!(tracker.columns().iter().any(|c| c == "sup_p"));
    let bad = FunctionalParams { s0: 2.5, ..params };
    assert!(Tracker::new(&law, &static_only, None, bad, None, 1).is_err());
}

proptest! {
    #[test]
    fn env_is_the_least_nondecreasing_majorant(v in prop::collection::vec(-1e3f64..1e3, 1..60)) {
        let e = env(&v);
        prop_assert!(e.windows(2).all(|w| w[1] >= w[0]));
        prop_assert!(e.iter().zip(&v).all(|(a, b)| a >= b));
        // Each value is attained by some earlier sample.
        for (k, m) in e.iter().enumerate() {
            prop_assert!(v[..=k].contains(m));
        }
    }

    #[test]
    fn bundle_identities_and_ordering(
        a in 0.05f64..0.95,
        n in 1usize..=2,
        alpha in 2.0f64..8.0,
        p1_frac in 0.0f64..0.99,
        s0_frac in 0.01f64..0.99,
    ) {
        let nf = n as f64;
        let r1 = alpha * (1.0 + (2.0 - a) / nf) - a;
        let p1 = 1.0 + p1_frac * (r1 / alpha - 1.0);
        let lo = 2.0 * nf / (nf + 2.0);
        let s0 = lo + s0_frac * (2.0 - lo);
        let b = exponent_bundle(a, n, alpha, p1, s0).unwrap();
        prop_assert!(b.identity_residuals().iter().all(|r| *r <= 1e-12));
        prop_assert!(b.delta_ordering_holds());
        prop_assert!(b.delta1 > 0.0 && b.delta3 > 0.0);
        prop_assert!(b.z3 >= 1.0);
    }
}
