use forchlab::constitutive::{ConstitutiveLaw, ForchheimerPolynomial};
use forchlab::discretization::{BoundaryData, BoundaryExpressions, Grid, ScalarField};
use forchlab::solver::{
    cfl_limit, run_full_equation, run_ibvp, step_explicit, step_implicit, FullEquation, RunOptions, RunRecord,
    SnapshotCadence, SolverConfig,
};
use forchlab::Error;
use std::f64::consts::PI;

fn law() -> ConstitutiveLaw {
    ConstitutiveLaw::new(ForchheimerPolynomial::two_term(1.0, 1.0).unwrap())
}

fn affine_boundary() -> BoundaryData {
    BoundaryData::from_expressions(&BoundaryExpressions {
        psi: "1 + 0.5 * x".into(),
        psi_t: Some("0".into()),
        psi_x: Some("0.5".into()),
        psi_xx: Some("0".into()),
        ..Default::default()
    })
    .unwrap()
}

fn initial(grid: Grid) -> ScalarField {
    ScalarField::from_fn(grid, 0.0, |x| 1.0 + 0.5 * x[0] + (PI * x[0]).sin()).unwrap()
}

fn small_options() -> RunOptions {
    RunOptions {
        tracked: Some(vec!["sup_p".into(), "mp_margin".into(), "pbar_L2".into()]),
        ..Default::default()
    }
}

#[test]
fn explicit_step_beyond_cfl_is_rejected() {
    let grid = Grid::new_1d(32, 1.0).unwrap();
    let limit = cfl_limit(&grid, &law());
    let config = SolverConfig::explicit(2.0 * limit, 10.0 * limit);
    let err = run_ibvp(&config, &law(), initial(grid), &affine_boundary(), &small_options()).unwrap_err();
    assert!(matches!(err, Error::Config(_)), "{err}");
    assert_eq!(err.exit_code(), 2);
    let ok = SolverConfig::explicit(0.9 * limit, 10.0 * limit);
    assert!(run_ibvp(&ok, &law(), initial(grid), &affine_boundary(), &small_options()).unwrap().complete);
}

#[test]
fn invalid_settings_are_config_errors() {
    let grid = Grid::new_1d(16, 1.0).unwrap();
    for config in [
        SolverConfig::implicit(0.0, 1.0),
        SolverConfig::implicit(0.1, -1.0),
        SolverConfig::implicit(0.1, 1.0).with_snapshots(SnapshotCadence::Every(0)),
        SolverConfig::implicit(0.1, 1.0).with_full_equation(FullEquation { kappa: 1.0, phi: 1.5 }),
    ] {
        assert!(matches!(config.validate(&grid, &law()), Err(Error::Config(_))));
    }
}

#[test]
fn step_count_lands_on_t_end() {
    let c = SolverConfig::implicit(0.3, 1.0);
    assert_eq!(c.steps(), 4);
    assert!((c.time_of(3) - 0.9).abs() < 1e-15);
    assert_eq!(c.time_of(4), 1.0);
    assert_eq!(SolverConfig::implicit(0.1, 0.0).steps(), 0);
}

#[test]
fn snapshot_cadence() {
    let grid = Grid::new_1d(16, 1.0).unwrap();
    let every = SolverConfig::implicit(0.01, 0.1).with_snapshots(SnapshotCadence::Every(3));
    let rec = run_ibvp(&every, &law(), initial(grid), &affine_boundary(), &small_options()).unwrap();
    let times: Vec<f64> = rec.snapshots.iter().map(|s| s.t()).collect();
    let expect = [0.0, 0.03, 0.06, 0.09, 0.1];
    assert_eq!(times.len(), expect.len());
    for (a, b) in times.iter().zip(expect) {
        assert!((a - b).abs() < 1e-12, "{times:?}");
    }
    let count = SolverConfig::implicit(0.01, 0.1).with_snapshots(SnapshotCadence::Count(5));
    let rec = run_ibvp(&count, &law(), initial(grid), &affine_boundary(), &small_options()).unwrap();
    assert_eq!(rec.snapshots.len(), 6);
    assert_eq!(rec.series.len(), 11);
}

#[test]
fn record_round_trips_exactly() {
    let grid = Grid::new_2d(6, 5, 1.0, 1.0).unwrap();
    let boundary = BoundaryData::from_expressions(&BoundaryExpressions {
        psi: "x * y".into(),
        psi_t: Some("0".into()),
        psi_x: Some("y".into()),
        psi_y: Some("x".into()),
        ..Default::default()
    })
    .unwrap();
    let p0 = ScalarField::from_fn(grid, 0.0, |x| x[0] * x[1] + (PI * x[0]).sin() * (PI * x[1]).sin() / 3.0).unwrap();
    let config = SolverConfig::implicit(0.01, 0.05).with_snapshots(SnapshotCadence::Every(2));
    let rec = run_ibvp(&config, &law(), p0, &boundary, &small_options()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    rec.write(dir.path()).unwrap();
    let back = RunRecord::read(dir.path()).unwrap();
    assert_eq!(back, rec);
}

#[test]
fn failing_step_yields_incomplete_record() {
    let grid = Grid::new_1d(32, 1.0).unwrap();
    let mut config = SolverConfig::implicit(0.5, 1.0);
    config.picard_max_iterations = 1;
    config.picard_tolerance = 1e-15;
    let p0 = ScalarField::from_fn(grid, 0.0, |x| 1.0 + 0.5 * x[0] + 20.0 * (PI * x[0]).sin()).unwrap();
    let rec = run_ibvp(&config, &law(), p0.clone(), &affine_boundary(), &small_options()).unwrap();
    assert!(!rec.complete);
    assert_eq!(rec.steps, 0);
    assert!(rec.failure.as_deref().unwrap().contains("Picard"));
    assert_eq!(rec.series.len(), 1);
    assert_eq!(rec.snapshots[0], p0);
    let dir = tempfile::tempdir().unwrap();
    rec.write(dir.path()).unwrap();
    assert!(!RunRecord::read(dir.path()).unwrap().complete);
}

#[test]
fn steady_affine_state_is_preserved() {
    let grid = Grid::new_1d(16, 1.0).unwrap();
    let b = affine_boundary();
    let p = ScalarField::from_fn(grid, 0.0, |x| 1.0 + 0.5 * x[0]).unwrap();
    let next = step_implicit(&p, &law(), &b, 0.1).unwrap();
    assert!(next.max_abs_diff(&p) < 1e-12);
    let next = step_explicit(&p, &law(), &b, 1e-4).unwrap();
    assert!(next.max_abs_diff(&p) < 1e-12);
}

#[test]
fn explicit_and_implicit_agree_for_small_steps() {
    let grid = Grid::new_1d(16, 1.0).unwrap();
    let limit = cfl_limit(&grid, &law());
    let t_end = 200.0 * limit;
    let opts = small_options();
    let e = run_ibvp(&SolverConfig::explicit(limit, t_end), &law(), initial(grid), &affine_boundary(), &opts).unwrap();
    let i = run_ibvp(&SolverConfig::implicit(limit, t_end), &law(), initial(grid), &affine_boundary(), &opts).unwrap();
    let d = e.final_state().unwrap().max_abs_diff(i.final_state().unwrap());
    assert!(d < 1e-2, "{d}");
}

#[test]
fn full_equation_tends_to_reduced_equation() {
    let grid = Grid::new_1d(16, 1.0).unwrap();
    let reduced_cfg = SolverConfig::implicit(0.005, 0.1);
    let reduced = run_ibvp(&reduced_cfg, &law(), initial(grid), &affine_boundary(), &small_options()).unwrap();
    let diff = |kappa: f64| {
        let cfg = reduced_cfg.clone().with_full_equation(FullEquation { kappa, phi: 0.3 });
        let full = run_full_equation(&cfg, &law(), initial(grid), &affine_boundary(), &small_options()).unwrap();
        full.final_state().unwrap().max_abs_diff(reduced.final_state().unwrap())
    };
    let (d10, d100) = (diff(10.0), diff(100.0));
    assert!(d100 < d10 / 5.0, "{d10} {d100}");
    let missing = run_full_equation(&reduced_cfg, &law(), initial(grid), &affine_boundary(), &small_options());
    assert!(matches!(missing, Err(Error::Config(_))));
}

#[test]
fn maximum_principle_margin_is_nonnegative() {
    let grid = Grid::new_1d(32, 1.0).unwrap();
    let rec = run_ibvp(&SolverConfig::implicit(0.01, 0.5), &law(), initial(grid), &affine_boundary(), &small_options())
        .unwrap();
    let m = rec.series.column("mp_margin").unwrap();
    assert!(m[1..].iter().all(|v| *v >= -1e-8));
    let sup = rec.series.column("sup_p").unwrap();
    assert!(sup.windows(2).all(|w| w[1] <= w[0] + 1e-10));
}
