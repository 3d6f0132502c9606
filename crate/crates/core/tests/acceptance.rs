//! Acceptance criteria 1–9. Each test prints one `criterion N: PASS|FAIL`
//! line (written to the process stdout so it survives output capture) and
//! then asserts.

use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use forchlab::config::{apply_override, RunConfig};
use forchlab::constitutive::{ConstitutiveLaw, ForchheimerPolynomial};
use forchlab::discretization::{BoundaryData, BoundaryExpressions, BoundaryFrame, Grid, ScalarField};
use forchlab::estimates::{
    check_luk, check_sob4, check_weighted_embedding, degiorgi_sequence, fit_theorem_constant, refinement_drift,
    smooth_corpus, verify_contraction, RecurrenceSpec, DEFAULT_SHAPES,
};
use forchlab::functionals::exponent_bundle;
use forchlab::solver::{run_ibvp, run_manufactured, ManufacturedStudy, RunOptions, SnapshotCadence, SolverConfig};

fn report(n: u32, title: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "criterion {n}: {verdict} {title} | {detail}");
    let _ = out.flush();
}

fn random_polynomial(rng: &mut impl Rng) -> ForchheimerPolynomial {
    let terms = rng.gen_range(2..=4);
    let mut exps = vec![0.0];
    for _ in 1..terms {
        let last = *exps.last().unwrap();
        exps.push(last + rng.gen_range(0.05..=1.5));
    }
    let coefs = (0..terms).map(|_| rng.gen_range(0.1..=10.0)).collect();
    ForchheimerPolynomial::new(exps, coefs).unwrap()
}

// Tolerances pinned from the criteria.
const ROOT_TOL: f64 = 1e-12;
const MONOTONE_SLACK: f64 = 1e-12;
const DERIV_TOL: f64 = 1e-9;
const SANDWICH_TOL: f64 = 1e-8;

#[test]
fn criterion_1_constitutive_correctness() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut worst_root, mut worst_deriv, mut worst_sandwich) = (0.0_f64, 0.0_f64, 0.0_f64);
    let mut monotone_violations = 0;
    let mut probes = 0;
    for _ in 0..100 {
        let law = ConstitutiveLaw::new(random_polynomial(&mut rng));
        let a = law.degree_exponent();
        for _ in 0..100 {
            let xi = 10f64.powf(rng.gen_range(-6.0..=6.0));
            let s = law.solve_s(xi).unwrap();
            let resid = (s * law.poly().eval(s).unwrap() - xi).abs() / xi.max(1.0);
            worst_root = worst_root.max(resid / ROOT_TOL);
            let k = law.eval_K(xi).unwrap();
            let kpx = law.eval_K_prime(xi).unwrap() * xi;
            // -aK <= K'ξ <= 0, measured in units of the tolerance.
            worst_deriv = worst_deriv.max((-a * k - kpx) / DERIV_TOL).max(kpx / DERIV_TOL);
            let h = law.eval_H(xi).unwrap();
            let kx2 = k * xi * xi;
            worst_sandwich = worst_sandwich.max((kx2 / h - 1.0) / SANDWICH_TOL).max((h / (2.0 * kx2) - 1.0) / SANDWICH_TOL);
            probes += 1;
        }
        let mut prev = f64::INFINITY;
        for i in 0..1000 {
            let xi = if i == 0 { 0.0 } else { 10f64.powf(-6.0 + 12.0 * i as f64 / 999.0) };
            let k = law.eval_K(xi).unwrap();
            if k > prev + MONOTONE_SLACK {
                monotone_violations += 1;
            }
            prev = k;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let pass = worst_root <= 1.0
        && worst_deriv <= 1.0
        && worst_sandwich <= 1.0
        && monotone_violations == 0
        && elapsed < 10.0;
    report(
        1,
        "constitutive correctness",
        pass,
        &format!(
            "{probes} probes; root residual {worst_root:.2e} x 1e-12, derivative bound {worst_deriv:.2e} x 1e-9, \
             sandwich {worst_sandwich:.2e} x 1e-8, monotonicity violations {monotone_violations}, {elapsed:.2} s (< 10 s)"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_2_closed_form_oracle() {
    let law = ConstitutiveLaw::new(ForchheimerPolynomial::two_term(1.0, 1.0).unwrap());
    // s + s² = ξ: s(2) = 1, s(6) = 2, so K = 1/(1+s).
    let e2 = (law.eval_K(2.0).unwrap() - 0.5).abs();
    let e6 = (law.eval_K(6.0).unwrap() - 1.0 / 3.0).abs();
    let pass = e2 <= 1e-12 && e6 <= 1e-12;
    report(2, "closed-form oracle", pass, &format!("|K(2)-1/2| = {e2:.2e}, |K(6)-1/3| = {e6:.2e} (<= 1e-12)"));
    assert!(pass);
}

#[test]
fn criterion_3_manufactured_convergence() {
    let start = Instant::now();
    let law = ConstitutiveLaw::new(ForchheimerPolynomial::two_term(1.0, 1.0).unwrap());
    let exact = BoundaryData::from_expressions(&BoundaryExpressions {
        psi: "exp(-t) * sin(pi * x)".into(),
        psi_t: Some("-exp(-t) * sin(pi * x)".into()),
        psi_x: Some("pi * exp(-t) * cos(pi * x)".into()),
        psi_xx: Some("-pi^2 * exp(-t) * sin(pi * x)".into()),
        ..Default::default()
    })
    .unwrap();
    let report_ = run_manufactured(&ManufacturedStudy::standard_1d(0.1).unwrap(), &law, &exact).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let space = report_.spatial_orders[0];
    let time = report_.temporal_orders[0];
    let pass = (1.7..=2.3).contains(&space) && (0.8..=1.2).contains(&time) && elapsed < 120.0;
    report(
        3,
        "manufactured-solution convergence",
        pass,
        &format!("spatial order {space:.4} in [1.7, 2.3], temporal order {time:.4} in [0.8, 1.2], {elapsed:.1} s (< 120 s)"),
    );
    assert!(pass);
}

/// Dense reference for the 1D implicit scheme with `g(s) = 1 + s`.
///
/// Built from the scheme's definition only: face differences with half-cell
/// ghost closure at the boundary, `K(ξ) = 2/(1+√(1+4ξ))` in closed form,
/// Picard iteration on `(I/Δt + A(K)) u = p/Δt + boundary terms`, and
/// Gaussian elimination with partial pivoting.
fn dense_reference(p0: &[f64], psi: impl Fn(f64, f64) -> f64, dt: f64, steps: usize) -> Vec<Vec<f64>> {
    let n = p0.len();
    let h = 1.0 / n as f64;
    let k = |xi: f64| 2.0 / (1.0 + (1.0 + 4.0 * xi).sqrt());
    let mut states = vec![p0.to_vec()];
    let mut p = p0.to_vec();
    for step in 1..=steps {
        let t = step as f64 * dt;
        let (wl, wr) = (psi(0.0, t), psi(1.0, t));
        let mut u = p.clone();
        for _ in 0..200 {
            let mut faces = Vec::with_capacity(n + 1);
            faces.push(k(((u[0] - wl) / (0.5 * h)).abs()));
            for i in 1..n {
                faces.push(k(((u[i] - u[i - 1]) / h).abs()));
            }
            faces.push(k(((wr - u[n - 1]) / (0.5 * h)).abs()));
            let mut m = vec![vec![0.0; n]; n];
            let mut b: Vec<f64> = p.iter().map(|v| v / dt).collect();
            for i in 0..n {
                m[i][i] = 1.0 / dt;
                let left = if i == 0 { 2.0 * faces[0] } else { faces[i] } / (h * h);
                let right = if i == n - 1 { 2.0 * faces[n] } else { faces[i + 1] } / (h * h);
                m[i][i] += left + right;
                if i > 0 {
                    m[i][i - 1] -= left;
                } else {
                    b[i] += left * wl;
                }
                if i < n - 1 {
                    m[i][i + 1] -= right;
                } else {
                    b[i] += right * wr;
                }
            }
            let next = gauss(m, b);
            let norm = next.iter().fold(1.0_f64, |a, v| a.max(v.abs()));
            let change = next.iter().zip(&u).fold(0.0_f64, |a, (x, y)| a.max((x - y).abs())) / norm;
            u = next;
            if change < 1e-14 {
                break;
            }
        }
        p = u;
        states.push(p.clone());
    }
    states
}

fn gauss(mut m: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for c in 0..n {
        let piv = (c..n).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs())).unwrap();
        m.swap(c, piv);
        b.swap(c, piv);
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            for k in c..n {
                m[r][k] -= f * m[c][k];
            }
            b[r] -= f * b[c];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|k| m[r][k] * x[k]).sum();
        x[r] = (b[r] - s) / m[r][r];
    }
    x
}

#[test]
fn criterion_4_small_instance_equivalence() {
    let law = ConstitutiveLaw::new(ForchheimerPolynomial::two_term(1.0, 1.0).unwrap());
    let grid = Grid::new_1d(8, 1.0).unwrap();
    let boundary = BoundaryData::from_expressions(&BoundaryExpressions {
        psi: "1 + 2 * x + 0.5 * sin(3 * t)".into(),
        psi_t: Some("1.5 * cos(3 * t)".into()),
        psi_x: Some("2".into()),
        psi_xx: Some("0".into()),
        psi_xt: Some("0".into()),
        ..Default::default()
    })
    .unwrap();
    let p0 = ScalarField::from_fn(grid, 0.0, |x| 1.0 + 2.0 * x[0] + 4.0 * (std::f64::consts::PI * x[0]).sin()).unwrap();
    let dt = 0.01;
    let mut config = SolverConfig::implicit(dt, 10.0 * dt).with_snapshots(SnapshotCadence::Every(1));
    config.picard_tolerance = 1e-14;
    config.picard_max_iterations = 200;
    config.linear_tolerance = 1e-15;
    let options = RunOptions {
        tracked: Some(vec!["sup_p".into()]),
        ..Default::default()
    };
    let record = run_ibvp(&config, &law, p0.clone(), &boundary, &options).unwrap();
    let reference = dense_reference(p0.values(), |x, t| 1.0 + 2.0 * x + 0.5 * (3.0 * t).sin(), dt, 10);
    let err = record
        .snapshots
        .iter()
        .zip(&reference)
        .flat_map(|(s, r)| s.values().iter().zip(r).map(|(a, b)| (a - b).abs()))
        .fold(0.0, f64::max);
    let pass = record.snapshots.len() == 11 && err <= 1e-9;
    report(
        4,
        "small-instance equivalence",
        pass,
        &format!("8 cells, 10 steps, max |solver - dense reference| = {err:.2e} (<= 1e-9)"),
    );
    assert!(pass);
}

/// A random static affine-plus-bilinear boundary extension.
fn static_boundary(rng: &mut impl Rng, dim: usize) -> BoundaryExpressions {
    let c: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    if dim == 1 {
        BoundaryExpressions {
            psi: format!("{} + {} * x", c[0], c[1]),
            psi_x: Some(format!("{}", c[1])),
            psi_xx: Some("0".into()),
            ..Default::default()
        }
    } else {
        BoundaryExpressions {
            psi: format!("{} + {} * x + {} * y + {} * x * y", c[0], c[1], c[2], c[3]),
            psi_x: Some(format!("{} + {} * y", c[1], c[3])),
            psi_y: Some(format!("{} + {} * x", c[2], c[3])),
            psi_xx: Some("0".into()),
            psi_xy: Some(format!("{}", c[3])),
            psi_yy: Some("0".into()),
            ..Default::default()
        }
    }
}

fn random_initial(grid: Grid, boundary: &BoundaryData, rng: &mut impl Rng) -> ScalarField {
    let modes: Vec<(f64, f64, f64)> = (0..3)
        .map(|_| (rng.gen_range(1..=3) as f64, rng.gen_range(1..=3) as f64, rng.gen_range(-2.0..=2.0)))
        .collect();
    let two_d = grid.dim() == 2;
    ScalarField::from_fn(grid, 0.0, |x| {
        let pi = std::f64::consts::PI;
        boundary.psi(x, 0.0)
            + modes
                .iter()
                .map(|(kx, ky, c)| c * (kx * pi * x[0]).sin() * if two_d { (ky * pi * x[1]).sin() } else { 1.0 })
                .sum::<f64>()
    })
    .unwrap()
}

#[test]
fn criterion_5_maximum_principle_and_contraction() {
    const PICARD_TOL: f64 = 1e-12;
    // A per-step increase counts once it exceeds ten Picard tolerances.
    const GAP_SLACK: f64 = 10.0 * PICARD_TOL;
    const MARGIN_FLOOR: f64 = -1e-8;
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut runs, mut worst_margin, mut worst_increase, mut worst_decay) = (0, f64::INFINITY, 0.0_f64, 0.0_f64);
    let mut all_monotone = true;
    for pair in 0..10 {
        let dim = if pair < 5 { 1 } else { 2 };
        let grid = if dim == 1 { Grid::new_1d(32, 1.0) } else { Grid::new_2d(16, 16, 1.0, 1.0) }.unwrap();
        let law = ConstitutiveLaw::new(random_polynomial(&mut rng));
        let boundary = BoundaryData::from_expressions(&static_boundary(&mut rng, dim)).unwrap();
        // Twenty diffusion times L² a₀ with L = 1.
        let t_end = 20.0 * law.poly().a0();
        let dt = t_end / if dim == 1 { 2000.0 } else { 1000.0 };
        let mut config = SolverConfig::implicit(dt, t_end).with_snapshots(SnapshotCadence::Every(1));
        config.picard_tolerance = PICARD_TOL;
        config.picard_max_iterations = 200;
        let options = RunOptions {
            tracked: Some(vec!["sup_p".into(), "mp_margin".into()]),
            ..Default::default()
        };
        let records: Vec<_> = (0..2)
            .map(|_| {
                let p0 = random_initial(grid, &boundary, &mut rng);
                run_ibvp(&config, &law, p0, &boundary, &options).unwrap()
            })
            .collect();
        for r in &records {
            assert!(r.complete);
            let m = r.series.column("mp_margin").unwrap()[1..].iter().cloned().fold(f64::INFINITY, f64::min);
            worst_margin = worst_margin.min(m);
            runs += 1;
        }
        let c = verify_contraction(&records[0], &records[1], GAP_SLACK).unwrap();
        all_monotone &= c.monotone;
        worst_increase = worst_increase.max(c.max_increase / c.tolerance);
        worst_decay = worst_decay.max(c.decay);
    }
    let elapsed = start.elapsed().as_secs_f64();
    let pass = worst_margin >= MARGIN_FLOOR && all_monotone && worst_decay < 0.01;
    report(
        5,
        "maximum principle and contraction",
        pass,
        &format!(
            "{runs} runs (10 x 1D 32 cells, 10 x 2D 16x16); min scaled margin {worst_margin:.2e} (>= -1e-8); \
             largest gap increase {worst_increase:.2e} x tolerance (<= 1); worst final/initial gap {worst_decay:.2e} (< 0.01); {elapsed:.1} s"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_6_degiorgi_recurrence() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut converged = 0;
    for _ in 0..1000 {
        let spec = RecurrenceSpec::random(&mut rng, 0.99, 200);
        let out = degiorgi_sequence(&spec).unwrap();
        if out.converged && out.iterations_to_converge().is_some_and(|i| i <= 200) {
            converged += 1;
        }
    }
    let spec = RecurrenceSpec::new(vec![1.0], vec![1.0], 2.0, 0.5, 40).unwrap();
    let out = degiorgi_sequence(&spec).unwrap();
    let borderline = (0..=40).map(|i| (out.sequence[i] - 2f64.powi(-(i as i32 + 1))).abs()).fold(0.0, f64::max);
    let pass = converged == 1000 && borderline <= 1e-14;
    report(
        6,
        "De Giorgi recurrence",
        pass,
        &format!("{converged}/1000 random specs at 0.99 x threshold converged within 200 iterations; borderline max error {borderline:.2e} (<= 1e-14)"),
    );
    assert!(pass);
}

#[test]
fn criterion_7_exponent_engine() {
    // Exact rational values derived by hand from the exponent definitions.
    // Fields: r1, δ1..δ4, z1..z3, μ0, s1, ρ, s2, s̃2, s3, κ1..κ6.
    type Row = ((f64, usize, f64, f64, f64), [f64; 20]);
    let cases: [Row; 3] = [
        (
            (0.5, 1, 4.0, 1.0, 1.5),
            [
                19.0 / 2.0, 11.0 / 19.0, 96.0 / 133.0, 11.0 / 19.0, 96.0 / 133.0, 114.0 / 229.0, 152.0 / 229.0, 1.0,
                4.0 / 3.0, 1.0, 4.0, 3.0, 7.0 / 4.0, 4.0 / 3.0, 49.0 / 11.0, 409.0 / 33.0, 15.0 / 4.0, 607.0 / 132.0,
                23.0 / 12.0, 13.0 / 4.0,
            ],
        ),
        (
            (0.5, 2, 4.0, 1.0, 1.5),
            [
                13.0 / 2.0, 5.0 / 13.0, 48.0 / 91.0, 5.0 / 13.0, 48.0 / 91.0, 78.0 / 139.0, 104.0 / 139.0, 1.0,
                4.0 / 3.0, 3.0 / 2.0, 10.0 / 3.0, 3.0, 7.0 / 4.0, 3.0 / 2.0, 31.0 / 5.0, 751.0 / 40.0, 15.0 / 4.0,
                317.0 / 40.0, 19.0 / 8.0, 31.0 / 8.0,
            ],
        ),
        (
            (2.0 / 3.0, 2, 3.0, 1.1, 1.8),
            [
                13.0 / 3.0, 4.0 / 13.0, 54.0 / 91.0, 31.0 / 143.0, 477.0 / 1001.0, 429.0 / 739.0, 1287.0 / 1478.0, 1.0,
                3.0 / 2.0, 9.0 / 8.0, 34.0 / 9.0, 7.0, 21.0 / 4.0, 9.0 / 8.0, 15.0 / 2.0, 2971.0 / 64.0, 27.0 / 4.0,
                451.0 / 64.0, 57.0 / 32.0, 75.0 / 32.0,
            ],
        ),
    ];
    let mut worst_bundle = 0.0_f64;
    for ((a, n, alpha, p1, s0), expect) in cases {
        let b = exponent_bundle(a, n, alpha, p1, s0).unwrap();
        let got = [
            b.r1, b.delta1, b.delta2, b.delta3, b.delta4, b.z1, b.z2, b.z3, b.mu0, b.s1, b.rho, b.s2, b.s2_tilde, b.s3,
            b.kappa1, b.kappa2, b.kappa3, b.kappa4, b.kappa5, b.kappa6,
        ];
        for (g, e) in got.iter().zip(expect) {
            worst_bundle = worst_bundle.max((g - e).abs());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut tested, mut worst_identity) = (0, 0.0_f64);
    while tested < 100 {
        let a = rng.gen_range(0.05..0.95);
        let n = rng.gen_range(1..=2);
        let alpha = rng.gen_range(2.0..8.0);
        let s0 = rng.gen_range((2.0 * n as f64 / (n as f64 + 2.0) + 1e-3)..1.999);
        let r1: f64 = alpha * (1.0 + (2.0 - a) / n as f64) - a;
        let p1 = rng.gen_range(1.0..(r1 / alpha));
        if let Ok(b) = exponent_bundle(a, n, alpha, p1, s0) {
            worst_identity = b.identity_residuals().into_iter().fold(worst_identity, f64::max);
            tested += 1;
        }
    }
    let pass = worst_bundle <= 1e-12 && worst_identity <= 1e-12;
    report(
        7,
        "exponent engine",
        pass,
        &format!("3 hand-derived bundles max error {worst_bundle:.2e}; identities over {tested} random inputs max residual {worst_identity:.2e} (<= 1e-12)"),
    );
    assert!(pass);
}

#[test]
fn criterion_8_embedding_and_luk_stability() {
    const MAX_DRIFT: f64 = 0.20;
    let law = ConstitutiveLaw::new(ForchheimerPolynomial::two_term(1.0, 1.0).unwrap());
    let a = law.degree_exponent();
    let mut drifts = Vec::new();
    for grid in [Grid::new_1d(32, 1.0).unwrap(), Grid::new_2d(12, 12, 1.0, 1.0).unwrap()] {
        for homogeneous in [true, false] {
            let corpus = smooth_corpus(&grid, 50, homogeneous, 8 + grid.dim() as u64);
            let sob = refinement_drift(&corpus, &grid, 1.0, 8, |c| check_sob4(c, 4.0, a, homogeneous)).unwrap();
            let w = refinement_drift(&corpus, &grid, 1.0, 8, |c| check_weighted_embedding(c, &law, 1.5, homogeneous))
                .unwrap();
            drifts.push((format!("sob4 {}D h={homogeneous}", grid.dim()), sob.drift()));
            drifts.push((format!("weighted {}D h={homogeneous}", grid.dim()), w.drift()));
        }
    }
    // Gradient truncation on smooth bumps with M = max|∇w| / 2.
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let bumps: Vec<(f64, f64)> = (0..10).map(|_| (rng.gen_range(0.5..3.0), rng.gen_range(-0.4..0.4))).collect();
    let luk_max = |cells: usize| -> f64 {
        let grid = Grid::new_1d(cells, 1.0).unwrap();
        let frame = BoundaryFrame::zero(&grid, 0.0);
        bumps
            .iter()
            .map(|&(amp, b)| {
                let pi = std::f64::consts::PI;
                let w = |x: f64| amp * (pi * x).sin().powi(3) * (1.0 + b * (2.0 * pi * x).cos());
                let field = ScalarField::from_fn(grid, 0.0, |x| w(x[0])).unwrap();
                let slope = (0..2000)
                    .map(|i| {
                        let x = i as f64 / 2000.0;
                        ((w(x + 1e-6) - w(x - 1e-6)) / 2e-6).abs()
                    })
                    .fold(0.0, f64::max);
                check_luk(&field, &frame, &law, 0.5 * slope, 2.0, 0.0).unwrap().ratio()
            })
            .fold(0.0, f64::max)
    };
    let (coarse, fine) = (luk_max(64), luk_max(128));
    drifts.push(("luk 1D".into(), (fine - coarse).abs() / coarse));
    let worst = drifts.iter().map(|d| d.1).fold(0.0, f64::max);
    let pass = worst < MAX_DRIFT;
    let detail: Vec<String> = drifts.iter().map(|(n, d)| format!("{n} {:.2}%", 100.0 * d)).collect();
    report(
        8,
        "embedding and truncation ratio stability",
        pass,
        &format!("worst drift {:.2}% (< 20%): {}", 100.0 * worst, detail.join(", ")),
    );
    assert!(pass);
}

#[test]
fn criterion_9_fitted_constant_transfer() {
    let start = Instant::now();
    let base: toml::Table = include_str!("../configs/periodic_1d.toml").parse().unwrap();
    let mut series = Vec::new();
    let mut first = None;
    for seed in 1..=15 {
        let mut t = base.clone();
        apply_override(&mut t, "initial.seed", &seed.to_string()).unwrap();
        let config = RunConfig::from_table(t).unwrap();
        let record = config.execute().unwrap();
        assert!(record.complete);
        series.push(record.series);
        first.get_or_insert(config);
    }
    let config = first.unwrap();
    let bundle = config.bundle().unwrap();
    let settings = config.verify.probe_settings();
    let family: Vec<_> = series.iter().collect();
    let (train, holdout) = family.split_at(10);
    let mut lines = Vec::new();
    let mut pass = true;
    for id in DEFAULT_SHAPES {
        let check = fit_theorem_constant(id, train, holdout, &bundle, &settings).unwrap();
        pass &= check.passed && check.holdout_max_ratio <= 1.5 && check.train_max_ratio <= 1.0 + 1e-12;
        lines.push(format!("{id} C={:.3e} holdout {:.3}", check.fitted.c, check.holdout_max_ratio));
    }
    let elapsed = start.elapsed().as_secs_f64();
    pass &= elapsed < 900.0;
    report(
        9,
        "fitted-constant transfer",
        pass,
        &format!("10 train / 5 holdout runs, holdout L/RHS <= 1.5: {}; {elapsed:.1} s", lines.join("; ")),
    );
    assert!(pass);
}
