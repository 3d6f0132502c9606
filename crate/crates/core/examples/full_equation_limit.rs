//! As `κ → ∞` the full equation in rescaled time approaches the reduced one.

use forchlab::constitutive::{ConstitutiveLaw, ForchheimerPolynomial};
use forchlab::discretization::{BoundaryData, BoundaryExpressions, Grid, ScalarField};
use forchlab::solver::{run_full_equation, run_ibvp, FullEquation, RunOptions, SolverConfig};

fn main() -> forchlab::Result<()> {
    let law = ConstitutiveLaw::new(ForchheimerPolynomial::two_term(1.0, 1.0)?);
    let grid = Grid::new_1d(32, 1.0)?;
    let boundary = BoundaryData::from_expressions(&BoundaryExpressions {
        psi: "x".into(),
        psi_x: Some("1".into()),
        psi_xx: Some("0".into()),
        ..Default::default()
    })?;
    let p0 = ScalarField::from_fn(grid, 0.0, |x| x[0] + (std::f64::consts::PI * x[0]).sin())?;
    let options = RunOptions {
        tracked: Some(vec!["sup_p".into()]),
        ..Default::default()
    };
    let config = SolverConfig::implicit(1e-3, 0.2);
    let reduced = run_ibvp(&config, &law, p0.clone(), &boundary, &options)?;
    let reference = reduced.final_state().expect("snapshots");
    for kappa in [1.0, 10.0, 100.0, 1000.0] {
        let full = config.clone().with_full_equation(FullEquation { kappa, phi: 0.3 });
        let rec = run_full_equation(&full, &law, p0.clone(), &boundary, &options)?;
        let diff = rec.final_state().expect("snapshots").max_abs_diff(reference);
        println!("kappa = {kappa:7.1}  max |p_full - p_reduced| at tau = 0.2: {diff:.4e}");
    }
    Ok(())
}
