//! One implicit run of the reduced equation with static boundary data and the
//! recorded functional series.

use forchlab::constitutive::{ConstitutiveLaw, ForchheimerPolynomial};
use forchlab::discretization::{BoundaryExpressions, BoundaryData, Grid, ScalarField};
use forchlab::solver::{run_ibvp, RunOptions, SolverConfig};

fn main() -> forchlab::Result<()> {
    let law = ConstitutiveLaw::new(ForchheimerPolynomial::new(vec![0.0, 0.5, 1.0], vec![1.0, 0.5, 0.25])?);
    let grid = Grid::new_1d(64, 1.0)?;
    let boundary = BoundaryData::from_expressions(&BoundaryExpressions {
        psi: "2 * x".into(),
        psi_x: Some("2".into()),
        psi_xx: Some("0".into()),
        ..Default::default()
    })?;
    let p0 = ScalarField::from_fn(grid, 0.0, |x| 2.0 * x[0] + 3.0 * (std::f64::consts::PI * x[0]).sin())?;
    let config = SolverConfig::implicit(1e-3, 0.5);
    let record = run_ibvp(&config, &law, p0, &boundary, &RunOptions::default())?;

    let s = &record.series;
    println!("{} steps, complete = {}", record.steps, record.complete);
    for t in [0.0, 0.05, 0.1, 0.25, 0.5] {
        println!(
            "t = {t:4.2}  |pbar|_L2 = {:.6e}  |grad p|_inf = {:.6e}  margin = {:+.3e}",
            s.value_at("pbar_L2", t)?,
            s.value_at("grad_Linf", t)?,
            s.value_at("mp_margin", t)?
        );
    }
    Ok(())
}
