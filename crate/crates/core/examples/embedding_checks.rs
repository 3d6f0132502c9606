//! Empirical constants of the parabolic embeddings and the gradient-truncation
//! inequality on a smooth corpus, with their drift under one refinement.

use forchlab::constitutive::{ConstitutiveLaw, ForchheimerPolynomial};
use forchlab::discretization::{BoundaryFrame, Grid, ScalarField};
use forchlab::estimates::{check_luk, check_sob4, check_weighted_embedding, refinement_drift, smooth_corpus};

fn main() -> forchlab::Result<()> {
    let law = ConstitutiveLaw::new(ForchheimerPolynomial::two_term(1.0, 1.0)?);
    let a = law.degree_exponent();
    let grid = Grid::new_1d(64, 1.0)?;
    for homogeneous in [true, false] {
        let corpus = smooth_corpus(&grid, 50, homogeneous, 11);
        let sob = refinement_drift(&corpus, &grid, 1.0, 16, |c| check_sob4(c, 4.0, a, homogeneous))?;
        let weighted = refinement_drift(&corpus, &grid, 1.0, 16, |c| check_weighted_embedding(c, &law, 1.5, homogeneous))?;
        println!(
            "homogeneous = {homogeneous}: sob4 max {:.4} -> {:.4} ({:.2}%), weighted max {:.4} -> {:.4} ({:.2}%)",
            sob.coarse,
            sob.fine,
            100.0 * sob.drift(),
            weighted.coarse,
            weighted.fine,
            100.0 * weighted.drift()
        );
    }

    // A bump with steep interior gradient and small boundary gradient.
    for cells in [64, 128] {
        let grid = Grid::new_1d(cells, 1.0)?;
        let w = ScalarField::from_fn(grid, 0.0, |x| (std::f64::consts::PI * x[0]).sin().powi(3))?;
        let frame = BoundaryFrame::zero(&grid, 0.0);
        let out = check_luk(&w, &frame, &law, 1.0, 2.0, 0.0)?;
        println!("LUK on {cells} cells: lhs {:.6e}, rhs {:.6e}, ratio {:.6}", out.lhs, out.rhs, out.ratio());
    }
    Ok(())
}
