//! Manufactured solution `p* = e^{-t} sin(πx)` with `g(s) = 1 + s`.

use forchlab::constitutive::{ConstitutiveLaw, ForchheimerPolynomial};
use forchlab::discretization::{BoundaryData, BoundaryExpressions};
use forchlab::solver::{run_manufactured, ManufacturedStudy};

fn main() -> forchlab::Result<()> {
    let law = ConstitutiveLaw::new(ForchheimerPolynomial::two_term(1.0, 1.0)?);
    let exact = BoundaryData::from_expressions(&BoundaryExpressions {
        psi: "exp(-t) * sin(pi * x)".into(),
        psi_t: Some("-exp(-t) * sin(pi * x)".into()),
        psi_x: Some("pi * exp(-t) * cos(pi * x)".into()),
        psi_xx: Some("-pi^2 * exp(-t) * sin(pi * x)".into()),
        ..Default::default()
    })?;
    let report = run_manufactured(&ManufacturedStudy::standard_1d(0.1)?, &law, &exact)?;
    print!("{}", report.table());
    Ok(())
}
