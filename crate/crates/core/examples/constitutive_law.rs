//! Evaluate `s(ξ)`, `K`, `K'` and `H` for a two-term Forchheimer law and fit
//! the bound constants `d₁, d₂, d₃`.

use forchlab::constitutive::{ConstitutiveLaw, ForchheimerPolynomial};

fn main() -> forchlab::Result<()> {
    let law = ConstitutiveLaw::new(ForchheimerPolynomial::two_term(1.0, 1.0)?);
    println!("a = {}", law.degree_exponent());
    println!("{:>10} {:>14} {:>14} {:>14} {:>14}", "xi", "s", "K", "K'", "H");
    for xi in [0.0, 0.1, 1.0, 2.0, 6.0, 100.0, 1e4] {
        println!(
            "{xi:>10.1e} {:>14.8e} {:>14.8e} {:>14.8e} {:>14.8e}",
            law.solve_s(xi)?,
            law.eval_K(xi)?,
            law.eval_K_prime(xi)?,
            law.eval_H(xi)?
        );
    }
    // For g(s) = 1 + s the root is explicit: K(2) = 1/2 and K(6) = 1/3.
    println!("K(2) - 1/2 = {:e}", law.eval_K(2.0)? - 0.5);

    let fit = law.fit_bounds(1e6, 10_000)?;
    println!("d1 = {:.6}, d2 = {:.6}, d3 = {:.6}", fit.d1, fit.d2, fit.d3);
    Ok(())
}
