//! Derived exponents for three admissible parameter sets.

use forchlab::functionals::exponent_bundle;

fn main() -> forchlab::Result<()> {
    for (a, n, alpha, p1, s0) in [(0.5, 1, 4.0, 1.0, 1.5), (0.5, 2, 4.0, 1.0, 1.5), (2.0 / 3.0, 2, 3.0, 1.1, 1.8)] {
        let b = exponent_bundle(a, n, alpha, p1, s0)?;
        println!("a = {a:.4}, n = {n}, alpha = {alpha}, p1 = {p1}, s0 = {s0}");
        println!("  r1 = {:.6}  delta = [{:.6}, {:.6}, {:.6}, {:.6}]", b.r1, b.delta1, b.delta2, b.delta3, b.delta4);
        println!("  z = [{:.6}, {:.6}, {:.6}]  mu0 = {:.6}", b.z1, b.z2, b.z3, b.mu0);
        println!("  s1 = {:.6}  s2 = {:.6}  s3 = {:.6}  rho = {:.6}", b.s1, b.s2, b.s3, b.rho);
        println!("  identity residuals {:?}", b.identity_residuals());
    }
    Ok(())
}
