//! The fast-decay recurrence below and above its threshold.

use forchlab::estimates::{degiorgi_sequence, RecurrenceSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> forchlab::Result<()> {
    let borderline = RecurrenceSpec::new(vec![1.0], vec![1.0], 2.0, 0.5, 40)?;
    let out = degiorgi_sequence(&borderline)?;
    println!("threshold {}, Y_10 = {:e} (2^-11 = {:e})", out.threshold, out.sequence[10], 2f64.powi(-11));

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut converged, mut worst) = (0, 0);
    for _ in 0..1000 {
        let spec = RecurrenceSpec::random(&mut rng, 0.99, 200);
        let out = degiorgi_sequence(&spec)?;
        if out.converged {
            converged += 1;
            worst = worst.max(out.iterations_to_converge().unwrap_or(0));
        }
    }
    println!("0.99 x threshold: {converged}/1000 converged, slowest after {worst} iterations");

    let above = RecurrenceSpec::new(vec![1.0], vec![1.0], 2.0, 0.6, 200)?;
    let out = degiorgi_sequence(&above)?;
    println!("Y0 = 0.6 > threshold: converged = {}, diverged at {:?}", out.converged, out.diverged_at);
    Ok(())
}
