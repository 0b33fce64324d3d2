//! Null-steering relay beamformer: serve one user, put nothing on the other.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use relay_arq::channel::complex_gaussian;
use relay_arq::relay_single::{single_user_optimum, solve_single_user_beamformer};

fn main() -> relay_arq::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (pr, n) = (100.0, 3);
    for m in [2, 3, 4, 6] {
        let protect = complex_gaussian(&mut rng, m, 4.0);
        let target = complex_gaussian(&mut rng, m, 4.0);
        let bf = solve_single_user_beamformer(&protect, &target, pr, n)?;
        println!(
            "M={m}: gain {:10.4} (optimum {:10.4}), leak {:.1e}, power {:.6}",
            bf.gain(&target),
            single_user_optimum(&protect, &target, pr),
            bf.null_residual,
            bf.power
        );
    }
    Ok(())
}
