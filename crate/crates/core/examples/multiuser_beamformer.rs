//! Max-min SINR relay beamforming for two users, solved with each SDP lift.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use relay_arq::channel::complex_gaussian;
use relay_arq::relay_multi::{max_min_sinr, sinr_upper_bound, Formulation, MultiuserOptions};

fn main() -> relay_arq::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (pr, noise, n) = (200.0, 1.0, 3);
    let h1 = complex_gaussian(&mut rng, 3, 4.0);
    let h2 = complex_gaussian(&mut rng, 3, 4.0);
    println!("single-user bound: {:.4}", sinr_upper_bound(&h1, &h2, pr, noise));

    for formulation in [Formulation::Span, Formulation::Reduced, Formulation::Full] {
        let opts = MultiuserOptions { formulation, ..Default::default() };
        let start = Instant::now();
        let bf = max_min_sinr(&h1, &h2, pr, noise, n, &opts)?;
        println!(
            "{:>7}: t* {:.4} in {} steps, SINRs ({:.4}, {:.4}), power {:.4}, ranks {:?} -> {:?}, {:.1} ms",
            formulation.name(),
            bf.t_star,
            bf.bisection_steps,
            bf.achieved_sinr[0],
            bf.achieved_sinr[1],
            bf.total_power,
            bf.certificate_ranks,
            bf.ranks,
            start.elapsed().as_secs_f64() * 1e3
        );
    }
    Ok(())
}
