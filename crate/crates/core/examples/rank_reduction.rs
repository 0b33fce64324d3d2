//! Purifying a high-rank SDP certificate to a rank-one pair that meets the
//! same SINR constraints.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use relay_arq::channel::complex_gaussian;
use relay_arq::linalg::herm_eig;
use relay_arq::relay_multi::{max_min_sinr, rank_reduce, Formulation, Lifted, MultiuserOptions};
use relay_arq::sdp::{solve_feasibility, SolverOptions};

fn main() -> relay_arq::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (pr, noise, n) = (200.0, 1.0, 3);
    let h1 = complex_gaussian(&mut rng, 3, 4.0);
    let h2 = complex_gaussian(&mut rng, 3, 4.0);
    let t_star = max_min_sinr(&h1, &h2, pr, noise, n, &MultiuserOptions::default())?.t_star;

    // a target well inside the feasible set gives an interior, full-rank point
    let lifted = Lifted::new(&h1, &h2, pr, noise, n, Formulation::Full)?;
    let inst = lifted.instance.at_target(0.5 * t_star);
    let out = solve_feasibility(&inst, &SolverOptions::exact());
    let [x1, x2] = out.x.expect("feasible below t*");
    let spectrum = |x: &relay_arq::linalg::ComplexMatrix| herm_eig(x).map(|e| e.rank(1e-9));
    println!("target {:.4}, certificate ranks ({}, {})", inst.target, spectrum(&x1)?, spectrum(&x2)?);
    println!("gaps before: {:?}", inst.gaps(&x1, &x2));

    let state = rank_reduce(&x1, &x2, &inst)?;
    println!("W over {} iterations: {:?}", state.iterations(), state.w_history);
    println!("ranks after: ({}, {})", state.r1, state.r2);
    println!("gaps after:  {:?}", inst.gaps(&state.z1, &state.z2));
    Ok(())
}
