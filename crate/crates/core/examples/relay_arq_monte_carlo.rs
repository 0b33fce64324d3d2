//! Relay-assisted ARQ with a shared relay, against direct ARQ with the same
//! number of attempts.

use relay_arq::channel::{SystemConfig, TrialStreams};
use relay_arq::sim::{simulate_direct, simulate_relay, RelayOptions};

fn main() -> relay_arq::Result<()> {
    let trials = 2_000;
    let root = TrialStreams::new(99);
    for (k, rate) in [2.0, 4.0, 6.0].into_iter().enumerate() {
        let cfg = SystemConfig::relay_example().with_snr_db(25.0).with_rate(rate);
        let relay = simulate_relay(&cfg, trials, root.child(2 * k as u64), &RelayOptions::default())?;
        let direct = simulate_direct(&SystemConfig { retx: 2, ..cfg.clone() }, trials, root.child(2 * k as u64 + 1))?;
        println!(
            "R={rate}: relay {:.4} (users {:.4} / {:.4}), direct {:.4}, modes none/single/multi {:?}, dropped {}",
            relay.pooled.p_hat,
            relay.user[0].p_hat,
            relay.user[1].p_hat,
            direct.p_hat,
            relay.mode_counts,
            relay.solver_failures
        );
    }
    Ok(())
}
