//! Monte Carlo direct ARQ against the closed form, for several attempt counts.

use relay_arq::channel::{SystemConfig, TrialStreams};
use relay_arq::outage::{arq_outage, outage_interference};
use relay_arq::sim::simulate_direct;

fn main() -> relay_arq::Result<()> {
    let trials = 100_000;
    let root = TrialStreams::new(2024);
    for (k, snr) in [0.0, 10.0, 20.0, 30.0].into_iter().enumerate() {
        for retx in [1, 2, 3] {
            let cfg = SystemConfig { retx, ..SystemConfig::direct_example().with_snr_db(snr) };
            let est = simulate_direct(&cfg, trials, root.child((k as u64) << 8 | u64::from(retx)))?;
            let exact = arq_outage(outage_interference(&cfg)?, retx);
            println!(
                "{snr:>4} dB, L={retx}: mc {:.5} ± {:.5}, closed form {exact:.5}",
                est.p_hat, est.ci_halfwidth
            );
        }
    }
    Ok(())
}
