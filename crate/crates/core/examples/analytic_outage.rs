//! Closed-form outage of the two-cell direct link, with and without the
//! neighbouring cell, cross-checked by characteristic-function inversion.

use relay_arq::channel::SystemConfig;
use relay_arq::outage::{arq_outage, cf_inversion_outage, outage_interference, outage_single_user};

fn main() -> relay_arq::Result<()> {
    println!("{:>6} {:>12} {:>12} {:>12} {:>12}", "SNR", "no interf.", "interf.", "inversion", "interf. L=2");
    for snr in (0..=40).step_by(5) {
        let cfg = SystemConfig::direct_example().with_snr_db(snr as f64);
        let p = outage_interference(&cfg)?;
        println!(
            "{:>6} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e}",
            snr,
            outage_single_user(&cfg),
            p,
            cf_inversion_outage(&cfg)?,
            arq_outage(p, 2)
        );
    }

    // with σ1² = γσ2² the interference-limited outage sits at 1/2 for any SNR
    let mut cfg = SystemConfig::direct_example().with_snr_db(120.0);
    cfg.var_direct = cfg.gamma() * cfg.var_cross;
    println!("\nfloor at 120 dB: {:.6}", outage_interference(&cfg)?);
    Ok(())
}
