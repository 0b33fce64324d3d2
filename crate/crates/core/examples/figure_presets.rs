//! The three figure presets at reduced trial counts, printed as CSV.

use relay_arq::cli::to_csv;
use relay_arq::sim::{run_experiment, Experiment, Preset};

fn main() -> relay_arq::Result<()> {
    for (preset, trials) in [(Preset::Fig1, 20_000), (Preset::Fig2, 1_000), (Preset::Fig3, 1_000)] {
        let mut exp = Experiment::preset(preset);
        exp.trials = trials;
        println!("# {} ({trials} trials per point)", preset.name());
        print!("{}", to_csv(&run_experiment(&exp)?));
        println!();
    }
    Ok(())
}
