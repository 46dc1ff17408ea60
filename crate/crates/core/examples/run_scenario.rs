//! Runs a scenario config and writes its CSV and manifest outputs.
//!
//! `cargo run --release --example run_scenario -- configs/pilot_sweep.toml out/pilot 5`
//!
//! The optional third argument overrides the trial count.

use ofdma_sra::experiments::{run_scenario, write_outputs, ScenarioConfig};

fn main() -> ofdma_sra::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let path = args.first().map_or("configs/pilot_sweep.toml", String::as_str);
    let out = args.get(1).map_or("out/example", String::as_str);
    let mut cfg = ScenarioConfig::load(path)?;
    cfg.run.n_trials = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(5);

    let output = run_scenario(&cfg)?;
    write_outputs(&output, out.as_ref())?;
    for row in &output.summary {
        let gap = row.gap_bound_mean.map_or(String::new(), |g| format!(", gap/subch {g:.2e}"));
        println!("{} = {:>6}  {:<13} {:.4} ± {:.4}{gap}", row.sweep_var, row.sweep_value, row.scheme, row.goodput_mean, row.goodput_stderr);
    }
    Ok(())
}
