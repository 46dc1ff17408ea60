//! Distance to the optimal multiplier per update: bisection against the
//! diminishing-step subgradient method.
//!
//! `cargo run --release --example subgradient_vs_bisection`

use ofdma_sra::csra::bisection_trace;
use ofdma_sra::experiments::subgradient_baseline;
use ofdma_sra::snr_model::{conditional_snr_dists, draw_channel, mmse_estimate};
use ofdma_sra::{solve_csra, ChannelConfig, McsTable, ProblemInstance, UtilitySpec};

fn main() -> ofdma_sra::Result<()> {
    let cfg = ChannelConfig::new(16, 4, 2, 10.0, -10.0)?;
    let real = draw_channel(&cfg, 3);
    let est = mmse_estimate(&cfg, &real, 4)?;
    let inst = ProblemInstance::new(16, McsTable::qam(4, 4)?, UtilitySpec::Goodput, conditional_snr_dists(&est, 32)?, cfg.total_power())?;

    let r = solve_csra(&inst, 1e-12)?;
    let mu_ref = r.mu_mid();
    let bis = bisection_trace(&inst, 15)?;
    let sub_1 = subgradient_baseline(&inst, 15, 1.0)?.distance_to(mu_ref);
    let sub_tuned = subgradient_baseline(&inst, 15, 1e-3)?.distance_to(mu_ref);
    println!("μ* ≈ {mu_ref:.8}");
    println!("{:>4} {:>12} {:>14} {:>14}", "i", "bisection", "subgrad(1)", "subgrad(1e-3)");
    for i in 0..15 {
        println!("{:>4} {:>12.3e} {:>14.3e} {:>14.3e}", i + 1, (bis[i] - mu_ref).abs(), sub_1[i], sub_tuned[i]);
    }
    Ok(())
}
