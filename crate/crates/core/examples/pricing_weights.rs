//! Exponential pricing with two user classes: how class-1 goodput share moves
//! with its weight.
//!
//! `cargo run --release --example pricing_weights`

use ofdma_sra::snr_model::{conditional_snr_dists, draw_channel, mmse_estimate};
use ofdma_sra::{default_kappa, solve_dsra, ChannelConfig, McsTable, ProblemInstance, UtilitySpec};

fn main() -> ofdma_sra::Result<()> {
    let cfg = ChannelConfig::new(16, 4, 2, 10.0, 0.0)?;
    let trials = 10;
    println!("{:>6} {:>14} {:>14}", "w1", "class-1 share", "total goodput");
    for w1 in [0.25, 0.5, 1.0, 2.0, 4.0] {
        let (mut share, mut total) = (0.0, 0.0);
        for t in 0..trials {
            let real = draw_channel(&cfg, 100 + t);
            let est = mmse_estimate(&cfg, &real, 200 + t)?;
            let utility = UtilitySpec::ExpPricing { weights: vec![w1, w1, 1.0, 1.0] };
            let inst = ProblemInstance::new(16, McsTable::qam(4, 4)?, utility, conditional_snr_dists(&est, 32)?, cfg.total_power())?;
            let d = solve_dsra(&inst, default_kappa(inst.p_con()))?;
            let per_user: Vec<f64> = (0..4)
                .map(|k| (0..16).filter_map(|n| d.allocation.choices()[n].filter(|c| c.0 == k).map(|(_, m)| inst.combo(n, k, m).expected_goodput(d.allocation.power[inst.dims().index(n, k, m)]))).sum())
                .collect();
            let sum: f64 = per_user.iter().sum();
            total += sum / trials as f64;
            share += (per_user[0] + per_user[1]) / sum / trials as f64;
        }
        println!("{w1:>6} {share:>14.3} {total:>14.3}");
    }
    Ok(())
}
