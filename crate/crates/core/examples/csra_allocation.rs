//! Relaxed allocation on one estimated channel draw.
//!
//! `cargo run --release --example csra_allocation`

use ofdma_sra::snr_model::{conditional_snr_dists, draw_channel, mmse_estimate};
use ofdma_sra::{default_kappa, polish_csra, solve_csra, ChannelConfig, McsTable, ProblemInstance, UtilitySpec};

fn main() -> ofdma_sra::Result<()> {
    let cfg = ChannelConfig::new(16, 4, 2, 10.0, -10.0)?;
    let real = draw_channel(&cfg, 1);
    let est = mmse_estimate(&cfg, &real, 2)?;
    let inst = ProblemInstance::new(16, McsTable::qam(4, 4)?, UtilitySpec::Goodput, conditional_snr_dists(&est, 32)?, cfg.total_power())?;

    let kappa = default_kappa(inst.p_con());
    let r = solve_csra(&inst, kappa)?;
    println!("μ bracket [{:.6}, {:.6}] after {} updates, λ = {:.4}", r.mu_lo, r.mu_hi, r.iterations, r.lambda);
    println!("relaxed utility {:.4}, certificate {:.2e}", r.utility, r.gap_bound);

    let best = polish_csra(&inst, &r)?;
    println!("polished utility {:.4} ({:?})", best.utility, best.source);
    let dims = inst.dims();
    for n in 0..dims.n_sub {
        let row: Vec<String> = (0..dims.n_users)
            .flat_map(|k| (0..dims.n_mcs).map(move |m| (k, m)))
            .filter_map(|(k, m)| {
                let i = dims.index(n, k, m);
                (best.allocation.indicator[i] > 1e-9).then(|| format!("u{k}/m{m} I={:.2} x={:.3}", best.allocation.indicator[i], best.allocation.power[i]))
            })
            .collect();
        println!("subchannel {n:2}: {}", if row.is_empty() { "idle".into() } else { row.join(", ") });
    }
    Ok(())
}
