//! Pilot-based channel estimation and the resulting SNR distributions.
//!
//! `cargo run --release --example channel_estimation`

use ofdma_sra::snr_model::{conditional_snr_dists, draw_channel, MmseFilter};
use ofdma_sra::ChannelConfig;

fn main() -> ofdma_sra::Result<()> {
    for pilot_db in [-10.0, 0.0, 10.0, 30.0] {
        let cfg = ChannelConfig::new(16, 2, 2, 10.0, pilot_db)?;
        let filter = MmseFilter::new(&cfg)?;
        let real = draw_channel(&cfg, 5);
        let est = filter.estimate_from(&filter.observe(&real, 6));
        let dists = conditional_snr_dists(&est, 32)?;
        let mse: f64 = (0..16).map(|n| (real.freq_gains[(n, 0)] - est.mean[(n, 0)]).norm_sqr()).sum::<f64>() / 16.0;
        println!("pilot {pilot_db:>5} dB: error variance {:.4}, squared error on user 0 {mse:.4}", est.est_error_var);
        for n in [0, 5, 10] {
            let d = &dists[n * 2];
            println!("  subchannel {n:2}: true γ {:.3}, E{{γ|est}} {:.3}, atoms {}", real.true_snr[(n, 0)], d.mean(), d.len());
        }
    }
    Ok(())
}
