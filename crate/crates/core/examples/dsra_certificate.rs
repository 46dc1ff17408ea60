//! Discrete allocation, its gap certificate and the exhaustive optimum on
//! small instances.
//!
//! `cargo run --release --example dsra_certificate`

use ofdma_sra::{brute_force_dsra, default_kappa, solve_dsra, McsTable, ProblemInstance, SnrDistribution, UtilitySpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> ofdma_sra::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    println!("{:>4} {:>10} {:>10} {:>10} {:>10} {:>6}", "inst", "U_dsra", "U_exact", "gap", "bound", "exact");
    for i in 0..8 {
        let dists = (0..12).map(|_| SnrDistribution::point_mass(0.05 - (1.0 - rng.random::<f64>()).ln())).collect();
        let inst = ProblemInstance::new(4, McsTable::qam(3, 2)?, UtilitySpec::Goodput, dists, 6.0)?;
        let d = solve_dsra(&inst, default_kappa(inst.p_con()))?;
        let bf = brute_force_dsra(&inst)?;
        println!(
            "{i:>4} {:>10.5} {:>10.5} {:>10.2e} {:>10.2e} {:>6}",
            d.utility,
            bf.utility,
            bf.utility - d.utility,
            d.certificate(inst.p_con()),
            d.exact_from_relaxation
        );
    }
    Ok(())
}
