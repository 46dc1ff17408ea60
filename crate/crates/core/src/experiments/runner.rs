use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::baselines::{fp_rus_baseline, perfect_csi_run, subgradient_baseline};
use super::config::{ScenarioConfig, Scheme, SweepPoint};
use crate::csra::{polish_csra, solve_csra};
use crate::dsra::solve_dsra_from;
use crate::dual::ProblemInstance;
use crate::error::{Error, Result};
use crate::seed::{derive_seed, STREAM_CHANNEL, STREAM_PILOT};
use crate::snr_model::{conditional_snr_dists, draw_channel, perfect_csi_dists, MmseFilter};

/// One scheme's outcome on one channel draw. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub sweep_var: &'static str,
    pub sweep_value: f64,
    pub trial: usize,
    pub scheme: Scheme,
    pub goodput_per_subchannel: f64,
    pub utility: f64,
    pub gap_bound_per_subchannel: Option<f64>,
    pub mu_lo: Option<f64>,
    pub mu_hi: Option<f64>,
    pub iters: Option<u32>,
    pub runtime_ms: f64,
}

/// Per (sweep value, scheme) aggregate. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub sweep_var: &'static str,
    pub sweep_value: f64,
    pub scheme: Scheme,
    pub n_trials: usize,
    pub goodput_mean: f64,
    pub goodput_stderr: f64,
    pub utility_mean: f64,
    pub utility_stderr: f64,
    pub gap_bound_mean: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub crate_name: &'static str,
    pub crate_version: &'static str,
    /// SHA-256 of the effective configuration rendered as TOML.
    pub config_sha256: String,
    pub root_seed: u64,
    pub seed_rule: &'static str,
    pub sweep_variable: &'static str,
    pub sweep_values: Vec<f64>,
    pub n_trials: usize,
    pub schemes: Vec<Scheme>,
    /// `trial_seeds[s][t]` for sweep index `s` and trial `t`.
    pub trial_seeds: Vec<Vec<u64>>,
}

#[derive(Debug, Clone)]
pub struct ScenarioOutput {
    pub records: Vec<TrialRecord>,
    pub summary: Vec<SummaryRow>,
    pub manifest: Manifest,
}

/// Seed of trial `trial` at sweep index `sweep_index`.
pub fn trial_seed(root: u64, sweep_index: usize, trial: usize) -> u64 {
    derive_seed(root, &[sweep_index as u64, trial as u64])
}

/// Runs every trial at every sweep value. Trials run in parallel on the
/// current rayon pool; the output does not depend on scheduling.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ScenarioOutput> {
    cfg.validate()?;
    let points: Vec<SweepPoint> = cfg.sweep.values.iter().map(|&v| cfg.point(v)).collect::<Result<_>>()?;
    let filters: Vec<MmseFilter> = points.iter().map(|p| MmseFilter::new(&p.channel)).collect::<Result<_>>()?;
    let schemes = selected_schemes(&cfg.run.schemes);
    let n_trials = cfg.run.n_trials;

    let jobs: Vec<(usize, usize)> = (0..points.len()).flat_map(|s| (0..n_trials).map(move |t| (s, t))).collect();
    let per_trial: Vec<Vec<TrialRecord>> = jobs
        .par_iter()
        .map(|&(s, t)| run_trial(cfg, &points[s], &filters[s], &schemes, trial_seed(cfg.run.seed, s, t), t))
        .collect::<Result<_>>()?;
    let records: Vec<TrialRecord> = per_trial.into_iter().flatten().collect();
    let summary = summarize(&records, &points, &schemes);

    let manifest = Manifest {
        crate_name: env!("CARGO_PKG_NAME"),
        crate_version: env!("CARGO_PKG_VERSION"),
        config_sha256: config_hash(cfg)?,
        root_seed: cfg.run.seed,
        seed_rule: "trial seed = derive_seed(root_seed, [sweep_index, trial]); channel stream 0, pilot stream 1, scheduler stream 2",
        sweep_variable: cfg.sweep.variable.name(),
        sweep_values: cfg.sweep.values.clone(),
        n_trials,
        schemes: schemes.clone(),
        trial_seeds: (0..points.len()).map(|s| (0..n_trials).map(|t| trial_seed(cfg.run.seed, s, t)).collect()).collect(),
    };
    Ok(ScenarioOutput { records, summary, manifest })
}

fn selected_schemes(requested: &[Scheme]) -> Vec<Scheme> {
    Scheme::ALL.into_iter().filter(|s| requested.contains(s)).collect()
}

fn config_hash(cfg: &ScenarioConfig) -> Result<String> {
    let text = toml::to_string(cfg).map_err(|e| Error::config("<root>", e.to_string()))?;
    Ok(Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect())
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// All selected schemes on one channel draw.
pub fn run_trial(cfg: &ScenarioConfig, point: &SweepPoint, filter: &MmseFilter, schemes: &[Scheme], seed: u64, trial: usize) -> Result<Vec<TrialRecord>> {
    let ch = &point.channel;
    let n = ch.n_subchannels() as f64;
    let p_con = ch.total_power();
    let kappa = cfg.run.kappa_times_pcon / p_con;

    let real = draw_channel(ch, derive_seed(seed, &[STREAM_CHANNEL]));
    let est = filter.estimate_from(&filter.observe(&real, derive_seed(seed, &[STREAM_PILOT])));
    let icsi = ProblemInstance::new(ch.n_subchannels(), point.mcs.clone(), point.utility.clone(), conditional_snr_dists(&est, cfg.run.n_atoms)?, p_con)?;

    let record = |scheme: Scheme, goodput: f64, utility: f64, gap: Option<f64>, mu: Option<(f64, f64)>, iters: Option<u32>, runtime_ms: f64| TrialRecord {
        sweep_var: cfg.sweep.variable.name(),
        sweep_value: point.value,
        trial,
        scheme,
        goodput_per_subchannel: goodput / n,
        utility,
        gap_bound_per_subchannel: gap.map(|g| g / n),
        mu_lo: mu.map(|m| m.0),
        mu_hi: mu.map(|m| m.1),
        iters,
        runtime_ms,
    };

    let mut out = Vec::with_capacity(schemes.len());
    let mut csra_icsi = None;
    for &scheme in schemes {
        let start = Instant::now();
        match scheme {
            Scheme::CsraPcsi => {
                let pcsi = icsi.with_dists(perfect_csi_dists(&real))?;
                let r = perfect_csi_run(&pcsi, kappa)?;
                let best = polish_csra(&pcsi, &r)?;
                let g = best.allocation.expected_goodput(&pcsi);
                out.push(record(scheme, g, best.utility, Some(r.gap_bound), Some((r.mu_lo, r.mu_hi)), Some(r.iterations), elapsed_ms(start)));
            }
            Scheme::CsraIcsi | Scheme::DsraIcsi => {
                let csra = match csra_icsi.take() {
                    Some(c) => c,
                    None => solve_csra(&icsi, kappa)?,
                };
                if scheme == Scheme::CsraIcsi {
                    let best = polish_csra(&icsi, &csra)?;
                    let g = best.allocation.expected_goodput(&icsi);
                    out.push(record(scheme, g, best.utility, Some(csra.gap_bound), Some((csra.mu_lo, csra.mu_hi)), Some(csra.iterations), elapsed_ms(start)));
                } else {
                    let d = solve_dsra_from(&icsi, &csra, kappa)?;
                    let g = d.allocation.expected_goodput(&icsi);
                    out.push(record(scheme, g, d.utility, Some(d.gap_bound), Some((csra.mu_lo, csra.mu_hi)), Some(csra.iterations), elapsed_ms(start)));
                }
                csra_icsi = Some(csra);
            }
            Scheme::FpRus => {
                let r = fp_rus_baseline(&icsi, seed)?;
                out.push(record(scheme, r.expected_goodput, r.utility, None, None, None, elapsed_ms(start)));
            }
            Scheme::SubgradIcsi => {
                let t = subgradient_baseline(&icsi, cfg.run.subgradient_updates, cfg.run.subgradient_scale)?;
                let g = t.allocation.expected_goodput(&icsi);
                let u = *t.utility.last().expect("at least one update");
                let mu = t.last_mu();
                out.push(record(scheme, g, u, None, Some((mu, mu)), Some(t.mu.len() as u32), elapsed_ms(start)));
            }
        }
    }
    Ok(out)
}

fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn summarize(records: &[TrialRecord], points: &[SweepPoint], schemes: &[Scheme]) -> Vec<SummaryRow> {
    let mut rows = Vec::new();
    for p in points {
        for &scheme in schemes {
            let sel: Vec<&TrialRecord> = records.iter().filter(|r| r.sweep_value == p.value && r.scheme == scheme).collect();
            if sel.is_empty() {
                continue;
            }
            let goodput: Vec<f64> = sel.iter().map(|r| r.goodput_per_subchannel).collect();
            let utility: Vec<f64> = sel.iter().map(|r| r.utility).collect();
            let gaps: Option<Vec<f64>> = sel.iter().map(|r| r.gap_bound_per_subchannel).collect();
            let (goodput_mean, goodput_stderr) = mean_stderr(&goodput);
            let (utility_mean, utility_stderr) = mean_stderr(&utility);
            rows.push(SummaryRow {
                sweep_var: sel[0].sweep_var,
                sweep_value: p.value,
                scheme,
                n_trials: sel.len(),
                goodput_mean,
                goodput_stderr,
                utility_mean,
                utility_stderr,
                gap_bound_mean: gaps.map(|g| mean_stderr(&g).0),
            });
        }
    }
    rows
}

/// Writes `trials.csv`, `summary.csv` and `manifest.json` into `dir`, creating it if needed.
pub fn write_outputs(output: &ScenarioOutput, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_csv(&dir.join("trials.csv"), &output.records)?;
    write_csv(&dir.join("summary.csv"), &output.summary)?;
    let path = dir.join("manifest.json");
    let json = serde_json::to_string_pretty(&output.manifest).expect("manifest serializes");
    std::fs::write(&path, json + "\n").map_err(|e| Error::io(&path, e))
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = csv::Writer::from_writer(file);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}
