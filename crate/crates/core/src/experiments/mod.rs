//! Monte-Carlo scenario runner: channel draws, pilot-aided estimation, the
//! proposed solvers and the baselines, aggregated into CSV files.

mod baselines;
mod config;
mod runner;

pub use baselines::{fp_rus_baseline, perfect_csi_run, subgradient_baseline, FpRusResult, SubgradientTrace};
pub use config::{ChannelSection, McsPreset, McsSection, RunSection, ScenarioConfig, Scheme, SweepPoint, SweepSection, SweepVariable, UtilityKind, UtilitySection};
pub use runner::{run_scenario, run_trial, trial_seed, write_outputs, Manifest, ScenarioOutput, SummaryRow, TrialRecord};
