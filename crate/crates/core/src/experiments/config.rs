//! Scenario configuration (TOML).
//!
//! ```toml
//! [channel]
//! n_subchannels = 16
//! n_users = 4
//! n_taps = 2
//! snr_db = 10.0
//! pilot_snr_db = -10.0
//!
//! [mcs]
//! preset = "qam"        # or "capacity"
//! n_mcs = 4
//!
//! [utility]
//! kind = "goodput"      # weighted_goodput | exp_pricing | capacity_log
//!
//! [sweep]
//! variable = "pilot_snr_db"   # n_users | snr_db | weight_w1
//! values = [-10.0, 0.0, 10.0]
//!
//! [run]
//! n_trials = 50
//! seed = 1
//! ```
//!
//! Every section except `[sweep]` may be omitted; unknown keys are rejected.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::csra::DEFAULT_KAPPA_TIMES_PCON;
use crate::error::{Error, Result};
use crate::snr_model::ChannelConfig;
use crate::utility::{McsTable, UtilitySpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub channel: ChannelSection,
    #[serde(default)]
    pub mcs: McsSection,
    #[serde(default)]
    pub utility: UtilitySection,
    pub sweep: SweepSection,
    #[serde(default)]
    pub run: RunSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChannelSection {
    pub n_subchannels: usize,
    pub n_users: usize,
    pub n_taps: usize,
    pub snr_db: f64,
    pub pilot_snr_db: f64,
}

impl Default for ChannelSection {
    fn default() -> Self {
        Self {
            n_subchannels: 16,
            n_users: 4,
            n_taps: 2,
            snr_db: 10.0,
            pilot_snr_db: -10.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum McsPreset {
    /// Uncoded QAM with `m = 1..=n_mcs`.
    Qam,
    /// One MCS with `a = b = r = 1`.
    Capacity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct McsSection {
    pub preset: McsPreset,
    pub n_mcs: u32,
}

impl Default for McsSection {
    fn default() -> Self {
        Self {
            preset: McsPreset::Qam,
            n_mcs: 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UtilityKind {
    Goodput,
    WeightedGoodput,
    ExpPricing,
    CapacityLog,
}

/// Per-user weights come from `weights` (one per user) or from
/// `class_weights = [w1, w2]`, where the first `⌈K/2⌉` users form class 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct UtilitySection {
    pub kind: UtilityKind,
    pub weights: Option<Vec<f64>>,
    pub class_weights: Option<[f64; 2]>,
    pub scale: Option<f64>,
}

impl Default for UtilitySection {
    fn default() -> Self {
        Self {
            kind: UtilityKind::Goodput,
            weights: None,
            class_weights: None,
            scale: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    PilotSnrDb,
    NUsers,
    SnrDb,
    WeightW1,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::PilotSnrDb => "pilot_snr_db",
            SweepVariable::NUsers => "n_users",
            SweepVariable::SnrDb => "snr_db",
            SweepVariable::WeightW1 => "weight_w1",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub variable: SweepVariable,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunSection {
    pub n_trials: usize,
    pub seed: u64,
    /// `κ·P_con`.
    pub kappa_times_pcon: f64,
    pub n_atoms: usize,
    pub schemes: Vec<Scheme>,
    pub subgradient_updates: usize,
    pub subgradient_scale: f64,
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            n_trials: 50,
            seed: 0,
            kappa_times_pcon: DEFAULT_KAPPA_TIMES_PCON,
            n_atoms: 32,
            schemes: Scheme::ALL.to_vec(),
            subgradient_updates: 25,
            subgradient_scale: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Scheme {
    #[serde(rename = "CSRA-PCSI")]
    CsraPcsi,
    #[serde(rename = "CSRA-ICSI")]
    CsraIcsi,
    #[serde(rename = "DSRA-ICSI")]
    DsraIcsi,
    #[serde(rename = "FP-RUS")]
    FpRus,
    #[serde(rename = "SUBGRAD-ICSI")]
    SubgradIcsi,
}

impl Scheme {
    pub const ALL: [Scheme; 5] = [Scheme::CsraPcsi, Scheme::CsraIcsi, Scheme::DsraIcsi, Scheme::FpRus, Scheme::SubgradIcsi];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::CsraPcsi => "CSRA-PCSI",
            Scheme::CsraIcsi => "CSRA-ICSI",
            Scheme::DsraIcsi => "DSRA-ICSI",
            Scheme::FpRus => "FP-RUS",
            Scheme::SubgradIcsi => "SUBGRAD-ICSI",
        }
    }

    /// Parses a comma-separated list such as `CSRA-ICSI,FP-RUS`.
    pub fn parse_list(s: &str) -> Result<Vec<Scheme>> {
        let list: Vec<Scheme> = s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(str::parse).collect::<Result<_>>()?;
        if list.is_empty() {
            return Err(Error::config("schemes", "scheme list is empty"));
        }
        Ok(list)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|sch| sch.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::config("schemes", format!("unknown scheme `{s}`")))
    }
}

/// Settings for one point of the sweep.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub value: f64,
    pub channel: ChannelConfig,
    pub mcs: McsTable,
    pub utility: UtilitySpec,
}

impl ScenarioConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let de = toml::Deserializer::parse(text).map_err(|e| Error::config("<root>", e.to_string().trim_end()))?;
        let cfg: ScenarioConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::config(path, e.into_inner().message().trim_end())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    /// Checks every field and that every sweep point yields a valid setup.
    pub fn validate(&self) -> Result<()> {
        let r = &self.run;
        if r.n_trials == 0 {
            return Err(Error::config("run.n_trials", "must be at least 1"));
        }
        if r.n_atoms == 0 {
            return Err(Error::config("run.n_atoms", "must be at least 1"));
        }
        if !(r.kappa_times_pcon.is_finite() && r.kappa_times_pcon > 0.0) {
            return Err(Error::config("run.kappa_times_pcon", "must be positive"));
        }
        if r.schemes.is_empty() {
            return Err(Error::config("run.schemes", "must name at least one scheme"));
        }
        if r.subgradient_updates == 0 {
            return Err(Error::config("run.subgradient_updates", "must be at least 1"));
        }
        if !(r.subgradient_scale.is_finite() && r.subgradient_scale > 0.0) {
            return Err(Error::config("run.subgradient_scale", "must be positive"));
        }
        if self.sweep.values.is_empty() {
            return Err(Error::config("sweep.values", "must not be empty"));
        }
        if self.mcs.preset == McsPreset::Qam && !(1..=15).contains(&self.mcs.n_mcs) {
            return Err(Error::config("mcs.n_mcs", "QAM preset supports 1..=15"));
        }
        let u = &self.utility;
        if u.weights.is_some() && u.class_weights.is_some() {
            return Err(Error::config("utility", "give either `weights` or `class_weights`, not both"));
        }
        if self.sweep.variable == SweepVariable::WeightW1 && u.class_weights.is_none() {
            return Err(Error::config("sweep.variable", "weight_w1 sweeps need `utility.class_weights`"));
        }
        if self.sweep.variable == SweepVariable::NUsers && u.weights.is_some() {
            return Err(Error::config("sweep.variable", "n_users sweeps cannot use per-user `utility.weights`"));
        }
        for &v in &self.sweep.values {
            self.point(v)?;
        }
        Ok(())
    }

    /// The channel, MCS table and utility at sweep value `value`.
    pub fn point(&self, value: f64) -> Result<SweepPoint> {
        let mut ch = self.channel.clone();
        let mut class_weights = self.utility.class_weights;
        let var = self.sweep.variable;
        let bad_value = |msg: &str| Error::config("sweep.values", format!("{value}: {msg}"));
        if !value.is_finite() {
            return Err(bad_value("not finite"));
        }
        match var {
            SweepVariable::PilotSnrDb => ch.pilot_snr_db = value,
            SweepVariable::SnrDb => ch.snr_db = value,
            SweepVariable::NUsers => {
                if value < 1.0 || value.fract() != 0.0 {
                    return Err(bad_value("user count must be a positive integer"));
                }
                ch.n_users = value as usize;
            }
            SweepVariable::WeightW1 => {
                if let Some(w) = class_weights.as_mut() {
                    w[0] = value;
                }
            }
        }
        let channel = ChannelConfig::new(ch.n_subchannels, ch.n_users, ch.n_taps, ch.snr_db, ch.pilot_snr_db).map_err(|e| Error::config("channel", e.to_string()))?;
        let k = ch.n_users;
        let mcs = match self.mcs.preset {
            McsPreset::Qam => McsTable::qam(k, self.mcs.n_mcs).map_err(|e| Error::config("mcs", e.to_string()))?,
            McsPreset::Capacity => McsTable::capacity(k),
        };
        let weights = || -> Result<Vec<f64>> {
            if let Some(w) = &self.utility.weights {
                return Ok(w.clone());
            }
            if let Some([w1, w2]) = class_weights {
                let split = k.div_ceil(2);
                return Ok((0..k).map(|i| if i < split { w1 } else { w2 }).collect());
            }
            Ok(vec![1.0; k])
        };
        let utility = match self.utility.kind {
            UtilityKind::Goodput => UtilitySpec::Goodput,
            UtilityKind::WeightedGoodput => UtilitySpec::WeightedGoodput { weights: weights()? },
            UtilityKind::ExpPricing => UtilitySpec::ExpPricing { weights: weights()? },
            UtilityKind::CapacityLog => UtilitySpec::CapacityLog {
                scale: self.utility.scale.unwrap_or(1.0 / k as f64),
            },
        };
        utility.validate(k).map_err(|e| Error::config("utility", e.to_string()))?;
        if utility.goodput_limit().is_some_and(|lim| mcs.max_rate() > lim) {
            return Err(Error::config("mcs.preset", "capacity_log utility needs the capacity preset"));
        }
        Ok(SweepPoint {
            value,
            channel,
            mcs,
            utility,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "[sweep]\nvariable = \"pilot_snr_db\"\nvalues = [-10.0, 0.0]\n";

    #[test]
    fn defaults_are_desk_scale() {
        let cfg = ScenarioConfig::from_toml_str(MINIMAL).unwrap();
        assert_eq!(cfg.channel.n_subchannels, 16);
        assert_eq!(cfg.channel.n_users, 4);
        assert_eq!(cfg.mcs.n_mcs, 4);
        assert_eq!(cfg.run.n_trials, 50);
        assert_eq!(cfg.run.n_atoms, 32);
        assert_eq!(cfg.run.schemes.len(), 5);
    }

    #[test]
    fn unknown_key_reports_path() {
        let text = format!("{MINIMAL}[channel]\nn_userz = 3\n");
        match ScenarioConfig::from_toml_str(&text) {
            Err(Error::Config { path, message }) => {
                assert_eq!(path, "channel.n_userz");
                assert!(message.contains("n_userz"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn wrong_type_reports_path() {
        let text = format!("{MINIMAL}[run]\nn_trials = \"many\"\n");
        match ScenarioConfig::from_toml_str(&text) {
            Err(Error::Config { path, .. }) => assert_eq!(path, "run.n_trials"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn semantic_errors() {
        let empty = "[sweep]\nvariable = \"snr_db\"\nvalues = []\n";
        assert!(matches!(ScenarioConfig::from_toml_str(empty), Err(Error::Config { path, .. }) if path == "sweep.values"));
        let zero = format!("{MINIMAL}[run]\nn_trials = 0\n");
        assert!(matches!(ScenarioConfig::from_toml_str(&zero), Err(Error::Config { path, .. }) if path == "run.n_trials"));
        let w1 = "[sweep]\nvariable = \"weight_w1\"\nvalues = [0.5]\n";
        assert!(ScenarioConfig::from_toml_str(w1).is_err());
        let users = "[sweep]\nvariable = \"n_users\"\nvalues = [1.5]\n";
        assert!(ScenarioConfig::from_toml_str(users).is_err());
        let cap = format!("{MINIMAL}[utility]\nkind = \"capacity_log\"\n");
        assert!(matches!(ScenarioConfig::from_toml_str(&cap), Err(Error::Config { path, .. }) if path == "mcs.preset"));
    }

    #[test]
    fn class_weights_split_users() {
        let text = "[channel]\nn_users = 5\n[utility]\nkind = \"exp_pricing\"\nclass_weights = [0.85, 1.0]\n[sweep]\nvariable = \"weight_w1\"\nvalues = [2.0]\n";
        let cfg = ScenarioConfig::from_toml_str(text).unwrap();
        let p = cfg.point(2.0).unwrap();
        assert_eq!(
            p.utility,
            UtilitySpec::ExpPricing {
                weights: vec![2.0, 2.0, 2.0, 1.0, 1.0]
            }
        );
    }

    #[test]
    fn scheme_names_round_trip() {
        for s in Scheme::ALL {
            assert_eq!(s.name().parse::<Scheme>().unwrap(), s);
        }
        assert_eq!(Scheme::parse_list("csra-icsi, FP-RUS").unwrap(), vec![Scheme::CsraIcsi, Scheme::FpRus]);
        assert!(Scheme::parse_list("CSRA").is_err());
        let text = format!("{MINIMAL}[run]\nschemes = [\"DSRA-ICSI\"]\n");
        assert_eq!(ScenarioConfig::from_toml_str(&text).unwrap().run.schemes, vec![Scheme::DsraIcsi]);
    }
}
