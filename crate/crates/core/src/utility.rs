//! Goodput model and the closed family of concave utilities.

use crate::error::{Error, Result};
use crate::snr_model::SnrDistribution;

/// Error-model constants and rate of one modulation-and-coding scheme:
/// codeword error probability `a·exp(-b·p·γ)` at rate `r` bits per codeword.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mcs {
    pub a: f64,
    pub b: f64,
    pub r: f64,
}

impl Mcs {
    pub fn new(a: f64, b: f64, r: f64) -> Result<Self> {
        if !(a > 0.0 && a <= 1.0) {
            return Err(Error::invalid(format!("MCS constant a = {a} must lie in (0, 1]")));
        }
        if !(b.is_finite() && b > 0.0) || !(r.is_finite() && r > 0.0) {
            return Err(Error::invalid(format!("MCS constants b = {b}, r = {r} must be positive")));
        }
        Ok(Self { a, b, r })
    }

    /// Uncoded `2^(m+1)`-QAM with one symbol per codeword, `m` counted from 1.
    pub fn qam(m: u32) -> Self {
        let levels = 2f64.powi(m as i32 + 1);
        Self {
            a: 1.0,
            b: 1.5 / (levels - 1.0),
            r: m as f64 + 1.0,
        }
    }
}

/// Per-(user, MCS) table of [`Mcs`] entries.
#[derive(Debug, Clone, PartialEq)]
pub struct McsTable {
    n_users: usize,
    n_mcs: usize,
    entries: Vec<Mcs>,
}

impl McsTable {
    /// `entries` in row-major `k * M + m` order.
    pub fn new(n_users: usize, n_mcs: usize, entries: Vec<Mcs>) -> Result<Self> {
        if n_users == 0 || n_mcs == 0 {
            return Err(Error::invalid("MCS table needs at least one user and one scheme"));
        }
        if entries.len() != n_users * n_mcs {
            return Err(Error::invalid(format!(
                "MCS table has {} entries, expected {}",
                entries.len(),
                n_users * n_mcs
            )));
        }
        for e in &entries {
            Mcs::new(e.a, e.b, e.r)?;
        }
        Ok(Self { n_users, n_mcs, entries })
    }

    /// The same MCS rows for every user.
    pub fn uniform(n_users: usize, rows: &[Mcs]) -> Result<Self> {
        let entries = (0..n_users).flat_map(|_| rows.iter().copied()).collect();
        Self::new(n_users, rows.len(), entries)
    }

    /// QAM orders `m = 1..=n_mcs` for every user.
    pub fn qam(n_users: usize, n_mcs: u32) -> Result<Self> {
        let rows: Vec<Mcs> = (1..=n_mcs).map(Mcs::qam).collect();
        Self::uniform(n_users, &rows)
    }

    /// Single scheme with `a = b = r = 1`; paired with [`UtilitySpec::CapacityLog`]
    /// the expected utility becomes `E{log(1 + pγ)}`.
    pub fn capacity(n_users: usize) -> Self {
        Self::uniform(n_users, &[Mcs { a: 1.0, b: 1.0, r: 1.0 }]).expect("valid constants")
    }

    pub fn n_users(&self) -> usize {
        self.n_users
    }

    pub fn n_mcs(&self) -> usize {
        self.n_mcs
    }

    #[inline]
    pub fn get(&self, k: usize, m: usize) -> Mcs {
        self.entries[k * self.n_mcs + m]
    }

    pub fn max_rate(&self) -> f64 {
        self.entries.iter().map(|e| e.r).fold(0.0, f64::max)
    }
}

/// Expected bits delivered per codeword: `(1 - a·exp(-b·p·γ))·r`.
#[inline]
pub fn goodput(p: f64, gamma: f64, mcs: Mcs) -> f64 {
    (1.0 - mcs.a * (-mcs.b * p * gamma).exp()) * mcs.r
}

/// Utility family shared by all users of a problem instance.
#[derive(Debug, Clone, PartialEq)]
pub enum UtilitySpec {
    /// `u(g) = g`
    Goodput,
    /// `u(g) = w_k·g`
    WeightedGoodput { weights: Vec<f64> },
    /// `u(g) = 1 - exp(-w_k·g)`
    ExpPricing { weights: Vec<f64> },
    /// `u(g) = scale·ln(1 - ln(1 - g))` on `g ∈ [0, 1)`
    CapacityLog { scale: f64 },
}

impl UtilitySpec {
    pub fn validate(&self, n_users: usize) -> Result<()> {
        match self {
            UtilitySpec::Goodput => Ok(()),
            UtilitySpec::WeightedGoodput { weights } | UtilitySpec::ExpPricing { weights } => {
                if weights.len() != n_users {
                    return Err(Error::invalid(format!("{} utility weights for {} users", weights.len(), n_users)));
                }
                if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
                    return Err(Error::invalid(format!("utility weight {w} must be positive")));
                }
                Ok(())
            }
            UtilitySpec::CapacityLog { scale } => {
                if scale.is_finite() && *scale > 0.0 {
                    Ok(())
                } else {
                    Err(Error::invalid(format!("capacity utility scale {scale} must be positive")))
                }
            }
        }
    }

    /// The concrete utility of user `k`.
    #[inline]
    pub fn for_user(&self, k: usize) -> Utility {
        match self {
            UtilitySpec::Goodput => Utility::Linear { weight: 1.0 },
            UtilitySpec::WeightedGoodput { weights } => Utility::Linear { weight: weights[k] },
            UtilitySpec::ExpPricing { weights } => Utility::ExpPricing { weight: weights[k] },
            UtilitySpec::CapacityLog { scale } => Utility::CapacityLog { scale: *scale },
        }
    }

    /// Largest goodput the utility accepts, if bounded.
    pub fn goodput_limit(&self) -> Option<f64> {
        match self {
            UtilitySpec::CapacityLog { .. } => Some(1.0),
            _ => None,
        }
    }
}

/// A single user's utility with analytic first derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Utility {
    Linear { weight: f64 },
    ExpPricing { weight: f64 },
    CapacityLog { scale: f64 },
}

impl Utility {
    #[inline]
    pub fn value(self, g: f64) -> f64 {
        match self {
            Utility::Linear { weight } => weight * g,
            Utility::ExpPricing { weight } => -(-weight * g).exp_m1(),
            Utility::CapacityLog { scale } => scale * (-(-g).ln_1p()).ln_1p(),
        }
    }

    #[inline]
    pub fn derivative(self, g: f64) -> f64 {
        match self {
            Utility::Linear { weight } => weight,
            Utility::ExpPricing { weight } => weight * (-weight * g).exp(),
            Utility::CapacityLog { scale } => scale / ((1.0 - g) * (1.0 - (-g).ln_1p())),
        }
    }
}

/// `E{u(goodput(p, γ))}` over the atoms of `dist`.
pub fn expected_utility(dist: &SnrDistribution, p: f64, mcs: Mcs, u: Utility) -> f64 {
    match u {
        Utility::CapacityLog { scale } if mcs.r == 1.0 => {
            // -ln(1 - g) = b·p·γ - ln a exactly, without forming g.
            let ln_a = mcs.a.ln();
            dist.expect(|gamma| scale * (mcs.b * p * gamma - ln_a).ln_1p())
        }
        _ => dist.expect(|gamma| u.value(goodput(p, gamma, mcs))),
    }
}

/// Expected goodput `E{goodput(p, γ)}`.
pub fn expected_goodput(dist: &SnrDistribution, p: f64, mcs: Mcs) -> f64 {
    dist.expect(|gamma| goodput(p, gamma, mcs))
}

/// Marginal expected utility of power:
/// `a·b·r·E{u'(goodput(p, γ))·γ·exp(-b·p·γ)}`.
///
/// Strictly decreasing in `p` whenever the distribution has mass above zero.
#[inline]
pub fn marginal_value(dist: &SnrDistribution, p: f64, mcs: Mcs, u: Utility) -> f64 {
    if let Utility::CapacityLog { scale } = u {
        if mcs.r == 1.0 {
            let ln_a = mcs.a.ln();
            return scale * mcs.b * dist.expect(|gamma| gamma / (1.0 + mcs.b * p * gamma - ln_a));
        }
    }
    let abr = mcs.a * mcs.b * mcs.r;
    abr * dist.expect(|gamma| {
        let decay = (-mcs.b * p * gamma).exp();
        u.derivative((1.0 - mcs.a * decay) * mcs.r) * gamma * decay
    })
}
