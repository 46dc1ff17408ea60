//! Per-combination dual machinery for the sum-power constrained problem.
//!
//! For a multiplier `μ` every (subchannel, user, MCS) combination gets the
//! power that balances its marginal expected utility against `μ`; each
//! subchannel is then handed to the combination with the most negative
//! V-metric `-E{U} + μ·p`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::snr_model::SnrDistribution;
use crate::utility::{expected_goodput, expected_utility, marginal_value, Mcs, McsTable, Utility, UtilitySpec};

/// Function-value tolerance of the power root-find, relative to `μ`.
pub const ROOT_REL_TOL: f64 = 1e-9;
const ROOT_MAX_ITERS: usize = 200;
const ROOT_POWER_REL_TOL: f64 = 1e-12;
/// Relative tolerance for membership in a winner set.
pub const TIE_REL_TOL: f64 = 1e-9;

/// Shape of an `N × K × M` allocation tensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dims {
    pub n_sub: usize,
    pub n_users: usize,
    pub n_mcs: usize,
}

impl Dims {
    pub fn new(n_sub: usize, n_users: usize, n_mcs: usize) -> Self {
        Self { n_sub, n_users, n_mcs }
    }

    /// Number of (n, k, m) combinations.
    pub fn len(&self) -> usize {
        self.n_sub * self.per_subchannel()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of (k, m) pairs on one subchannel.
    pub fn per_subchannel(&self) -> usize {
        self.n_users * self.n_mcs
    }

    #[inline]
    pub fn index(&self, n: usize, k: usize, m: usize) -> usize {
        (n * self.n_users + k) * self.n_mcs + m
    }

    #[inline]
    pub fn split(&self, idx: usize) -> (usize, usize, usize) {
        let m = idx % self.n_mcs;
        let nk = idx / self.n_mcs;
        (nk / self.n_users, nk % self.n_users, m)
    }
}

/// One scheduling/resource-allocation problem: SNR laws, MCS table,
/// utilities and the total power budget.
#[derive(Debug, Clone)]
pub struct ProblemInstance {
    dims: Dims,
    mcs: McsTable,
    utility: UtilitySpec,
    dists: Vec<SnrDistribution>,
    p_con: f64,
}

impl ProblemInstance {
    /// `dists` holds one distribution per (n, k) in row-major `n * K + k` order.
    pub fn new(n_sub: usize, mcs: McsTable, utility: UtilitySpec, dists: Vec<SnrDistribution>, p_con: f64) -> Result<Self> {
        let dims = Dims::new(n_sub, mcs.n_users(), mcs.n_mcs());
        if n_sub == 0 {
            return Err(Error::invalid("instance needs at least one subchannel"));
        }
        if dists.len() != n_sub * dims.n_users {
            return Err(Error::invalid(format!(
                "{} SNR distributions for {} subchannels × {} users",
                dists.len(),
                n_sub,
                dims.n_users
            )));
        }
        if !(p_con.is_finite() && p_con > 0.0) {
            return Err(Error::invalid(format!("power budget {p_con} must be positive")));
        }
        utility.validate(dims.n_users)?;
        if let Some(limit) = utility.goodput_limit() {
            if mcs.max_rate() > limit {
                return Err(Error::invalid(format!(
                    "rate {} can reach goodput outside the utility domain [0, {limit})",
                    mcs.max_rate()
                )));
            }
        }
        Ok(Self {
            dims,
            mcs,
            utility,
            dists,
            p_con,
        })
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn p_con(&self) -> f64 {
        self.p_con
    }

    pub fn mcs_table(&self) -> &McsTable {
        &self.mcs
    }

    pub fn utility_spec(&self) -> &UtilitySpec {
        &self.utility
    }

    pub fn dist(&self, n: usize, k: usize) -> &SnrDistribution {
        &self.dists[n * self.dims.n_users + k]
    }

    pub fn dists(&self) -> &[SnrDistribution] {
        &self.dists
    }

    /// The same problem under a different power budget.
    pub fn with_p_con(&self, p_con: f64) -> Result<Self> {
        Self::new(self.dims.n_sub, self.mcs.clone(), self.utility.clone(), self.dists.clone(), p_con)
    }

    /// The same problem under a different utility family.
    pub fn with_utility(&self, utility: UtilitySpec) -> Result<Self> {
        Self::new(self.dims.n_sub, self.mcs.clone(), utility, self.dists.clone(), self.p_con)
    }

    /// The same problem with other SNR distributions.
    pub fn with_dists(&self, dists: Vec<SnrDistribution>) -> Result<Self> {
        Self::new(self.dims.n_sub, self.mcs.clone(), self.utility.clone(), dists, self.p_con)
    }

    /// Everything needed to evaluate combination `(n, k, m)`.
    #[inline]
    pub fn combo(&self, n: usize, k: usize, m: usize) -> Combo<'_> {
        Combo {
            dist: self.dist(n, k),
            mcs: self.mcs.get(k, m),
            utility: self.utility.for_user(k),
        }
    }

    #[inline]
    pub fn combo_at(&self, idx: usize) -> Combo<'_> {
        let (n, k, m) = self.dims.split(idx);
        self.combo(n, k, m)
    }
}

/// A single (n, k, m) combination.
#[derive(Debug, Clone, Copy)]
pub struct Combo<'a> {
    pub dist: &'a SnrDistribution,
    pub mcs: Mcs,
    pub utility: Utility,
}

impl Combo<'_> {
    pub fn expected_utility(&self, p: f64) -> f64 {
        expected_utility(self.dist, p, self.mcs, self.utility)
    }

    pub fn marginal_value(&self, p: f64) -> f64 {
        marginal_value(self.dist, p, self.mcs, self.utility)
    }

    pub fn expected_goodput(&self, p: f64) -> f64 {
        expected_goodput(self.dist, p, self.mcs)
    }

    pub fn power_root(&self, mu: f64) -> Result<f64> {
        power_root(self.dist, self.mcs, self.utility, mu)
    }

    /// `I·F(I, x)`: the convexified per-combination objective, zero when `I = 0`.
    pub fn perspective_cost(&self, indicator: f64, power: f64) -> f64 {
        if indicator == 0.0 {
            0.0
        } else {
            -indicator * self.expected_utility(power / indicator)
        }
    }
}

/// Power `p̃(μ)` at which the marginal expected utility equals `μ`, or 0 when
/// `μ` is at or above the activation threshold `marginal_value(0)`.
pub fn power_root(dist: &SnrDistribution, mcs: Mcs, u: Utility, mu: f64) -> Result<f64> {
    if !(mu.is_finite() && mu > 0.0) {
        return Err(Error::invalid(format!("multiplier {mu} must be positive and finite")));
    }
    let mv = |p: f64| marginal_value(dist, p, mcs, u);
    if mu >= mv(0.0) {
        return Ok(0.0);
    }
    let tol = ROOT_REL_TOL * mu;
    let (mut lo, mut hi) = (0.0, 1.0);
    while mv(hi) > mu {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::invalid(format!("no finite power reaches marginal value {mu}")));
        }
    }
    // Stop on the power bracket too: a flat marginal curve leaves the value
    // test satisfied long before the power has settled.
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..ROOT_MAX_ITERS {
        mid = 0.5 * (lo + hi);
        let v = mv(mid);
        if ((v - mu).abs() <= tol && hi - lo <= ROOT_POWER_REL_TOL * hi) || mid <= lo || mid >= hi {
            break;
        }
        if v > mu {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(mid)
}

/// `V(μ, p*) = -E{U(goodput(p*, γ))} + μ·p*`.
pub fn v_metric(dist: &SnrDistribution, mcs: Mcs, u: Utility, mu: f64, p_star: f64) -> f64 {
    -expected_utility(dist, p_star, mcs, u) + mu * p_star
}

/// Multiplier range that must contain the optimal `μ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuBounds {
    pub min: f64,
    pub max: f64,
}

impl MuBounds {
    pub fn width(&self) -> f64 {
        self.max - self.min
    }

    /// Bisection steps needed to shrink the range to `kappa`.
    pub fn bisection_steps(&self, kappa: f64) -> u32 {
        let ratio = self.width() / kappa;
        if ratio <= 1.0 {
            0
        } else {
            ratio.log2().ceil() as u32
        }
    }
}

/// `μ_min`: smallest marginal value at full budget; `μ_max`: largest marginal
/// value at zero power. Combinations that can never use power (all SNR mass
/// at zero) are ignored.
pub fn mu_bounds(inst: &ProblemInstance) -> Result<MuBounds> {
    let p_con = inst.p_con();
    let (min, max) = (0..inst.dims().len())
        .into_par_iter()
        .map(|idx| {
            let c = inst.combo_at(idx);
            let at_zero = c.marginal_value(0.0);
            if at_zero > 0.0 {
                (c.marginal_value(p_con), at_zero)
            } else {
                (f64::INFINITY, 0.0)
            }
        })
        .reduce(|| (f64::INFINITY, 0.0), |a, b| (a.0.min(b.0), a.1.max(b.1)));
    if !(max > 0.0) || !(min > 0.0) {
        return Err(Error::invalid("no combination gains utility from power; multiplier range is empty"));
    }
    Ok(MuBounds { min, max })
}

/// Winning (user, MCS) pairs on one subchannel.
#[derive(Debug, Clone, PartialEq)]
pub struct WinnerSet {
    /// Pairs within the tie tolerance of the minimal V; empty when that minimum is not negative,
    /// which happens exactly when every `p*` is zero.
    pub members: Vec<(usize, usize)>,
    /// Minimal V over all pairs on the subchannel.
    pub v_min: f64,
}

/// Which member of a tied winner set becomes the discrete allocation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieRule {
    MinPower,
    MaxPower,
}

/// `p*` and V for every combination at one multiplier.
#[derive(Debug, Clone)]
pub struct DualEvaluation {
    pub mu: f64,
    dims: Dims,
    /// `p*(μ)` per combination.
    pub powers: Vec<f64>,
    /// `V(μ, p*(μ))` per combination.
    pub v: Vec<f64>,
}

impl DualEvaluation {
    pub fn new(inst: &ProblemInstance, mu: f64) -> Result<Self> {
        let dims = inst.dims();
        let per_sub = dims.per_subchannel();
        let rows: Vec<Vec<(f64, f64)>> = (0..dims.n_sub)
            .into_par_iter()
            .map(|n| {
                (0..per_sub)
                    .map(|j| {
                        let c = inst.combo_at(n * per_sub + j);
                        let p = c.power_root(mu)?;
                        Ok((p, v_metric(c.dist, c.mcs, c.utility, mu, p)))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let (powers, v) = rows.into_iter().flatten().unzip();
        Ok(Self { mu, dims, powers, v })
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    /// `S_n(μ)` for every subchannel.
    pub fn winner_sets(&self) -> Vec<WinnerSet> {
        (0..self.dims.n_sub).map(|n| self.winner_set(n)).collect()
    }

    pub fn winner_set(&self, n: usize) -> WinnerSet {
        let per_sub = self.dims.per_subchannel();
        let row = &self.v[n * per_sub..(n + 1) * per_sub];
        let v_min = row.iter().copied().fold(f64::INFINITY, f64::min);
        let eps = TIE_REL_TOL * v_min.abs().max(1.0);
        let members = if !(v_min < 0.0) {
            Vec::new()
        } else {
            row.iter()
                .enumerate()
                .filter(|(_, &v)| v - v_min <= eps)
                .map(|(j, _)| (j / self.dims.n_mcs, j % self.dims.n_mcs))
                .collect()
        };
        WinnerSet { members, v_min }
    }

    /// Discrete allocation picking, per subchannel, the winner with the
    /// smallest (or largest) `p*`; remaining ties go to the smallest (k, m).
    pub fn allocation(&self, rule: TieRule) -> AllocationState {
        let mut alloc = AllocationState::zeros(self.dims);
        alloc.discrete = true;
        for n in 0..self.dims.n_sub {
            let ws = self.winner_set(n);
            let mut best: Option<(usize, f64)> = None;
            for &(k, m) in &ws.members {
                let idx = self.dims.index(n, k, m);
                let p = self.powers[idx];
                let better = match (best, rule) {
                    (None, _) => true,
                    (Some((_, bp)), TieRule::MinPower) => p < bp,
                    (Some((_, bp)), TieRule::MaxPower) => p > bp,
                };
                if better {
                    best = Some((idx, p));
                }
            }
            if let Some((idx, p)) = best {
                alloc.indicator[idx] = 1.0;
                alloc.power[idx] = p;
            }
        }
        alloc
    }

    /// `Σ I·p*` for a given indicator.
    pub fn total_power_for(&self, indicator: &[f64]) -> f64 {
        indicator.iter().zip(&self.powers).map(|(i, p)| i * p).sum()
    }

    /// Allocation `x = I·p*(μ)` for a fixed indicator.
    pub fn allocation_for(&self, indicator: &[f64]) -> AllocationState {
        AllocationState {
            dims: self.dims,
            indicator: indicator.to_vec(),
            power: indicator.iter().zip(&self.powers).map(|(i, p)| i * p).collect(),
            discrete: indicator.iter().all(|&i| i == 0.0 || i == 1.0),
        }
    }
}

/// `S_n(μ)` for every subchannel.
pub fn winner_sets(inst: &ProblemInstance, mu: f64) -> Result<Vec<WinnerSet>> {
    Ok(DualEvaluation::new(inst, mu)?.winner_sets())
}

/// Lagrangian-minimizing discrete allocation at `μ`.
pub fn allocation_at_mu(inst: &ProblemInstance, mu: f64, rule: TieRule) -> Result<AllocationState> {
    Ok(DualEvaluation::new(inst, mu)?.allocation(rule))
}

/// `X*(μ)`: total power of [`allocation_at_mu`].
pub fn total_power(inst: &ProblemInstance, mu: f64, rule: TieRule) -> Result<f64> {
    Ok(allocation_at_mu(inst, mu, rule)?.total_power())
}

/// Indicator tensor `I` and actual-power tensor `x = I·p`.
#[derive(Debug, Clone, PartialEq)]
pub struct AllocationState {
    dims: Dims,
    pub indicator: Vec<f64>,
    pub power: Vec<f64>,
    /// Set when every indicator entry is 0 or 1.
    pub discrete: bool,
}

impl AllocationState {
    pub fn zeros(dims: Dims) -> Self {
        Self {
            dims,
            indicator: vec![0.0; dims.len()],
            power: vec![0.0; dims.len()],
            discrete: true,
        }
    }

    /// Checked constructor.
    pub fn new(dims: Dims, indicator: Vec<f64>, power: Vec<f64>) -> Result<Self> {
        if indicator.len() != dims.len() || power.len() != dims.len() {
            return Err(Error::invalid("allocation tensors do not match the instance shape"));
        }
        let discrete = indicator.iter().all(|&i| i == 0.0 || i == 1.0);
        let a = Self {
            dims,
            indicator,
            power,
            discrete,
        };
        a.check()?;
        Ok(a)
    }

    /// One (k, m) or nothing per subchannel, with per-combination power `p`.
    pub fn from_choices(dims: Dims, choices: &[Option<(usize, usize)>], powers: &[f64]) -> Result<Self> {
        if choices.len() != dims.n_sub || powers.len() != dims.n_sub {
            return Err(Error::invalid("one choice and one power per subchannel expected"));
        }
        let mut a = Self::zeros(dims);
        for (n, (choice, &p)) in choices.iter().zip(powers).enumerate() {
            if let Some((k, m)) = *choice {
                if k >= dims.n_users || m >= dims.n_mcs {
                    return Err(Error::invalid(format!("choice ({k}, {m}) out of range")));
                }
                let idx = dims.index(n, k, m);
                a.indicator[idx] = 1.0;
                a.power[idx] = p;
            }
        }
        a.check()?;
        Ok(a)
    }

    /// Verifies box, per-subchannel sum and zero-power-off-support invariants.
    pub fn check(&self) -> Result<()> {
        for n in 0..self.dims.n_sub {
            let row = self.subchannel_indicator(n);
            if row.iter().any(|&i| !(0.0..=1.0).contains(&i)) {
                return Err(Error::invalid(format!("indicator on subchannel {n} leaves [0, 1]")));
            }
            let s: f64 = row.iter().sum();
            if s > 1.0 + 1e-9 {
                return Err(Error::invalid(format!("subchannel {n} is shared beyond 1 ({s})")));
            }
        }
        for (i, x) in self.indicator.iter().zip(&self.power) {
            if !(*x >= 0.0) || (*i == 0.0 && *x != 0.0) {
                return Err(Error::invalid("power must be nonnegative and vanish where the indicator does"));
            }
        }
        if self.discrete && self.indicator.iter().any(|&i| i != 0.0 && i != 1.0) {
            return Err(Error::invalid("allocation marked discrete has fractional entries"));
        }
        Ok(())
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn total_power(&self) -> f64 {
        self.power.iter().sum()
    }

    pub fn subchannel_indicator(&self, n: usize) -> &[f64] {
        let per = self.dims.per_subchannel();
        &self.indicator[n * per..(n + 1) * per]
    }

    /// Per-combination power `x / I`, zero where `I = 0`.
    pub fn per_combination_power(&self, idx: usize) -> f64 {
        let i = self.indicator[idx];
        if i == 0.0 {
            0.0
        } else {
            self.power[idx] / i
        }
    }

    /// Indices of combinations with a nonzero indicator.
    pub fn active(&self) -> impl Iterator<Item = usize> + '_ {
        self.indicator.iter().enumerate().filter(|(_, &i)| i != 0.0).map(|(idx, _)| idx)
    }

    /// Per-subchannel choice, for discrete allocations.
    pub fn choices(&self) -> Vec<Option<(usize, usize)>> {
        (0..self.dims.n_sub)
            .map(|n| {
                self.subchannel_indicator(n)
                    .iter()
                    .position(|&i| i == 1.0)
                    .map(|j| (j / self.dims.n_mcs, j % self.dims.n_mcs))
            })
            .collect()
    }

    /// Convex combination `λ·self + (1-λ)·other`.
    pub fn blend(&self, other: &Self, lambda: f64) -> Self {
        let mix = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| lambda * x + (1.0 - lambda) * y).collect::<Vec<_>>();
        let indicator = mix(&self.indicator, &other.indicator);
        let discrete = indicator.iter().all(|&i| i == 0.0 || i == 1.0);
        Self {
            dims: self.dims,
            power: mix(&self.power, &other.power),
            indicator,
            discrete,
        }
    }

    /// `Σ I·E{U(goodput(x/I, γ))}` with `0/0 = 0`.
    pub fn utility(&self, inst: &ProblemInstance) -> f64 {
        self.active()
            .map(|idx| self.indicator[idx] * inst.combo_at(idx).expected_utility(self.per_combination_power(idx)))
            .fold(0.0, |a, b| a + b)
    }

    /// `Σ I·E{goodput(x/I, γ)}`.
    pub fn expected_goodput(&self, inst: &ProblemInstance) -> f64 {
        self.active()
            .map(|idx| self.indicator[idx] * inst.combo_at(idx).expected_goodput(self.per_combination_power(idx)))
            .fold(0.0, |a, b| a + b)
    }

    /// Lagrangian `Σ I·F(I, x) + (Σx - P_con)·μ`.
    pub fn lagrangian(&self, inst: &ProblemInstance, mu: f64) -> f64 {
        -self.utility(inst) + (self.total_power() - inst.p_con()) * mu
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::snr_model::SnrDistribution;
    use approx::assert_relative_eq;

    fn single(p_con: f64) -> ProblemInstance {
        let mcs = McsTable::uniform(1, &[Mcs::new(1.0, 0.5, 2.0).unwrap()]).unwrap();
        ProblemInstance::new(1, mcs, UtilitySpec::Goodput, vec![SnrDistribution::point_mass(1.0)], p_con).unwrap()
    }

    #[test]
    fn power_root_closed_form() {
        let inst = single(4.0);
        let c = inst.combo(0, 0, 0);
        let p = c.power_root(0.5).unwrap();
        assert_relative_eq!(p, 2.0 * 2f64.ln(), max_relative = 1e-8);
        assert_eq!(c.power_root(1.0).unwrap(), 0.0);
        assert_eq!(c.power_root(1.5).unwrap(), 0.0);
        assert!(c.power_root(f64::NAN).is_err());
        assert!(c.power_root(0.0).is_err());
        // Closed form p̃(μ) = 2 ln(1/μ) across the active range.
        for mu in [1e-6, 0.01, 0.3, 0.99] {
            let p = c.power_root(mu).unwrap();
            assert!((c.marginal_value(p) - mu).abs() <= ROOT_REL_TOL * mu);
            assert_relative_eq!(p, 2.0 * (1.0 / mu).ln(), max_relative = 1e-7);
        }
    }

    #[test]
    fn v_metric_examples() {
        let inst = single(4.0);
        let c = inst.combo(0, 0, 0);
        assert_eq!(v_metric(c.dist, c.mcs, c.utility, 0.3, 0.0), 0.0);
        let p = c.power_root(0.5).unwrap();
        assert_relative_eq!(v_metric(c.dist, c.mcs, c.utility, 0.5, p), -1.0 + 0.5 * 2.0 * 2f64.ln(), max_relative = 1e-8);
    }

    #[test]
    fn mu_bounds_single_combination() {
        let b = mu_bounds(&single(4.0)).unwrap();
        assert_relative_eq!(b.min, (-2f64).exp(), max_relative = 1e-14);
        assert_relative_eq!(b.max, 1.0, max_relative = 1e-14);
        assert!(b.min < b.max);
    }

    #[test]
    fn zero_snr_everywhere_has_no_multiplier_range() {
        let mcs = McsTable::qam(1, 1).unwrap();
        let inst = ProblemInstance::new(1, mcs, UtilitySpec::Goodput, vec![SnrDistribution::point_mass(0.0)], 1.0).unwrap();
        assert!(mu_bounds(&inst).is_err());
        assert_eq!(total_power(&inst, 0.5, TieRule::MinPower).unwrap(), 0.0);
    }

    #[test]
    fn identical_users_tie() {
        let mcs = McsTable::qam(2, 2).unwrap();
        let dists = vec![SnrDistribution::point_mass(1.3); 4];
        let inst = ProblemInstance::new(2, mcs, UtilitySpec::Goodput, dists, 8.0).unwrap();
        let eval = DualEvaluation::new(&inst, 0.3).unwrap();
        for ws in eval.winner_sets() {
            assert_eq!(ws.members.len(), 2);
            assert_eq!(ws.members[0].0, 0);
            assert_eq!(ws.members[1].0, 1);
            assert_eq!(ws.members[0].1, ws.members[1].1);
        }
        // Equal p* as well, so both rules pick user 0.
        let lo = eval.allocation(TieRule::MinPower);
        let hi = eval.allocation(TieRule::MaxPower);
        assert_eq!(lo, hi);
        assert_eq!(lo.choices()[0].unwrap().0, 0);
    }

    #[test]
    fn total_power_limits() {
        let inst = single(4.0);
        assert_eq!(total_power(&inst, 1.2, TieRule::MinPower).unwrap(), 0.0);
        let b = mu_bounds(&inst).unwrap();
        let x = total_power(&inst, b.min * (1.0 + 1e-9), TieRule::MinPower).unwrap();
        assert!(x < 4.0 && x > 4.0 - 1e-6, "{x}");
    }

    #[test]
    fn allocation_rejects_oversharing() {
        let dims = Dims::new(1, 2, 1);
        assert!(AllocationState::new(dims, vec![0.7, 0.7], vec![0.1, 0.1]).is_err());
        assert!(AllocationState::new(dims, vec![0.0, 0.5], vec![0.1, 0.1]).is_err());
        let a = AllocationState::new(dims, vec![0.5, 0.5], vec![0.1, 0.3]).unwrap();
        assert!(!a.discrete);
        assert_relative_eq!(a.per_combination_power(1), 0.6);
    }

    #[test]
    fn capacity_utility_needs_unit_rate() {
        let mcs = McsTable::qam(1, 2).unwrap();
        let err = ProblemInstance::new(1, mcs, UtilitySpec::CapacityLog { scale: 1.0 }, vec![SnrDistribution::point_mass(1.0)], 1.0);
        assert!(err.is_err());
    }
}
