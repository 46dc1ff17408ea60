//! Reference schemes the proposed solvers are compared against.

use rand::Rng;

use crate::csra::{solve_csra, CsraResult};
use crate::dual::{mu_bounds, AllocationState, DualEvaluation, ProblemInstance, TieRule};
use crate::error::{Error, Result};
use crate::seed::{stream_rng, STREAM_SCHEDULER};

/// Fixed-power random-user scheduling.
#[derive(Debug, Clone)]
pub struct FpRusResult {
    pub allocation: AllocationState,
    pub expected_goodput: f64,
    pub utility: f64,
}

/// On every subchannel: a user drawn uniformly from `seed`, power `P_con/N`,
/// and the MCS with the largest expected goodput at that power for that user
/// (smallest index on ties).
pub fn fp_rus_baseline(inst: &ProblemInstance, seed: u64) -> Result<FpRusResult> {
    let dims = inst.dims();
    let mut rng = stream_rng(seed, &[STREAM_SCHEDULER]);
    let p = inst.p_con() / dims.n_sub as f64;
    let mut choices = Vec::with_capacity(dims.n_sub);
    for n in 0..dims.n_sub {
        let k = rng.random_range(0..dims.n_users);
        let m = (0..dims.n_mcs)
            .map(|m| (m, inst.combo(n, k, m).expected_goodput(p)))
            .fold((0, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best })
            .0;
        choices.push(Some((k, m)));
    }
    let allocation = AllocationState::from_choices(dims, &choices, &vec![p; dims.n_sub])?;
    Ok(FpRusResult {
        expected_goodput: allocation.expected_goodput(inst),
        utility: allocation.utility(inst),
        allocation,
    })
}

/// The relaxed solver on an instance whose distributions are point masses at
/// the realized SNRs.
pub fn perfect_csi_run(inst: &ProblemInstance, kappa: f64) -> Result<CsraResult> {
    if let Some(d) = inst.dists().iter().find(|d| d.len() != 1) {
        return Err(Error::invalid(format!("perfect-CSI run needs point masses, got {} atoms", d.len())));
    }
    solve_csra(inst, kappa)
}

/// Multiplier iterates of the diminishing-step subgradient method.
#[derive(Debug, Clone)]
pub struct SubgradientTrace {
    /// `μ_1, …, μ_n`: the multiplier used at each update.
    pub mu: Vec<f64>,
    /// `X*(μ_i)` under the min-power tie rule.
    pub total_power: Vec<f64>,
    /// Utility of the allocation at `μ_i`, scaled down to the budget if it overspends.
    pub utility: Vec<f64>,
    /// Feasible allocation at the last iterate.
    pub allocation: AllocationState,
}

impl SubgradientTrace {
    pub fn last_mu(&self) -> f64 {
        *self.mu.last().expect("at least one update")
    }

    /// `|μ_i - reference|` for every iterate.
    pub fn distance_to(&self, reference: f64) -> Vec<f64> {
        self.mu.iter().map(|m| (m - reference).abs()).collect()
    }
}

/// `μ_{i+1} = max(μ_min, μ_i + scale·(X*(μ_i) - P_con)/i)`, starting from the
/// middle of `[μ_min, μ_max]`.
pub fn subgradient_baseline(inst: &ProblemInstance, n_updates: usize, scale: f64) -> Result<SubgradientTrace> {
    if n_updates == 0 {
        return Err(Error::invalid("subgradient method needs at least one update"));
    }
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::invalid(format!("step scale {scale} must be positive")));
    }
    let bounds = mu_bounds(inst)?;
    let p_con = inst.p_con();
    let mut mu = 0.5 * (bounds.min + bounds.max);
    let mut trace = SubgradientTrace {
        mu: Vec::with_capacity(n_updates),
        total_power: Vec::with_capacity(n_updates),
        utility: Vec::with_capacity(n_updates),
        allocation: AllocationState::zeros(inst.dims()),
    };
    for i in 1..=n_updates {
        let alloc = feasible(DualEvaluation::new(inst, mu)?.allocation(TieRule::MinPower), p_con);
        let x = alloc.1;
        trace.mu.push(mu);
        trace.total_power.push(x);
        trace.utility.push(alloc.0.utility(inst));
        trace.allocation = alloc.0;
        mu = (mu + scale * (x - p_con) / i as f64).max(bounds.min);
    }
    Ok(trace)
}

/// Scales powers down to the budget when they exceed it; also returns the unscaled total.
fn feasible(mut alloc: AllocationState, p_con: f64) -> (AllocationState, f64) {
    let x = alloc.total_power();
    if x > p_con {
        let s = p_con / x;
        alloc.power.iter_mut().for_each(|p| *p *= s);
    }
    (alloc, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::snr_model::SnrDistribution;
    use crate::utility::{Mcs, McsTable, UtilitySpec};

    fn qam_instance(n_sub: usize, n_users: usize, n_mcs: u32, gamma: f64, p_con: f64) -> ProblemInstance {
        let mcs = McsTable::qam(n_users, n_mcs).unwrap();
        let dists = vec![SnrDistribution::point_mass(gamma); n_sub * n_users];
        ProblemInstance::new(n_sub, mcs, UtilitySpec::Goodput, dists, p_con).unwrap()
    }

    #[test]
    fn fp_rus_picks_best_qam_order() {
        let inst = qam_instance(3, 1, 15, 1.0, 3.0);
        // Independent enumeration of (1 - e^{-b_m})·(m + 1), m = 1..15.
        let best = (1..=15u32)
            .map(|m| {
                let b = 1.5 / (2f64.powi(m as i32 + 1) - 1.0);
                (m, (1.0 - (-b).exp()) * (m + 1) as f64)
            })
            .fold((0, f64::NEG_INFINITY), |a, c| if c.1 > a.1 { c } else { a });
        let r = fp_rus_baseline(&inst, 7).unwrap();
        for choice in r.allocation.choices() {
            assert_eq!(choice, Some((0, best.0 as usize - 1)));
        }
        assert!((r.expected_goodput - 3.0 * best.1).abs() < 1e-12);
        assert!((r.allocation.total_power() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn fp_rus_symmetric_users_seed_invariant() {
        let inst = qam_instance(4, 3, 4, 0.7, 4.0);
        let a = fp_rus_baseline(&inst, 1).unwrap().expected_goodput;
        for seed in 2..10 {
            assert!((fp_rus_baseline(&inst, seed).unwrap().expected_goodput - a).abs() < 1e-12);
        }
    }

    #[test]
    fn perfect_csi_single_combination_spends_budget() {
        let mcs = McsTable::uniform(1, &[Mcs::new(1.0, 0.5, 2.0).unwrap()]).unwrap();
        let inst = ProblemInstance::new(1, mcs, UtilitySpec::Goodput, vec![SnrDistribution::point_mass(1.3)], 2.5).unwrap();
        let r = perfect_csi_run(&inst, 1e-6).unwrap();
        assert!((r.blended.power[0] - 2.5).abs() < 1e-6);
    }

    #[test]
    fn perfect_csi_rejects_spread_distributions() {
        let mcs = McsTable::qam(1, 1).unwrap();
        let d = SnrDistribution::empirical(&[0.5, 1.5]).unwrap();
        let inst = ProblemInstance::new(1, mcs, UtilitySpec::Goodput, vec![d], 1.0).unwrap();
        assert!(perfect_csi_run(&inst, 1e-3).is_err());
    }

    #[test]
    fn subgradient_trace_shape_and_feasibility() {
        let inst = qam_instance(4, 2, 3, 0.9, 4.0);
        let t = subgradient_baseline(&inst, 12, 1.0).unwrap();
        assert_eq!(t.mu.len(), 12);
        assert_eq!(t.utility.len(), 12);
        assert!(t.allocation.total_power() <= 4.0 * (1.0 + 1e-12));
        let b = mu_bounds(&inst).unwrap();
        assert!(t.mu.iter().all(|&m| m >= b.min));
    }

    #[test]
    fn subgradient_steps_shrink_like_one_over_i() {
        let inst = qam_instance(2, 1, 1, 1.0, 2.0);
        let t = subgradient_baseline(&inst, 200, 1e-3).unwrap();
        for i in 150..199 {
            let step = (t.mu[i + 1] - t.mu[i]).abs();
            let bound = 1e-3 * (t.total_power[i] - 2.0).abs() / (i + 1) as f64;
            assert!((step - bound).abs() <= 1e-15 || t.mu[i + 1] == mu_bounds(&inst).unwrap().min);
        }
    }
}
