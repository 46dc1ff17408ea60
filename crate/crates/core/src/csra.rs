//! Bisection over the power price `μ` for the subchannel-sharing problem.
//!
//! The bracket `[μ_lo, μ_hi]` keeps `X*(μ_lo) ≥ P_con > X*(μ_hi)`. Once it is
//! no wider than `κ`, the discrete allocations at both ends are blended so
//! that the blended power meets the budget with equality. The achieved
//! utility is within `(μ_hi - μ_lo)·P_con` of the optimum.

use crate::dsra::solve_fixed_indicator;
use crate::dual::{mu_bounds, AllocationState, DualEvaluation, MuBounds, ProblemInstance, TieRule};
use crate::error::{Error, Result};

/// Default bracket width is this constant divided by `P_con`.
pub const DEFAULT_KAPPA_TIMES_PCON: f64 = 0.3;

pub fn default_kappa(p_con: f64) -> f64 {
    DEFAULT_KAPPA_TIMES_PCON / p_con
}

/// Outcome of [`solve_csra`].
#[derive(Debug, Clone)]
pub struct CsraResult {
    pub bounds: MuBounds,
    pub mu_lo: f64,
    pub mu_hi: f64,
    /// `I*(μ_lo)` under the min-power tie rule, with `x = I·p*(μ_lo)`.
    pub alloc_lo: AllocationState,
    /// `I*(μ_hi)` under the min-power tie rule, with `x = I·p*(μ_hi)`.
    pub alloc_hi: AllocationState,
    /// `X*(μ_lo)` and `X*(μ_hi)`.
    pub power_lo: f64,
    pub power_hi: f64,
    /// Blend weight on the `μ_hi` allocation, clamped to `[0, 1]`.
    pub lambda: f64,
    /// Blend weight before clamping.
    pub lambda_raw: f64,
    pub blended: AllocationState,
    /// Expected utility of the blended allocation.
    pub utility: f64,
    /// `(μ_hi - μ_lo)·P_con`.
    pub gap_bound: f64,
    /// Number of μ-updates performed.
    pub iterations: u32,
    /// Set when `X*(μ_min) < P_con`, i.e. the budget cannot be spent.
    pub budget_slack: bool,
}

impl CsraResult {
    pub fn mu_mid(&self) -> f64 {
        0.5 * (self.mu_lo + self.mu_hi)
    }
}

struct Endpoint {
    mu: f64,
    alloc: AllocationState,
    power: f64,
}

impl Endpoint {
    fn at(inst: &ProblemInstance, mu: f64) -> Result<Self> {
        let alloc = DualEvaluation::new(inst, mu)?.allocation(TieRule::MinPower);
        let power = alloc.total_power();
        Ok(Self { mu, alloc, power })
    }
}

/// Solves the relaxed problem to bracket width `kappa`.
pub fn solve_csra(inst: &ProblemInstance, kappa: f64) -> Result<CsraResult> {
    if !(kappa.is_finite() && kappa > 0.0) {
        return Err(Error::invalid(format!("bracket width {kappa} must be positive")));
    }
    let bounds = mu_bounds(inst)?;
    let p_con = inst.p_con();
    let mut lo = Endpoint::at(inst, bounds.min)?;
    let mut hi = Endpoint::at(inst, bounds.max)?;
    let budget_slack = lo.power < p_con * (1.0 - 1e-9);

    let mut iterations = 0;
    while hi.mu - lo.mu > kappa {
        let mid = Endpoint::at(inst, 0.5 * (lo.mu + hi.mu))?;
        if mid.power >= p_con {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }

    let lambda_raw = if lo.power != hi.power {
        (lo.power - p_con) / (lo.power - hi.power)
    } else {
        0.0
    };
    let lambda = lambda_raw.clamp(0.0, 1.0);
    let blended = hi.alloc.blend(&lo.alloc, lambda);
    let utility = blended.utility(inst);

    Ok(CsraResult {
        bounds,
        mu_lo: lo.mu,
        mu_hi: hi.mu,
        power_lo: lo.power,
        power_hi: hi.power,
        alloc_lo: lo.alloc,
        alloc_hi: hi.alloc,
        lambda,
        lambda_raw,
        blended,
        utility,
        gap_bound: (hi.mu - lo.mu) * p_con,
        iterations,
        budget_slack,
    })
}

/// `Σ I·E{U(goodput(x/I, γ))}` of the blended allocation.
pub fn csra_utility(result: &CsraResult, inst: &ProblemInstance) -> f64 {
    result.blended.utility(inst)
}

/// Which candidate [`polish_csra`] kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolishSource {
    /// The λ-blend itself.
    Blend,
    /// The blended indicator with re-optimized powers.
    BlendIndicator,
    /// `I*(μ_lo)` with re-optimized powers.
    Lower,
    /// `I*(μ_hi)` with re-optimized powers.
    Upper,
}

#[derive(Debug, Clone)]
pub struct Polished {
    pub allocation: AllocationState,
    pub utility: f64,
    pub source: PolishSource,
}

/// Re-optimizes the powers of the blended indicator and of both bracket-end
/// indicators under the full budget, and keeps the best of these and the
/// original blend. Every candidate is feasible for the relaxed problem, so
/// the result stays within the bracket's gap bound and is never worse than
/// any fixed-assignment solve of `I*(μ_lo)` or `I*(μ_hi)`.
pub fn polish_csra(inst: &ProblemInstance, csra: &CsraResult) -> Result<Polished> {
    let kappa = csra.bounds.width() * 2f64.powi(-50);
    let mut best = Polished {
        allocation: csra.blended.clone(),
        utility: csra.utility,
        source: PolishSource::Blend,
    };
    let candidates = [
        (PolishSource::BlendIndicator, &csra.blended),
        (PolishSource::Lower, &csra.alloc_lo),
        (PolishSource::Upper, &csra.alloc_hi),
    ];
    for (source, alloc) in candidates {
        let fixed = solve_fixed_indicator(inst, &alloc.indicator, kappa.max(f64::MIN_POSITIVE))?;
        if fixed.utility > best.utility {
            best = Polished {
                allocation: fixed.allocation,
                utility: fixed.utility,
                source,
            };
        }
    }
    Ok(best)
}

/// Bracket midpoints after each of `n_updates` bisection steps (no `κ` stop).
pub fn bisection_trace(inst: &ProblemInstance, n_updates: usize) -> Result<Vec<f64>> {
    let bounds = mu_bounds(inst)?;
    let (mut lo, mut hi) = (bounds.min, bounds.max);
    let mut trace = Vec::with_capacity(n_updates);
    for _ in 0..n_updates {
        let mid = 0.5 * (lo + hi);
        let x = DualEvaluation::new(inst, mid)?.allocation(TieRule::MinPower).total_power();
        if x >= inst.p_con() {
            lo = mid;
        } else {
            hi = mid;
        }
        trace.push(0.5 * (lo + hi));
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::snr_model::SnrDistribution;
    use crate::utility::{Mcs, McsTable, UtilitySpec};
    use approx::assert_relative_eq;

    fn point_instance(snrs: &[f64], n_sub: usize, p_con: f64) -> ProblemInstance {
        let mcs = McsTable::uniform(snrs.len() / n_sub, &[Mcs::new(1.0, 0.5, 2.0).unwrap()]).unwrap();
        let dists = snrs.iter().map(|&g| SnrDistribution::point_mass(g)).collect();
        ProblemInstance::new(n_sub, mcs, UtilitySpec::Goodput, dists, p_con).unwrap()
    }

    #[test]
    fn single_combination_interior_optimum() {
        let inst = point_instance(&[1.0], 1, 1.0);
        let r = solve_csra(&inst, 1e-6).unwrap();
        let mu_star = (-0.5f64).exp();
        assert!(r.mu_lo <= mu_star && mu_star <= r.mu_hi, "{} {}", r.mu_lo, r.mu_hi);
        assert_relative_eq!(r.blended.total_power(), 1.0, max_relative = 1e-6);
        assert_relative_eq!(csra_utility(&r, &inst), 2.0 * (1.0 - (-0.5f64).exp()), max_relative = 1e-6);
        assert!(!r.budget_slack);
    }

    #[test]
    fn halving_kappa_adds_one_iteration() {
        let inst = point_instance(&[1.0, 0.4, 2.2, 0.9], 2, 3.0);
        let a = solve_csra(&inst, 1e-3).unwrap();
        let b = solve_csra(&inst, 5e-4).unwrap();
        assert_eq!(b.iterations, a.iterations + 1);
        assert_eq!(a.iterations, a.bounds.bisection_steps(1e-3));
    }

    #[test]
    fn identical_subchannels_split_evenly() {
        let inst = point_instance(&[1.3, 1.3], 2, 5.0);
        let r = solve_csra(&inst, 1e-4).unwrap();
        let per_sub: Vec<f64> = (0..2).map(|n| r.blended.power[n]).collect();
        assert_relative_eq!(per_sub[0], 2.5, max_relative = 1e-6);
        assert_relative_eq!(per_sub[1], 2.5, max_relative = 1e-6);
    }

    #[test]
    fn wide_bracket_runs_no_iterations() {
        let inst = point_instance(&[1.0], 1, 1.0);
        let r = solve_csra(&inst, 10.0).unwrap();
        assert_eq!(r.iterations, 0);
        assert_eq!(r.mu_lo, r.bounds.min);
        assert_relative_eq!(r.blended.total_power(), 1.0, max_relative = 1e-9);
        assert!(solve_csra(&inst, 0.0).is_err());
    }

    #[test]
    fn trace_converges() {
        let inst = point_instance(&[1.0], 1, 1.0);
        let trace = bisection_trace(&inst, 40).unwrap();
        assert_eq!(trace.len(), 40);
        assert_relative_eq!(trace[39], (-0.5f64).exp(), max_relative = 1e-9);
    }

    #[test]
    fn polish_never_loses_and_dominates_discrete_fallback() {
        let mcs = McsTable::uniform(2, &[Mcs::new(1.0, 0.5, 2.0).unwrap(), Mcs::qam(2)]).unwrap();
        let dists = [1.0, 0.4, 0.3, 1.7].iter().map(|&g| SnrDistribution::point_mass(g)).collect();
        let inst = ProblemInstance::new(2, mcs, UtilitySpec::Goodput, dists, 4.0).unwrap();
        let r = solve_csra(&inst, default_kappa(4.0)).unwrap();
        let p = polish_csra(&inst, &r).unwrap();
        assert!(p.utility >= r.utility);
        assert!((p.allocation.total_power() - 4.0).abs() <= 1e-9 * 4.0);
        let d = crate::dsra::solve_dsra_from(&inst, &r, default_kappa(4.0)).unwrap();
        assert!(d.utility <= p.utility + 1e-9);
    }
}
