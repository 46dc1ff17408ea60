//! One (user, MCS) per subchannel: power allocation for a fixed assignment,
//! exhaustive search, and the relaxation-based approximation with its
//! optimality-gap certificate.

use rayon::prelude::*;

use crate::csra::{solve_csra, CsraResult};
use crate::dual::{mu_bounds, AllocationState, Dims, DualEvaluation, ProblemInstance, TieRule};
use crate::error::{Error, Result};

/// Default cap on `(KM+1)^N` for exhaustive enumeration.
pub const DEFAULT_HYPOTHESIS_CAP: u128 = 20_000;

/// Per-subchannel (user, MCS) choice; `None` leaves the subchannel idle.
pub type Assignment = Vec<Option<(usize, usize)>>;

/// `(KM+1)^N`, saturating.
pub fn assignment_count(dims: Dims) -> u128 {
    let base = dims.per_subchannel() as u128 + 1;
    (0..dims.n_sub).fold(1u128, |acc, _| acc.saturating_mul(base))
}

/// The `index`-th assignment in lexicographic order (subchannel 0 most
/// significant; option 0 is idle, option `1 + k·M + m` is `(k, m)`).
pub fn assignment_at(dims: Dims, mut index: u128) -> Assignment {
    let base = dims.per_subchannel() as u128 + 1;
    let mut out = vec![None; dims.n_sub];
    for slot in out.iter_mut().rev() {
        let digit = (index % base) as usize;
        index /= base;
        if digit > 0 {
            *slot = Some(((digit - 1) / dims.n_mcs, (digit - 1) % dims.n_mcs));
        }
    }
    out
}

/// Checks `(KM+1)^N <= cap` and returns the count.
pub fn checked_assignment_count(dims: Dims, cap: u128, what: &'static str) -> Result<u128> {
    let required = assignment_count(dims);
    if required > cap {
        return Err(Error::CapExceeded { what, required, cap });
    }
    Ok(required)
}

/// Power allocation for a fixed indicator.
#[derive(Debug, Clone)]
pub struct FixedIndicator {
    /// Indicator and blended actual powers `x̂`.
    pub allocation: AllocationState,
    /// `L̂_I = L_I(μ̂, p*(μ̂))`.
    pub lagrangian: f64,
    /// `μ̂_I`, the upper end of the final bracket.
    pub mu_hat: f64,
    pub mu_lo: f64,
    pub lambda: f64,
    pub utility: f64,
    pub iterations: u32,
}

/// Power allocation for one fixed assignment.
#[derive(Debug, Clone)]
pub struct FixedAssignment {
    pub assignment: Assignment,
    pub solution: FixedIndicator,
}

/// Bisection on `μ` for the assignment `assignment` until the bracket is no
/// wider than `kappa`, then the λ-blend of the endpoint powers.
pub fn solve_fixed_assignment(inst: &ProblemInstance, assignment: &[Option<(usize, usize)>], kappa: f64) -> Result<FixedAssignment> {
    let dims = inst.dims();
    if assignment.len() != dims.n_sub {
        return Err(Error::invalid(format!("assignment covers {} of {} subchannels", assignment.len(), dims.n_sub)));
    }
    if let Some(bad) = assignment.iter().flatten().find(|(k, m)| *k >= dims.n_users || *m >= dims.n_mcs) {
        return Err(Error::invalid(format!("assignment entry {bad:?} out of range")));
    }
    let mut indicator = vec![0.0; dims.len()];
    for (n, c) in assignment.iter().enumerate() {
        if let Some((k, m)) = *c {
            indicator[dims.index(n, k, m)] = 1.0;
        }
    }
    Ok(FixedAssignment {
        assignment: assignment.to_vec(),
        solution: solve_fixed_indicator(inst, &indicator, kappa)?,
    })
}

/// As [`solve_fixed_assignment`] for any (possibly fractional) indicator:
/// actual powers are `x = I·p*(μ)` with one `μ` shared by all active entries.
pub fn solve_fixed_indicator(inst: &ProblemInstance, indicator: &[f64], kappa: f64) -> Result<FixedIndicator> {
    if !(kappa.is_finite() && kappa > 0.0) {
        return Err(Error::invalid(format!("bracket width {kappa} must be positive")));
    }
    let dims = inst.dims();
    let shape = AllocationState::new(dims, indicator.to_vec(), vec![0.0; dims.len()])?;
    let active: Vec<(usize, f64)> = shape.active().map(|idx| (idx, indicator[idx])).collect();
    let bounds = mu_bounds(inst)?;
    let p_con = inst.p_con();
    let powers_at = |mu: f64| -> Result<Vec<f64>> { active.iter().map(|&(idx, _)| inst.combo_at(idx).power_root(mu)).collect() };
    let spend = |p: &[f64]| -> f64 { active.iter().zip(p).map(|(&(_, i), p)| i * p).sum() };

    let (mut lo, mut hi) = (bounds.min, bounds.max);
    let mut p_lo = powers_at(lo)?;
    let mut p_hi = powers_at(hi)?;
    let mut iterations = 0;
    while hi - lo > kappa {
        let mid = 0.5 * (lo + hi);
        let p = powers_at(mid)?;
        if spend(&p) > p_con {
            lo = mid;
            p_lo = p;
        } else {
            hi = mid;
            p_hi = p;
        }
        iterations += 1;
    }
    let x_lo = spend(&p_lo);
    let x_hi = spend(&p_hi);
    let lambda = if x_lo != x_hi {
        ((x_lo - p_con) / (x_lo - x_hi)).clamp(0.0, 1.0)
    } else {
        0.0
    };

    let mut allocation = shape;
    let mut utility = 0.0;
    let mut utility_hi = 0.0;
    for (j, &(idx, i)) in active.iter().enumerate() {
        let combo = inst.combo_at(idx);
        let p = lambda * p_hi[j] + (1.0 - lambda) * p_lo[j];
        allocation.power[idx] = i * p;
        utility += i * combo.expected_utility(p);
        utility_hi += i * combo.expected_utility(p_hi[j]);
    }
    let lagrangian = -utility_hi + hi * (x_hi - p_con);

    Ok(FixedIndicator {
        allocation,
        lagrangian,
        mu_hat: hi,
        mu_lo: lo,
        lambda,
        utility,
        iterations,
    })
}

/// One evaluated assignment.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub assignment: Assignment,
    pub lagrangian: f64,
    pub utility: f64,
}

/// Outcome of a discrete solver.
#[derive(Debug, Clone)]
pub struct DsraResult {
    pub allocation: AllocationState,
    pub utility: f64,
    /// `L̂_I` of the chosen assignment.
    pub lagrangian: f64,
    pub candidates: Vec<Candidate>,
    /// Optimality-gap bound at the bracket midpoint (zero for exhaustive search).
    pub gap_bound: f64,
    /// The relaxed solution was already discrete and spends the whole budget.
    pub exact_from_relaxation: bool,
    /// Bracket of the relaxed solve, when one was run.
    pub mu_bracket: Option<(f64, f64)>,
    /// Number of assignments examined.
    pub hypotheses: u128,
}

impl DsraResult {
    /// Gap bound widened by the bracket-width error of the `μ*` proxy.
    pub fn certificate(&self, p_con: f64) -> f64 {
        self.gap_bound + self.mu_bracket.map_or(0.0, |(lo, hi)| (hi - lo) * p_con)
    }
}

/// Exhaustive search over all `(KM+1)^N` assignments, ranked by utility.
/// Each assignment's powers are solved to a bracket `2^-50` of the multiplier range.
pub fn brute_force_dsra(inst: &ProblemInstance) -> Result<DsraResult> {
    let kappa = mu_bounds(inst)?.width() * 2f64.powi(-50);
    brute_force_dsra_with(inst, kappa.max(f64::MIN_POSITIVE), DEFAULT_HYPOTHESIS_CAP)
}

pub fn brute_force_dsra_with(inst: &ProblemInstance, kappa: f64, cap: u128) -> Result<DsraResult> {
    let dims = inst.dims();
    let count = checked_assignment_count(dims, cap, "exhaustive assignment search")?;
    let solved: Vec<FixedAssignment> = (0..count)
        .into_par_iter()
        .map(|i| solve_fixed_assignment(inst, &assignment_at(dims, i), kappa))
        .collect::<Result<_>>()?;
    // Highest utility; the earliest assignment wins exact ties.
    let best = solved
        .iter()
        .enumerate()
        .fold(0, |best, (i, s)| if s.solution.utility > solved[best].solution.utility { i } else { best });
    let candidates = solved
        .iter()
        .map(|s| Candidate {
            assignment: s.assignment.clone(),
            lagrangian: s.solution.lagrangian,
            utility: s.solution.utility,
        })
        .collect();
    let chosen = &solved[best].solution;
    Ok(DsraResult {
        allocation: chosen.allocation.clone(),
        utility: chosen.utility,
        lagrangian: chosen.lagrangian,
        candidates,
        gap_bound: 0.0,
        exact_from_relaxation: false,
        mu_bracket: None,
        hypotheses: count,
    })
}

/// Relaxation-based discrete solver: the two bracket-end allocations of the
/// relaxed solution are re-solved as fixed assignments and the one with the
/// smaller Lagrangian is kept.
pub fn solve_dsra(inst: &ProblemInstance, kappa: f64) -> Result<DsraResult> {
    let csra = solve_csra(inst, kappa)?;
    solve_dsra_from(inst, &csra, kappa)
}

/// [`solve_dsra`] reusing an existing relaxed solution.
pub fn solve_dsra_from(inst: &ProblemInstance, csra: &CsraResult, kappa: f64) -> Result<DsraResult> {
    let gap_bound = dsra_gap_bound(inst, csra)?;
    let mu_bracket = Some((csra.mu_lo, csra.mu_hi));

    if csra.blended.discrete && !csra.budget_slack {
        let assignment = csra.blended.choices();
        let lagrangian = csra.blended.lagrangian(inst, csra.mu_hi);
        return Ok(DsraResult {
            allocation: csra.blended.clone(),
            utility: csra.utility,
            lagrangian,
            candidates: vec![Candidate {
                assignment,
                lagrangian,
                utility: csra.utility,
            }],
            gap_bound,
            exact_from_relaxation: true,
            mu_bracket,
            hypotheses: 1,
        });
    }

    let mut assignments = vec![csra.alloc_lo.choices()];
    let hi = csra.alloc_hi.choices();
    if hi != assignments[0] {
        assignments.push(hi);
    }
    let solved: Vec<FixedAssignment> = assignments
        .iter()
        .map(|a| solve_fixed_assignment(inst, a, kappa))
        .collect::<Result<_>>()?;
    let best = solved
        .iter()
        .enumerate()
        .fold(0, |best, (i, s)| {
            let (s, b) = (&s.solution, &solved[best].solution);
            if s.lagrangian < b.lagrangian || (s.lagrangian == b.lagrangian && s.utility > b.utility) {
                i
            } else {
                best
            }
        });
    let candidates = solved
        .iter()
        .map(|s| Candidate {
            assignment: s.assignment.clone(),
            lagrangian: s.solution.lagrangian,
            utility: s.solution.utility,
        })
        .collect();
    let chosen = &solved[best].solution;
    Ok(DsraResult {
        allocation: chosen.allocation.clone(),
        utility: chosen.utility,
        lagrangian: chosen.lagrangian,
        candidates,
        gap_bound,
        exact_from_relaxation: false,
        mu_bracket,
        hypotheses: solved.len() as u128,
    })
}

/// `(μ* - μ_min)·(P_con - X*(I^min(μ*), μ*))` with `μ*` taken as the bracket
/// midpoint, capped at `(μ_max - μ_min)·P_con`. Zero when the assignment is
/// the same at both bracket ends and no subchannel is tied at the midpoint.
/// A change of assignment inside the bracket means a tie lies within it; the
/// smaller of `X*(μ_hi)` and the midpoint min-power total then stands in for
/// the post-jump power.
pub fn dsra_gap_bound(inst: &ProblemInstance, csra: &CsraResult) -> Result<f64> {
    let mid = csra.mu_mid();
    let eval = DualEvaluation::new(inst, mid)?;
    let tied_at_mid = eval.winner_sets().iter().any(|ws| ws.members.len() > 1);
    let jump_inside = csra.alloc_lo.choices() != csra.alloc_hi.choices();
    if !tied_at_mid && !jump_inside {
        return Ok(0.0);
    }
    let mut x_min = eval.allocation(TieRule::MinPower).total_power();
    if jump_inside {
        x_min = x_min.min(csra.power_hi);
    }
    let p_con = inst.p_con();
    let bound = ((mid - csra.bounds.min) * (p_con - x_min)).max(0.0);
    Ok(bound.min(csra.bounds.width() * p_con))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::snr_model::SnrDistribution;
    use crate::utility::{Mcs, McsTable, UtilitySpec};
    use approx::assert_relative_eq;

    fn instance(n_sub: usize, n_users: usize, rows: &[Mcs], snrs: &[f64], p_con: f64) -> ProblemInstance {
        let mcs = McsTable::uniform(n_users, rows).unwrap();
        let dists = snrs.iter().map(|&g| SnrDistribution::point_mass(g)).collect();
        ProblemInstance::new(n_sub, mcs, UtilitySpec::Goodput, dists, p_con).unwrap()
    }

    fn half_rate() -> Mcs {
        Mcs::new(1.0, 0.5, 2.0).unwrap()
    }

    #[test]
    fn enumeration_order_and_count() {
        let dims = Dims::new(2, 2, 1);
        assert_eq!(assignment_count(dims), 9);
        assert_eq!(assignment_at(dims, 0), vec![None, None]);
        assert_eq!(assignment_at(dims, 1), vec![None, Some((0, 0))]);
        assert_eq!(assignment_at(dims, 3), vec![Some((0, 0)), None]);
        assert_eq!(assignment_at(dims, 8), vec![Some((1, 0)), Some((1, 0))]);
        let big = Dims::new(64, 16, 15);
        assert!(checked_assignment_count(big, DEFAULT_HYPOTHESIS_CAP, "x").is_err());
    }

    #[test]
    fn fixed_assignment_single_combination() {
        let inst = instance(1, 1, &[half_rate()], &[1.0], 1.0);
        let r = solve_fixed_assignment(&inst, &[Some((0, 0))], 1e-6).unwrap();
        assert_relative_eq!(r.solution.allocation.power[0], 1.0, max_relative = 1e-6);
        assert_relative_eq!(r.solution.utility, 2.0 * (1.0 - (-0.5f64).exp()), max_relative = 1e-6);
    }

    #[test]
    fn fixed_assignment_symmetric_split() {
        let inst = instance(2, 1, &[half_rate()], &[0.8, 0.8], 3.0);
        let r = solve_fixed_assignment(&inst, &[Some((0, 0)), Some((0, 0))], 1e-5).unwrap();
        assert_relative_eq!(r.solution.allocation.power[0], r.solution.allocation.power[1], max_relative = 1e-12);
        assert!(r.solution.allocation.total_power() <= 3.0 * (1.0 + 1e-6));
    }

    #[test]
    fn empty_assignment_has_zero_utility() {
        let inst = instance(2, 1, &[half_rate()], &[0.8, 0.8], 3.0);
        let r = solve_fixed_assignment(&inst, &[None, None], 1e-3).unwrap();
        assert_eq!(r.solution.utility, 0.0);
        assert_eq!(r.solution.allocation.total_power(), 0.0);
    }

    #[test]
    fn brute_force_single_combination() {
        let inst = instance(1, 1, &[half_rate()], &[1.0], 2.0);
        let r = brute_force_dsra(&inst).unwrap();
        assert_eq!(r.hypotheses, 2);
        assert_eq!(r.allocation.choices(), vec![Some((0, 0))]);
        assert!(r.utility > 0.0);
    }

    #[test]
    fn brute_force_counts_hypotheses() {
        let inst = instance(2, 2, &[half_rate()], &[1.0, 0.5, 0.3, 2.0], 2.0);
        let r = brute_force_dsra(&inst).unwrap();
        assert_eq!(r.hypotheses, 9);
        assert_eq!(r.candidates.len(), 9);
        assert_eq!(r.allocation.choices(), vec![Some((0, 0)), Some((1, 0))]);
    }

    #[test]
    fn tied_users_bound_and_sandwich() {
        let inst = instance(1, 2, &[half_rate()], &[1.0, 1.0], 2.0);
        let csra = solve_csra(&inst, 1e-3).unwrap();
        let d = solve_dsra_from(&inst, &csra, 1e-3).unwrap();
        let bf = brute_force_dsra(&inst).unwrap();
        assert!(d.gap_bound >= 0.0);
        assert!(bf.utility - d.utility >= -1e-9);
        assert!(bf.utility - d.utility <= d.certificate(2.0) + 1e-9);
    }

    #[test]
    fn no_tie_matches_relaxation() {
        // One MCS and a strictly stronger user per subchannel: no ties anywhere.
        let inst = instance(2, 2, &[half_rate()], &[1.0, 0.4, 0.3, 1.7], 4.0);
        let csra = solve_csra(&inst, 1e-7).unwrap();
        let d = solve_dsra_from(&inst, &csra, 1e-7).unwrap();
        assert_eq!(dsra_gap_bound(&inst, &csra).unwrap(), 0.0);
        assert_relative_eq!(d.utility, csra.utility, max_relative = 1e-6);
        assert!(d.utility <= csra.utility + 1e-9);
        assert!(d.exact_from_relaxation);
    }

    #[test]
    fn jump_inside_bracket_is_certified() {
        let inst = instance(2, 2, &[half_rate(), Mcs::qam(2)], &[1.0, 0.4, 0.3, 1.7], 4.0);
        let csra = solve_csra(&inst, 1e-7).unwrap();
        let d = solve_dsra_from(&inst, &csra, 1e-7).unwrap();
        let bf = brute_force_dsra(&inst).unwrap();
        assert!(d.utility <= csra.utility + 1e-9);
        assert!(bf.utility - d.utility >= -1e-9);
        assert!(bf.utility - d.utility <= d.certificate(4.0) + 1e-9);
    }
}
