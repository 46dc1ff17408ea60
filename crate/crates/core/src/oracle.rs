//! Brute-force references for small instances. Slow by design; intended for
//! tests and the acceptance suite.

use rayon::prelude::*;

use crate::dsra::{assignment_at, checked_assignment_count, Assignment, DEFAULT_HYPOTHESIS_CAP};
use crate::dual::{AllocationState, ProblemInstance};
use crate::error::{Error, Result};

/// Largest number of active combinations the grid search accepts.
pub const MAX_GRID_DIMS: usize = 4;
/// Largest per-dimension grid size.
pub const MAX_GRID_POINTS: usize = 2000;

/// Best point found by [`grid_power_oracle`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridOptimum {
    /// Per-subchannel power, zero on idle subchannels.
    pub powers: Vec<f64>,
    pub utility: f64,
}

/// Maximizes `Σ E{U}` over powers on the lattice `(P_con/grid_points)·ℕ^d`
/// with `Σx ≤ P_con`, for the assignment `assignment`. The search is exact
/// over the lattice (max-plus dynamic programming over dimensions).
pub fn grid_power_oracle(inst: &ProblemInstance, assignment: &[Option<(usize, usize)>], grid_points: usize) -> Result<GridOptimum> {
    let dims = inst.dims();
    if assignment.len() != dims.n_sub {
        return Err(Error::invalid(format!("assignment covers {} of {} subchannels", assignment.len(), dims.n_sub)));
    }
    if grid_points == 0 || grid_points > MAX_GRID_POINTS {
        return Err(Error::invalid(format!("grid size {grid_points} outside 1..={MAX_GRID_POINTS}")));
    }
    let active: Vec<(usize, usize)> = assignment
        .iter()
        .enumerate()
        .filter_map(|(n, c)| c.map(|(k, m)| (n, dims.index(n, k, m))))
        .collect();
    if active.len() > MAX_GRID_DIMS {
        return Err(Error::CapExceeded {
            what: "grid power oracle",
            required: active.len() as u128,
            cap: MAX_GRID_DIMS as u128,
        });
    }
    let g = grid_points;
    let step = inst.p_con() / g as f64;
    let tables: Vec<Vec<f64>> = active
        .iter()
        .map(|&(_, idx)| {
            let c = inst.combo_at(idx);
            (0..=g).map(|i| c.expected_utility(i as f64 * step)).collect()
        })
        .collect();

    // best[t]: best value using at most t grid units on the dimensions so far.
    let mut best = vec![0.0; g + 1];
    let mut picks: Vec<Vec<usize>> = Vec::with_capacity(active.len());
    for table in &tables {
        let mut next = vec![f64::NEG_INFINITY; g + 1];
        let mut pick = vec![0; g + 1];
        for t in 0..=g {
            for i in 0..=t {
                let v = table[i] + best[t - i];
                if v > next[t] {
                    next[t] = v;
                    pick[t] = i;
                }
            }
        }
        best = next;
        picks.push(pick);
    }

    let mut t = (0..=g).fold(0, |b, t| if best[t] > best[b] { t } else { b });
    let utility = best[t];
    let mut powers = vec![0.0; dims.n_sub];
    for (j, &(n, _)) in active.iter().enumerate().rev() {
        let i = picks[j][t];
        powers[n] = i as f64 * step;
        t -= i;
    }
    Ok(GridOptimum { powers, utility })
}

/// Best discrete allocation found by exhaustive enumeration.
#[derive(Debug, Clone)]
pub struct ExhaustiveOptimum {
    pub assignment: Assignment,
    pub allocation: AllocationState,
    pub utility: f64,
}

/// Grid search composed with enumeration of every discrete assignment.
pub fn exhaustive_grid_dsra(inst: &ProblemInstance, grid_points: usize) -> Result<ExhaustiveOptimum> {
    let dims = inst.dims();
    let count = checked_assignment_count(dims, DEFAULT_HYPOTHESIS_CAP, "exhaustive grid search")?;
    let results: Vec<(Assignment, GridOptimum)> = (0..count)
        .into_par_iter()
        .map(|i| {
            let a = assignment_at(dims, i);
            grid_power_oracle(inst, &a, grid_points).map(|opt| (a, opt))
        })
        .collect::<Result<_>>()?;
    let best = results
        .iter()
        .enumerate()
        .fold(0, |b, (i, r)| if r.1.utility > results[b].1.utility { i } else { b });
    let (assignment, opt) = results.into_iter().nth(best).expect("at least the empty assignment");
    let allocation = AllocationState::from_choices(dims, &assignment, &opt.powers)?;
    Ok(ExhaustiveOptimum {
        assignment,
        allocation,
        utility: opt.utility,
    })
}

/// Minimizer of the Lagrangian over discrete assignments at fixed `μ`.
#[derive(Debug, Clone)]
pub struct LagrangianMinimum {
    pub assignment: Assignment,
    pub allocation: AllocationState,
    pub lagrangian: f64,
    /// Every assignment attaining the minimum within `1e-12·max(1, |L|)`.
    pub minimizers: Vec<Assignment>,
}

/// Enumerates all discrete assignments with per-combination power `p*(μ)` and
/// returns the one with the smallest Lagrangian (first in enumeration order).
pub fn exhaustive_lagrangian_min(inst: &ProblemInstance, mu: f64) -> Result<LagrangianMinimum> {
    let dims = inst.dims();
    let count = checked_assignment_count(dims, DEFAULT_HYPOTHESIS_CAP, "exhaustive Lagrangian minimization")?;
    // p*(μ) once per combination.
    let p_star: Vec<f64> = (0..dims.len())
        .map(|idx| inst.combo_at(idx).power_root(mu))
        .collect::<Result<_>>()?;
    let values: Vec<f64> = (0..count)
        .into_par_iter()
        .map(|i| {
            let a = assignment_at(dims, i);
            let mut l = -mu * inst.p_con();
            for (n, c) in a.iter().enumerate() {
                if let Some((k, m)) = *c {
                    let idx = dims.index(n, k, m);
                    l += -inst.combo_at(idx).expected_utility(p_star[idx]) + mu * p_star[idx];
                }
            }
            l
        })
        .collect();
    let best = values
        .iter()
        .enumerate()
        .fold(0, |b, (i, &v)| if v < values[b] { i } else { b });
    let lagrangian = values[best];
    let tol = 1e-12 * lagrangian.abs().max(1.0);
    let minimizers = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v - lagrangian <= tol)
        .map(|(i, _)| assignment_at(dims, i as u128))
        .collect();
    let assignment = assignment_at(dims, best as u128);
    let powers: Vec<f64> = assignment
        .iter()
        .enumerate()
        .map(|(n, c)| c.map_or(0.0, |(k, m)| p_star[dims.index(n, k, m)]))
        .collect();
    let allocation = AllocationState::from_choices(dims, &assignment, &powers)?;
    Ok(LagrangianMinimum {
        assignment,
        allocation,
        lagrangian,
        minimizers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsra::solve_fixed_assignment;
    use crate::dual::{mu_bounds, DualEvaluation, TieRule};
    use crate::snr_model::SnrDistribution;
    use crate::utility::{Mcs, McsTable, UtilitySpec};

    fn instance(n_sub: usize, n_users: usize, rows: &[Mcs], snrs: &[f64], p_con: f64) -> ProblemInstance {
        let mcs = McsTable::uniform(n_users, rows).unwrap();
        let dists = snrs.iter().map(|&g| SnrDistribution::point_mass(g)).collect();
        ProblemInstance::new(n_sub, mcs, UtilitySpec::Goodput, dists, p_con).unwrap()
    }

    #[test]
    fn grid_single_combination_matches_fixed_solver() {
        let inst = instance(1, 1, &[Mcs::new(1.0, 0.5, 2.0).unwrap()], &[1.0], 4.0);
        let grid = grid_power_oracle(&inst, &[Some((0, 0))], 1000).unwrap();
        let fixed = solve_fixed_assignment(&inst, &[Some((0, 0))], 1e-9).unwrap();
        assert!((grid.powers[0] - fixed.solution.allocation.power[0]).abs() <= 4.0 / 1000.0 + 1e-9);
    }

    #[test]
    fn grid_empty_assignment() {
        let inst = instance(2, 1, &[Mcs::qam(1)], &[1.0, 2.0], 4.0);
        let grid = grid_power_oracle(&inst, &[None, None], 100).unwrap();
        assert_eq!(grid.utility, 0.0);
        assert_eq!(grid.powers, vec![0.0, 0.0]);
    }

    #[test]
    fn grid_symmetric_split() {
        let inst = instance(2, 1, &[Mcs::qam(1)], &[1.0, 1.0], 4.0);
        let grid = grid_power_oracle(&inst, &[Some((0, 0)), Some((0, 0))], 400).unwrap();
        assert!((grid.powers[0] - grid.powers[1]).abs() <= 2.0 * 4.0 / 400.0);
    }

    #[test]
    fn grid_rejects_oversized_requests() {
        let inst = instance(5, 1, &[Mcs::qam(1)], &[1.0; 5], 4.0);
        assert!(grid_power_oracle(&inst, &[Some((0, 0)); 5], 10).is_err());
        assert!(grid_power_oracle(&inst, &[None; 5], 2001).is_err());
    }

    #[test]
    fn lagrangian_above_mu_max_is_empty() {
        let inst = instance(2, 2, &[Mcs::qam(1), Mcs::qam(2)], &[1.0, 0.5, 0.3, 2.0], 4.0);
        let mu = mu_bounds(&inst).unwrap().max * 1.5;
        let r = exhaustive_lagrangian_min(&inst, mu).unwrap();
        assert_eq!(r.assignment, vec![None, None]);
        assert!((r.lagrangian + mu * 4.0).abs() < 1e-12);
    }

    #[test]
    fn lagrangian_matches_dual_evaluation() {
        let inst = instance(2, 2, &[Mcs::qam(1), Mcs::qam(2)], &[1.0, 0.5, 0.3, 2.0], 4.0);
        let b = mu_bounds(&inst).unwrap();
        for t in [0.1, 0.35, 0.6, 0.9] {
            let mu = b.min + t * b.width();
            let r = exhaustive_lagrangian_min(&inst, mu).unwrap();
            let a = DualEvaluation::new(&inst, mu).unwrap().allocation(TieRule::MinPower);
            assert!((a.lagrangian(&inst, mu) - r.lagrangian).abs() <= 1e-8, "μ = {mu}");
        }
    }

    #[test]
    fn lagrangian_detects_symmetric_ties() {
        let inst = instance(1, 2, &[Mcs::qam(1)], &[1.0, 1.0], 4.0);
        let b = mu_bounds(&inst).unwrap();
        let r = exhaustive_lagrangian_min(&inst, 0.5 * (b.min + b.max)).unwrap();
        assert_eq!(r.minimizers.len(), 2);
    }
}
