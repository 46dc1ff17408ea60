//! Expected-utility scheduling, MCS selection and power allocation for OFDMA
//! downlinks when the scheduler only knows each subchannel's SNR through its
//! conditional distribution given pilot observations.
//!
//! The pipeline is: draw a channel and its pilot observation
//! ([`snr_model`]), turn the MMSE estimate into per-(subchannel, user) SNR
//! distributions, build a [`ProblemInstance`] with an MCS table and a
//! utility, and solve it either with subchannel sharing ([`solve_csra`]) or
//! with one (user, MCS) per subchannel ([`solve_dsra`]).
//!
//! ```
//! use ofdma_sra::{solve_csra, McsTable, ProblemInstance, SnrDistribution, UtilitySpec};
//!
//! let dists = vec![SnrDistribution::point_mass(1.0), SnrDistribution::point_mass(0.5)];
//! let inst = ProblemInstance::new(2, McsTable::qam(1, 4)?, UtilitySpec::Goodput, dists, 4.0)?;
//! let sol = solve_csra(&inst, 1e-4)?;
//! assert!((sol.blended.total_power() - 4.0).abs() < 1e-6);
//! # Ok::<(), ofdma_sra::Error>(())
//! ```

pub mod csra;
pub mod dsra;
pub mod dual;
pub mod error;
pub mod experiments;
#[cfg(feature = "oracle")]
pub mod oracle;
pub mod seed;
pub mod snr_model;
pub mod utility;

pub use csra::{default_kappa, polish_csra, solve_csra, CsraResult, Polished};
pub use dsra::{brute_force_dsra, dsra_gap_bound, solve_dsra, solve_dsra_from, solve_fixed_assignment, DsraResult};
pub use dual::{allocation_at_mu, mu_bounds, total_power, AllocationState, Dims, DualEvaluation, MuBounds, ProblemInstance, TieRule};
pub use error::{Error, Result};
pub use snr_model::{ChannelConfig, SnrDistribution};
pub use utility::{Mcs, McsTable, Utility, UtilitySpec};
