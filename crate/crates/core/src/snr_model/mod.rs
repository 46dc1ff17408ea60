//! Channel generation, pilot-aided MMSE estimation and conditional SNR laws.

mod channel;
mod dist;
mod mmse;
pub(crate) mod quad;

pub use channel::{db_to_linear, draw_channel, ChannelConfig, ChannelRealization};
pub use dist::{conditional_snr_dist, Atom, SnrDistribution, DEFAULT_ATOMS};
pub use mmse::{conditional_snr_dists, mmse_estimate, perfect_csi_dists, EstimateState, MmseFilter};
