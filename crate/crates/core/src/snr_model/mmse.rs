use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::channel::{complex_gaussian, ChannelConfig, ChannelRealization};
use super::dist::{conditional_snr_dist, SnrDistribution};
use crate::error::{Error, Result};

const RESIDUAL_TOL: f64 = 1e-8;

/// Posterior channel knowledge after one pilot symbol per user.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateState {
    /// `E{h | ỹ}`, `N × K`.
    pub mean: DMatrix<Complex64>,
    /// Common diagonal of `cov(h_k | ỹ_k)`.
    pub est_error_var: f64,
}

/// Linear MMSE estimator for the pilot model `ỹ = √p h + ν`, `ν ~ CN(0, I)`.
///
/// The gain and posterior covariance depend only on the configuration, so
/// they are computed once and shared by all users.
#[derive(Debug, Clone)]
pub struct MmseFilter {
    pilot_amplitude: f64,
    gain: DMatrix<Complex64>,
    covariance: DMatrix<Complex64>,
}

impl MmseFilter {
    pub fn new(cfg: &ChannelConfig) -> Result<Self> {
        let n = cfg.n_subchannels();
        let p = cfg.pilot_power();
        let f = cfg.dft_columns();
        let ffh = &f * f.adjoint();
        let var = Complex64::from(cfg.tap_variance());
        let r_hh = ffh.map(|z| z * var);
        let r_hy = r_hh.map(|z| z * p.sqrt());
        let r_yy = r_hh.map(|z| z * p) + DMatrix::<Complex64>::identity(n, n);

        // gain = R_hy R_yy^{-1} = (R_yy^{-1} R_hy)^H since both are Hermitian.
        let chol = r_yy
            .clone()
            .cholesky()
            .ok_or_else(|| Error::invalid("pilot covariance is not positive definite"))?;
        let solved = chol.solve(&r_hy);
        let residual = max_abs(&(&r_yy * &solved - &r_hy)) / (max_abs(&r_yy) * max_abs(&solved) + max_abs(&r_hy)).max(f64::MIN_POSITIVE);
        if residual > RESIDUAL_TOL {
            return Err(Error::SolveResidual {
                residual,
                tolerance: RESIDUAL_TOL,
            });
        }
        let gain = solved.adjoint();
        let covariance = &r_hh - &gain * &r_hy;
        Ok(Self {
            pilot_amplitude: p.sqrt(),
            gain,
            covariance,
        })
    }

    pub fn gain(&self) -> &DMatrix<Complex64> {
        &self.gain
    }

    /// `cov(h_k | ỹ_k)`, identical for every user.
    pub fn covariance(&self) -> &DMatrix<Complex64> {
        &self.covariance
    }

    /// Largest pairwise gap between diagonal entries of the posterior covariance.
    pub fn diagonal_spread(&self) -> f64 {
        let d: Vec<f64> = self.covariance.diagonal().iter().map(|z| z.re).collect();
        let max = d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = d.iter().copied().fold(f64::INFINITY, f64::min);
        max - min
    }

    /// Synthesizes pilot observations for `realization` from `seed`.
    pub fn observe(&self, realization: &ChannelRealization, seed: u64) -> DMatrix<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = &realization.freq_gains;
        let mut y = DMatrix::zeros(h.nrows(), h.ncols());
        for k in 0..h.ncols() {
            for n in 0..h.nrows() {
                y[(n, k)] = h[(n, k)] * self.pilot_amplitude + complex_gaussian(&mut rng, 1.0);
            }
        }
        y
    }

    /// Posterior mean for given observations (one column per user).
    pub fn estimate_from(&self, observations: &DMatrix<Complex64>) -> EstimateState {
        EstimateState {
            mean: &self.gain * observations,
            est_error_var: self.covariance[(0, 0)].re.max(0.0),
        }
    }
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Pilot-aided MMSE estimate of every user's frequency response. Pilot noise
/// is drawn deterministically from `seed`.
pub fn mmse_estimate(cfg: &ChannelConfig, realization: &ChannelRealization, seed: u64) -> Result<EstimateState> {
    let filter = MmseFilter::new(cfg)?;
    let y = filter.observe(realization, seed);
    Ok(filter.estimate_from(&y))
}

/// Conditional SNR distributions for every (n, k), in row-major `n * K + k` order.
pub fn conditional_snr_dists(estimate: &EstimateState, n_atoms: usize) -> Result<Vec<SnrDistribution>> {
    let (n_sub, n_users) = estimate.mean.shape();
    (0..n_sub * n_users)
        .into_par_iter()
        .map(|idx| conditional_snr_dist(estimate.mean[(idx / n_users, idx % n_users)], estimate.est_error_var, n_atoms))
        .collect()
}

/// Point masses at the realized SNRs, in row-major `n * K + k` order.
pub fn perfect_csi_dists(realization: &ChannelRealization) -> Vec<SnrDistribution> {
    let (n_sub, n_users) = realization.true_snr.shape();
    (0..n_sub * n_users)
        .map(|idx| SnrDistribution::point_mass(realization.true_snr[(idx / n_users, idx % n_users)]))
        .collect()
}
