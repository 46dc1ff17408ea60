use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Frequency-selective downlink channel parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelConfig {
    n_subchannels: usize,
    n_users: usize,
    tap_count: usize,
    tap_variance: f64,
    snr_db: f64,
    pilot_snr_db: f64,
}

impl ChannelConfig {
    /// Tap variance defaults to `1 / tap_count`, which makes `E{γ} = 1`.
    pub fn new(n_subchannels: usize, n_users: usize, tap_count: usize, snr_db: f64, pilot_snr_db: f64) -> Result<Self> {
        let cfg = Self {
            n_subchannels,
            n_users,
            tap_count,
            tap_variance: 1.0 / tap_count.max(1) as f64,
            snr_db,
            pilot_snr_db,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_tap_variance(mut self, tap_variance: f64) -> Result<Self> {
        self.tap_variance = tap_variance;
        self.validate()?;
        Ok(self)
    }

    pub fn with_pilot_snr_db(mut self, pilot_snr_db: f64) -> Result<Self> {
        self.pilot_snr_db = pilot_snr_db;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if self.n_subchannels == 0 || self.n_users == 0 || self.tap_count == 0 {
            return Err(Error::invalid("subchannel, user and tap counts must be positive"));
        }
        if self.tap_count >= self.n_subchannels {
            return Err(Error::invalid(format!(
                "tap count {} must be below the subchannel count {}",
                self.tap_count, self.n_subchannels
            )));
        }
        if !(self.tap_variance.is_finite() && self.tap_variance > 0.0) {
            return Err(Error::invalid(format!("tap variance {} must be positive", self.tap_variance)));
        }
        if !self.snr_db.is_finite() {
            return Err(Error::invalid("snr_db must be finite"));
        }
        if self.pilot_snr_db.is_nan() || self.pilot_snr_db == f64::INFINITY {
            return Err(Error::invalid("pilot_snr_db must be finite or -inf"));
        }
        Ok(())
    }

    pub fn n_subchannels(&self) -> usize {
        self.n_subchannels
    }

    pub fn n_users(&self) -> usize {
        self.n_users
    }

    pub fn tap_count(&self) -> usize {
        self.tap_count
    }

    pub fn tap_variance(&self) -> f64 {
        self.tap_variance
    }

    pub fn snr_db(&self) -> f64 {
        self.snr_db
    }

    pub fn pilot_snr_db(&self) -> f64 {
        self.pilot_snr_db
    }

    /// `E{γ}` for every (n, k).
    pub fn mean_snr(&self) -> f64 {
        self.tap_count as f64 * self.tap_variance
    }

    /// Total transmit power `P_con` such that `P_con / N · E{γ}` equals the average SNR.
    pub fn total_power(&self) -> f64 {
        self.n_subchannels as f64 * db_to_linear(self.snr_db) / self.mean_snr()
    }

    /// Pilot power such that `p_pilot · E{γ}` equals the pilot SNR.
    pub fn pilot_power(&self) -> f64 {
        db_to_linear(self.pilot_snr_db) / self.mean_snr()
    }

    /// First `L` columns of the (unnormalized) `N`-point DFT matrix.
    pub fn dft_columns(&self) -> DMatrix<Complex64> {
        let n = self.n_subchannels;
        DMatrix::from_fn(n, self.tap_count, |row, col| {
            let phase = -2.0 * std::f64::consts::PI * ((row * col) % n) as f64 / n as f64;
            Complex64::from_polar(1.0, phase)
        })
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// One draw of every user's channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    /// Impulse response, `L × K`.
    pub taps: DMatrix<Complex64>,
    /// Frequency response `h_k = F g_k`, `N × K`.
    pub freq_gains: DMatrix<Complex64>,
    /// `γ_{n,k} = |h_{n,k}|²`, `N × K`.
    pub true_snr: DMatrix<f64>,
}

impl ChannelRealization {
    /// Builds a realization from given taps.
    pub fn from_taps(cfg: &ChannelConfig, taps: DMatrix<Complex64>) -> Result<Self> {
        if taps.nrows() != cfg.tap_count || taps.ncols() != cfg.n_users {
            return Err(Error::invalid(format!(
                "taps are {}x{}, expected {}x{}",
                taps.nrows(),
                taps.ncols(),
                cfg.tap_count,
                cfg.n_users
            )));
        }
        let freq_gains = cfg.dft_columns() * &taps;
        let true_snr = freq_gains.map(|h| h.norm_sqr());
        Ok(Self {
            taps,
            freq_gains,
            true_snr,
        })
    }
}

pub(crate) fn complex_gaussian<R: Rng>(rng: &mut R, variance: f64) -> Complex64 {
    let scale = (0.5 * variance).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(scale * re, scale * im)
}

/// Draws i.i.d. `CN(0, σ_g²)` taps for every user and maps them to the
/// frequency domain. Deterministic in `seed`.
pub fn draw_channel(cfg: &ChannelConfig, seed: u64) -> ChannelRealization {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut taps = DMatrix::zeros(cfg.tap_count, cfg.n_users);
    for k in 0..cfg.n_users {
        for l in 0..cfg.tap_count {
            taps[(l, k)] = complex_gaussian(&mut rng, cfg.tap_variance);
        }
    }
    ChannelRealization::from_taps(cfg, taps).expect("tap matrix shaped from config")
}
