use num_complex::Complex64;

use super::quad::integrate;
use crate::error::{Error, Result};

/// Default number of atoms used to discretize a conditional SNR distribution.
pub const DEFAULT_ATOMS: usize = 64;

/// One support point of an [`SnrDistribution`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub value: f64,
    pub weight: f64,
}

/// Marginal distribution of a subchannel SNR, stored as weighted atoms.
///
/// Every expectation in the solver is a finite weighted sum over these atoms,
/// so results are exact for the representation and deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct SnrDistribution {
    atoms: Vec<Atom>,
}

impl SnrDistribution {
    /// Builds a distribution from atoms. Weights must be positive and sum to 1
    /// within 1e-12; values must be finite and nonnegative.
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::invalid("distribution needs at least one atom"));
        }
        let mut total = 0.0;
        for a in &atoms {
            if !(a.value.is_finite() && a.value >= 0.0) {
                return Err(Error::invalid(format!("atom value {} is not a nonnegative number", a.value)));
            }
            if !(a.weight.is_finite() && a.weight > 0.0) {
                return Err(Error::invalid(format!("atom weight {} is not positive", a.weight)));
            }
            total += a.weight;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!("atom weights sum to {total}, not 1")));
        }
        Ok(Self { atoms })
    }

    pub fn point_mass(value: f64) -> Self {
        assert!(value.is_finite() && value >= 0.0, "point mass at {value}");
        Self {
            atoms: vec![Atom { value, weight: 1.0 }],
        }
    }

    /// Equal-weight empirical distribution of `samples`.
    pub fn empirical(samples: &[f64]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::invalid("empirical distribution needs at least one sample"));
        }
        if let Some(bad) = samples.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::invalid(format!("sample {bad} is not a nonnegative number")));
        }
        let weight = 1.0 / samples.len() as f64;
        Ok(Self {
            atoms: samples.iter().map(|&value| Atom { value, weight }).collect(),
        })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// `E{f(γ)}` as the weighted atom sum.
    #[inline]
    pub fn expect<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.atoms.iter().map(|a| a.weight * f(a.value)).sum()
    }

    pub fn mean(&self) -> f64 {
        self.expect(|g| g)
    }

    pub fn second_moment(&self) -> f64 {
        self.expect(|g| g * g)
    }
}

/// Exponentially scaled modified Bessel function `e^{-x} I0(x)` for `x >= 0`.
pub(crate) fn bessel_i0e(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x < 30.0 {
        let q = 0.25 * x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 1.0;
        while term > 1e-17 * sum {
            term *= q / (k * k);
            sum += term;
            k += 1.0;
        }
        sum * (-x).exp()
    } else {
        // Hankel asymptotic series; the terms keep shrinking well past k = 25 for x >= 30.
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..26 {
            let odd = (2 * k - 1) as f64;
            term *= odd * odd / (8.0 * k as f64 * x);
            sum += term;
        }
        sum / (2.0 * std::f64::consts::PI * x).sqrt()
    }
}

// Tail cut: |Z - h|^2 / sigma^2 > TAIL_RADIUS^2 has probability e^{-40}.
const TAIL_RADIUS: f64 = 6.324_555_320_336_759; // sqrt(40)

/// Density of `t = |W|^2` with `W ~ CN(sqrt(nu), 1)`.
fn scaled_density(t: f64, nu: f64) -> f64 {
    if t < 0.0 {
        return 0.0;
    }
    let s = t.sqrt();
    let d = s - nu.sqrt();
    (-d * d).exp() * bessel_i0e(2.0 * (nu * t).sqrt())
}

/// Discretizes the law of `|Z|^2` for `Z ~ CN(mean, err_var)` into `n_atoms`
/// equiprobable bins, one atom at the conditional mean of each bin.
///
/// `err_var = 0` yields a point mass at `|mean|^2`.
pub fn conditional_snr_dist(mean: Complex64, err_var: f64, n_atoms: usize) -> Result<SnrDistribution> {
    if n_atoms == 0 {
        return Err(Error::invalid("n_atoms must be at least 1"));
    }
    if !(err_var.is_finite() && err_var >= 0.0) {
        return Err(Error::invalid(format!("estimation error variance {err_var} must be nonnegative")));
    }
    let power = mean.norm_sqr();
    if err_var == 0.0 {
        return Ok(SnrDistribution::point_mass(power));
    }
    let nu = power / err_var;
    let atoms = equiprobable_atoms(nu, n_atoms);
    let w = 1.0 / n_atoms as f64;
    Ok(SnrDistribution {
        atoms: atoms
            .into_iter()
            .map(|t| Atom {
                value: (t * err_var).max(0.0),
                weight: w,
            })
            .collect(),
    })
}

/// Bin conditional means for the unit-variance non-central law with
/// non-centrality `nu` (in units of the error variance).
fn equiprobable_atoms(nu: f64, n_atoms: usize) -> Vec<f64> {
    const ABS_TOL: f64 = 1e-15;
    const REL_TOL: f64 = 1e-12;

    let f = |t: f64| scaled_density(t, nu);
    let tf = |t: f64| t * scaled_density(t, nu);

    // Segments uniform in sqrt(t) over the effective support.
    let s_lo = (nu.sqrt() - TAIL_RADIUS).max(0.0);
    let s_hi = nu.sqrt() + TAIL_RADIUS;
    let n_seg = (4 * n_atoms).max(32);
    let edges: Vec<f64> = (0..=n_seg)
        .map(|j| {
            let s = s_lo + (s_hi - s_lo) * j as f64 / n_seg as f64;
            s * s
        })
        .collect();

    let mut cum_p = Vec::with_capacity(n_seg + 1);
    let mut cum_m = Vec::with_capacity(n_seg + 1);
    cum_p.push(0.0);
    cum_m.push(0.0);
    for w in edges.windows(2) {
        let p = integrate(f, w[0], w[1], ABS_TOL, REL_TOL);
        let m = integrate(tf, w[0], w[1], ABS_TOL, REL_TOL);
        cum_p.push(cum_p.last().unwrap() + p);
        cum_m.push(cum_m.last().unwrap() + m);
    }
    let p_total = cum_p[n_seg];
    let m_total = cum_m[n_seg];

    // First moment accumulated up to each interior quantile.
    let mut moment_at_quantile = Vec::with_capacity(n_atoms + 1);
    moment_at_quantile.push(0.0);
    let mut seg = 0;
    for i in 1..n_atoms {
        let target = p_total * i as f64 / n_atoms as f64;
        while seg + 1 < n_seg && cum_p[seg + 1] <= target {
            seg += 1;
        }
        let (a, b) = (edges[seg], edges[seg + 1]);
        let need = target - cum_p[seg];
        let q = invert_partial_mass(&f, a, b, need, cum_p[seg + 1] - cum_p[seg]);
        let m = cum_m[seg] + integrate(tf, a, q, ABS_TOL, REL_TOL);
        moment_at_quantile.push(m);
    }
    moment_at_quantile.push(m_total);

    let bin_mass = p_total / n_atoms as f64;
    moment_at_quantile
        .windows(2)
        .map(|w| ((w[1] - w[0]) / bin_mass).max(0.0))
        .collect()
}

/// Solves `∫_a^x f = need` for `x` in `[a, b]` (`seg_mass = ∫_a^b f`) with
/// Newton steps safeguarded by bisection.
fn invert_partial_mass<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, need: f64, seg_mass: f64) -> f64 {
    if need <= 0.0 {
        return a;
    }
    if need >= seg_mass {
        return b;
    }
    let (mut lo, mut hi) = (a, b);
    let mut x = a + (b - a) * need / seg_mass;
    for _ in 0..100 {
        let mass = integrate(f, a, x, 1e-16, 1e-13);
        let resid = mass - need;
        if resid.abs() <= 1e-14 * seg_mass.max(1e-300) {
            return x;
        }
        if resid > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let slope = f(x);
        let newton = if slope > 0.0 { x - resid / slope } else { f64::NAN };
        x = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= 1e-15 * hi.max(1.0) {
            break;
        }
    }
    x
}
