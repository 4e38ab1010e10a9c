//! Reproducible sampled paths of the studied processes.
//!
//! All simulators are pure functions of their parameters and a [`SeedSpec`];
//! equal inputs give bit-identical paths. Paths are uniform grids of n
//! steps on [0, t] read as step interpolants.
//!
//! The `*_with_extremes` variants additionally draw the exact within-step
//! extremes of the underlying diffusion (conditionally on the endpoints each
//! step is a Brownian bridge, whose running maximum and minimum invert in
//! closed form) and splice them into the value sequence. Bar counts of such
//! sequences estimate the counts of the continuous path without the
//! O(sqrt(dt)) grid bias of plain sampling, which plain grids cannot reach
//! at the epsilon scales the validation experiments use.

use crate::rng::{SeedSpec, Stream};
use crate::{Error, Result};
use alloc::vec::Vec;
#[cfg(not(feature = "std"))]
use num_traits::Float;

/// A uniformly sampled real-valued path on [0, t]: n + 1 values at times
/// k t / n.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPath {
    horizon: f64,
    values: Vec<f64>,
}

impl SampledPath {
    pub fn new(horizon: f64, values: Vec<f64>) -> Result<Self> {
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(Error::InvalidParameter("path horizon must be finite and > 0"));
        }
        if values.len() < 2 {
            return Err(Error::InvalidParameter("path needs at least one step"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("path values must be finite"));
        }
        Ok(Self { horizon, values })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Number of steps n.
    pub fn steps(&self) -> usize {
        self.values.len() - 1
    }

    pub fn dt(&self) -> f64 {
        self.horizon / self.steps() as f64
    }

    /// Sampling time of the k-th value, exact at both endpoints.
    pub fn time_at(&self, k: usize) -> f64 {
        self.horizon * k as f64 / self.steps() as f64
    }
}

fn check_tn(t: f64, n: usize) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter("t must be finite and > 0"));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1"));
    }
    Ok(())
}

/// Standard Brownian motion started at 0.
pub fn simulate_brownian(t: f64, n: usize, seed: SeedSpec) -> Result<SampledPath> {
    check_tn(t, n)?;
    let mut stream = seed.stream();
    let sqrt_dt = (t / n as f64).sqrt();
    let mut values = Vec::with_capacity(n + 1);
    values.push(0.0);
    let mut x = 0.0;
    for _ in 0..n {
        x += sqrt_dt * stream.normal();
        values.push(x);
    }
    SampledPath::new(t, values)
}

/// Reflected Brownian motion |B|; elementwise absolute value of
/// [`simulate_brownian`] under the same seed.
pub fn simulate_reflected(t: f64, n: usize, seed: SeedSpec) -> Result<SampledPath> {
    let mut path = simulate_brownian(t, n, seed)?;
    for v in &mut path.values {
        *v = v.abs();
    }
    Ok(path)
}

/// Brownian motion with drift, mu t + sigma B_t, built on the same stream as
/// [`simulate_brownian`].
pub fn simulate_drift(mu: f64, sigma: f64, t: f64, n: usize, seed: SeedSpec) -> Result<SampledPath> {
    if !(sigma > 0.0) || !sigma.is_finite() || !mu.is_finite() {
        return Err(Error::InvalidParameter("drift: sigma must be > 0, mu finite"));
    }
    let mut path = simulate_brownian(t, n, seed)?;
    let steps = path.steps();
    for (k, v) in path.values.iter_mut().enumerate() {
        *v = mu * t * k as f64 / steps as f64 + sigma * *v;
    }
    Ok(path)
}

/// Ornstein-Uhlenbeck process dX = -theta X dt + sigma dB, sampled with the
/// exact transition density (no discretization bias).
pub fn simulate_ou(
    theta: f64,
    sigma: f64,
    x0: f64,
    t: f64,
    n: usize,
    seed: SeedSpec,
) -> Result<SampledPath> {
    check_tn(t, n)?;
    if !(theta > 0.0) || !(sigma > 0.0) || !theta.is_finite() || !sigma.is_finite() {
        return Err(Error::InvalidParameter("ou: theta and sigma must be > 0"));
    }
    if !x0.is_finite() {
        return Err(Error::InvalidParameter("ou: x0 must be finite"));
    }
    let dt = t / n as f64;
    let decay = (-theta * dt).exp();
    let noise = sigma * ((1.0 - (-2.0 * theta * dt).exp()) / (2.0 * theta)).sqrt();
    let mut stream = seed.stream();
    let mut values = Vec::with_capacity(n + 1);
    let mut x = x0;
    values.push(x);
    for _ in 0..n {
        x = x * decay + noise * stream.normal();
        values.push(x);
    }
    SampledPath::new(t, values)
}

/// Standard symmetric alpha-stable variate from one (angle, exponential)
/// pair, by the Chambers-Mallows-Stuck transform.
///
/// At alpha = 2 the transform degenerates to sqrt(2) times the normal built
/// from the same pair.
pub fn stable_increment(alpha: f64, u: f64, w: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::InvalidParameter("stable: alpha must be in (0, 2]"));
    }
    if alpha == 2.0 {
        return Ok(core::f64::consts::SQRT_2 * (2.0 * w).sqrt() * u.sin());
    }
    let num = (alpha * u).sin();
    let den = u.cos().powf(1.0 / alpha);
    let tail = ((u - alpha * u).cos() / w).powf((1.0 - alpha) / alpha);
    Ok(num / den * tail)
}

/// Symmetric alpha-stable Lévy path; increments scale as dt^(1/alpha).
pub fn simulate_alpha_stable(alpha: f64, t: f64, n: usize, seed: SeedSpec) -> Result<SampledPath> {
    check_tn(t, n)?;
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::InvalidParameter("stable: alpha must be in (0, 2]"));
    }
    let scale = (t / n as f64).powf(1.0 / alpha);
    let mut stream = seed.stream();
    let mut values = Vec::with_capacity(n + 1);
    let mut x = 0.0;
    values.push(x);
    for _ in 0..n {
        let u = stream.angle();
        let w = stream.exponential();
        x += scale * stable_increment(alpha, u, w)?;
        values.push(x);
    }
    SampledPath::new(t, values)
}

/// Running maximum of a Brownian bridge from a to b with variance `var`,
/// inverted from P(M >= m) = exp(-2 (m - a)(m - b) / var).
fn bridge_max(a: f64, b: f64, var: f64, u: f64) -> f64 {
    let q = -0.5 * var * u.ln();
    0.5 * ((a + b) + ((a - b) * (a - b) + 4.0 * q).sqrt())
}

fn bridge_min(a: f64, b: f64, var: f64, u: f64) -> f64 {
    let q = -0.5 * var * u.ln();
    0.5 * ((a + b) - ((a - b) * (a - b) + 4.0 * q).sqrt())
}

/// Splice per-step bridge extremes into a grid path. `var` is the diffusion
/// variance accrued over one step. Draw order per step: max then min; the
/// pair is inserted in the direction of the increment.
fn splice_extremes(grid: &[f64], var: f64, stream: &mut Stream) -> Vec<f64> {
    let n = grid.len() - 1;
    let mut out = Vec::with_capacity(3 * n + 1);
    out.push(grid[0]);
    for k in 0..n {
        let (a, b) = (grid[k], grid[k + 1]);
        let mx = bridge_max(a, b, var, stream.uniform_open());
        let mn = bridge_min(a, b, var, stream.uniform_open());
        if b >= a {
            out.push(mn);
            out.push(mx);
        } else {
            out.push(mx);
            out.push(mn);
        }
        out.push(b);
    }
    out
}

/// Brownian path with exact within-step extremes spliced in (3n + 1 values).
pub fn simulate_brownian_with_extremes(t: f64, n: usize, seed: SeedSpec) -> Result<Vec<f64>> {
    let path = simulate_brownian(t, n, seed)?;
    let mut stream = seed.stream();
    for _ in 0..n {
        stream.normal(); // advance past the increment draws
    }
    Ok(splice_extremes(path.values(), path.dt(), &mut stream))
}

/// Reflected Brownian path with within-step extremes: |B| of the refined
/// Brownian sequence, which is exact because reflection maps bridge extremes
/// to extremes.
pub fn simulate_reflected_with_extremes(t: f64, n: usize, seed: SeedSpec) -> Result<Vec<f64>> {
    let mut v = simulate_brownian_with_extremes(t, n, seed)?;
    for x in &mut v {
        *x = x.abs();
    }
    Ok(v)
}

/// Drifted Brownian path with within-step extremes. Conditionally on the
/// endpoints the drift is absorbed, so the bridge inversion applies as-is
/// with variance sigma^2 dt.
pub fn simulate_drift_with_extremes(
    mu: f64,
    sigma: f64,
    t: f64,
    n: usize,
    seed: SeedSpec,
) -> Result<Vec<f64>> {
    let path = simulate_drift(mu, sigma, t, n, seed)?;
    let mut stream = seed.stream();
    for _ in 0..n {
        stream.normal();
    }
    let var = sigma * sigma * path.dt();
    Ok(splice_extremes(path.values(), var, &mut stream))
}

/// Ornstein-Uhlenbeck path with within-step extremes. Endpoints use the
/// exact transition; within a step the bridge is treated as Brownian with
/// variance sigma^2 dt, an O(theta dt) approximation.
pub fn simulate_ou_with_extremes(
    theta: f64,
    sigma: f64,
    x0: f64,
    t: f64,
    n: usize,
    seed: SeedSpec,
) -> Result<Vec<f64>> {
    let path = simulate_ou(theta, sigma, x0, t, n, seed)?;
    let mut stream = seed.stream();
    for _ in 0..n {
        stream.normal();
    }
    let var = sigma * sigma * path.dt();
    Ok(splice_extremes(path.values(), var, &mut stream))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SEED: SeedSpec = SeedSpec { master: 11, replica: 0 };

    #[test]
    fn single_step_brownian() {
        let p = simulate_brownian(1.0, 1, SEED).unwrap();
        assert_eq!(p.values().len(), 2);
        assert_eq!(p.values()[0], 0.0);
        assert!(p.values()[1].abs() < 8.0);
    }

    #[test]
    fn brownian_rejects_bad_parameters() {
        assert!(simulate_brownian(0.0, 8, SEED).is_err());
        assert!(simulate_brownian(f64::NAN, 8, SEED).is_err());
        assert!(simulate_brownian(1.0, 0, SEED).is_err());
    }

    #[test]
    fn determinism() {
        let a = simulate_brownian(2.0, 64, SEED).unwrap();
        let b = simulate_brownian(2.0, 64, SEED).unwrap();
        assert_eq!(a, b);
        let c = simulate_alpha_stable(1.5, 2.0, 64, SEED).unwrap();
        let d = simulate_alpha_stable(1.5, 2.0, 64, SEED).unwrap();
        assert_eq!(c, d);
        let e = simulate_ou(0.7, 1.3, 0.4, 2.0, 64, SEED).unwrap();
        let f = simulate_ou(0.7, 1.3, 0.4, 2.0, 64, SEED).unwrap();
        assert_eq!(e, f);
    }

    #[test]
    fn increment_variance_matches_dt() {
        let n = 1 << 15;
        let p = simulate_brownian(1.0, n, SEED).unwrap();
        let dt = p.dt();
        let mut sq = 0.0;
        for k in 0..n {
            let d = p.values()[k + 1] - p.values()[k];
            sq += d * d;
        }
        let var = sq / n as f64;
        assert!((var / dt - 1.0).abs() < 0.05, "relative error {}", var / dt - 1.0);
    }

    #[test]
    fn reflected_is_abs_of_brownian() {
        let b = simulate_brownian(1.0, 128, SEED).unwrap();
        let r = simulate_reflected(1.0, 128, SEED).unwrap();
        for (x, y) in b.values().iter().zip(r.values()) {
            assert_eq!(x.abs(), *y);
        }
        assert!(r.values().iter().all(|v| *v >= 0.0));
    }

    #[test]
    fn drift_degenerates_to_brownian() {
        let b = simulate_brownian(1.0, 64, SEED).unwrap();
        let d = simulate_drift(0.0, 1.0, 1.0, 64, SEED).unwrap();
        assert_eq!(b, d);
    }

    #[test]
    fn drift_deterministic_limit() {
        let d = simulate_drift(1.0, 1e-9, 1.0, 64, SEED).unwrap();
        for (k, v) in d.values().iter().enumerate() {
            assert!((v - d.time_at(k)).abs() < 1e-6);
        }
        assert_eq!(d.values()[0], 0.0);
    }

    #[test]
    fn ou_mean_reversion_limit() {
        let p = simulate_ou(1e6, 1.0, 1.0, 1.0, 1, SEED).unwrap();
        assert!(p.values()[1].abs() < 0.01, "v1 = {}", p.values()[1]);
    }

    #[test]
    fn ou_rejects_bad_parameters() {
        assert!(simulate_ou(0.0, 1.0, 0.0, 1.0, 8, SEED).is_err());
        assert!(simulate_ou(1.0, -1.0, 0.0, 1.0, 8, SEED).is_err());
    }

    #[test]
    fn stable_increment_edge_cases() {
        assert!(stable_increment(2.5, 0.0, 1.0).is_err());
        assert!(stable_increment(0.0, 0.0, 1.0).is_err());
        assert_eq!(stable_increment(1.0, 0.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn stable_alpha2_variance_is_two() {
        let mut stream = SEED.stream();
        let n = 100_000;
        let mut sq = 0.0;
        for _ in 0..n {
            let u = stream.angle();
            let w = stream.exponential();
            let z = stable_increment(2.0, u, w).unwrap();
            sq += z * z;
        }
        let var = sq / n as f64;
        assert!((var / 2.0 - 1.0).abs() < 0.03, "var = {var}");
    }

    #[test]
    fn extremes_bracket_the_grid() {
        let refined = simulate_brownian_with_extremes(1.0, 256, SEED).unwrap();
        assert_eq!(refined.len(), 3 * 256 + 1);
        for k in 0..256 {
            let a = refined[3 * k];
            let b = refined[3 * k + 3];
            let lo = refined[3 * k + 1].min(refined[3 * k + 2]);
            let hi = refined[3 * k + 1].max(refined[3 * k + 2]);
            assert!(lo <= a.min(b) && hi >= a.max(b));
        }
        // grid points coincide with the plain simulation
        let plain = simulate_brownian(1.0, 256, SEED).unwrap();
        for k in 0..=256 {
            assert_eq!(plain.values()[k], refined[3 * k]);
        }
    }
}
