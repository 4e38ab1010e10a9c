//! Closed-form zeta functions, expected bar counts, range and bar-length
//! laws, local times and average-diagram densities for Brownian motion,
//! reflected Brownian motion, Brownian motion with drift and the
//! Ornstein-Uhlenbeck process.
//!
//! Expectations with two series representations (an erfc-type series
//! converging fast for large eps and a theta-type series converging fast for
//! small eps) switch regime at eps^2 = t; the representations overlap there
//! and the tests pin their agreement. Series are truncated by estimated
//! remainder bounds, never by fixed term counts.

use crate::special::{erfc, gamma, gaussian_pdf, log_gamma, riemann_zeta, EvalPolicy};
use crate::{Error, Result};
use core::f64::consts::PI;
#[cfg(not(feature = "std"))]
use num_traits::Float;

/// A truncated series value together with the number of terms consumed and
/// the estimated remainder at truncation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    pub value: f64,
    pub terms: usize,
    pub bound: f64,
}

impl SeriesResult {
    fn exact(value: f64) -> Self {
        Self {
            value,
            terms: 0,
            bound: 0.0,
        }
    }
}

/// Sum `f(k)` for k = 1, 2, ... until three consecutive terms fall below
/// half the tolerance; every series here decays at least geometrically once
/// past its head, so the magnitude of the last term bounds the remainder and
/// the reported bound stays within the policy tolerance. Three consecutive
/// small terms make the rule robust against leading zero terms and interior
/// sign-change cancellations.
fn tail_sum<F: FnMut(usize) -> f64>(policy: EvalPolicy, mut f: F) -> Result<SeriesResult> {
    let mut sum = 0.0;
    let mut below = 0usize;
    for k in 1..=policy.max_terms {
        let t = f(k);
        sum += t;
        if t.abs() < 0.5 * policy.tol {
            below += 1;
            if below >= 3 {
                return Ok(SeriesResult {
                    value: sum,
                    terms: k,
                    bound: 2.0 * t.abs(),
                });
            }
        } else {
            below = 0;
        }
    }
    Err(Error::NoConvergence {
        terms: policy.max_terms,
    })
}

fn check_pos(v: f64, what: &'static str) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::InvalidParameter(what));
    }
    Ok(())
}

fn clamp01(r: SeriesResult) -> SeriesResult {
    SeriesResult {
        value: r.value.clamp(0.0, 1.0),
        ..r
    }
}

// ---------------------------------------------------------------------------
// Brownian motion

/// Zeta function of Brownian motion on [0, t]:
/// `4 (2^p - 3) / sqrt(pi) * (t/2)^(p/2) * Gamma((p+1)/2) * zeta(p-1)`,
/// with a unique simple pole at p = 2 of residue t.
///
/// At the negative odd integers the Gamma pole meets a trivial zero of zeta;
/// those removable points are reported as pole errors rather than taking the
/// limit.
pub fn zeta_bm(p: f64, t: f64) -> Result<f64> {
    check_pos(t, "zeta_bm: t must be > 0")?;
    if p == 2.0 {
        return Err(Error::Pole("zeta_bm: pole at p = 2"));
    }
    let g = gamma((p + 1.0) / 2.0)?;
    let z = riemann_zeta(p - 1.0)?;
    Ok(4.0 * ((2.0f64).powf(p) - 3.0) / PI.sqrt() * (0.5 * t).powf(0.5 * p) * g * z)
}

/// Tail zeta function of Brownian motion (range contribution removed):
/// `2^(3 - 3p/2) t^(p/2) Gamma(p) / Gamma(p/2) * zeta(p-1)`, simple pole at
/// p = 2 of residue t.
pub fn zeta_hat_bm(p: f64, t: f64) -> Result<f64> {
    check_pos(t, "zeta_hat_bm: t must be > 0")?;
    if p == 2.0 {
        return Err(Error::Pole("zeta_hat_bm: pole at p = 2"));
    }
    let g = gamma(p)? / gamma(0.5 * p)?;
    let z = riemann_zeta(p - 1.0)?;
    Ok((2.0f64).powf(3.0 - 1.5 * p) * t.powf(0.5 * p) * g * z)
}

/// Symmetric combination `(3 * 2^p - 8)(p - 2)(2 pi t)^(-p/2) zeta_B(p)`;
/// satisfies eta(p) = eta(3 - p).
pub fn eta_bm(p: f64, t: f64) -> Result<f64> {
    let z = zeta_bm(p, t)?;
    Ok((3.0 * (2.0f64).powf(p) - 8.0) * (p - 2.0) * (2.0 * PI * t).powf(-0.5 * p) * z)
}

/// `P(R_t >= eps)` for the range of Brownian motion on [0, t].
///
/// Large eps uses the alternating series `4 sum (-1)^(k-1) k erfc(k eps /
/// sqrt(2t))`; small eps uses the dual theta-type series obtained from the
/// partial-fraction expansion of the Laplace transform
/// `sech^2(eps sqrt(lambda/2)) / lambda`, which the alternating form cannot
/// reach at small eps without catastrophic cancellation.
pub fn prob_range_geq(eps: f64, t: f64, policy: EvalPolicy) -> Result<SeriesResult> {
    check_pos(eps, "prob_range_geq: eps must be > 0")?;
    check_pos(t, "prob_range_geq: t must be > 0")?;
    if eps * eps >= t {
        let u = eps / (2.0 * t).sqrt();
        let r = tail_sum(policy, |k| {
            let k = k as f64;
            let sign = if (k as u64) % 2 == 1 { 1.0 } else { -1.0 };
            4.0 * sign * k * erfc(k * u)
        })?;
        Ok(clamp01(r))
    } else {
        let scale = t / (eps * eps);
        let r = tail_sum(policy, |n| {
            let a = PI * (n as f64 - 0.5);
            -(2.0 / (a * a) + 8.0 * scale) * (-2.0 * a * a * scale).exp()
        })?;
        Ok(clamp01(SeriesResult {
            value: 1.0 + r.value,
            ..r
        }))
    }
}

/// `E[N^eps_t]` for Brownian motion: erfc representation for eps^2 >= t,
/// theta representation `t / 2 eps^2 + 2/3 + ...` below.
pub fn expected_nveps_bm(eps: f64, t: f64, policy: EvalPolicy) -> Result<SeriesResult> {
    check_pos(eps, "expected_nveps_bm: eps must be > 0")?;
    check_pos(t, "expected_nveps_bm: t must be > 0")?;
    if eps * eps >= t {
        let u = eps / (2.0 * t).sqrt();
        tail_sum(policy, |k| {
            let k = k as f64;
            4.0 * ((2.0 * k - 1.0) * erfc((2.0 * k - 1.0) * u) - k * erfc(2.0 * k * u))
        })
    } else {
        let lead = t / (2.0 * eps * eps) + 2.0 / 3.0;
        let scale = t / (eps * eps);
        let r = tail_sum(policy, |k| {
            let kf = k as f64;
            let sign = if k % 2 == 1 { -3.0 } else { 1.0 };
            2.0 * sign * scale * (-0.5 * PI * PI * kf * kf * scale).exp()
                * (1.0 + 1.0 / (PI * PI * kf * kf * scale))
        })?;
        Ok(SeriesResult {
            value: lead + r.value,
            ..r
        })
    }
}

/// `E[N^{x,x+eps}_t]` for Brownian motion at level x > 0:
/// `sum_k erfc((x + (2k-1) eps) / sqrt(2t))`.
pub fn expected_nxxeps_bm(x: f64, eps: f64, t: f64, policy: EvalPolicy) -> Result<SeriesResult> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::InvalidParameter("expected_nxxeps_bm: x must be >= 0"));
    }
    check_pos(eps, "expected_nxxeps_bm: eps must be > 0")?;
    check_pos(t, "expected_nxxeps_bm: t must be > 0")?;
    let s = (2.0 * t).sqrt();
    tail_sum(policy, |k| erfc((x + (2.0 * k as f64 - 1.0) * eps) / s))
}

/// Survival law of the k-th longest bar of Brownian motion on [0, t],
/// `P(l_k >= eps)`, for k in {2, 3, 4}.
pub fn bar_length_survival_bm(k: u32, eps: f64, t: f64, policy: EvalPolicy) -> Result<SeriesResult> {
    check_pos(eps, "bar_length_survival_bm: eps must be > 0")?;
    check_pos(t, "bar_length_survival_bm: t must be > 0")?;
    let c = (2.0 / t).sqrt() * eps;
    let r = match k {
        2 => tail_sum(policy, |j| {
            let j = j as f64;
            4.0 * j * (erfc(j * c) - 4.0 * erfc(2.0 * j * c))
        })?,
        3 => tail_sum(policy, |j| {
            let j = j as f64;
            8.0 / 3.0 * j * (4.0 * (4.0 * j * j - 1.0) * erfc(2.0 * j * c) - (j * j - 1.0) * erfc(j * c))
        })?,
        4 => tail_sum(policy, |j| {
            let j = j as f64;
            let j2 = j * j;
            8.0 / 15.0
                * j
                * ((j2 * j2 - 5.0 * j2 + 4.0) * erfc(j * c)
                    - 16.0 * (4.0 * j2 * j2 - 5.0 * j2 + 1.0) * erfc(2.0 * j * c))
        })?,
        _ => {
            return Err(Error::InvalidParameter(
                "bar_length_survival_bm: k must be 2, 3 or 4",
            ))
        }
    };
    Ok(clamp01(r))
}

/// Density of the Brownian local time at level x >= 0 and value w > 0:
/// `P(L^x_t = w) = 2 phi(x + w, t)`. The atom at w = 0 carries the
/// probability of never reaching x.
pub fn local_time_density_bm(x: f64, w: f64, t: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::InvalidParameter("local_time_density_bm: x must be >= 0"));
    }
    check_pos(w, "local_time_density_bm: w must be > 0")?;
    Ok(2.0 * gaussian_pdf(x + w, t)?)
}

/// Density of the average persistence diagram of Brownian motion in
/// birth-persistence coordinates, for x > 0 and eps > 0.
pub fn avg_diagram_density_bm(x: f64, eps: f64, t: f64, policy: EvalPolicy) -> Result<SeriesResult> {
    check_pos(x, "avg_diagram_density_bm: x must be > 0")?;
    check_pos(eps, "avg_diagram_density_bm: eps must be > 0")?;
    check_pos(t, "avg_diagram_density_bm: t must be > 0")?;
    let amp = (2.0 / (PI * t * t * t)).sqrt();
    tail_sum(policy, |k| {
        let k = k as f64;
        let a = x + (2.0 * k - 1.0) * eps;
        amp * (2.0 * k - 1.0) * a * (-a * a / (2.0 * t)).exp()
    })
}

// ---------------------------------------------------------------------------
// Reflected Brownian motion

/// Zeta function of |B| on [0, t]:
/// `2^(1 - p/2) (2^p - 2) t^(p/2) / sqrt(pi) * Gamma((p+1)/2) * zeta(p-1)`,
/// unique pole at p = 2 of residue t.
pub fn zeta_reflected(p: f64, t: f64) -> Result<f64> {
    check_pos(t, "zeta_reflected: t must be > 0")?;
    if p == 2.0 {
        return Err(Error::Pole("zeta_reflected: pole at p = 2"));
    }
    let g = gamma((p + 1.0) / 2.0)?;
    let z = riemann_zeta(p - 1.0)?;
    Ok((2.0f64).powf(1.0 - 0.5 * p) * ((2.0f64).powf(p) - 2.0) * t.powf(0.5 * p) / PI.sqrt() * g * z)
}

/// `E[N^eps_t]` for reflected Brownian motion; erfc representation above
/// the regime switch, theta representation `t / 2 eps^2 + 1/6 + ...` below.
/// Both depend on eps / sqrt(t) only.
pub fn expected_nveps_reflected(eps: f64, t: f64, policy: EvalPolicy) -> Result<SeriesResult> {
    check_pos(eps, "expected_nveps_reflected: eps must be > 0")?;
    check_pos(t, "expected_nveps_reflected: t must be > 0")?;
    if eps * eps >= t {
        let u = eps / (2.0 * t).sqrt();
        tail_sum(policy, |k| {
            let k = k as f64;
            2.0 * k * (erfc(k * u) - 2.0 * erfc(2.0 * k * u))
        })
    } else {
        let w2 = eps * eps / t;
        let lead = 1.0 / (2.0 * w2) + 1.0 / 6.0;
        let r = tail_sum(policy, |k| {
            let k = k as f64;
            let pk2 = PI * PI * k * k;
            let e2 = (-2.0 * pk2 / w2).exp();
            let e1 = (-0.5 * pk2 / w2).exp();
            (4.0 * pk2 * e2 + w2 * e2 - 2.0 * e1 * (pk2 + w2)) / (pk2 * w2)
        })?;
        Ok(SeriesResult {
            value: lead + r.value,
            ..r
        })
    }
}

/// `E[N^{x,x+eps}_t]` for reflected Brownian motion at level x > 0:
/// `2 sum_{k>=0} erfc((x + (2k+1) eps) / sqrt(2t))`.
pub fn expected_nxxeps_reflected(
    x: f64,
    eps: f64,
    t: f64,
    policy: EvalPolicy,
) -> Result<SeriesResult> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::InvalidParameter(
            "expected_nxxeps_reflected: x must be >= 0",
        ));
    }
    check_pos(eps, "expected_nxxeps_reflected: eps must be > 0")?;
    check_pos(t, "expected_nxxeps_reflected: t must be > 0")?;
    let s = (2.0 * t).sqrt();
    // odd multiples (2j+1) eps for j >= 0, re-indexed to k = j + 1
    tail_sum(policy, |k| 2.0 * erfc((x + (2.0 * k as f64 - 1.0) * eps) / s))
}

// ---------------------------------------------------------------------------
// Brownian motion with drift

/// Expected rectangle count of the drifted process mu t + B_t (sigma = 1) on
/// the infinite ray, for any level x > 0: `1 / (e^(2 mu eps) - 1)`. Counts
/// the excursions that return below x; the final never-returning excursion
/// is not part of the diagram on the ray.
pub fn expected_nxxeps_drift_ray(mu: f64, eps: f64) -> Result<f64> {
    check_pos(mu, "expected_nxxeps_drift_ray: mu must be > 0")?;
    check_pos(eps, "expected_nxxeps_drift_ray: eps must be > 0")?;
    Ok(1.0 / (2.0 * mu * eps).exp_m1())
}

// ---------------------------------------------------------------------------
// Ornstein-Uhlenbeck

/// Expected local time at level 0 of the Ornstein-Uhlenbeck process
/// dX = -theta X dt + sigma dB on [0, t], per the series
/// `(sigma/sqrt(theta)) [ (2 theta t + log 4)/sqrt(pi)
///   + sum_k (-1)^(k+1) e^(-2 theta k t) / (k^2 Gamma((1-2k)/2) Gamma(k)) ]`.
///
/// The reflection identity `1/Gamma((1-2k)/2) = (-1)^k Gamma(k+1/2) / pi`
/// turns the summand into `-e^(-2 theta k t) Gamma(k+1/2) / (pi k^2 Gamma(k))`,
/// which is evaluated through log-gamma differences to avoid overflow.
pub fn expected_local_time_ou_zero(
    theta: f64,
    sigma: f64,
    t: f64,
    policy: EvalPolicy,
) -> Result<SeriesResult> {
    check_pos(theta, "expected_local_time_ou_zero: theta must be > 0")?;
    check_pos(sigma, "expected_local_time_ou_zero: sigma must be > 0")?;
    check_pos(t, "expected_local_time_ou_zero: t must be > 0")?;
    let amp = sigma / theta.sqrt();
    let lead = (2.0 * theta * t + (4.0f64).ln()) / PI.sqrt();
    let r = tail_sum(policy, |k| {
        let kf = k as f64;
        let ratio = (log_gamma(kf + 0.5).unwrap() - log_gamma(kf).unwrap()).exp();
        -(-2.0 * theta * kf * t).exp() * ratio / (PI * kf * kf)
    })?;
    Ok(SeriesResult {
        value: amp * (lead + r.value),
        terms: r.terms,
        bound: amp * r.bound,
    })
}

/// Exact evaluation shortcut for formulas without series content.
pub fn exact(value: f64) -> SeriesResult {
    SeriesResult::exact(value)
}
