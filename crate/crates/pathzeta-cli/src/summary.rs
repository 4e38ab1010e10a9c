//! Per-grid-point Monte Carlo summaries.

use serde::Serialize;
use std::fmt::Write as _;

/// One validated quantity: sample moments against an analytic target.
#[derive(Debug, Clone, Serialize)]
pub struct McSummary {
    pub quantity: String,
    /// Grid-point parameters as `key=value` pairs joined by ';'.
    pub params: String,
    pub replicas: usize,
    pub mean: f64,
    pub variance: f64,
    pub std_error: f64,
    pub target: f64,
    pub z: f64,
    /// |mean - target| <= z_max * SE + slack at the configured tolerances.
    pub pass: bool,
}

impl McSummary {
    /// Reduce replica samples against an analytic target. The pass criterion
    /// is |mean - target| <= z_max * SE + slack.
    pub fn from_samples(
        quantity: impl Into<String>,
        params: impl Into<String>,
        samples: &[f64],
        target: f64,
        z_max: f64,
        slack: f64,
    ) -> Self {
        let m = samples.len();
        let mean = samples.iter().sum::<f64>() / m as f64;
        let variance = if m > 1 {
            samples.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / (m - 1) as f64
        } else {
            0.0
        };
        let std_error = (variance / m as f64).sqrt();
        let gap = mean - target;
        let z = if std_error > 0.0 {
            gap / std_error
        } else if gap == 0.0 {
            0.0
        } else {
            f64::INFINITY * gap.signum()
        };
        let pass = gap.abs() <= z_max * std_error + slack;
        Self {
            quantity: quantity.into(),
            params: params.into(),
            replicas: m,
            mean,
            variance,
            std_error,
            target,
            z,
            pass,
        }
    }

    /// An exact check (no sampling): pass iff the stated predicate held.
    pub fn exact_check(quantity: impl Into<String>, params: impl Into<String>, pass: bool) -> Self {
        Self {
            quantity: quantity.into(),
            params: params.into(),
            replicas: 0,
            mean: 0.0,
            variance: 0.0,
            std_error: 0.0,
            target: 0.0,
            z: 0.0,
            pass,
        }
    }
}

pub fn summary_csv(rows: &[McSummary]) -> String {
    let mut out = String::from("quantity,params,replicas,mean,variance,std_error,target,z,pass\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.quantity, r.params, r.replicas, r.mean, r.variance, r.std_error, r.target, r.z, r.pass
        );
    }
    out
}
