//! Experiment configuration: one JSON document per run, so experiments stay
//! diffable and archivable. Flags only override the output path and seed.

use crate::CliError;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    ValidateBm,
    ValidateReflected,
    ValidateDrift,
    ValidateOu,
    EstimateAlpha,
    WassersteinSuite,
    OracleSuite,
}

/// Process parameters; only the fields the chosen kind needs are read.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProcessParams {
    pub mu: f64,
    pub sigma: f64,
    pub theta: f64,
    pub x0: f64,
    /// Stability index for the alpha-stable simulator, also the null guess
    /// of the estimator.
    pub alpha: f64,
}

impl Default for ProcessParams {
    fn default() -> Self {
        Self {
            mu: 1.0,
            sigma: 1.0,
            theta: 1.0,
            x0: 0.0,
            alpha: 2.0,
        }
    }
}

/// Estimator settings for `estimate-alpha`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EstimatorParams {
    /// Base scale; when absent the heuristic 20 n^(-1/alpha) is used.
    pub eps: Option<f64>,
    pub c: f64,
    /// Null value tested by the bootstrap; defaults to the process alpha.
    pub alpha0: Option<f64>,
    pub level: f64,
    pub resamples: usize,
}

impl Default for EstimatorParams {
    fn default() -> Self {
        Self {
            eps: None,
            c: 2.0,
            alpha0: None,
            level: 0.95,
            resamples: 1000,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Statistical tolerance: largest acceptable |z| for a Monte Carlo row.
    pub z_max: f64,
    /// Extra absolute allowance added to z_max * SE (used by the local-time
    /// check for its O(eps) estimator bias).
    pub absolute_slack: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            z_max: 3.0,
            absolute_slack: 0.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    /// Steps per path.
    #[serde(default = "default_n")]
    pub n: usize,
    /// Horizon.
    #[serde(default = "default_t")]
    pub t: f64,
    /// Replica count.
    #[serde(default = "default_m")]
    pub m: usize,
    /// Epsilon grid for bar-count rows.
    #[serde(default)]
    pub eps_grid: Vec<f64>,
    /// Level for rectangle-count rows (emitted for each grid epsilon).
    #[serde(default)]
    pub x: Option<f64>,
    /// Emit a range-law row P(R_t >= range_eps).
    #[serde(default)]
    pub range_eps: Option<f64>,
    /// Emit a bar-length survival row P(l_k >= bar_eps).
    #[serde(default)]
    pub bar_k: Option<u32>,
    #[serde(default)]
    pub bar_eps: Option<f64>,
    #[serde(default = "default_seed")]
    pub master_seed: u64,
    #[serde(default)]
    pub params: ProcessParams,
    #[serde(default)]
    pub estimator: EstimatorParams,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Worker threads for replica dispatch; 0 picks the machine default.
    #[serde(default)]
    pub workers: usize,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
}

fn default_n() -> usize {
    1 << 15
}
fn default_t() -> f64 {
    1.0
}
fn default_m() -> usize {
    400
}
fn default_seed() -> u64 {
    20260809
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind) -> Self {
        Self {
            kind,
            n: default_n(),
            t: default_t(),
            m: default_m(),
            eps_grid: Vec::new(),
            x: None,
            range_eps: None,
            bar_k: None,
            bar_eps: None,
            master_seed: default_seed(),
            params: ProcessParams::default(),
            estimator: EstimatorParams::default(),
            tolerances: Tolerances::default(),
            workers: 0,
            output_dir: None,
        }
    }

    pub fn from_json_file(path: &Path) -> crate::Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let cfg: Self = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Field-level validation with a diagnosis per failure.
    pub fn validate(&self) -> crate::Result<()> {
        let fail = |msg: &str| Err(CliError::Config(msg.to_string()));
        if self.n == 0 {
            return fail("n: need at least one step");
        }
        if !(self.t > 0.0) {
            return fail("t: horizon must be > 0");
        }
        if self.m == 0 {
            return fail("m: need at least one replica");
        }
        if self.eps_grid.iter().any(|&e| !(e > 0.0)) {
            return fail("eps_grid: every epsilon must be > 0");
        }
        match self.kind {
            ExperimentKind::ValidateBm | ExperimentKind::ValidateReflected => {
                let has_rows = !self.eps_grid.is_empty()
                    || self.range_eps.is_some()
                    || self.bar_k.is_some();
                if !has_rows {
                    return fail("eps_grid: validation needs a nonempty grid or a range/bar row");
                }
                if self.bar_k.is_some() != self.bar_eps.is_some() {
                    return fail("bar_k/bar_eps: both or neither");
                }
                if let Some(k) = self.bar_k {
                    if !(2..=4).contains(&k) {
                        return fail("bar_k: survival laws cover k in {2, 3, 4}");
                    }
                }
            }
            ExperimentKind::ValidateDrift => {
                if !(self.params.mu > 0.0) {
                    return fail("params.mu: ray formula needs mu > 0");
                }
                if self.params.sigma != 1.0 {
                    return fail("params.sigma: ray formula is stated for sigma = 1");
                }
                if self.x.is_none() || self.eps_grid.len() != 1 {
                    return fail("validate-drift: needs x and exactly one grid epsilon");
                }
            }
            ExperimentKind::ValidateOu => {
                if !(self.params.theta > 0.0) || !(self.params.sigma > 0.0) {
                    return fail("params: ou needs theta > 0 and sigma > 0");
                }
                if self.eps_grid.len() != 1 {
                    return fail("validate-ou: needs exactly one grid epsilon");
                }
            }
            ExperimentKind::EstimateAlpha => {
                if !(self.params.alpha > 0.0 && self.params.alpha <= 2.0) {
                    return fail("params.alpha: need alpha in (0, 2]");
                }
                if !(self.estimator.c > 1.0) {
                    return fail("estimator.c: need c > 1");
                }
                if self.estimator.resamples < 200 {
                    return fail("estimator.resamples: need at least 200");
                }
            }
            ExperimentKind::WassersteinSuite | ExperimentKind::OracleSuite => {}
        }
        Ok(())
    }
}
