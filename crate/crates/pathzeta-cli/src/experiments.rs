//! Experiment runners: reproducible Monte Carlo validation of the closed
//! forms, the tail-index estimation pipeline, and the deterministic
//! property suites.
//!
//! Replicas are dispatched over a worker pool; per-replica results are
//! collected in replica order and reduced sequentially, so outputs are
//! byte-identical regardless of the worker count.
//!
//! Count validation uses the extreme-refined simulators: plain grid counts
//! carry an O(sqrt(dt)) bias (the grid misses sub-step extremes) that is far
//! outside the statistical tolerances at the epsilon scales validated here,
//! while counts of extreme-refined paths estimate the continuum counts
//! without that bias.

use crate::config::{ExperimentConfig, ExperimentKind};
use crate::summary::McSummary;
use crate::{CliError, Result};
use pathzeta::alpha::{bootstrap_test, choose_scale, estimate_alpha, FourScaleCounts};
use pathzeta::analytic::{
    expected_local_time_ou_zero, expected_nveps_bm, expected_nveps_reflected, expected_nxxeps_bm,
    expected_nxxeps_drift_ray, expected_nxxeps_reflected, prob_range_geq,
};
use pathzeta::barcode::{
    count_bars_geq, count_bars_updown, count_rectangle, count_upcrossings, pers_p,
    superlevel_barcode,
};
use pathzeta::rng::Stream;
use pathzeta::sim::{
    simulate_alpha_stable, simulate_brownian_with_extremes, simulate_drift_with_extremes,
    simulate_ou_with_extremes, simulate_reflected_with_extremes,
};
use pathzeta::special::EvalPolicy;
use pathzeta::transport::{bottleneck, pers_p_measure, wasserstein_p, Diagram};
use pathzeta::SeedSpec;
use rayon::prelude::*;
use serde::Serialize;

/// Everything a run produces besides its artifacts on disk.
#[derive(Debug, Clone, Serialize)]
pub struct RunOutcome {
    pub rows: Vec<McSummary>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_report: Option<AlphaReport>,
}

/// JSON report of an `estimate-alpha` run.
#[derive(Debug, Clone, Serialize)]
pub struct AlphaReport {
    pub alpha_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub eps: f64,
    pub c: f64,
    #[serde(rename = "M")]
    pub m: usize,
    pub reject: bool,
    pub seed: u64,
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<RunOutcome> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| CliError::Config(format!("workers: {e}")))?;
    pool.install(|| match config.kind {
        ExperimentKind::ValidateBm => validate_counts(config, false),
        ExperimentKind::ValidateReflected => validate_counts(config, true),
        ExperimentKind::ValidateDrift => validate_drift(config),
        ExperimentKind::ValidateOu => validate_ou(config),
        ExperimentKind::EstimateAlpha => estimate_alpha_run(config),
        ExperimentKind::WassersteinSuite => wasserstein_suite(config),
        ExperimentKind::OracleSuite => oracle_suite(config),
    })
}

/// Map replicas over the pool, preserving replica order for deterministic
/// reduction.
fn per_replica<T: Send, F: Fn(SeedSpec) -> Result<T> + Sync>(
    master: u64,
    m: usize,
    f: F,
) -> Result<Vec<T>> {
    (0..m as u64)
        .into_par_iter()
        .map(|r| f(SeedSpec::new(master, r)))
        .collect()
}

fn policy() -> EvalPolicy {
    EvalPolicy::default()
}

// ---------------------------------------------------------------------------
// count validation (Brownian motion and its reflection)

fn validate_counts(config: &ExperimentConfig, reflected: bool) -> Result<RunOutcome> {
    let (t, n) = (config.t, config.n);
    let grid = &config.eps_grid;
    let stats = per_replica(config.master_seed, config.m, |seed| {
        let values = if reflected {
            simulate_reflected_with_extremes(t, n, seed)?
        } else {
            simulate_brownian_with_extremes(t, n, seed)?
        };
        let mut row = Vec::with_capacity(2 * grid.len() + 2);
        for &eps in grid {
            row.push(count_bars_updown(&values, eps)? as f64);
        }
        if let Some(x) = config.x {
            for &eps in grid {
                row.push(count_upcrossings(&values, x, eps)? as f64);
            }
        }
        if let Some(eps) = config.range_eps {
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for &v in &values {
                lo = lo.min(v);
                hi = hi.max(v);
            }
            row.push(if hi - lo >= eps { 1.0 } else { 0.0 });
        }
        if let (Some(k), Some(eps)) = (config.bar_k, config.bar_eps) {
            // N^eps >= k  <=>  l_k >= eps
            row.push(if count_bars_updown(&values, eps)? >= k as usize {
                1.0
            } else {
                0.0
            });
        }
        Ok(row)
    })?;

    let column = |idx: usize| -> Vec<f64> { stats.iter().map(|row| row[idx]).collect() };
    let tol = &config.tolerances;
    let mut rows = Vec::new();
    let mut idx = 0;
    let process = if reflected { "reflected" } else { "bm" };
    for &eps in grid {
        let target = if reflected {
            expected_nveps_reflected(eps, t, policy())
        } else {
            expected_nveps_bm(eps, t, policy())
        }
        .map_err(|source| CliError::Target {
            at: format!("nveps eps={eps}"),
            source,
        })?
        .value;
        rows.push(McSummary::from_samples(
            format!("nveps_{process}"),
            format!("eps={eps};t={t}"),
            &column(idx),
            target,
            tol.z_max,
            tol.absolute_slack,
        ));
        idx += 1;
    }
    if let Some(x) = config.x {
        for &eps in grid {
            let target = if reflected {
                expected_nxxeps_reflected(x, eps, t, policy())
            } else {
                expected_nxxeps_bm(x, eps, t, policy())
            }
            .map_err(|source| CliError::Target {
                at: format!("nxxeps x={x} eps={eps}"),
                source,
            })?
            .value;
            rows.push(McSummary::from_samples(
                format!("nxxeps_{process}"),
                format!("x={x};eps={eps};t={t}"),
                &column(idx),
                target,
                tol.z_max,
                tol.absolute_slack,
            ));
            idx += 1;
        }
    }
    if let Some(eps) = config.range_eps {
        let target = prob_range_geq(eps, t, policy())
            .map_err(|source| CliError::Target {
                at: format!("range eps={eps}"),
                source,
            })?
            .value;
        rows.push(McSummary::from_samples(
            format!("range_geq_{process}"),
            format!("eps={eps};t={t}"),
            &column(idx),
            target,
            tol.z_max,
            tol.absolute_slack,
        ));
        idx += 1;
    }
    if let (Some(k), Some(eps)) = (config.bar_k, config.bar_eps) {
        let target = pathzeta::analytic::bar_length_survival_bm(k, eps, t, policy())
            .map_err(|source| CliError::Target {
                at: format!("bar survival k={k} eps={eps}"),
                source,
            })?
            .value;
        rows.push(McSummary::from_samples(
            format!("bar_survival_{process}"),
            format!("k={k};eps={eps};t={t}"),
            &column(idx),
            target,
            tol.z_max,
            tol.absolute_slack,
        ));
    }
    let passed = rows.iter().all(|r| r.pass);
    Ok(RunOutcome {
        rows,
        passed,
        alpha_report: None,
    })
}

// ---------------------------------------------------------------------------
// drifted Brownian motion against the ray formula

/// Completed upcrossing cycles: excursions that reach x + eps and later
/// return to x. The final never-returning excursion is excluded, matching
/// the diagram of the drifted process on the infinite ray, where that
/// excursion is the unbounded component.
fn count_upcross_cycles(values: &[f64], x: f64, eps: f64) -> usize {
    let y = x + eps;
    let mut aloft = false;
    let mut cycles = 0usize;
    for &v in values {
        if !aloft && v >= y {
            aloft = true;
        } else if aloft && v <= x {
            cycles += 1;
            aloft = false;
        }
    }
    cycles
}

fn validate_drift(config: &ExperimentConfig) -> Result<RunOutcome> {
    let (t, n, mu) = (config.t, config.n, config.params.mu);
    let x = config.x.expect("validated");
    let eps = config.eps_grid[0];
    let counts = per_replica(config.master_seed, config.m, |seed| {
        let values = simulate_drift_with_extremes(mu, 1.0, t, n, seed)?;
        Ok(count_upcross_cycles(&values, x, eps) as f64)
    })?;
    let target = expected_nxxeps_drift_ray(mu, eps)?;
    let row = McSummary::from_samples(
        "nxxeps_drift_ray",
        format!("mu={mu};x={x};eps={eps};t={t}"),
        &counts,
        target,
        config.tolerances.z_max,
        config.tolerances.absolute_slack,
    );
    let passed = row.pass;
    Ok(RunOutcome {
        rows: vec![row],
        passed,
        alpha_report: None,
    })
}

// ---------------------------------------------------------------------------
// Ornstein-Uhlenbeck local time at zero

/// Occupation-density closed form for the expected local time of the OU
/// process at level 0: sigma^2 int_0^t p_s(0) ds evaluated exactly as
/// (sigma / sqrt(pi theta)) [theta t + log(1 + sqrt(1 - e^(-2 theta t)))].
/// Diagnostic oracle: the series target above evaluates to exactly twice
/// this value.
pub fn ou_local_time_occupation(theta: f64, sigma: f64, t: f64) -> f64 {
    sigma / (core::f64::consts::PI * theta).sqrt()
        * (theta * t + (1.0 + (1.0 - (-2.0 * theta * t).exp()).sqrt()).ln())
}

fn validate_ou(config: &ExperimentConfig) -> Result<RunOutcome> {
    let (t, n) = (config.t, config.n);
    let (theta, sigma, x0) = (config.params.theta, config.params.sigma, config.params.x0);
    let eps = config.eps_grid[0];
    let samples = per_replica(config.master_seed, config.m, |seed| {
        let values = simulate_ou_with_extremes(theta, sigma, x0, t, n, seed)?;
        Ok(2.0 * eps * count_upcrossings(&values, 0.0, eps)? as f64)
    })?;
    let series_target = expected_local_time_ou_zero(theta, sigma, t, policy())?.value;
    let occupation_target = ou_local_time_occupation(theta, sigma, t);
    let params = format!("theta={theta};sigma={sigma};eps={eps};t={t}");
    let tol = &config.tolerances;
    let series_row = McSummary::from_samples(
        "ou_local_time_vs_series",
        params.clone(),
        &samples,
        series_target,
        tol.z_max,
        tol.absolute_slack,
    );
    let occupation_row = McSummary::from_samples(
        "ou_local_time_vs_occupation",
        params,
        &samples,
        occupation_target,
        tol.z_max,
        tol.absolute_slack,
    );
    let passed = series_row.pass && occupation_row.pass;
    Ok(RunOutcome {
        rows: vec![series_row, occupation_row],
        passed,
        alpha_report: None,
    })
}

// ---------------------------------------------------------------------------
// tail-index estimation

fn estimate_alpha_run(config: &ExperimentConfig) -> Result<RunOutcome> {
    let alpha = config.params.alpha;
    let (t, n) = (config.t, config.n);
    let (eps, c) = match (config.estimator.eps, config.estimator.c) {
        (Some(eps), c) => (eps, c),
        (None, c) => (choose_scale(n, alpha).0, c),
    };
    let scales = [eps / c, 2.0 * eps / c, eps, 2.0 * eps];
    let counts: Vec<FourScaleCounts> = per_replica(config.master_seed, config.m, |seed| {
        let values = if alpha == 2.0 {
            // Brownian motion with extreme refinement; the estimator sees
            // continuum-faithful counts
            simulate_brownian_with_extremes(t, n, seed)?
        } else {
            simulate_alpha_stable(alpha, t, n, seed)?.into_values()
        };
        let at = |e: f64| count_bars_updown(&values, e).map(|c| c as u64);
        Ok(FourScaleCounts {
            finest: at(scales[0])?,
            fine: at(scales[1])?,
            coarse: at(scales[2])?,
            coarsest: at(scales[3])?,
        })
    })?;
    let alpha0 = config.estimator.alpha0.unwrap_or(alpha);
    let report = bootstrap_test(
        &counts,
        eps,
        c,
        alpha0,
        config.estimator.level,
        config.estimator.resamples,
        SeedSpec::new(config.master_seed ^ 0x626F_6F74_7374_7261, 0),
    )?;
    let estimate = estimate_alpha(&counts, eps, c)?;
    let alpha_report = AlphaReport {
        alpha_hat: estimate.alpha_hat,
        ci_low: report.ci_low,
        ci_high: report.ci_high,
        eps,
        c,
        m: config.m,
        reject: report.reject,
        seed: config.master_seed,
    };
    let row = McSummary::exact_check(
        "alpha_estimate",
        format!(
            "alpha={alpha};alpha0={alpha0};eps={eps};c={c};alpha_hat={}",
            estimate.alpha_hat
        ),
        !report.reject,
    );
    Ok(RunOutcome {
        passed: row.pass,
        rows: vec![row],
        alpha_report: Some(alpha_report),
    })
}

// ---------------------------------------------------------------------------
// deterministic property suites

fn random_short_path(stream: &mut Stream) -> Vec<f64> {
    let len = 4 + (stream.next_u64() % 61) as usize;
    (0..len).map(|_| stream.uniform_open()).collect()
}

fn random_diagram(stream: &mut Stream, max_points: usize) -> Diagram {
    let n = (stream.next_u64() % (max_points as u64 + 1)) as usize;
    let pts: Vec<(f64, f64)> = (0..n)
        .map(|_| {
            let death = 2.0 * stream.uniform_open() - 1.0;
            let pers = 0.05 + 1.95 * stream.uniform_open();
            (death + pers, death)
        })
        .collect();
    Diagram::from_points(pts).expect("persistence is positive by construction")
}

/// Exact integer and algebraic identities on random short paths: the two
/// counting oracles, Mellin duality and the tree-measure integrals.
fn oracle_suite(config: &ExperimentConfig) -> Result<RunOutcome> {
    let mut stream = SeedSpec::new(config.master_seed, 0).stream();
    let paths = config.m.max(1);
    let probes = config.eps_grid.len().max(20);
    let mut global_checked = 0usize;
    let mut global_failed = 0usize;
    let mut local_checked = 0usize;
    let mut local_failed = 0usize;
    let mut duality_failed = 0usize;
    let mut measure_failed = 0usize;
    for _ in 0..paths {
        let values = random_short_path(&mut stream);
        let bc = superlevel_barcode(&values)?;
        for _ in 0..probes {
            let eps = 0.001 + 1.2 * stream.uniform_open();
            global_checked += 1;
            if count_bars_geq(&bc, eps)? != count_bars_updown(&values, eps)? {
                global_failed += 1;
            }
            let x = -0.25 + 1.5 * stream.uniform_open();
            let eps2 = 0.001 + stream.uniform_open();
            local_checked += 1;
            if count_rectangle(&bc, x, eps2)? != count_upcrossings(&values, x, eps2)? {
                local_failed += 1;
            }
        }
        // exact Mellin route over the sorted lengths
        let mut lens: Vec<f64> = bc.bars().iter().map(|b| b.len()).collect();
        lens.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for &p in &[0.5, 1.0, 2.0, 3.7] {
            let direct = pers_p(&bc, p, true)?;
            let mut mellin = 0.0;
            let mut prev = 0.0f64;
            for (i, &l) in lens.iter().enumerate() {
                mellin += (lens.len() - i) as f64 * (l.powf(p) - prev.powf(p));
                prev = l;
            }
            if (direct - mellin).abs() > 1e-9 * direct.abs().max(1e-12) {
                duality_failed += 1;
            }
        }
        let eps = 0.3 * stream.uniform_open();
        let direct = pathzeta::barcode::tree_measure(&bc, eps)?;
        let mut via = 0.0;
        let mut prev = 0.0f64;
        for (i, &l) in lens.iter().enumerate() {
            let lo = prev.max(eps);
            if l > lo {
                via += (lens.len() - i) as f64 * (l - lo);
            }
            prev = l;
        }
        if (direct - via).abs() > 1e-12 + 1e-9 * direct {
            measure_failed += 1;
        }
    }
    let rows = vec![
        McSummary::exact_check(
            "oracle_global_counts",
            format!("checked={global_checked};failed={global_failed}"),
            global_failed == 0,
        ),
        McSummary::exact_check(
            "oracle_local_counts",
            format!("checked={local_checked};failed={local_failed}"),
            local_failed == 0,
        ),
        McSummary::exact_check(
            "mellin_duality",
            format!("paths={paths};failed={duality_failed}"),
            duality_failed == 0,
        ),
        McSummary::exact_check(
            "tree_measure_integral",
            format!("paths={paths};failed={measure_failed}"),
            measure_failed == 0,
        ),
    ];
    let passed = rows.iter().all(|r| r.pass);
    Ok(RunOutcome {
        rows,
        passed,
        alpha_report: None,
    })
}

/// Transport distances against exhaustive enumeration plus the
/// interpolation and stability inequalities.
fn wasserstein_suite(config: &ExperimentConfig) -> Result<RunOutcome> {
    let mut stream = SeedSpec::new(config.master_seed, 1).stream();
    let instances = config.m.max(1);

    let mut brute_failed = 0usize;
    for _ in 0..instances {
        let a = random_diagram(&mut stream, 6);
        let b = random_diagram(&mut stream, 6);
        for &p in &[1.0, 2.0] {
            let (brute_sum, _) = brute_force_transport(&a, &b, p);
            let (_, transport) = wasserstein_p(&a, &b, p)?;
            if (transport.cost - brute_sum).abs() > 1e-9 * brute_sum.max(1e-12) {
                brute_failed += 1;
            }
        }
        let (_, brute_max) = brute_force_transport(&a, &b, 1.0);
        if (bottleneck(&a, &b)? - brute_max).abs() > 1e-12 + 1e-9 * brute_max {
            brute_failed += 1;
        }
    }

    let mut interp_failed = 0usize;
    let mut stability_failed = 0usize;
    let trials = 1000usize;
    for _ in 0..trials {
        let a = random_diagram(&mut stream, 5);
        let b = random_diagram(&mut stream, 5);
        let (p, q) = (1.0 + 2.0 * stream.uniform_open(), 4.0 + 4.0 * stream.uniform_open());
        let theta = 0.2 + 0.6 * stream.uniform_open();
        let p_theta = 1.0 / (theta / p + (1.0 - theta) / q);
        let lhs = wasserstein_p(&a, &b, p_theta)?.0;
        let rhs = (2.0f64).powf(1.0 - theta)
            * wasserstein_p(&a, &b, p)?.0.powf(theta)
            * (pers_p_measure(&a, q)? + pers_p_measure(&b, q)?).powf(1.0 - theta);
        if lhs > rhs * (1.0 + 1e-9) && !(a.is_empty() && b.is_empty()) {
            interp_failed += 1;
        }

        let values = random_short_path(&mut stream);
        let delta = 0.002 + 0.15 * stream.uniform_open();
        let perturbed: Vec<f64> = values
            .iter()
            .map(|v| v + delta * (2.0 * stream.uniform_open() - 1.0))
            .collect();
        let da = Diagram::from_barcode(&superlevel_barcode(&values)?);
        let db = Diagram::from_barcode(&superlevel_barcode(&perturbed)?);
        if bottleneck(&da, &db)? > delta * (1.0 + 1e-9) {
            stability_failed += 1;
        }
    }

    let rows = vec![
        McSummary::exact_check(
            "transport_brute_force",
            format!("pairs={instances};failed={brute_failed}"),
            brute_failed == 0,
        ),
        McSummary::exact_check(
            "interpolation_inequality",
            format!("trials={trials};failed={interp_failed}"),
            interp_failed == 0,
        ),
        McSummary::exact_check(
            "bottleneck_stability",
            format!("trials={trials};failed={stability_failed}"),
            stability_failed == 0,
        ),
    ];
    let passed = rows.iter().all(|r| r.pass);
    Ok(RunOutcome {
        rows,
        passed,
        alpha_report: None,
    })
}

/// Exhaustive minimum over augmented matchings; returns (min sum cost^p,
/// min over matchings of the max edge cost).
pub fn brute_force_transport(a: &Diagram, b: &Diagram, p: f64) -> (f64, f64) {
    fn linf(a: (f64, f64), b: (f64, f64)) -> f64 {
        (a.0 - b.0).abs().max((a.1 - b.1).abs())
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        a: &Diagram,
        b: &Diagram,
        p: f64,
        i: usize,
        used: &mut Vec<bool>,
        assign: &mut Vec<usize>,
        best_sum: &mut f64,
        best_max: &mut f64,
    ) {
        if i == a.len() {
            let mut sum = 0.0;
            let mut maxc = 0.0f64;
            for (i, &j) in assign.iter().enumerate() {
                let c = if j == usize::MAX {
                    0.5 * (a.points()[i].0 - a.points()[i].1)
                } else {
                    linf(a.points()[i], b.points()[j])
                };
                sum += c.powf(p);
                maxc = maxc.max(c);
            }
            for (j, &u) in used.iter().enumerate() {
                if !u {
                    let c = 0.5 * (b.points()[j].0 - b.points()[j].1);
                    sum += c.powf(p);
                    maxc = maxc.max(c);
                }
            }
            if sum < *best_sum {
                *best_sum = sum;
            }
            if maxc < *best_max {
                *best_max = maxc;
            }
            return;
        }
        assign[i] = usize::MAX;
        recurse(a, b, p, i + 1, used, assign, best_sum, best_max);
        for j in 0..b.len() {
            if !used[j] {
                used[j] = true;
                assign[i] = j;
                recurse(a, b, p, i + 1, used, assign, best_sum, best_max);
                used[j] = false;
            }
        }
        assign[i] = usize::MAX;
    }
    let mut best_sum = f64::INFINITY;
    let mut best_max = f64::INFINITY;
    let mut used = vec![false; b.len()];
    let mut assign = vec![usize::MAX; a.len()];
    recurse(a, b, p, 0, &mut used, &mut assign, &mut best_sum, &mut best_max);
    (best_sum, best_max)
}
