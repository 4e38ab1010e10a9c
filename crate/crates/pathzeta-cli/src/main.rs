//! Command-line entry point: `run` executes a JSON-configured experiment,
//! `barcode` converts a path CSV to a barcode CSV, `zeta-eval` tabulates
//! closed forms over parameter grids, and `wasserstein` computes transport
//! distances between barcode files.

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use pathzeta::analytic as an;
use pathzeta::special::EvalPolicy;
use pathzeta::transport::{bottleneck, wasserstein_p, Diagram};
use pathzeta_cli::config::ExperimentConfig;
use pathzeta_cli::experiments::run_experiment;
use pathzeta_cli::io;
use pathzeta_cli::summary::summary_csv;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Superlevel-set topology of sampled stochastic paths: simulation,
/// barcodes, closed-form targets and Monte Carlo validation.
#[derive(Parser)]
#[command(name = "pathzeta", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a JSON config; writes summary.csv and
    /// manifest.json, exits non-zero when a check fails.
    Run(RunArgs),
    /// Compute the superlevel barcode of a time,value CSV.
    Barcode {
        input: PathBuf,
        output: PathBuf,
    },
    /// Evaluate a closed-form quantity over a parameter grid (CSV on stdout:
    /// quantity,params,value,terms,bound).
    ZetaEval(ZetaArgs),
    /// Wasserstein-p (and optionally bottleneck) distance between barcode
    /// CSV files; three or more files emit a pairwise distance matrix.
    Wasserstein(WassersteinArgs),
}

#[derive(Args)]
struct RunArgs {
    config: PathBuf,
    /// Override the master seed of the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (default: config output_dir, then $PATHZETA_OUT,
    /// then the current directory).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ZetaArgs {
    /// One of: zeta-bm, zeta-hat-bm, eta-bm, zeta-reflected, range-bm,
    /// nveps-bm, nveps-reflected, nxxeps-bm, nxxeps-reflected,
    /// bar-survival-bm, local-time-density-bm, avg-diagram-bm, drift-ray,
    /// ou-local-time.
    quantity: String,
    /// Comma-separated grid for the leading parameter (p, eps or t).
    #[arg(long, value_delimiter = ',')]
    grid: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    #[arg(long)]
    x: Option<f64>,
    #[arg(long)]
    w: Option<f64>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long, default_value_t = 1.0)]
    mu: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long, default_value_t = 1.0)]
    theta: f64,
}

#[derive(Args)]
struct WassersteinArgs {
    /// Barcode CSV files (two for a single distance, more for a matrix).
    #[arg(required = true, num_args = 2..)]
    files: Vec<PathBuf>,
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    /// Also print the bottleneck distance (pair mode only).
    #[arg(long)]
    bottleneck: bool,
    /// Write the pairwise matrix here instead of stdout.
    #[arg(long)]
    matrix_out: Option<PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    let code = match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            2
        }
    };
    std::process::exit(code);
}

fn dispatch(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Run(args) => run_cmd(args),
        Command::Barcode { input, output } => {
            io::barcode_file(&input, &output)?;
            Ok(0)
        }
        Command::ZetaEval(args) => {
            zeta_eval(args)?;
            Ok(0)
        }
        Command::Wasserstein(args) => wasserstein_cmd(args),
    }
}

fn run_cmd(args: RunArgs) -> anyhow::Result<i32> {
    let mut config = ExperimentConfig::from_json_file(&args.config)?;
    if let Some(seed) = args.seed {
        config.master_seed = seed;
    }
    let out_dir = args
        .out
        .or_else(|| config.output_dir.clone())
        .or_else(|| std::env::var_os("PATHZETA_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    let started = Instant::now();
    let outcome = run_experiment(&config)?;
    let wall = started.elapsed().as_secs_f64();

    std::fs::create_dir_all(&out_dir)
        .with_context(|| format!("creating {}", out_dir.display()))?;
    std::fs::write(out_dir.join("summary.csv"), summary_csv(&outcome.rows))
        .context("writing summary.csv")?;
    let manifest = serde_json::json!({
        "config": config,
        "seed": config.master_seed,
        "wall_time_s": wall,
        "passed": outcome.passed,
        "rows": outcome.rows,
    });
    io::write_json(&out_dir.join("manifest.json"), &manifest)?;
    if let Some(report) = &outcome.alpha_report {
        io::write_json(&out_dir.join("report.json"), report)?;
    }
    for row in &outcome.rows {
        println!(
            "{} [{}]: mean={} target={} z={} {}",
            row.quantity,
            row.params,
            row.mean,
            row.target,
            row.z,
            if row.pass { "ok" } else { "FAIL" }
        );
    }
    Ok(if outcome.passed { 0 } else { 1 })
}

fn zeta_eval(args: ZetaArgs) -> anyhow::Result<()> {
    if args.grid.is_empty() {
        bail!("zeta-eval needs --grid with at least one point");
    }
    let policy = EvalPolicy::default();
    println!("quantity,params,value,terms,bound");
    for &g in &args.grid {
        let t = args.t;
        let (params, r) = match args.quantity.as_str() {
            "zeta-bm" => (format!("p={g};t={t}"), an::exact(an::zeta_bm(g, t)?)),
            "zeta-hat-bm" => (format!("p={g};t={t}"), an::exact(an::zeta_hat_bm(g, t)?)),
            "eta-bm" => (format!("p={g};t={t}"), an::exact(an::eta_bm(g, t)?)),
            "zeta-reflected" => (format!("p={g};t={t}"), an::exact(an::zeta_reflected(g, t)?)),
            "range-bm" => (format!("eps={g};t={t}"), an::prob_range_geq(g, t, policy)?),
            "nveps-bm" => (format!("eps={g};t={t}"), an::expected_nveps_bm(g, t, policy)?),
            "nveps-reflected" => (
                format!("eps={g};t={t}"),
                an::expected_nveps_reflected(g, t, policy)?,
            ),
            "nxxeps-bm" => {
                let x = args.x.context("nxxeps-bm needs --x")?;
                (
                    format!("x={x};eps={g};t={t}"),
                    an::expected_nxxeps_bm(x, g, t, policy)?,
                )
            }
            "nxxeps-reflected" => {
                let x = args.x.context("nxxeps-reflected needs --x")?;
                (
                    format!("x={x};eps={g};t={t}"),
                    an::expected_nxxeps_reflected(x, g, t, policy)?,
                )
            }
            "bar-survival-bm" => {
                let k = args.k.context("bar-survival-bm needs --k")?;
                (
                    format!("k={k};eps={g};t={t}"),
                    an::bar_length_survival_bm(k, g, t, policy)?,
                )
            }
            "local-time-density-bm" => {
                let x = args.x.context("local-time-density-bm needs --x")?;
                (
                    format!("x={x};w={g};t={t}"),
                    an::exact(an::local_time_density_bm(x, g, t)?),
                )
            }
            "avg-diagram-bm" => {
                let x = args.x.context("avg-diagram-bm needs --x")?;
                (
                    format!("x={x};eps={g};t={t}"),
                    an::avg_diagram_density_bm(x, g, t, policy)?,
                )
            }
            "drift-ray" => (
                format!("mu={};eps={g}", args.mu),
                an::exact(an::expected_nxxeps_drift_ray(args.mu, g)?),
            ),
            "ou-local-time" => (
                format!("theta={};sigma={};t={g}", args.theta, args.sigma),
                an::expected_local_time_ou_zero(args.theta, args.sigma, g, policy)?,
            ),
            other => bail!("unknown quantity {other:?}"),
        };
        println!("{},{},{},{},{}", args.quantity, params, r.value, r.terms, r.bound);
    }
    Ok(())
}

fn load_diagram(path: &Path) -> anyhow::Result<Diagram> {
    let barcode = io::read_barcode_csv(path)?;
    Ok(Diagram::from_barcode(&barcode))
}

fn wasserstein_cmd(args: WassersteinArgs) -> anyhow::Result<i32> {
    let diagrams: Vec<Diagram> = args
        .files
        .iter()
        .map(|f| load_diagram(f))
        .collect::<anyhow::Result<_>>()?;
    if diagrams.len() == 2 && args.matrix_out.is_none() {
        let (d, _) = wasserstein_p(&diagrams[0], &diagrams[1], args.p)?;
        println!("wasserstein_{} = {}", args.p, d);
        if args.bottleneck {
            println!("bottleneck = {}", bottleneck(&diagrams[0], &diagrams[1])?);
        }
        return Ok(0);
    }
    let labels: Vec<String> = args
        .files
        .iter()
        .map(|f| {
            f.file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| f.display().to_string())
        })
        .collect();
    let n = diagrams.len();
    let mut matrix = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let (d, _) = wasserstein_p(&diagrams[i], &diagrams[j], args.p)?;
            matrix[i][j] = d;
            matrix[j][i] = d;
        }
    }
    match &args.matrix_out {
        Some(path) => io::write_matrix_csv(path, &labels, &matrix)?,
        None => {
            let mut out = String::from("label");
            for l in &labels {
                out.push(',');
                out.push_str(l);
            }
            out.push('\n');
            for (l, row) in labels.iter().zip(&matrix) {
                out.push_str(l);
                for v in row {
                    out.push_str(&format!(",{v}"));
                }
                out.push('\n');
            }
            print!("{out}");
        }
    }
    Ok(0)
}
