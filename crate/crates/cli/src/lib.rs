//! `gbsfat`: evaluate, fit and simulate generalized Birnbaum-Saunders
//! fatigue-life laws from the command line.
//!
//! Reports are JSON, curves are `t,value` CSV. Errors are written as
//! `{"error": "..."}` to the report destination with a nonzero exit status.

pub mod io;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fatigue_core::estimation::{self, EstimationConfig, TuningRule};
use fatigue_core::mallows::{mallows_empirical, mallows_to_stable, EmpiricalSample};
use fatigue_core::sim::{self, DamageModel};
use fatigue_core::{ClassicalBsParams, GbsParams, QuadratureConfig, StableParams};
use fatigue_verify::{run_all, Scale};
use io::GridSpec;
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] fatigue_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Row { line: usize, message: String },
    #[error("{0}: no data rows")]
    Empty(String),
    #[error("{0}")]
    Usage(String),
}

#[derive(Debug, Parser)]
#[command(name = "gbsfat", version, about = "Generalized Birnbaum-Saunders fatigue-life toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Report (JSON) or curve (CSV) destination; stdout when absent.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Absolute tolerance of every numerical integral.
    #[arg(long, global = true, default_value_t = QuadratureConfig::default().abs_tol)]
    pub abs_tol: f64,
    /// Relative tolerance of every numerical integral.
    #[arg(long, global = true, default_value_t = QuadratureConfig::default().rel_tol)]
    pub rel_tol: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a distribution at a point or over a grid, or draw a sample.
    Dist(DistArgs),
    /// Estimate the tail index and scale from a damage CSV.
    Fit(FitArgs),
    /// Monte Carlo first-passage lives for a damage model.
    Simulate(SimulateArgs),
    /// Mallows distance between two samples, or a sample and a stable law.
    Distance(DistanceArgs),
    /// Run the acceptance suite.
    Verify(VerifyArgs),
    /// Write a seeded shifted-Pareto damage CSV.
    Fixture(FixtureArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Stable,
    Gbs,
    ClassicalBs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Op {
    Cdf,
    Pdf,
    Quantile,
    Sample,
}

#[derive(Debug, Args)]
pub struct DistArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long, value_enum)]
    pub op: Op,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Stable scale; for `classical-bs` the damage standard deviation σ_X.
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Stable location.
    #[arg(long, default_value_t = 0.0)]
    pub mu: f64,
    #[arg(long)]
    pub mu_x: Option<f64>,
    #[arg(long)]
    pub s_star: Option<f64>,
    /// Classical shape `a` (instead of σ_X, μ_X, s*).
    #[arg(long)]
    pub shape: Option<f64>,
    /// Classical scale `b` (instead of σ_X, μ_X, s*).
    #[arg(long)]
    pub scale: Option<f64>,
    /// Evaluation point (`cdf`, `pdf`).
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    /// Probability (`quantile`).
    #[arg(long)]
    pub p: Option<f64>,
    /// Sample size (`sample`).
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, allow_hyphen_values = true)]
    pub grid_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub grid_max: Option<f64>,
    #[arg(long, default_value_t = 101)]
    pub grid_points: usize,
    /// Space grid points logarithmically.
    #[arg(long)]
    pub grid_log: bool,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Known mean damage; the sample mean is used otherwise.
    #[arg(long)]
    pub mu_x: Option<f64>,
    /// Index fed to the scale step instead of the Hill estimate.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 0.6)]
    pub k_exponent: f64,
    #[arg(long, default_value_t = 0.4)]
    pub block_exponent: f64,
    #[arg(long, default_value_t = 1.0)]
    pub eps_coef: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Deterministic,
    Exponential,
    Lognormal,
    Pareto,
    FoldedStable,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub model: ModelKind,
    /// Constant damage (`deterministic`).
    #[arg(long)]
    pub value: Option<f64>,
    /// Rate (`exponential`).
    #[arg(long)]
    pub rate: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub log_mean: Option<f64>,
    #[arg(long)]
    pub log_sd: Option<f64>,
    /// Tail index (`pareto`).
    #[arg(long)]
    pub index: Option<f64>,
    /// Pareto scale.
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    #[arg(long, default_value_t = 0.0)]
    pub shift: f64,
    /// Stability index: of the `folded-stable` model, and of the GBS
    /// reference when given.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Scale of the `folded-stable` model, or of the GBS reference; the
    /// reference scale is estimated from simulated damages when absent.
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub s_star: f64,
    #[arg(long, default_value_t = 10_000)]
    pub reps: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Damages simulated to calibrate the reference scale.
    #[arg(long, default_value_t = 1_000_000)]
    pub calibration_n: usize,
}

#[derive(Debug, Args)]
pub struct DistanceArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Second sample; without it the target is the stable law given by
    /// `--alpha --sigma --mu`.
    #[arg(long)]
    pub input_b: Option<PathBuf>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub mu: f64,
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    #[arg(long, default_value_t = 10_000)]
    pub grid_points: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Reduced seed counts and replications.
    #[arg(long)]
    pub quick: bool,
}

#[derive(Debug, Args)]
pub struct FixtureArgs {
    #[arg(long, default_value_t = 100_000)]
    pub n: usize,
    #[arg(long, default_value_t = 1.5)]
    pub index: f64,
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    #[arg(long, default_value_t = 0.0)]
    pub shift: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Json(String),
    Csv(String),
}

impl Output {
    pub fn text(&self) -> &str {
        match self {
            Output::Json(s) | Output::Csv(s) => s,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointReport {
    pub family: Family,
    pub op: Op,
    pub params: serde_json::Value,
    pub at: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleReport {
    pub family: Family,
    pub params: serde_json::Value,
    pub seed: u64,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub r: f64,
    pub n: usize,
    pub distance: f64,
    pub target: Option<StableParams>,
    pub n_b: Option<usize>,
    pub truncation: Option<f64>,
    pub tail_divergence: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub scale: Scale,
    pub passed: bool,
    pub criteria: Vec<fatigue_verify::CriterionOutcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub error: String,
}

fn need(v: Option<f64>, flag: &str) -> Result<f64, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("missing --{flag}")))
}

enum Law {
    Stable(StableParams),
    Gbs(GbsParams),
    Classical(ClassicalBsParams),
}

impl Law {
    fn from_args(a: &DistArgs) -> Result<Self, CliError> {
        Ok(match a.family {
            Family::Stable => Law::Stable(StableParams::new(need(a.alpha, "alpha")?, need(a.sigma, "sigma")?, a.mu)?),
            Family::Gbs => Law::Gbs(GbsParams::new(
                need(a.alpha, "alpha")?,
                need(a.sigma, "sigma")?,
                need(a.mu_x, "mu-x")?,
                need(a.s_star, "s-star")?,
            )?),
            Family::ClassicalBs => Law::Classical(match (a.shape, a.scale) {
                (Some(shape), Some(scale)) => ClassicalBsParams::new(shape, scale)?,
                _ => ClassicalBsParams::from_damage(need(a.sigma, "sigma")?, need(a.mu_x, "mu-x")?, need(a.s_star, "s-star")?)?,
            }),
        })
    }

    fn params(&self) -> serde_json::Value {
        match self {
            Law::Stable(p) => serde_json::to_value(p),
            Law::Gbs(p) => serde_json::to_value(p),
            Law::Classical(p) => serde_json::to_value(p),
        }
        .expect("parameters serialize")
    }

    fn cdf(&self, x: f64, q: &QuadratureConfig) -> fatigue_core::Result<f64> {
        match self {
            Law::Stable(p) => p.cdf(x, q),
            Law::Gbs(p) => p.cdf(x, q),
            Law::Classical(p) => p.cdf(x),
        }
    }

    fn pdf(&self, x: f64, q: &QuadratureConfig) -> fatigue_core::Result<f64> {
        match self {
            Law::Stable(p) => p.pdf(x, q),
            Law::Gbs(p) => p.pdf(x, q),
            Law::Classical(p) => p.pdf(x),
        }
    }

    fn quantile(&self, p: f64, q: &QuadratureConfig) -> fatigue_core::Result<f64> {
        match self {
            Law::Stable(l) => l.quantile(p, q),
            Law::Gbs(l) => l.quantile(p, q),
            Law::Classical(l) => l.quantile(p),
        }
    }
}

fn dist(a: &DistArgs, quad: &QuadratureConfig) -> Result<Output, CliError> {
    let law = Law::from_args(a)?;
    if let (Some(min), Some(max)) = (a.grid_min, a.grid_max) {
        let grid = GridSpec {
            min,
            max,
            points: a.grid_points,
            log: a.grid_log,
        };
        let body = match a.op {
            Op::Cdf => io::curve_csv(|t| law.cdf(t, quad), &grid)?,
            Op::Pdf => io::curve_csv(|t| law.pdf(t, quad), &grid)?,
            Op::Quantile => io::curve_csv(|p| law.quantile(p, quad), &grid)?,
            Op::Sample => return Err(CliError::Usage("`sample` does not take a grid".into())),
        };
        return Ok(Output::Csv(body));
    }
    let (at, value) = match a.op {
        Op::Cdf => {
            let t = need(a.t, "t")?;
            (t, law.cdf(t, quad)?)
        }
        Op::Pdf => {
            let t = need(a.t, "t")?;
            (t, law.pdf(t, quad)?)
        }
        Op::Quantile => {
            let p = need(a.p, "p")?;
            (p, law.quantile(p, quad)?)
        }
        Op::Sample => {
            let values = match &law {
                Law::Stable(l) => l.sample(a.n, a.seed),
                _ => return Err(CliError::Usage("`sample` is available for the stable family".into())),
            };
            return Ok(Output::Json(io::to_json(&SampleReport {
                family: a.family,
                params: law.params(),
                seed: a.seed,
                values,
            })));
        }
    };
    Ok(Output::Json(io::to_json(&PointReport {
        family: a.family,
        op: a.op,
        params: law.params(),
        at,
        value,
    })))
}

fn fit(a: &FitArgs) -> Result<Output, CliError> {
    let series = io::parse_damage_csv(&a.input, a.mu_x)?;
    let cfg = EstimationConfig {
        k_rule: TuningRule::Power {
            coef: 1.0,
            exponent: a.k_exponent,
        },
        block_rule: TuningRule::Power {
            coef: 1.0,
            exponent: a.block_exponent,
        },
        eps_rule: estimation::BandwidthRule {
            coef: a.eps_coef,
            exponent: 0.2,
        },
        alpha_override: a.alpha,
    };
    Ok(Output::Json(io::to_json(&estimation::fit(&series, &cfg)?)))
}

fn model(a: &SimulateArgs) -> Result<DamageModel, CliError> {
    let m = match a.model {
        ModelKind::Deterministic => DamageModel::Deterministic {
            value: need(a.value, "value")?,
        },
        ModelKind::Exponential => DamageModel::Exponential {
            rate: need(a.rate, "rate")?,
        },
        ModelKind::Lognormal => DamageModel::LogNormal {
            log_mean: need(a.log_mean, "log-mean")?,
            log_sd: need(a.log_sd, "log-sd")?,
        },
        ModelKind::Pareto => DamageModel::ShiftedPareto {
            index: need(a.index, "index")?,
            scale: a.scale,
            shift: a.shift,
        },
        ModelKind::FoldedStable => DamageModel::FoldedStable {
            alpha: need(a.alpha, "alpha")?,
            sigma: need(a.sigma, "sigma")?,
            shift: a.shift,
        },
    };
    m.validate()?;
    Ok(m)
}

fn simulate(a: &SimulateArgs, quad: &QuadratureConfig) -> Result<Output, CliError> {
    let m = model(a)?;
    let mut report = sim::simulate_first_passage(&m, a.s_star, a.reps, a.seed)?;
    if let Some(alpha) = a.alpha {
        let reference = match (a.model, a.sigma) {
            (ModelKind::FoldedStable, _) | (_, None) => {
                sim::calibrate_gbs(&m, alpha, a.s_star, a.calibration_n, a.seed, &EstimationConfig::default())?
            }
            (_, Some(sigma)) => GbsParams::new(alpha, sigma, m.mean(), a.s_star)?,
        };
        report.compare_to_gbs(&reference, quad)?;
    }
    Ok(Output::Json(io::to_json(&report)))
}

fn distance(a: &DistanceArgs, quad: &QuadratureConfig) -> Result<Output, CliError> {
    let f = EmpiricalSample::new(io::parse_value_csv(&a.input)?)?;
    let report = if let Some(path) = &a.input_b {
        let g = EmpiricalSample::new(io::parse_value_csv(path)?)?;
        DistanceReport {
            r: a.r,
            n: f.len(),
            distance: mallows_empirical(&f, &g, a.r)?,
            target: None,
            n_b: Some(g.len()),
            truncation: None,
            tail_divergence: None,
        }
    } else {
        let target = StableParams::new(need(a.alpha, "alpha")?, need(a.sigma, "sigma")?, a.mu)?;
        let e = mallows_to_stable(&f, &target, a.r, a.grid_points, quad)?;
        DistanceReport {
            r: a.r,
            n: f.len(),
            distance: e.distance,
            target: Some(target),
            n_b: None,
            truncation: Some(e.truncation),
            tail_divergence: Some(e.tail_divergence),
        }
    };
    Ok(Output::Json(io::to_json(&report)))
}

fn fixture(a: &FixtureArgs) -> Result<Output, CliError> {
    let m = DamageModel::ShiftedPareto {
        index: a.index,
        scale: a.scale,
        shift: a.shift,
    };
    let values = sim::damage_sample(&m, a.n, a.seed)?;
    let mut out = String::from("damage\n");
    for v in values {
        // shortest representation that reads back to the same f64
        out.push_str(&format!("{v:?}\n"));
    }
    Ok(Output::Csv(out))
}

/// Result of one invocation: what to write and whether it succeeded.
pub struct Outcome {
    pub output: Output,
    pub success: bool,
}

/// Dispatch `cli`; module errors become an error report with `success = false`.
pub fn run_pipeline(cli: &Cli) -> Outcome {
    let quad = QuadratureConfig {
        abs_tol: cli.abs_tol,
        rel_tol: cli.rel_tol,
        ..QuadratureConfig::default()
    };
    if let Command::Verify(a) = &cli.command {
        let scale = if a.quick { Scale::Quick } else { Scale::Full };
        let criteria = run_all(scale);
        let passed = criteria.iter().all(|c| c.passed);
        return Outcome {
            output: Output::Json(io::to_json(&VerifyReport { scale, passed, criteria })),
            success: passed,
        };
    }
    let result = quad.validate().map_err(CliError::from).and_then(|()| match &cli.command {
        Command::Dist(a) => dist(a, &quad),
        Command::Fit(a) => fit(a),
        Command::Simulate(a) => simulate(a, &quad),
        Command::Distance(a) => distance(a, &quad),
        Command::Fixture(a) => fixture(a),
        Command::Verify(_) => unreachable!("handled above"),
    });
    match result {
        Ok(output) => Outcome { output, success: true },
        Err(e) => Outcome {
            output: Output::Json(io::to_json(&ErrorReport { error: e.to_string() })),
            success: false,
        },
    }
}
