//! Front end of the `diamlimit` binary: flag parsing, command execution and
//! the CSV / JSON artifacts.

pub mod config;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use diamlimit::experiments::{self, ks_distance, BoundsConfig, ConvergenceConfig, Ecdf};
use diamlimit::geometry::{check_condition3, ConditionReport, Verdict, PSD_TOL};
use diamlimit::{BodySpec, DistributionSpec, RateSpec};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use config::*;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_FAIL: u8 = 2;
pub const EXIT_INDETERMINATE: u8 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid --{field}: {msg}")]
    Input { field: &'static str, msg: String },
    #[error("{}", core_message(.0))]
    Core(#[from] diamlimit::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{0}")]
    Data(String),
}

/// Prefix core errors with the flag they most likely came from.
fn core_message(e: &diamlimit::Error) -> String {
    use diamlimit::Error as E;
    let field = match e {
        E::NonUniqueAxis { .. } => "axes",
        E::BetaOutOfRange(_) => "dist",
        E::Lemma1Violated { .. } | E::NotPositiveDefinite { .. } | E::NotSymmetric { .. } => "hl/--hr",
        E::IntensityMismatch(_) => "intensity",
        E::InvalidParameter { name: "half_axes", .. } => "axes",
        E::InvalidParameter { name, .. } => name,
        _ => return e.to_string(),
    };
    format!("invalid --{}: {e}", field.replace('_', "-"))
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

#[derive(Debug, Parser)]
#[command(name = "diamlimit", version, about = "Limit laws for the maximum interpoint distance of random points")]
pub struct Cli {
    /// Worker threads (results do not depend on it).
    #[arg(long, global = true, env = "DIAMLIMIT_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pole-cap curvature conditions of a body.
    Check(CheckArgs),
    /// Scaled maximum-distance statistics of simulated clouds.
    Simulate(SimulateArgs),
    /// Draws from the limit law on truncated paraboloids.
    Limit(LimitArgs),
    /// Two-sample KS distance between two CSV outputs.
    Compare(CompareArgs),
    /// Bounding distributions for ellipsoids with several major half-axes.
    Bounds(BoundsArgs),
    /// Re-runs a saved configuration (a bare config or a sidecar).
    Run(RunArgs),
}

#[derive(Debug, Args, Clone)]
pub struct BodyFlags {
    /// ellipsoid | superellipsoid | polecaps
    #[arg(long, default_value = "ellipsoid")]
    pub body: String,
    /// Half-axes, descending: 1,0.5
    #[arg(long, allow_hyphen_values = true)]
    pub axes: Option<String>,
    /// Superellipsoid exponent.
    #[arg(long)]
    pub p: Option<f64>,
    /// Half-diameter of a pole-cap body.
    #[arg(long)]
    pub a: Option<f64>,
    /// Left-pole Hessian, rows separated by ';'.
    #[arg(long, allow_hyphen_values = true)]
    pub hl: Option<String>,
    /// Right-pole Hessian.
    #[arg(long, allow_hyphen_values = true)]
    pub hr: Option<String>,
}

impl BodyFlags {
    fn build(&self) -> Result<BodySpec, CliError> {
        BodyArgs {
            body: self.body.clone(),
            axes: self.axes.clone(),
            p: self.p,
            a: self.a,
            hl: self.hl.clone(),
            hr: self.hr.clone(),
        }
        .build()
    }
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub body: BodyFlags,
    #[arg(long, default_value_t = PSD_TOL)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub body: BodyFlags,
    /// uniform | pearson:<beta> | uniform-p:<p>
    #[arg(long, allow_hyphen_values = true)]
    pub dist: Option<String>,
    #[arg(long)]
    pub n: u64,
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
    /// poissonized | fixed
    #[arg(long, default_value = "poissonized")]
    pub mode: String,
    /// Distance norm (defaults to 2, or to p for superellipsoids).
    #[arg(long)]
    pub norm_p: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV output; stdout if omitted. The sidecar goes next to it as .json.
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    #[command(flatten)]
    pub body: BodyFlags,
    /// Sampling law whose pole densities give the default intensities.
    #[arg(long, allow_hyphen_values = true)]
    pub dist: Option<String>,
    /// uniform:<p_l>,<p_r> | lambda:<alpha_l>,<alpha_r>,<beta>[,<beta_r>]
    #[arg(long)]
    pub intensity: Option<String>,
    /// Truncation height.
    #[arg(long, default_value_t = diamlimit::limitlaw::DEFAULT_TRUNCATION)]
    pub b: f64,
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Number of independent, congruent pole pairs.
    #[arg(long, default_value_t = 1)]
    pub pole_pairs: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    pub first: PathBuf,
    pub second: PathBuf,
    /// Column to compare (defaults to the first column).
    #[arg(long)]
    pub column: Option<String>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub e: usize,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub beta: f64,
    #[arg(long)]
    pub axes: String,
    #[arg(long, default_value_t = 10_000)]
    pub n: u64,
    #[arg(long, default_value_t = 2000)]
    pub reps: usize,
    /// Evaluation points (defaults to the G-quantiles 0.1, ..., 0.9).
    #[arg(long)]
    pub t_grid: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    pub config: PathBuf,
}

/// Sidecar of `simulate`.
#[derive(Debug, Serialize, Deserialize)]
pub struct SimulateSidecar {
    pub config: RunConfig,
    pub rate: RateSpec,
    pub factor: f64,
    pub realized_count_min: u64,
    pub realized_count_max: u64,
    pub realized_count_mean: f64,
    pub runtime_seconds: f64,
}

/// Sidecar of `limit`.
#[derive(Debug, Serialize, Deserialize)]
pub struct LimitSidecar {
    pub config: RunConfig,
    pub masses: Vec<f64>,
    pub empty_retries: u64,
    pub runtime_seconds: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CheckOutput {
    pub config: RunConfig,
    pub report: ConditionReport,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct BoundsOutput {
    pub config: RunConfig,
    pub report: experiments::BoundsReport,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CompareOutput {
    pub ks: f64,
    pub counts: [usize; 2],
    pub columns: [String; 2],
    pub config_hashes: [String; 2],
}

/// Entry point shared by the binary and the tests.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // help and version requests are not errors
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return ExitCode::from(EXIT_INPUT);
            }
            let _ = write!(stdout, "{}", e.render());
            return ExitCode::from(EXIT_OK);
        }
    };
    let threads = cli.threads;
    // output is buffered so the work can run inside a sized thread pool
    let mut buf = Vec::new();
    let result = experiments::with_threads(threads, || execute(cli.command, &mut buf))
        .map_err(CliError::from)
        .and_then(|r| r);
    let _ = stdout.write_all(&buf);
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn execute(cmd: Command, stdout: &mut dyn Write) -> Result<u8, CliError> {
    let config = match cmd {
        Command::Check(a) => RunConfig::Check(CheckConfig {
            body: a.body.build()?,
            tol: a.tol,
        }),
        Command::Simulate(a) => RunConfig::Simulate(simulate_config(a)?),
        Command::Limit(a) => RunConfig::Limit(LimitConfig {
            dist: match a.dist.as_deref() {
                Some(s) => Some(parse_dist(s)?),
                None => default_dist(&a.body.build()?),
            },
            body: a.body.build()?,
            intensity: a.intensity.as_deref().map(parse_intensity).transpose()?,
            b: a.b,
            reps: a.reps,
            k: a.k,
            pole_pairs: a.pole_pairs,
            seed: a.seed,
            out: a.out,
        }),
        Command::Bounds(a) => RunConfig::Bounds(BoundsRunConfig {
            d: a.d,
            e: a.e,
            beta: a.beta,
            axes: parse_list("axes", &a.axes)?,
            n: a.n,
            reps: a.reps,
            t_grid: a.t_grid.as_deref().map(|s| parse_list("t-grid", s)).transpose()?,
            seed: a.seed,
            out: a.out,
        }),
        Command::Compare(a) => return compare(&a, stdout),
        Command::Run(a) => load_config(&a.config)?,
    };
    run(&config, stdout)
}

/// Uniform law on the body; pole-cap bodies have none.
fn default_dist(body: &BodySpec) -> Option<DistributionSpec> {
    match body {
        BodySpec::Ellipsoid { .. } => Some(DistributionSpec::UniformEllipsoid),
        BodySpec::PSuperellipsoid { p, .. } => Some(DistributionSpec::UniformPSuperellipsoid { p: *p }),
        BodySpec::PoleCaps { .. } => None,
    }
}

fn simulate_config(a: SimulateArgs) -> Result<SimulateConfig, CliError> {
    let body = a.body.build()?;
    let dist = match &a.dist {
        Some(s) => parse_dist(s)?,
        None => default_dist(&body).ok_or_else(|| CliError::Input {
            field: "body",
            msg: "pole-cap bodies cannot be sampled".into(),
        })?,
    };
    let norm_p = match (a.norm_p, &body) {
        (Some(p), _) => p,
        (None, BodySpec::PSuperellipsoid { p, .. }) => *p,
        (None, _) => 2.0,
    };
    Ok(SimulateConfig {
        body,
        dist,
        n: a.n,
        reps: a.reps,
        mode: parse_mode(&a.mode)?,
        norm_p,
        k: a.k,
        seed: a.seed,
        out: a.out,
    })
}

/// Reads a bare `RunConfig` or the `config` field of a sidecar.
pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let value = match value.get("config") {
        Some(inner) => inner.clone(),
        None => value,
    };
    serde_json::from_value(value).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

/// Executes a configuration and writes its artifacts.
pub fn run(config: &RunConfig, stdout: &mut dyn Write) -> Result<u8, CliError> {
    match config {
        RunConfig::Check(c) => {
            c.body.validate(true)?;
            let (left, right) = c.body.pole_caps()?;
            let report = check_condition3(&left, &right, c.tol)?;
            let code = match (report.lemma1_left && report.lemma1_right, report.verdict) {
                (false, _) | (_, Verdict::Fail) => EXIT_FAIL,
                (true, Verdict::Indeterminate) => EXIT_INDETERMINATE,
                (true, Verdict::Pass) => EXIT_OK,
            };
            emit_json(
                &CheckOutput {
                    config: config.clone(),
                    report,
                },
                None,
                stdout,
            )?;
            Ok(code)
        }
        RunConfig::Simulate(c) => {
            let cfg = ConvergenceConfig::new(c.body.clone(), c.dist, c.n, c.reps, c.mode, c.seed)
                .with_norm(c.norm_p)
                .with_k(c.k);
            let res = experiments::run_convergence(&cfg)?;
            write_csv(c.out.as_deref(), c.k, &res.values, stdout)?;
            let counts = &res.realized_counts;
            let sidecar = SimulateSidecar {
                config: config.clone(),
                rate: res.rate,
                factor: res.factor,
                realized_count_min: *counts.iter().min().unwrap_or(&0),
                realized_count_max: *counts.iter().max().unwrap_or(&0),
                realized_count_mean: counts.iter().sum::<u64>() as f64 / counts.len().max(1) as f64,
                runtime_seconds: res.runtime_seconds,
            };
            write_sidecar(c.out.as_deref(), &sidecar)?;
            Ok(EXIT_OK)
        }
        RunConfig::Limit(c) => {
            let start = Instant::now();
            let model = c.model()?;
            let res = experiments::run_limit(&model, c.reps, c.k, c.seed)?;
            write_csv(c.out.as_deref(), c.k, &res.values, stdout)?;
            let sidecar = LimitSidecar {
                config: config.clone(),
                masses: res.masses,
                empty_retries: res.empty_retries,
                runtime_seconds: start.elapsed().as_secs_f64(),
            };
            write_sidecar(c.out.as_deref(), &sidecar)?;
            Ok(EXIT_OK)
        }
        RunConfig::Bounds(c) => {
            if c.axes.len() != c.d {
                return Err(CliError::Input {
                    field: "axes",
                    msg: format!("{} half-axes given for d = {}", c.axes.len(), c.d),
                });
            }
            let report = experiments::run_bounds_check(&BoundsConfig {
                d: c.d,
                e: c.e,
                beta: c.beta,
                half_axes: c.axes.clone(),
                n: c.n,
                reps: c.reps,
                t_grid: c.t_grid.clone(),
                seed: c.seed,
            })?;
            emit_json(
                &BoundsOutput {
                    config: config.clone(),
                    report,
                },
                c.out.as_deref(),
                stdout,
            )?;
            Ok(EXIT_OK)
        }
    }
}

/// Decimal with 17 significant digits, enough to round-trip any f64.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_csv(out: Option<&str>, k: usize, rows: &[Vec<f64>], stdout: &mut dyn Write) -> Result<(), CliError> {
    let mut buf = Vec::new();
    {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(&mut buf);
        let header: Vec<String> = if k == 1 {
            vec!["value".into()]
        } else {
            (1..=k).map(|i| format!("value_{i}")).collect()
        };
        w.write_record(&header).map_err(|e| CliError::Data(e.to_string()))?;
        for row in rows {
            w.write_record(row.iter().map(|v| format_value(*v)))
                .map_err(|e| CliError::Data(e.to_string()))?;
        }
        w.flush().map_err(|e| CliError::Data(e.to_string()))?;
    }
    match out {
        Some(path) => fs::write(path, &buf).map_err(io_err(Path::new(path))),
        None => stdout.write_all(&buf).map_err(io_err(Path::new("<stdout>"))),
    }
}

/// `sim.csv` -> `sim.json`.
pub fn sidecar_path(out: &str) -> PathBuf {
    Path::new(out).with_extension("json")
}

fn write_sidecar<T: Serialize>(out: Option<&str>, value: &T) -> Result<(), CliError> {
    let Some(out) = out else { return Ok(()) };
    let path = sidecar_path(out);
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Data(e.to_string()))?;
    fs::write(&path, text + "\n").map_err(io_err(&path))
}

fn emit_json<T: Serialize>(value: &T, out: Option<&str>, stdout: &mut dyn Write) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Data(e.to_string()))? + "\n";
    if let Some(path) = out {
        fs::write(path, &text).map_err(io_err(Path::new(path)))?;
    }
    stdout.write_all(text.as_bytes()).map_err(io_err(Path::new("<stdout>")))
}

fn read_column(path: &Path, column: Option<&str>) -> Result<(Vec<f64>, String), CliError> {
    let mut r = csv::Reader::from_path(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let headers = r.headers().map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?.clone();
    let idx = match column {
        Some(name) => headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Data(format!("{}: no column '{name}'", path.display())))?,
        None => 0,
    };
    let name = headers
        .get(idx)
        .ok_or_else(|| CliError::Data(format!("{}: no header row", path.display())))?
        .to_string();
    let mut values = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
        let field = rec.get(idx).unwrap_or("");
        values.push(
            field
                .trim()
                .parse::<f64>()
                .map_err(|_| CliError::Data(format!("{}: '{field}' is not a number", path.display())))?,
        );
    }
    if values.is_empty() {
        return Err(CliError::Data(format!("{}: no data rows", path.display())));
    }
    Ok((values, name))
}

/// SHA-256 of the embedded config when a sidecar exists, else of the file.
fn config_hash(csv_path: &Path) -> Result<String, CliError> {
    let side = csv_path.with_extension("json");
    let bytes = match load_config(&side) {
        Ok(cfg) => serde_json::to_vec(&cfg).map_err(|e| CliError::Data(e.to_string()))?,
        Err(_) => fs::read(csv_path).map_err(io_err(csv_path))?,
    };
    Ok(Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect())
}

fn compare(a: &CompareArgs, stdout: &mut dyn Write) -> Result<u8, CliError> {
    let (x, cx) = read_column(&a.first, a.column.as_deref())?;
    let (y, cy) = read_column(&a.second, a.column.as_deref())?;
    let counts = [x.len(), y.len()];
    let ks = ks_distance(&Ecdf::new(x)?, &Ecdf::new(y)?)?;
    emit_json(
        &CompareOutput {
            ks,
            counts,
            columns: [cx, cy],
            config_hashes: [config_hash(&a.first)?, config_hash(&a.second)?],
        },
        None,
        stdout,
    )?;
    Ok(EXIT_OK)
}
