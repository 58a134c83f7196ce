//! `memmap`: train, predict and verify Student-t membership-mapping models
//! from the command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or I/O error.
//! Log verbosity comes from `MEMMAP_LOG` (`error`, `info` or `debug`).

pub mod data;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use log::{info, warn};
use membership_mapping::oracle::{run_suite, CheckOutcome, Suite};
use membership_mapping::{fit, predict_batch, store, Dataset, FitReport, HyperParams};

pub const LOG_ENV: &str = "MEMMAP_LOG";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Data(String),
    #[error(transparent)]
    Model(#[from] membership_mapping::Error),
    #[error("{0}")]
    Verification(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io { path: path.to_path_buf(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Verification(_) => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "memmap", version, about = "Student-t membership-mapping regression")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Learn a model from a CSV of features followed by targets.
    Train(TrainArgs),
    /// Predict targets for a CSV of feature rows.
    Predict(PredictArgs),
    /// Run the numerical identity checks.
    Verify(VerifyArgs),
}

fn parse_nu(s: &str) -> Result<f64, String> {
    let nu: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if nu > 2.0 && nu.is_finite() {
        Ok(nu)
    } else {
        Err("nu must exceed 2".into())
    }
}

#[derive(Clone, Debug, Args)]
pub struct TrainArgs {
    /// Training CSV: first n columns are features, the rest targets.
    #[arg(long)]
    pub data: PathBuf,
    /// Number of feature columns n.
    #[arg(long)]
    pub n_features: usize,
    /// Output model path (`.mmj`); the fit report goes to `<out>.report.json`.
    #[arg(long)]
    pub out: PathBuf,
    /// Number of inducing points (default min(N, 50)).
    #[arg(long)]
    pub m: Option<usize>,
    /// Degrees of freedom, must exceed 2.
    #[arg(long, default_value_t = 5.0, value_parser = parse_nu)]
    pub nu: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV of inducing points (M rows, n columns) used instead of k-means.
    #[arg(long)]
    pub aux: Option<PathBuf>,
    /// Relative change in β below which learning stops.
    #[arg(long, default_value_t = 1e-6)]
    pub beta_tol: f64,
    #[arg(long, default_value_t = 1000)]
    pub max_iters: usize,
    /// Also store the matrix B in the model file.
    #[arg(long)]
    pub store_b: bool,
    /// Skip the first row of every input CSV.
    #[arg(long)]
    pub header: bool,
}

#[derive(Clone, Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// CSV with exactly n feature columns per row.
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub header: bool,
}

#[derive(Clone, Debug, Args)]
pub struct VerifyArgs {
    /// consistency, interpolation, phi-limit or all.
    #[arg(long, default_value = "all", value_parser = parse_suite)]
    pub suite: Suite,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random configurations for the interpolation check.
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Also write the report as JSON.
    #[arg(long)]
    pub json_out: Option<PathBuf>,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: membership_mapping::Error| e.to_string())
}

/// Path of the JSON fit report written next to a model.
pub fn report_path(model_path: &Path) -> PathBuf {
    let mut name = model_path.as_os_str().to_owned();
    name.push(".report.json");
    PathBuf::from(name)
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn cmd_train(args: &TrainArgs) -> Result<FitReport, CliError> {
    if args.n_features == 0 {
        return Err(CliError::Usage("--n-features must be at least 1".into()));
    }
    let table = data::read_table(&args.data, args.header, None)?;
    if table.rows.is_empty() {
        return Err(CliError::Data(format!("{}: no data rows", args.data.display())));
    }
    if args.n_features >= table.ncols {
        return Err(CliError::Usage(format!(
            "--n-features {} leaves no target columns ({} columns in {})",
            args.n_features,
            table.ncols,
            args.data.display()
        )));
    }
    let mut dataset = Dataset::new(table.columns(0..args.n_features), table.columns(args.n_features..table.ncols))?;
    if let Some(names) = &table.header {
        dataset.feature_names = names[..args.n_features].to_vec();
        dataset.target_names = names[args.n_features..].to_vec();
    }

    let mut hp = HyperParams::for_samples(dataset.n_samples());
    if let Some(m) = args.m {
        hp.m = m;
    }
    hp.nu = args.nu;
    hp.seed = args.seed;
    hp.beta_rel_tol = args.beta_tol;
    hp.max_outer_iters = args.max_iters;

    let aux = match &args.aux {
        Some(path) => {
            let t = data::read_table(path, args.header, Some(args.n_features))?;
            Some(t.columns(0..args.n_features))
        }
        None => None,
    };

    let (model, report) = fit(&dataset, &hp, aux.as_ref())?;
    if !report.converged {
        warn!("β did not converge within {} iterations", report.iterations);
    }
    store::save(&model, &args.out, args.store_b)?;
    let json = serde_json::to_string_pretty(&report).map_err(|e| CliError::Data(e.to_string()))?;
    write_file(&report_path(&args.out), &(json + "\n"))?;
    info!("wrote {}", args.out.display());
    Ok(report)
}

pub fn cmd_predict(args: &PredictArgs) -> Result<usize, CliError> {
    let model = store::load(&args.model)?;
    let n = model.n_inputs();
    let table = data::read_table(&args.data, args.header, None)?;
    if !table.rows.is_empty() && table.ncols != n {
        return Err(CliError::Model(membership_mapping::Error::Validation(format!(
            "{} has {} columns, model expects {n} features",
            args.data.display(),
            table.ncols
        ))));
    }
    let batch = predict_batch(&table.columns(0..n), &model)?;
    data::write_predictions(&args.out, &batch.outputs)?;
    Ok(batch.outputs.nrows())
}

/// Human-readable report, one line per check.
pub fn format_outcomes(outcomes: &[CheckOutcome]) -> String {
    let mut s = String::new();
    for c in outcomes {
        let status = if c.passed { "ok  " } else { "FAIL" };
        s.push_str(&format!("[{status}] {:<30} max error {:.3e} (tolerance {:.0e})", c.name, c.observed, c.tolerance));
        if !c.detail.is_empty() {
            s.push_str(&format!("  {}", c.detail));
        }
        s.push('\n');
    }
    let failed = outcomes.iter().filter(|c| !c.passed).count();
    s.push_str(&format!("{} checks, {failed} failed\n", outcomes.len()));
    s
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<Vec<CheckOutcome>, CliError> {
    let outcomes = run_suite(args.suite, args.seed, args.trials);
    print!("{}", format_outcomes(&outcomes));
    if let Some(path) = &args.json_out {
        let json = serde_json::to_string_pretty(&outcomes).map_err(|e| CliError::Data(e.to_string()))?;
        write_file(path, &(json + "\n"))?;
    }
    let failed: Vec<String> = outcomes
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{} (observed {:e}, {})", c.name, c.observed, c.detail))
        .collect();
    if failed.is_empty() {
        Ok(outcomes)
    } else {
        Err(CliError::Verification(format!("failed checks: {}", failed.join("; "))))
    }
}

fn init_logging() {
    let env = env_logger::Env::new().filter_or(LOG_ENV, "warn");
    // A second call (tests drive `run` repeatedly) is harmless.
    let _ = env_logger::Builder::from_env(env).format_timestamp(None).try_init();
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    init_logging();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match &cli.command {
        Command::Train(a) => cmd_train(a).map(|r| {
            println!(
                "trained: {} iterations, converged = {}, beta = {:.6e}",
                r.iterations, r.converged, r.final_state.beta
            )
        }),
        Command::Predict(a) => cmd_predict(a).map(|rows| println!("wrote {rows} predictions to {}", a.out.display())),
        Command::Verify(a) => cmd_verify(a).map(|_| ()),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
