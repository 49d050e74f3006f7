use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use ltfrechet::{LfParams, OptimizerConfig};
use ltfrechet_cli::commands::{self, Grid, ModelKind, Outcome, RunConfig, SimulateArgs};
use ltfrechet_cli::{dataset, CliError, CliResult, Format};

/// Long-term Fréchet cure-rate model: fitting, simulation and diagnostics.
#[derive(Parser, Debug)]
#[command(name = "ltfrechet", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fit a model by maximum likelihood and report estimates with Wald intervals.
    Fit {
        /// CSV file with `time,status` columns, or `kersey1987`.
        #[arg(long)]
        data: String,
        #[arg(long, default_value = "lf")]
        model: ModelKind,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Monte Carlo study of estimator bias, MSE and interval coverage.
    Simulate {
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        p: f64,
        /// Target censored fraction; calibrates the Uniform(0, τ) censoring bound.
        #[arg(long)]
        censoring: f64,
        /// Comma-separated sample sizes.
        #[arg(long, value_delimiter = ',', default_value = "25,50,100,300")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 2000)]
        replications: usize,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Evaluate pdf, cdf, survival and hazard on a grid.
    Curves {
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0.01)]
        t_min: f64,
        #[arg(long, default_value_t = 10.0)]
        t_max: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
        /// Linear spacing instead of logarithmic.
        #[arg(long)]
        linear: bool,
        /// Add a Kaplan–Meier column from this dataset.
        #[arg(long)]
        data: Option<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Fit several models to one dataset and rank them by AICc.
    Compare {
        #[arg(long)]
        data: String,
        #[arg(long, value_delimiter = ',', default_value = "lf,lt-weibull")]
        models: Vec<ModelKind>,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Write a dataset as `time,status` CSV.
    Export {
        #[arg(long, default_value = ltfrechet::data::KERSEY1987)]
        data: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.95)]
    ci_level: f64,
    #[arg(long, default_value_t = OptimizerConfig::default().max_iterations)]
    max_iterations: usize,
    #[arg(long, default_value_t = OptimizerConfig::default().simplex_tolerance)]
    tolerance: f64,
    /// Additional random restarts of the simplex search.
    #[arg(long, default_value_t = OptimizerConfig::default().restarts)]
    restarts: usize,
    /// Run a simulated-annealing search before the simplex.
    #[arg(long)]
    anneal: bool,
}

impl RunArgs {
    fn config(&self) -> RunConfig {
        RunConfig {
            seed: self.seed,
            ci_level: self.ci_level,
            optimizer: OptimizerConfig {
                max_iterations: self.max_iterations,
                simplex_tolerance: self.tolerance,
                restarts: self.restarts,
                annealing_enabled: self.anneal,
                ..OptimizerConfig::default()
            },
        }
    }
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, default_value = "csv")]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Prefix the output with a `# generated <unix seconds>` line.
    #[arg(long)]
    timestamp: bool,
}

fn emit(text: &str, output: Option<&PathBuf>) -> CliResult<()> {
    match output {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn finish(outcome: Outcome, out: &OutputArgs) -> CliResult<bool> {
    let mut text = String::new();
    if out.timestamp {
        let secs = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        text.push_str(&format!("# generated {secs}\n"));
    }
    text.push_str(&outcome.report.render(out.format));
    emit(&text, out.output.as_ref())?;
    Ok(outcome.ok)
}

fn params(lambda: f64, alpha: f64, p: f64) -> CliResult<LfParams> {
    LfParams::new(lambda, alpha, p).map_err(|e| CliError::Usage(e.to_string()))
}

fn run(cli: Cli) -> CliResult<bool> {
    match cli.command {
        Command::Fit { data, model, run, out } => {
            let sample = dataset::load(&data)?;
            finish(commands::cmd_fit(&sample, model, &run.config())?, &out)
        }
        Command::Simulate {
            lambda,
            alpha,
            p,
            censoring,
            n,
            replications,
            run,
            out,
        } => {
            let args = SimulateArgs {
                truth: params(lambda, alpha, p)?,
                censoring,
                sample_sizes: n,
                replications,
            };
            finish(commands::cmd_simulate(&args, &run.config())?, &out)
        }
        Command::Curves {
            lambda,
            alpha,
            p,
            t_min,
            t_max,
            points,
            linear,
            data,
            out,
        } => {
            let grid = Grid {
                t_min,
                t_max,
                points,
                log_spaced: !linear,
            };
            let sample = data.as_deref().map(dataset::load).transpose()?;
            let outcome = commands::cmd_curves(&params(lambda, alpha, p)?, &grid, sample.as_ref())?;
            finish(outcome, &out)
        }
        Command::Compare { data, models, run, out } => {
            let sample = dataset::load(&data)?;
            finish(commands::cmd_compare(&sample, &models, &run.config())?, &out)
        }
        Command::Export { data, output } => {
            let sample = dataset::load(&data)?;
            let mut buf = Vec::new();
            dataset::write(&sample, &mut buf)?;
            emit(&String::from_utf8_lossy(&buf), output.as_ref())?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: one or more fits did not converge or failed");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
