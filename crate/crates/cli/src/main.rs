use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use draftopt_cli::config::RunConfig;
use draftopt_cli::error::{CliError, CliResult, EXIT_USAGE};
use draftopt_cli::stages;

#[derive(Parser)]
#[command(name = "draftopt", version, about = "Surrogate-assisted draft tube shape optimization")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Run configuration file (`key = value` lines).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override one configuration key; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    set: Vec<String>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    scenario: Option<String>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Latin hypercube design of experiments.
    Sample {
        #[arg(long, default_value = "samples.csv")]
        out: PathBuf,
    },
    /// Evaluate samples with the synthetic oracle, or ingest external results.
    Evaluate {
        #[arg(long, conflicts_with = "external")]
        samples: Option<PathBuf>,
        /// CSV of x1..xm,cp,cd computed elsewhere.
        #[arg(long)]
        external: Option<PathBuf>,
        #[arg(long, default_value = "dataset.csv")]
        out: PathBuf,
    },
    /// Random search over network settings with k-fold cross-validation.
    Tune {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long, default_value = "network.cfg")]
        out: PathBuf,
    },
    /// Train the surrogate and report train/test metrics.
    Train {
        #[arg(long)]
        dataset: PathBuf,
        /// Network file from `tune`; the configured network otherwise.
        #[arg(long)]
        network: Option<PathBuf>,
        #[arg(long, default_value = "model.txt")]
        out: PathBuf,
        #[arg(long, default_value = "metrics.csv")]
        metrics: PathBuf,
    },
    /// Optimize the surrogate with the configured algorithm.
    Optimize {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value = "front.csv")]
        out: PathBuf,
        #[arg(long, default_value = "trace.csv")]
        trace: PathBuf,
    },
    /// Rank a front with TOPSIS and verify the choice with the oracle.
    Decide {
        #[arg(long)]
        front: PathBuf,
        #[arg(long, default_value = "decision.csv")]
        out: PathBuf,
    },
    /// SVG plots of fronts, decisions and traces from one run.
    Report {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long, default_value = "report.svg")]
        out: PathBuf,
    },
    /// Grid convergence index.
    Gci {
        /// Coarse, medium and fine solutions.
        #[arg(long, num_args = 3, value_names = ["COARSE", "MEDIUM", "FINE"], conflicts_with = "eps")]
        solutions: Option<Vec<f64>>,
        /// Relative differences in percent, coarse-medium then medium-fine.
        #[arg(long, num_args = 2, value_names = ["EPS_CM", "EPS_MF"], allow_negative_numbers = true)]
        eps: Option<Vec<f64>>,
        #[arg(long, default_value_t = 1.5)]
        ratio: f64,
        #[arg(long, default_value_t = 1.25)]
        safety: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Every stage in order, artifacts in one directory.
    Pipeline {
        #[arg(long, default_value = "run")]
        out_dir: PathBuf,
        /// Use externally computed results instead of sampling and the oracle.
        #[arg(long)]
        external: Option<PathBuf>,
    },
    /// One-at-a-time parameter sweep for L-SHADE and MOEA/D.
    Sweep {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value = "sweep")]
        out_dir: PathBuf,
    },
    /// Print a documented configuration file with every default.
    ConfigTemplate,
}

fn resolve(g: &Global) -> CliResult<RunConfig> {
    let mut cfg = RunConfig::from_env()?;
    if let Some(path) = &g.config {
        cfg.apply_file(path)?;
    }
    for pair in &g.set {
        cfg.set_pair(pair)?;
    }
    if let Some(seed) = g.seed {
        cfg.set("seed", &seed.to_string())?;
    }
    if let Some(s) = &g.scenario {
        cfg.set("scenario", s)?;
    }
    Ok(cfg)
}

fn pair<const N: usize>(v: Option<Vec<f64>>) -> Option<[f64; N]> {
    v.and_then(|v| v.try_into().ok())
}

fn run(cli: Cli) -> CliResult<()> {
    if let Some(n) = cli.global.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::usage(format!("--workers: {e}")))?;
    }
    let cfg = resolve(&cli.global)?;
    match cli.command {
        Command::Sample { out } => stages::sample(&cfg, &out),
        Command::Evaluate { samples, external, out } => stages::evaluate(&cfg, samples.as_deref(), external.as_deref(), &out),
        Command::Tune { dataset, out } => stages::tune(&cfg, &dataset, &out).map(drop),
        Command::Train { dataset, network, out, metrics } => {
            stages::train(&cfg, &dataset, network.as_deref(), &out, &metrics).map(drop)
        }
        Command::Optimize { model, out, trace } => stages::optimize(&cfg, &model, &out, &trace),
        Command::Decide { front, out } => stages::decide(&cfg, &front, &out).map(drop),
        Command::Report { inputs, out } => stages::report(&inputs, &out),
        Command::Gci { solutions, eps, ratio, safety, out } => {
            stages::gci(pair(solutions), pair(eps), ratio, safety, out.as_deref()).map(drop)
        }
        Command::Pipeline { out_dir, external } => stages::pipeline(&cfg, &out_dir, external.as_deref()).map(drop),
        Command::Sweep { model, out_dir } => stages::sweep(&cfg, &model, &out_dir),
        Command::ConfigTemplate => {
            print!("{}", RunConfig::template());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
