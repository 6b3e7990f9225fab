use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dynreg_cli::config::{parse_horizons, ConfigFile, Experiment, Layer};
use dynreg_cli::{parse_config, run, CliError};

const DEFAULTS: &str = "\
Defaults when neither the config file nor a flag sets a key:
  upper-bound      horizons 64,256,1024   dim 1  beta 0  d_beta 1  seeds 20
  lower-bound      horizons 64,256,1024,4096  dim 1  beta 0  d_beta 4  seeds 1000
  shifting-regret  horizons 1024  dim 2  shifts 1  seeds 10  unit ball, no regularizer
  oracle-check     horizons 3  dim 1  beta 0  d_beta 1  seeds 50  resolution 0.01
  gamma defaults to beta; seeds start at seed_offset 0; output goes to ./out.

Precedence: flags, then the config section named after the experiment, then top-level keys.
DYNREG_THREADS caps the number of worker threads.
Exit codes: 0 ok, 1 usage, 2 invariant violation, 3 numerical failure.";

#[derive(Parser)]
#[command(name = "dynreg", version, about = "Dynamic-regret experiments", after_help = DEFAULTS)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment named by --experiment or the config file's `experiment` key
    Run {
        /// upper-bound, lower-bound, lemmas, shifting-regret or oracle-check
        #[arg(long, value_name = "NAME")]
        experiment: Option<String>,
        #[command(flatten)]
        flags: Flags,
    },
    /// Check the lemma suite and write lemmas.csv
    Lemmas {
        #[command(flatten)]
        flags: Flags,
    },
    /// Play-zero learner against the block comparator of the random-sign game
    LowerBound {
        #[command(flatten)]
        flags: Flags,
    },
    /// Tuned proximal online gradient on the random-sign game against the offline optimum
    UpperBound {
        #[command(flatten)]
        flags: Flags,
    },
    /// Offline solver against exhaustive grid search on small linear instances
    OracleCheck {
        #[command(flatten)]
        flags: Flags,
    },
}

#[derive(Clone)]
struct Horizons(Vec<usize>);

#[derive(Args)]
struct Flags {
    /// TOML config file
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Comma-separated horizons, e.g. 64,256,1024
    #[arg(long, value_name = "LIST", value_parser = |s: &str| parse_horizons(s).map(Horizons))]
    horizons: Option<Horizons>,
    /// Path-length weight exponent in [0, 1)
    #[arg(long, value_name = "F")]
    beta: Option<f64>,
    /// Path-length budget D_beta
    #[arg(long, value_name = "F")]
    dbeta: Option<f64>,
    /// Step-size exponent in [0, 1); defaults to beta
    #[arg(long, value_name = "F")]
    gamma: Option<f64>,
    /// Dimension d of the decision space
    #[arg(long, value_name = "N")]
    dim: Option<usize>,
    /// Seeds per horizon
    #[arg(long, value_name = "N")]
    seeds: Option<usize>,
    /// First seed; runs use seeds offset..offset+seeds
    #[arg(long, value_name = "N")]
    seed_offset: Option<u64>,
    /// Comparator shifts M (shifting-regret)
    #[arg(long, value_name = "N")]
    shifts: Option<usize>,
    /// Grid spacing (oracle-check)
    #[arg(long, value_name = "F")]
    resolution: Option<f64>,
    /// Output directory
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Fill the runtime_ms column
    #[arg(long)]
    timing: bool,
}

impl Flags {
    fn layer(&self) -> Layer {
        Layer {
            horizons: self.horizons.clone().map(|h| h.0),
            dim: self.dim,
            beta: self.beta,
            d_beta: self.dbeta,
            gamma: self.gamma,
            shifts: self.shifts,
            seeds: self.seeds,
            seed_offset: self.seed_offset,
            resolution: self.resolution,
            out: self.out.clone(),
            timing: self.timing.then_some(true),
            ..Default::default()
        }
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let (experiment, flags) = match cli.command {
        Command::Run { experiment, flags } => (experiment.map(|e| e.parse::<Experiment>()).transpose()?, flags),
        Command::Lemmas { flags } => (Some(Experiment::Lemmas), flags),
        Command::LowerBound { flags } => (Some(Experiment::LowerBound), flags),
        Command::UpperBound { flags } => (Some(Experiment::UpperBound), flags),
        Command::OracleCheck { flags } => (Some(Experiment::OracleCheck), flags),
    };
    let file = flags.config.as_deref().map(ConfigFile::load).transpose()?;
    let config = parse_config(experiment, file.as_ref(), &flags.layer())?;
    let outcome = run(&config)?;
    for line in &outcome.report {
        println!("{line}");
    }
    for f in &outcome.files {
        println!("wrote {}", f.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("error")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
