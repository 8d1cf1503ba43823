use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use petzsim::experiments::{run_config, verify_suite, Experiment, ExperimentConfig};
use petzsim::Error;

#[derive(Parser)]
#[command(name = "petzsim", version, about = "Petz recovery and pretty good measurement experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Recover a channel through the block-encoded pipeline
    Recover(Common),
    /// Pretty good measurement and instrument
    Pgm(Common),
    /// Search lower-bound demonstration
    Search(Common),
    /// Query and amplification scaling over a (d_E, κ) grid
    Sweep(Common),
    /// Classical Bayes reversal against the Petz map
    Bayes(Common),
    /// Run the invariant suite
    Verify(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

const DEFAULT_EPS: f64 = 0.1;
const DEFAULT_SEED: u64 = 0;

enum Failure {
    Usage(String),
    Certification(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_certification_failure() {
            Failure::Certification(e.to_string())
        } else if matches!(e, Error::Config { .. } | Error::InvalidParameter(_)) {
            Failure::Usage(e.to_string())
        } else {
            Failure::Other(e.to_string())
        }
    }
}

fn load_config(kind: &str, args: &Common) -> Result<ExperimentConfig, Failure> {
    let mut cfg = match &args.config {
        Some(path) => {
            let cfg = ExperimentConfig::from_path(path)?;
            if cfg.experiment.kind() != kind {
                return Err(Failure::Usage(format!(
                    "config describes a {} experiment, not {kind}",
                    cfg.experiment.kind()
                )));
            }
            cfg
        }
        None => {
            let exp = Experiment::default_for(kind).expect("every subcommand has a default");
            ExperimentConfig::new(exp, DEFAULT_EPS, Some(DEFAULT_SEED))
        }
    };
    if let Some(seed) = args.seed {
        cfg.seed = Some(seed);
    }
    if let Some(eps) = args.eps {
        cfg.eps = eps;
    }
    if let Some(out) = &args.out {
        cfg.output = Some(out.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn emit(out: Option<&PathBuf>, body: &[u8]) -> Result<(), Failure> {
    let res = match out {
        Some(path) => File::create(path).and_then(|mut f| f.write_all(body)),
        None => io::stdout().lock().write_all(body),
    };
    res.map_err(|e| Failure::Other(e.to_string()))
}

fn run_verify(args: &Common) -> Result<(), Failure> {
    let seed = args.seed.unwrap_or(DEFAULT_SEED);
    let eps = args.eps.unwrap_or(DEFAULT_EPS);
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Failure::Usage(format!("eps = {eps} is outside (0, 1)")));
    }
    let outcome = verify_suite(seed, eps)?;
    let body = match args.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&outcome).map_err(Error::from)?;
            s.push('\n');
            s.into_bytes()
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for c in &outcome.checks {
                w.serialize(c).map_err(Error::from)?;
            }
            w.into_inner().map_err(|e| Failure::Other(e.to_string()))?
        }
    };
    emit(args.out.as_ref(), &body)?;
    if outcome.passed() {
        Ok(())
    } else {
        let failed: Vec<_> = outcome.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        Err(Failure::Certification(format!("failed checks: {}", failed.join(", "))))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let (kind, args) = match &cli.command {
        Command::Recover(a) => ("recover", a),
        Command::Pgm(a) => ("pgm", a),
        Command::Search(a) => ("search", a),
        Command::Sweep(a) => ("sweep", a),
        Command::Bayes(a) => ("bayes", a),
        Command::Verify(a) => return run_verify(a),
    };
    let cfg = load_config(kind, args)?;
    let record = run_config(&cfg)?;
    let body = match args.format {
        Format::Json => record.to_json()?,
        Format::Csv => record.to_csv()?,
    };
    emit(cfg.output.as_ref(), body.as_bytes())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Certification(m)) => {
            eprintln!("certification failure: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Other(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
