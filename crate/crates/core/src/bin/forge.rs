use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use molforge::chem::FingerprintConfig;
use molforge::pipeline::{self, inspect, Overrides, PipelineError};

#[derive(Parser)]
#[command(
    name = "forge",
    version,
    about = "Build instruction datasets and score model outputs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every stage of a pipeline config.
    Run {
        config: PathBuf,
        /// Override the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the config output directory.
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Inspect single inputs.
    Inspect {
        #[command(subcommand)]
        what: Inspect,
    },
    /// Score predictions against an answer key.
    Eval {
        predictions: PathBuf,
        queries: PathBuf,
        /// Print the JSON report instead of the table.
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = FingerprintConfig::default().radius)]
        radius: u32,
        #[arg(long, default_value_t = FingerprintConfig::default().width)]
        width: usize,
    },
}

#[derive(Subcommand)]
enum Inspect {
    /// Molecule-level answers.
    Chem {
        #[command(subcommand)]
        op: ChemOp,
    },
}

#[derive(Subcommand)]
enum ChemOp {
    /// Canonical SMILES, one line per input.
    Canon {
        #[arg(required = true)]
        smiles: Vec<String>,
    },
    /// Descriptor table, one line per input.
    Descriptors {
        #[arg(required = true)]
        smiles: Vec<String>,
    },
    /// Fingerprint popcount, one line per input.
    Fp {
        #[arg(required = true)]
        smiles: Vec<String>,
        #[arg(long, default_value_t = FingerprintConfig::default().radius)]
        radius: u32,
        #[arg(long, default_value_t = FingerprintConfig::default().width)]
        width: usize,
    },
}

fn data_err(path: &str, reason: impl ToString) -> PipelineError {
    PipelineError::Data {
        path: path.into(),
        reason: reason.to_string(),
    }
}

fn inspect_each<E: ToString>(
    smiles: &[String],
    f: impl Fn(&str) -> Result<String, E>,
) -> Result<(), PipelineError> {
    for s in smiles {
        println!("{}", f(s).map_err(|e| data_err(s, e))?);
    }
    Ok(())
}

fn fingerprint(radius: u32, width: usize) -> Result<FingerprintConfig, PipelineError> {
    if width == 0 || !width.is_power_of_two() {
        return Err(PipelineError::Config {
            path: "--width".into(),
            reason: "must be a power of two".into(),
        });
    }
    Ok(FingerprintConfig { radius, width })
}

fn execute(cli: Cli) -> Result<(), PipelineError> {
    match cli.command {
        Command::Run {
            config,
            seed,
            output_dir,
        } => {
            let m = pipeline::run(&config, &Overrides { seed, output_dir })?;
            for s in &m.stages {
                println!(
                    "{}\t{}\tin={}\tout={}\tskipped={}",
                    s.name,
                    s.kind,
                    s.records_in,
                    s.records_out,
                    s.skipped.values().sum::<usize>()
                );
            }
            Ok(())
        }
        Command::Inspect {
            what: Inspect::Chem { op },
        } => match op {
            ChemOp::Canon { smiles } => inspect_each(&smiles, inspect::canon_line),
            ChemOp::Descriptors { smiles } => inspect_each(&smiles, inspect::descriptors_line),
            ChemOp::Fp {
                smiles,
                radius,
                width,
            } => {
                let cfg = fingerprint(radius, width)?;
                inspect_each(&smiles, |s| inspect::fp_line(s, &cfg))
            }
        },
        Command::Eval {
            predictions,
            queries,
            json,
            radius,
            width,
        } => {
            let cfg = fingerprint(radius, width)?;
            let report = pipeline::evaluate_files(&predictions, &queries, &cfg)
                .map_err(|e| data_err(&predictions.display().to_string(), e))?;
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("report serializes")
                );
            } else {
                print!("{}", report.to_table());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
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
