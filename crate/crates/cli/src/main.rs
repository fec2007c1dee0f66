//! `aeroemit`: validate, run and report on a flight emissions batch.
//!
//! Exit status: 0 on success, 2 for input or configuration errors, 3 when
//! `report` cannot find the outputs of a run.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use aeroemit::config::RunConfig;
use aeroemit::ingest::IngestReport;
use aeroemit::pipeline::{self, CoverageReport, PipelineError};
use aeroemit::synthetic::{SyntheticCorpus, SyntheticSpec};
use clap::{Args, Parser, Subcommand};

/// Per-flight LTO and CCD greenhouse-gas emissions for U.S. domestic flights.
#[derive(Debug, Parser)]
#[command(name = "aeroemit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ConfigArgs {
    /// Run configuration file.
    #[arg(long, short, env = "AEROEMIT_CONFIG")]
    config: Option<PathBuf>,
    /// Minimum Jaccard score for an engine match, overriding the config.
    #[arg(long)]
    jaccard_threshold: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and resolve every input and preview coverage, without
    /// computing emissions.
    Validate {
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Compute per-flight emissions and write all outputs.
    Run {
        #[command(flatten)]
        config: ConfigArgs,
        /// Worker threads; defaults to one per available core.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Summarize the outputs of a finished run.
    Report {
        /// Output directory of a run.
        output_dir: PathBuf,
        /// How many airlines and airports to list.
        #[arg(long, default_value_t = 5)]
        top: usize,
    },
    /// Write a synthetic corpus and a config pointing at it.
    Synth {
        /// Directory to create the corpus in.
        dir: PathBuf,
        #[arg(long, default_value_t = SyntheticSpec::default().seed)]
        seed: u64,
        #[arg(long, default_value_t = SyntheticSpec::default().flights)]
        flights: usize,
        #[arg(long, default_value_t = SyntheticSpec::default().tails)]
        tails: usize,
        /// Flights to blank the tail number of.
        #[arg(long, default_value_t = 0)]
        missing_tail: usize,
        /// Flights to blank the air time of.
        #[arg(long, default_value_t = 0)]
        missing_air_time: usize,
        /// Flights to give a tail number absent from the B-43 table.
        #[arg(long, default_value_t = 0)]
        unknown_tail: usize,
    },
}

fn load_config(args: &ConfigArgs) -> Result<RunConfig, String> {
    let path = args
        .config
        .as_deref()
        .ok_or("no config file: pass --config or set AEROEMIT_CONFIG")?;
    let mut config = RunConfig::load(path).map_err(|e| e.to_string())?;
    if let Some(t) = args.jaccard_threshold {
        config.jaccard_threshold = t;
        config.validate().map_err(|e| e.to_string())?;
    }
    Ok(config)
}

fn print_ingest(reports: &[IngestReport]) {
    const SHOWN: usize = 10;
    for r in reports {
        println!(
            "{:<16} rows {:>8}  accepted {:>8}  rejected {:>6}  flagged {:>6}",
            r.table.name(),
            r.total_rows,
            r.accepted,
            r.rejected.len(),
            r.flagged
        );
        for rej in r.rejected.iter().take(SHOWN) {
            eprintln!("{}: line {}: {}", r.table.name(), rej.line, rej.reason);
        }
        if r.rejected.len() > SHOWN {
            eprintln!("{}: ... {} more rejected rows", r.table.name(), r.rejected.len() - SHOWN);
        }
    }
}

fn print_coverage(c: &CoverageReport) {
    for (metric, value) in c.rows() {
        println!("{metric:<36} {value}");
    }
}

fn warn_all(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

fn fail(e: PipelineError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn config_error(msg: String) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn synth(dir: &Path, spec: &SyntheticSpec) -> ExitCode {
    let corpus = SyntheticCorpus::generate(spec);
    match corpus.write_with_config(dir) {
        Ok(path) => {
            println!("{}", path.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: cannot write corpus to {}: {e}", dir.display());
            ExitCode::from(2)
        }
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Validate { config } => {
            let config = match load_config(&config) {
                Ok(c) => c,
                Err(msg) => return config_error(msg),
            };
            match pipeline::validate(&config) {
                Ok(v) => {
                    print_ingest(&v.ingest);
                    println!();
                    print_coverage(&v.coverage);
                    warn_all(&v.warnings);
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
        Command::Run { config, threads } => {
            let config = match load_config(&config) {
                Ok(c) => c,
                Err(msg) => return config_error(msg),
            };
            if threads == Some(0) {
                return config_error("--threads must be at least 1".into());
            }
            match pipeline::run(&config, threads) {
                Ok(summary) => {
                    print_ingest(&summary.ingest);
                    println!();
                    print_coverage(&summary.coverage);
                    println!("\noutputs written to {}", summary.output_dir.display());
                    warn_all(&summary.warnings);
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
        Command::Report { output_dir, top } => match pipeline::report(&output_dir, top) {
            Ok(text) => {
                print!("{text}");
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        },
        Command::Synth {
            dir,
            seed,
            flights,
            tails,
            missing_tail,
            missing_air_time,
            unknown_tail,
        } => synth(
            &dir,
            &SyntheticSpec {
                seed,
                flights,
                tails,
                missing_tail,
                missing_air_time,
                unknown_tail,
            },
        ),
    }
}
