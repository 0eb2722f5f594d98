use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use viplan_core::cli::{self, CliError, RunConfig};
use viplan_core::envs::{DomainKind, Split};

#[derive(Parser)]
#[command(name = "viplan", version, about = "Visual planning benchmark harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate Blocksworld problems with scene files.
    Generate {
        #[arg(long)]
        split: Split,
        #[arg(long, default_value_t = 25)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run one benchmark cell from a JSON config.
    Run(RunArgs),
    /// Build a leaderboard from one or more run directories.
    Report {
        #[arg(long)]
        out: PathBuf,
        #[arg(required = true)]
        runs: Vec<PathBuf>,
    },
    /// Check that every problem in a directory parses and is solvable.
    Validate {
        #[arg(long)]
        domain: DomainKind,
        #[arg(long)]
        split: Option<Split>,
        dir: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, overrides_with = "no_cot")]
    cot: bool,
    #[arg(long, overrides_with = "cot")]
    no_cot: bool,
    #[arg(long)]
    failure_prob: Option<f64>,
}

impl RunArgs {
    fn apply(&self, cfg: &mut RunConfig) {
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(o) = &self.out {
            cfg.out = o.clone();
        }
        if self.jobs.is_some() {
            cfg.jobs = self.jobs;
        }
        if self.cot {
            cfg.cot = true;
        }
        if self.no_cot {
            cfg.cot = false;
        }
        if let Some(p) = self.failure_prob {
            cfg.failure_prob = p;
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Generate { split, count, seed, out } => {
            let files = cli::cmd_generate(split, count, seed, &out)?;
            println!("wrote {} files to {}", files.len(), out.display());
        }
        Command::Run(args) => {
            let mut cfg = RunConfig::load(&args.config)?;
            args.apply(&mut cfg);
            let summary = cli::cmd_run(&cfg)?;
            for r in &summary.reports {
                println!(
                    "{} {} {}: {}/{} = {} ± {}",
                    summary.agent,
                    r.domain,
                    r.split,
                    r.successes,
                    r.n,
                    viplan_core::metrics::fmt2(r.success_rate),
                    viplan_core::metrics::fmt2(r.sem)
                );
            }
        }
        Command::Report { out, runs } => {
            let report = cli::cmd_report(&runs, &out)?;
            print!("{}", viplan_core::metrics::leaderboard_text(&report.rows));
        }
        Command::Validate { domain, split, dir } => {
            let report = cli::cmd_validate(&dir, domain, split)?;
            for w in &report.warnings {
                log::warn!("{w}");
            }
            println!("{} problems valid", report.entries.len());
        }
    }
    Ok(())
}

fn main() -> anyhow::Result<ExitCode> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => Ok(ExitCode::SUCCESS),
        Err(e) => {
            let code = e.exit_code();
            let err = anyhow::Error::new(e).context("viplan failed");
            eprintln!("{err:#}");
            Ok(ExitCode::from(code as u8))
        }
    }
}
