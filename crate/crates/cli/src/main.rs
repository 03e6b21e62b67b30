use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};

use qverify_cli::{exit, exit_code, resolve_out_dir, run_scenario, write_artifacts, Scenario, ScenarioConfig};

#[derive(Parser, Debug)]
#[command(name = "arena", version, about = "Run verification-game experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one scenario and write its JSON and CSV reports.
    Run {
        /// game, xhog-spoof, clifford, maxcut, entropy-survey or noise-grid
        scenario: String,
        /// Flat `key = value` config file.
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        /// Output directory (default: $ARENA_OUT_DIR, then ./arena-out).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads for parallel sections.
        #[arg(long)]
        threads: Option<usize>,
    },
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let Command::Run {
        scenario,
        config,
        seed,
        eps,
        delta,
        out,
        threads,
    } = cli.command;
    let scenario: Scenario = scenario.parse()?;
    let mut cfg = ScenarioConfig::from_file(&config, scenario)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(e) = eps {
        cfg.eps = e;
    }
    if let Some(d) = delta {
        cfg.delta = d;
    }
    if let Some(t) = threads.or(cfg.threads) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let artifacts = run_scenario(&cfg)?;
    let dir = resolve_out_dir(out);
    let paths = write_artifacts(&dir, &artifacts).with_context(|| format!("writing to {}", dir.display()))?;
    println!("{}", artifacts.summary);
    for p in paths {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE } else { exit::OK });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::from(exit::OK),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
