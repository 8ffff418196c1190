use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use wsnids::eval::Metrics;
use wsnids::harness::{run_experiment, run_suite, ExperimentConfig};

#[derive(Parser)]
#[command(name = "wsnids", about = "Prequential experiments with streaming intrusion detectors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one model, or the whole comparison roster with --suite.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        suite: bool,
        /// Run suite models concurrently; runtimes become non-comparable.
        #[arg(long, requires = "suite")]
        parallel: bool,
    },
    /// Print the version.
    Version,
}

fn pct(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |v| format!("{:.2}", 100.0 * v))
}

fn summary(model: &str, m: &Metrics, runtime: f64) -> String {
    format!(
        "{model:<14} acc {:>6}  p {:>6}  r {:>6}  f1 {:>6}  {runtime:.2}s",
        pct(m.accuracy),
        pct(m.precision),
        pct(m.recall),
        pct(m.f1)
    )
}

fn run(config: PathBuf, suite: bool, parallel: bool) -> wsnids::Result<()> {
    let config = ExperimentConfig::load(&config)?;
    if suite {
        let out = run_suite(&config, parallel)?;
        for row in &out.rows {
            let m = Metrics {
                accuracy: row.acc,
                precision: row.p,
                recall: row.r,
                f1: row.f1,
            };
            println!("{}", summary(&row.model, &m, row.runtime_s));
        }
        println!("wrote {}", out.suite_path.display());
    } else {
        let out = run_experiment(&config)?;
        let r = &out.report;
        println!("{}", summary(&r.model, &r.binary.metrics, r.runtime_s));
        println!("wrote {}", out.report_path.display());
        println!("wrote {}", out.window_path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Version => {
            println!("wsnids {}", env!("CARGO_PKG_VERSION"));
            ExitCode::SUCCESS
        }
        Command::Run {
            config,
            suite,
            parallel,
        } => match run(config, suite, parallel) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::FAILURE
            }
        },
    }
}
