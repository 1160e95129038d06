use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pullback_lab::runner::{self, RunError};

#[derive(Parser)]
#[command(name = "pullback-lab", version, about = "Pullback attractor diagnostics for multivalued processes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a JSON scenario and write its report, curves and plots.
    Run {
        scenario: PathBuf,
        /// Output directory (overrides the scenario's `output_dir`).
        #[arg(long)]
        output: Option<PathBuf>,
        /// Seed override.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// List the registered systems.
    ListSystems {
        #[arg(long)]
        json: bool,
    },
    /// Print the toolkit version.
    Version,
}

fn threads_from_env() {
    if let Ok(v) = std::env::var("PULLBACK_LAB_THREADS") {
        match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => {
                pullback_lab::init_thread_pool(n);
            }
            _ => eprintln!("warning: ignoring PULLBACK_LAB_THREADS={v:?}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    threads_from_env();
    match cli.command {
        Command::Version => {
            println!("pullback-lab {}", pullback_lab::VERSION);
            ExitCode::SUCCESS
        }
        Command::ListSystems { json } => {
            let systems = runner::list_systems();
            if json {
                println!("{}", serde_json::to_string_pretty(&systems).expect("registry serializes"));
            } else {
                for s in &systems {
                    println!("{:<16} {}", s.name, s.description);
                }
            }
            ExitCode::SUCCESS
        }
        Command::Run { scenario, output, seed } => match runner::run(&scenario, output.as_deref(), seed) {
            Ok(outcome) => {
                for d in &outcome.report.diagnostics {
                    let mark = if d.matched { "ok" } else { "MISMATCH" };
                    println!("[{mark}] {:02} {} {}", d.index, d.kind, serde_json::Value::Object(d.verdicts.clone()));
                }
                println!("artifacts: {}", outcome.output_dir.display());
                ExitCode::from(outcome.exit_code() as u8)
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(RunError::exit_code(&e) as u8)
            }
        },
    }
}
