use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use mvfj::scenario::{exit_code, run, Scenario};
use mvfj::Error;

/// Run an opinion-dynamics scenario and write its CSV/JSON artifacts.
#[derive(Debug, Parser)]
#[command(name = "mvfj", version)]
struct Args {
    /// Scenario JSON file.
    #[arg(long)]
    scenario: PathBuf,
    /// Directory receiving the artifacts.
    #[arg(long, default_value = "out")]
    output_dir: PathBuf,
    /// Overrides the simulation seed in the file.
    #[arg(long)]
    seed: Option<u64>,
    /// Print the scenario with every default filled in, then exit.
    #[arg(long)]
    print_config: bool,
    /// Suppress the per-artifact summary.
    #[arg(long)]
    quiet: bool,
    /// Worker threads for agent-parallel stepping (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}

fn execute(args: &Args) -> Result<(), Error> {
    let mut scenario = Scenario::load(&args.scenario)?;
    if let Some(seed) = args.seed {
        scenario.sim.seed = seed;
    }
    if args.print_config {
        println!(
            "{}",
            serde_json::to_string_pretty(&scenario).expect("scenario serializes")
        );
        return Ok(());
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = args.workers {
        if w == 0 {
            return Err(Error::Parameter("--workers must be >= 1".into()));
        }
        pool = pool.num_threads(w);
    }
    let pool = pool
        .build()
        .map_err(|e| Error::Parameter(format!("cannot start worker pool: {e}")))?;
    let written = pool.install(|| run(&scenario, &args.output_dir))?;
    if !args.quiet {
        for a in written {
            println!("{a}");
        }
    }
    Ok(())
}
