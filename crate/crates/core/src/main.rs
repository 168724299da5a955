use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use pathwise_hj::expcli::{execute, Scenario};

#[derive(Parser, Debug)]
#[command(
    name = "pathwise-hj",
    version,
    about = "Pathwise Hamilton-Jacobi experiment runner"
)]
struct Cli {
    /// Scenario to run (see --list-scenarios).
    #[arg(required_unless_present = "list_scenarios")]
    scenario: Option<String>,
    /// Config file; an empty file runs the defaults.
    #[arg(long, required_unless_present = "list_scenarios")]
    config: Option<PathBuf>,
    /// Overrides `[run] seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory, `out/<scenario>` by default.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the scenario names and exit.
    #[arg(long)]
    list_scenarios: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.list_scenarios {
        for s in Scenario::ALL {
            println!("{:<10} {}", s.name(), s.description());
        }
        return ExitCode::SUCCESS;
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> pathwise_hj::error::Result<bool> {
    let name = cli.scenario.as_deref().unwrap_or_default();
    let scenario = Scenario::from_name(name)?;
    let config = cli.config.as_ref().expect("clap enforces --config");
    let text = std::fs::read_to_string(config)?;
    let out = cli
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("out").join(name));
    let art = execute(scenario, &text, cli.seed, &out)?;
    for a in &art.assertions {
        let tag = if a.passed { "PASS" } else { "FAIL" };
        println!(
            "{tag} {:<32} measured={:.6e} expected={:.6e} tol={:.1e}  {}",
            a.name, a.measured, a.expected, a.tolerance, a.claim
        );
    }
    let failed = art.assertions.iter().filter(|a| !a.passed).count();
    println!(
        "{}: {} assertions, {} failed, artifacts in {}",
        art.scenario,
        art.assertions.len(),
        failed,
        out.display()
    );
    Ok(failed == 0)
}
