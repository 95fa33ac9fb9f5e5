//! `wfp`: batch front-end for the harmonic Wigner-Fokker-Planck laboratory.
//!
//! Subcommands: rates, steady-state, simulate, sgd, compare, sweep.
//! Configuration comes from an optional JSON file (`--config`) with CLI
//! overrides whose flag names mirror the JSON paths (`--model.gamma=2`).
//! Exit codes: 0 success, 2 config error, 3 numerical error (a JSON error
//! object goes to stderr).

use clap::{Arg, ArgAction, Command};

use wfp_cli::config::{load_config, OVERRIDE_FLAGS};
use wfp_cli::{commands, CliError};

fn build_cli() -> Command {
    let mut cmd = Command::new("wfp")
        .about("Decay rates, steady states and Langevin/SGD simulations for the harmonic Wigner-Fokker-Planck benchmark")
        .subcommand_required(true)
        .arg(
            Arg::new("config")
                .long("config")
                .value_name("PATH")
                .global(true)
                .help("JSON config file; flags override its values"),
        )
        .arg(
            Arg::new("out")
                .long("out")
                .value_name("PATH")
                .global(true)
                .help("Output directory (overrides output.path)"),
        )
        .arg(
            Arg::new("seed")
                .long("seed")
                .value_name("N")
                .global(true)
                .help("RNG seed (overrides sim.seed)"),
        )
        .arg(
            Arg::new("format")
                .long("format")
                .value_name("csv|json")
                .global(true)
                .help("Table format (overrides output.format)"),
        )
        .subcommand(Command::new("rates").about("Analytic eigenvalue/rate table, one row per case"))
        .subcommand(
            Command::new("steady-state")
                .about("Steady-state report: exponent coefficients, Lyapunov covariance, reconciliation"),
        )
        .subcommand(
            Command::new("simulate").about("Quantum Langevin ensemble decay curve + summary"),
        )
        .subcommand(Command::new("sgd").about("Classical SGD diffusion-limit run"))
        .subcommand(Command::new("compare").about("Quantum vs classical side-by-side report"))
        .subcommand(Command::new("sweep").about("Parameter-grid sweep, long-format CSV"));
    for flag in OVERRIDE_FLAGS {
        cmd = cmd.arg(
            Arg::new(*flag)
                .long(*flag)
                .value_name("VALUE")
                .global(true)
                .action(ArgAction::Set)
                .allow_hyphen_values(true)
                .help("Config override (JSON path)"),
        );
    }
    cmd
}

fn run() -> Result<Vec<std::path::PathBuf>, CliError> {
    let matches = build_cli().get_matches();

    let mut overrides: Vec<(String, String)> = Vec::new();
    for flag in OVERRIDE_FLAGS {
        if let Some(value) = matches.get_one::<String>(flag) {
            overrides.push((flag.to_string(), value.clone()));
        }
    }
    if let Some(out) = matches.get_one::<String>("out") {
        overrides.push(("output.path".into(), out.clone()));
    }
    if let Some(seed) = matches.get_one::<String>("seed") {
        overrides.push(("sim.seed".into(), seed.clone()));
    }
    if let Some(format) = matches.get_one::<String>("format") {
        overrides.push(("output.format".into(), format.clone()));
    }
    let config_path = matches
        .get_one::<String>("config")
        .map(std::path::PathBuf::from);
    let config = load_config(config_path.as_deref(), &overrides)?;

    match matches.subcommand() {
        Some(("rates", _)) => commands::cmd_rates(&config),
        Some(("steady-state", _)) => commands::cmd_steady_state(&config),
        Some(("simulate", _)) => commands::cmd_simulate(&config),
        Some(("sgd", _)) => commands::cmd_sgd(&config),
        Some(("compare", _)) => commands::cmd_compare(&config),
        Some(("sweep", _)) => commands::cmd_sweep(&config),
        _ => unreachable!("subcommand required"),
    }
}

fn main() {
    match run() {
        Ok(paths) => {
            for path in paths {
                println!("{}", path.display());
            }
        }
        Err(err) => {
            eprintln!("{}", err.to_json());
            std::process::exit(err.exit_code());
        }
    }
}
