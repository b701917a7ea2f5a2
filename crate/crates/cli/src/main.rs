use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qswitch::experiments::RecordKind;
use qswitch_cli::{config::parse_beta, csv, validate, CliError, ORACLE_TOL};

#[derive(Parser)]
#[command(
    name = "qswitch",
    version,
    about = "Concurrence sweeps for a quantum switch with a thermally monitored control"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the (ε, n, β, outcome) grid and write sweep.csv and sweep.gp.
    Sweep {
        /// TOML scenario file; defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Override a config key, e.g. --set epsilon.steps=51
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Evaluate one grid point and print it as CSV.
    Single {
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        n: u32,
        /// Inverse temperature, or "inf".
        #[arg(long, value_parser = beta_arg)]
        beta: f64,
        /// plus, minus or definite
        #[arg(long)]
        outcome: RecordKind,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Compare per-collision simulation with the closed form.
    OracleCheck {
        #[arg(long, default_value_t = 20)]
        max_n: u32,
    },
    /// Check the switch against its known closed-form blocks and probabilities.
    #[command(name = "validate-paper")]
    Validate,
}

fn beta_arg(s: &str) -> Result<f64, String> {
    parse_beta(s).map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Sweep { config, out, overrides } => {
            let cfg = qswitch_cli::load_config(config.as_deref(), &overrides)?;
            let result = qswitch_cli::sweep_to_dir(&cfg, &out, &overrides)?;
            eprintln!("{} records written to {}", result.records.len(), out.join(qswitch_cli::CSV_NAME).display());
            if let Some(d) = result.max_engine_delta {
                eprintln!("max |delta concurrence| between engines: {d:e}");
            }
        }
        Command::Single { epsilon, n, beta, outcome, config, overrides } => {
            let cfg = qswitch_cli::load_config(config.as_deref(), &overrides)?;
            let records = qswitch_cli::single(&cfg, epsilon, n, beta, outcome)?;
            print!("{}", csv::to_csv_string(&records));
        }
        Command::OracleCheck { max_n } => {
            let cases = qswitch_cli::oracle_check(max_n)?;
            let mut worst: f64 = 0.0;
            for c in &cases {
                let ok = c.distance <= ORACLE_TOL;
                println!(
                    "{} {:<14} g_tau={:<5} beta={:<4} max trace distance {:.3e}",
                    if ok { "PASS" } else { "FAIL" },
                    c.label,
                    c.g_tau,
                    csv::fmt_float(c.beta),
                    c.distance
                );
                worst = worst.max(c.distance);
            }
            println!("worst {worst:.3e} over n <= {max_n} (tol {ORACLE_TOL:e})");
            if worst > ORACLE_TOL {
                return Err(CliError::Validation(format!("oracle distance {worst:e} exceeds {ORACLE_TOL:e}")));
            }
        }
        Command::Validate => {
            let checks = validate::run_checks();
            print!("{}", validate::render_table(&checks));
            let failed = checks.iter().filter(|c| !c.passed()).count();
            if failed > 0 {
                return Err(CliError::Validation(format!("{failed} checks failed")));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
