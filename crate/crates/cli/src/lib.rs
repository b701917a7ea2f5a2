//! Library side of the `qswitch` binary: config parsing, CSV and plot
//! emission, reference checks, and the subcommand bodies.

pub mod config;
pub mod csv;
pub mod plot;
pub mod validate;

use std::fs;
use std::path::{Path, PathBuf};

use qswitch::experiments::{
    bell_mub_switch, definite_baseline, open_control_record, oracle_distance, Engine, EngineKind, RecordKind,
    ScenarioConfig, SweepOutput, SweepRecord,
};
use qswitch::opencontrol::CollisionParams;
use qswitch::random::{random_channel, random_hermitian, random_state, rng};
use qswitch::switch::run_switch;
use thiserror::Error;

pub const CSV_NAME: &str = "sweep.csv";
pub const PLOT_NAME: &str = "sweep.gp";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("validation failed: {0}")]
    Validation(String),
    #[error(transparent)]
    Compute(qswitch::Error),
}

impl From<qswitch::Error> for CliError {
    fn from(e: qswitch::Error) -> Self {
        match e {
            qswitch::Error::Config(m) => CliError::Config(m),
            other => CliError::Compute(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) | CliError::Compute(_) => 1,
            CliError::Config(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

/// Reads `path` (or starts from an empty document) and applies overrides.
pub fn load_config(path: Option<&Path>, overrides: &[String]) -> Result<ScenarioConfig, CliError> {
    let text = match path {
        Some(p) => fs::read_to_string(p).map_err(io_err(p))?,
        None => String::new(),
    };
    config::parse_config(&text, overrides)
}

/// Runs the sweep and writes `sweep.csv` and `sweep.gp` into `out_dir`.
pub fn sweep_to_dir(cfg: &ScenarioConfig, out_dir: &Path, overrides: &[String]) -> Result<SweepOutput, CliError> {
    let result = qswitch::experiments::run_sweep(cfg)?;
    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let csv_path = out_dir.join(CSV_NAME);
    let file = fs::File::create(&csv_path).map_err(io_err(&csv_path))?;
    csv::write_csv(&result.records, std::io::BufWriter::new(file)).map_err(io_err(&csv_path))?;
    let plot_path = out_dir.join(PLOT_NAME);
    let file = fs::File::create(&plot_path).map_err(io_err(&plot_path))?;
    plot::write_plot_script(&result.records, CSV_NAME, overrides, std::io::BufWriter::new(file))
        .map_err(io_err(&plot_path))?;
    Ok(result)
}

/// One grid point, with every other parameter from `cfg`.
pub fn single(
    cfg: &ScenarioConfig,
    epsilon: f64,
    n: u32,
    beta: f64,
    kind: RecordKind,
) -> Result<Vec<SweepRecord>, CliError> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(CliError::Config(format!("epsilon: {epsilon} is outside [0, 1]")));
    }
    let params = cfg.params(beta)?;
    let engines: &[EngineKind] = match cfg.engine {
        Engine::Analytic => &[EngineKind::Analytic],
        Engine::BruteForce => &[EngineKind::BruteForce],
        Engine::Both => &[EngineKind::Analytic, EngineKind::BruteForce],
    };
    match kind {
        RecordKind::Definite => Ok(vec![definite_baseline(epsilon, n, &params)?]),
        RecordKind::Post(o) => {
            engines.iter().map(|&e| open_control_record(epsilon, n, o, &params, e).map_err(CliError::from)).collect()
        }
    }
}

pub const ORACLE_G_TAUS: [f64; 3] = [0.05, 0.2, 0.5];
pub const ORACLE_BETAS: [f64; 4] = [0.0, 1.0, 5.0, f64::INFINITY];
pub const ORACLE_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct OracleCase {
    pub label: String,
    pub g_tau: f64,
    pub beta: f64,
    pub distance: f64,
}

/// Per-collision simulation against the closed form on the Bell pair and on
/// a few seeded random qubit switches.
pub fn oracle_check(max_n: u32) -> Result<Vec<OracleCase>, CliError> {
    let tau = ScenarioConfig::default().tau;
    let mut cases = Vec::new();
    let mut targets = Vec::new();
    for eps in [0.3, 0.7] {
        targets.push((format!("bell eps={eps}"), bell_mub_switch(eps)?, qswitch::experiments::h_ab(1.0)));
    }
    let mut r = rng(2024);
    for i in 0..3 {
        let m = random_channel(&mut r, 2, 2);
        let n = random_channel(&mut r, 2, 3);
        let sw = run_switch(&m, &n, &random_state(&mut r, &[2]))?;
        targets.push((format!("random #{i}"), sw, random_hermitian(&mut r, 2)));
    }
    for (label, sw, h_s) in &targets {
        for g_tau in ORACLE_G_TAUS {
            for beta in ORACLE_BETAS {
                let p = CollisionParams::new(g_tau / tau, tau, 1.0, beta, h_s.clone())?;
                let distance = oracle_distance(sw, &p, max_n)?;
                cases.push(OracleCase { label: label.clone(), g_tau, beta, distance });
            }
        }
    }
    Ok(cases)
}
