//! TOML scenario files.
//!
//! ```toml
//! collision_counts = [0, 1, 2, 3, 5, 10, 20, 50]
//! betas = [0.1, 5.0, "inf"]
//! g_tau = 0.2
//! omega = 1.0
//! omega_s = 1.0
//! tau = 0.2
//! postselections = ["plus", "minus"]
//! include_definite_baseline = true
//! engine = "analytic"            # analytic | bruteforce | both
//!
//! [epsilon]
//! min = 0.0
//! max = 1.0
//! steps = 201
//! ```
//!
//! Every key is optional; omitted keys take the values shown.

use qswitch::experiments::{Engine, EpsilonGrid, ScenarioConfig};
use qswitch::switch::Outcome;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    epsilon: Option<GridSection>,
    collision_counts: Option<Vec<u32>>,
    betas: Option<Vec<Beta>>,
    g_tau: Option<f64>,
    omega: Option<f64>,
    omega_s: Option<f64>,
    tau: Option<f64>,
    postselections: Option<Vec<String>>,
    include_definite_baseline: Option<bool>,
    engine: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridSection {
    min: Option<f64>,
    max: Option<f64>,
    steps: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Beta {
    Number(f64),
    Text(String),
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

/// Accepts a number or one of "inf", "+inf", "infinity".
pub fn parse_beta(text: &str) -> Result<f64, CliError> {
    match text.trim().to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
        t => t.parse().map_err(|_| config_err(format!("betas: cannot read {text:?} as a number or \"inf\""))),
    }
}

fn line_of(text: &str, err: &toml::de::Error) -> Option<usize> {
    err.span().map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1)
}

fn describe(text: Option<&str>, err: &toml::de::Error) -> CliError {
    let msg = err.message().trim();
    match text.and_then(|t| line_of(t, err)) {
        Some(line) => config_err(format!("line {line}: {msg}")),
        None => config_err(msg.to_string()),
    }
}

fn set_path(table: &mut toml::Table, key: &str, value: toml::Value) -> Result<(), CliError> {
    let mut parts: Vec<&str> = key.split('.').collect();
    let last =
        parts.pop().filter(|k| !k.is_empty()).ok_or_else(|| config_err(format!("empty override key {key:?}")))?;
    let mut cur = table;
    for p in parts {
        let entry = cur.entry(p.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = entry.as_table_mut().ok_or_else(|| config_err(format!("override {key:?}: {p} is not a table")))?;
    }
    cur.insert(last.to_string(), value);
    Ok(())
}

/// Applies one `key=value` override. The value is read as a TOML value and
/// falls back to a bare string, so `engine=both` and `betas=[0,"inf"]` both
/// work.
fn apply_override(table: &mut toml::Table, arg: &str) -> Result<(), CliError> {
    let (key, raw) =
        arg.split_once('=').ok_or_else(|| config_err(format!("override {arg:?} is not of the form key=value")))?;
    let (key, raw) = (key.trim(), raw.trim());
    let value = match toml::from_str::<toml::Table>(&format!("v = {raw}")) {
        Ok(mut t) => t.remove("v").expect("just inserted"),
        Err(_) => toml::Value::String(raw.to_string()),
    };
    set_path(table, key, value)
}

/// Parses a scenario file, applies overrides, fills defaults and validates.
pub fn parse_config(text: &str, overrides: &[String]) -> Result<ScenarioConfig, CliError> {
    let file: FileConfig = if overrides.is_empty() {
        toml::from_str(text).map_err(|e| describe(Some(text), &e))?
    } else {
        let mut table: toml::Table = toml::from_str(text).map_err(|e| describe(Some(text), &e))?;
        for o in overrides {
            apply_override(&mut table, o)?;
        }
        table.try_into().map_err(|e| describe(None, &e))?
    };
    let cfg = resolve(file)?;
    cfg.validate().map_err(|e| match e {
        qswitch::Error::Config(m) => config_err(m),
        other => config_err(other.to_string()),
    })?;
    Ok(cfg)
}

fn resolve(file: FileConfig) -> Result<ScenarioConfig, CliError> {
    let d = ScenarioConfig::default();
    let grid = file.epsilon.unwrap_or_default();
    let betas = match file.betas {
        None => d.betas,
        Some(list) => list
            .into_iter()
            .map(|b| match b {
                Beta::Number(x) => Ok(x),
                Beta::Text(t) => parse_beta(&t),
            })
            .collect::<Result<_, _>>()?,
    };
    let postselections = match file.postselections {
        None => d.postselections,
        Some(list) => list
            .iter()
            .map(|s| {
                s.parse::<Outcome>()
                    .map_err(|_| config_err(format!("postselections: unknown outcome {s:?} (expected plus|minus)")))
            })
            .collect::<Result<_, _>>()?,
    };
    let engine = match file.engine {
        None => d.engine,
        Some(s) => s
            .parse::<Engine>()
            .map_err(|_| config_err(format!("engine: unknown value {s:?} (expected analytic|bruteforce|both)")))?,
    };
    Ok(ScenarioConfig {
        epsilon: EpsilonGrid {
            min: grid.min.unwrap_or(d.epsilon.min),
            max: grid.max.unwrap_or(d.epsilon.max),
            steps: grid.steps.unwrap_or(d.epsilon.steps),
        },
        collision_counts: file.collision_counts.unwrap_or(d.collision_counts),
        betas,
        g_tau: file.g_tau.unwrap_or(d.g_tau),
        omega: file.omega.unwrap_or(d.omega),
        omega_s: file.omega_s.unwrap_or(d.omega_s),
        tau: file.tau.unwrap_or(d.tau),
        postselections,
        include_definite_baseline: file.include_definite_baseline.unwrap_or(d.include_definite_baseline),
        engine,
    })
}
