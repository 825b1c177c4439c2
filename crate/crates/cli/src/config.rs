//! JSON run configuration.
//!
//! Keys are flat and mirror [`SystemConfig`]; every key is optional and
//! defaults to the reference setup. `rho_s_db` / `rho_c_db` may replace the
//! linear SNRs. Without an explicit relay SNR, `rho_c = rho_s / 10`; without
//! `alpha_e`, `alpha_e = 1 - alpha_c`.

use std::path::Path;

use risnoma_core::channel::{db_to_linear, REFERENCE_RELAY_POWER_RATIO};
use risnoma_core::montecarlo::SweepAxis;
use risnoma_core::{Error as CoreError, RelayDirectVariance, ScenarioKind, SystemConfig};
use serde::Deserialize;

use crate::CliError;

pub const DEFAULT_TRIALS: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    rho_s: Option<f64>,
    rho_s_db: Option<f64>,
    rho_c: Option<f64>,
    rho_c_db: Option<f64>,
    alpha_c: Option<f64>,
    alpha_e: Option<f64>,
    m: Option<u32>,
    n_c: Option<u32>,
    n_e: Option<u32>,
    #[serde(alias = "R")]
    elements: Option<u32>,
    eta_c: Option<f64>,
    eta_e: Option<f64>,
    lambda_c: Option<f64>,
    lambda_e: Option<f64>,
    lambda_ce: Option<f64>,
    lambda_rc: Option<f64>,
    lambda_gc: Option<f64>,
    lambda_re: Option<f64>,
    lambda_ge: Option<f64>,
    lambda_rce: Option<f64>,
    lambda_gce: Option<f64>,
    quad_order: Option<usize>,
    relay_direct_variance: Option<RelayVarianceKey>,
    trials: Option<u64>,
    seed: Option<u64>,
    scenario: Option<ScenarioKey>,
    sweep: Option<RawSweep>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
enum RelayVarianceKey {
    LambdaCe,
    LambdaE,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
enum ScenarioKey {
    TwoZoneAligned,
    SingleZoneRandom,
    NoRis,
}

#[derive(Debug, Clone, Copy, Deserialize)]
enum AxisKey {
    #[serde(rename = "rho_s_db")]
    RhoSDb,
    #[serde(rename = "R", alias = "elements")]
    Elements,
    #[serde(rename = "alpha_c")]
    AlphaC,
    #[serde(rename = "m")]
    Blocklength,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    axis: AxisKey,
    values: Vec<f64>,
}

/// Parameter sweep of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
}

/// A validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub system: SystemConfig,
    pub trials: u64,
    pub seed: u64,
    pub scenario: ScenarioKind,
    pub sweep: Option<Sweep>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            system: SystemConfig::default(),
            trials: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
            scenario: ScenarioKind::TwoZoneAligned,
            sweep: None,
        }
    }
}

fn config_err(key: &str, reason: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{key}: {reason}"))
}

fn exclusive(
    key_a: &str,
    a: Option<f64>,
    key_b: &str,
    b: Option<f64>,
) -> Result<Option<f64>, CliError> {
    match (a, b) {
        (Some(_), Some(_)) => Err(config_err(
            key_b,
            format!("cannot be combined with {key_a}"),
        )),
        (Some(linear), None) => Ok(Some(linear)),
        (None, Some(db)) => Ok(Some(db_to_linear(db))),
        (None, None) => Ok(None),
    }
}

/// Parses and validates a configuration from JSON text.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path == "." {
            CliError::Config(inner.to_string())
        } else {
            config_err(&path, inner)
        }
    })?;
    build(raw)
}

fn build(raw: RawConfig) -> Result<RunConfig, CliError> {
    let mut sys = SystemConfig::default();
    if let Some(rho_s) = exclusive("rho_s", raw.rho_s, "rho_s_db", raw.rho_s_db)? {
        sys.rho_s = rho_s;
    }
    sys.rho_c = exclusive("rho_c", raw.rho_c, "rho_c_db", raw.rho_c_db)?
        .unwrap_or(sys.rho_s * REFERENCE_RELAY_POWER_RATIO);
    let relay_pinned = raw.rho_c.is_some() || raw.rho_c_db.is_some();
    if let Some(a) = raw.alpha_c {
        sys.set_alpha_c(a);
    }
    if let Some(a) = raw.alpha_e {
        sys.alpha_e = a;
    }
    if let Some(m) = raw.m {
        sys.code_c.m = m;
        sys.code_e.m = m;
    }
    if let Some(n) = raw.n_c {
        sys.code_c.bits = n;
    }
    if let Some(n) = raw.n_e {
        sys.code_e.bits = n;
    }
    macro_rules! set {
        ($($field:ident),*) => {$(
            if let Some(v) = raw.$field {
                sys.$field = v;
            }
        )*};
    }
    set!(elements, eta_c, eta_e, quad_order);
    set!(
        lambda_c, lambda_e, lambda_ce, lambda_rc, lambda_gc, lambda_re, lambda_ge, lambda_rce,
        lambda_gce
    );
    if let Some(k) = raw.relay_direct_variance {
        sys.relay_direct_variance = match k {
            RelayVarianceKey::LambdaCe => RelayDirectVariance::LambdaCe,
            RelayVarianceKey::LambdaE => RelayDirectVariance::LambdaE,
        };
    }
    if raw.m == Some(0) {
        return Err(config_err("m", "must be >= 1"));
    }
    sys.validate().map_err(core_config_err)?;

    let trials = raw.trials.unwrap_or(DEFAULT_TRIALS);
    if trials == 0 {
        return Err(config_err("trials", "must be >= 1"));
    }
    let scenario = match raw.scenario.unwrap_or(ScenarioKey::TwoZoneAligned) {
        ScenarioKey::TwoZoneAligned => ScenarioKind::TwoZoneAligned,
        ScenarioKey::SingleZoneRandom => ScenarioKind::SingleZoneRandom,
        ScenarioKey::NoRis => ScenarioKind::NoRis,
    };
    let sweep = match raw.sweep {
        None => None,
        Some(s) if s.values.is_empty() => {
            return Err(config_err("sweep.values", "must not be empty"))
        }
        Some(s) => Some(Sweep {
            axis: match s.axis {
                AxisKey::RhoSDb => SweepAxis::RhoSDb {
                    couple_relay: !relay_pinned,
                },
                AxisKey::Elements => SweepAxis::Elements,
                AxisKey::AlphaC => SweepAxis::AlphaC,
                AxisKey::Blocklength => SweepAxis::Blocklength,
            },
            values: s.values,
        }),
    };
    Ok(RunConfig {
        system: sys,
        trials,
        seed: raw.seed.unwrap_or(DEFAULT_SEED),
        scenario,
        sweep,
    })
}

pub(crate) fn core_config_err(e: CoreError) -> CliError {
    match e {
        CoreError::InvalidConfig { field, reason } => config_err(field, reason),
        other => CliError::Config(other.to_string()),
    }
}

/// Reads and validates a configuration file.
pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}
