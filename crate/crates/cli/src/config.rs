//! Line-oriented `key = value` run configuration with `[section]` headers.
//!
//! Every key has a documented default, so an empty file is a valid 1-d setup.
//! Parse errors carry the offending line number; constraint violations name
//! the field.

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};

use srsp_core::{Damping, DomainSpec, Scheme, Weights};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("field {field}: {msg}")]
    Constraint { field: &'static str, msg: String },
}

impl fmt::Display for WeightsSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightsSpec::Uniform => write!(f, "uniform"),
            WeightsSpec::Geometric(r) => write!(f, "geometric({r})"),
            WeightsSpec::Explicit(v) => write!(f, "{v:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum WeightsSpec {
    Uniform,
    Geometric(f64),
    Explicit(Vec<f64>),
}

/// Validated configuration for one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub domain: DomainSpec,
    pub mass: f64,
    pub weights: Weights,
    pub coupling: bool,
    pub seed: u64,
    pub damping: Damping,
    pub snapshot_in: Option<PathBuf>,
    pub scheme: Scheme,
    pub dt: f64,
    pub steps: usize,
    pub cadence: usize,
    pub guard_factor: f64,
    pub out_dir: PathBuf,
    pub snapshot_cadence: usize,
    pub plots: bool,
}

struct RawEntry {
    line: usize,
    value: String,
}

struct RawConfig {
    entries: HashMap<String, RawEntry>,
}

const KNOWN_KEYS: &[&str] = &[
    "domain.dimension",
    "domain.lengths",
    "domain.modes",
    "domain.oversampling",
    "physics.mass",
    "physics.count",
    "physics.weights",
    "physics.coupling",
    "initial.seed",
    "initial.damping",
    "initial.snapshot",
    "integration.scheme",
    "integration.dt",
    "integration.steps",
    "integration.cadence",
    "integration.guard_factor",
    "output.directory",
    "output.snapshot_cadence",
    "output.plots",
];

impl RawConfig {
    fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries = HashMap::new();
        let mut section = String::new();
        for (i, raw_line) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw_line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with(';') {
                continue;
            }
            if let Some(rest) = trimmed.strip_prefix('[') {
                let name = rest.strip_suffix(']').ok_or_else(|| ConfigError::Parse {
                    line,
                    msg: format!("unterminated section header {trimmed:?}"),
                })?;
                section = name.trim().to_ascii_lowercase();
                if !["domain", "physics", "initial", "integration", "output"].contains(&section.as_str()) {
                    return Err(ConfigError::Parse { line, msg: format!("unknown section [{section}]") });
                }
                continue;
            }
            let (key, value) = trimmed.split_once('=').ok_or_else(|| ConfigError::Parse {
                line,
                msg: format!("expected `key = value`, got {trimmed:?}"),
            })?;
            if section.is_empty() {
                return Err(ConfigError::Parse { line, msg: "key outside any [section]".into() });
            }
            // strip trailing comments
            let value = match value.split_once('#') {
                Some((v, _)) => v,
                None => value,
            };
            let full = format!("{section}.{}", key.trim().to_ascii_lowercase());
            if !KNOWN_KEYS.contains(&full.as_str()) {
                return Err(ConfigError::Parse { line, msg: format!("unknown key `{full}`") });
            }
            if entries
                .insert(full.clone(), RawEntry { line, value: value.trim().to_string() })
                .is_some()
            {
                return Err(ConfigError::Parse { line, msg: format!("duplicate key `{full}`") });
            }
        }
        Ok(RawConfig { entries })
    }

    fn take(&mut self, key: &str) -> Option<RawEntry> {
        self.entries.remove(key)
    }
}

fn parse_scalar<T: std::str::FromStr>(entry: &RawEntry, what: &str) -> Result<T, ConfigError> {
    entry.value.parse().map_err(|_| ConfigError::Parse {
        line: entry.line,
        msg: format!("cannot parse {:?} as {what}", entry.value),
    })
}

fn parse_bool(entry: &RawEntry) -> Result<bool, ConfigError> {
    match entry.value.to_ascii_lowercase().as_str() {
        "on" | "true" | "yes" | "1" => Ok(true),
        "off" | "false" | "no" | "0" => Ok(false),
        other => Err(ConfigError::Parse {
            line: entry.line,
            msg: format!("cannot parse {other:?} as on/off"),
        }),
    }
}

fn parse_list<T: std::str::FromStr>(entry: &RawEntry, what: &str) -> Result<Vec<T>, ConfigError> {
    entry
        .value
        .split(',')
        .map(|s| {
            s.trim().parse().map_err(|_| ConfigError::Parse {
                line: entry.line,
                msg: format!("cannot parse {:?} as {what}", s.trim()),
            })
        })
        .collect()
}

/// Broadcast a 1-element list to dimension `d`, or demand exactly `d` entries.
fn broadcast<T: Clone>(mut v: Vec<T>, d: usize, field: &'static str) -> Result<Vec<T>, ConfigError> {
    if v.len() == 1 {
        let x = v.pop().expect("one element");
        return Ok(vec![x; d]);
    }
    if v.len() == d {
        Ok(v)
    } else {
        Err(ConfigError::Constraint {
            field,
            msg: format!("expected 1 or {d} entries, got {}", v.len()),
        })
    }
}

pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut raw = RawConfig::parse(text)?;

    let dimension: usize = match raw.take("domain.dimension") {
        Some(e) => parse_scalar(&e, "an integer")?,
        None => 1,
    };
    if !(1..=3).contains(&dimension) {
        return Err(ConfigError::Constraint {
            field: "domain.dimension",
            msg: format!("must be 1, 2 or 3, got {dimension}"),
        });
    }
    let lengths = match raw.take("domain.lengths") {
        Some(e) => broadcast(parse_list::<f64>(&e, "a number")?, dimension, "domain.lengths")?,
        None => vec![1.0; dimension],
    };
    let modes = match raw.take("domain.modes") {
        Some(e) => broadcast(parse_list::<usize>(&e, "an integer")?, dimension, "domain.modes")?,
        None => vec![64; dimension],
    };
    let oversampling: usize = match raw.take("domain.oversampling") {
        Some(e) => parse_scalar(&e, "an integer")?,
        None => 2,
    };
    let domain = DomainSpec::new(lengths, modes, oversampling).map_err(|e| ConfigError::Constraint {
        field: "domain",
        msg: e.to_string(),
    })?;

    let mass: f64 = match raw.take("physics.mass") {
        Some(e) => parse_scalar(&e, "a number")?,
        None => 1.0,
    };
    if !(mass.is_finite() && mass > 0.0) {
        return Err(ConfigError::Constraint {
            field: "physics.mass",
            msg: format!("must be positive, got {mass}"),
        });
    }
    let count: Option<usize> = match raw.take("physics.count") {
        Some(e) => Some(parse_scalar(&e, "an integer")?),
        None => None,
    };
    let weights_spec = match raw.take("physics.weights") {
        Some(e) => {
            let v = e.value.trim();
            if v.eq_ignore_ascii_case("uniform") {
                WeightsSpec::Uniform
            } else if let Some(inner) = v
                .strip_prefix("geometric(")
                .and_then(|s| s.strip_suffix(')'))
            {
                let r: f64 = inner.trim().parse().map_err(|_| ConfigError::Parse {
                    line: e.line,
                    msg: format!("cannot parse {:?} as a geometric ratio", inner.trim()),
                })?;
                WeightsSpec::Geometric(r)
            } else {
                WeightsSpec::Explicit(parse_list(&e, "a number")?)
            }
        }
        None => WeightsSpec::Uniform,
    };
    let k = match (&weights_spec, count) {
        (WeightsSpec::Explicit(list), Some(c)) if list.len() != c => {
            return Err(ConfigError::Constraint {
                field: "physics.count",
                msg: format!("count = {c} but weights lists {} entries", list.len()),
            });
        }
        (WeightsSpec::Explicit(list), _) => list.len(),
        (_, Some(c)) => c,
        (_, None) => 1,
    };
    if k == 0 {
        return Err(ConfigError::Constraint { field: "physics.count", msg: "must be >= 1".into() });
    }
    let weights = match weights_spec {
        WeightsSpec::Uniform => Weights::uniform(k),
        WeightsSpec::Geometric(r) => Weights::geometric(k, r),
        WeightsSpec::Explicit(list) => Weights::new(list),
    }
    .map_err(|e| ConfigError::Constraint {
        field: "physics.weights",
        msg: format!("{e} (weights must be strictly positive)"),
    })?;
    let coupling = match raw.take("physics.coupling") {
        Some(e) => parse_bool(&e)?,
        None => true,
    };

    let seed: u64 = match raw.take("initial.seed") {
        Some(e) => parse_scalar(&e, "an integer")?,
        None => 0,
    };
    let damping = match raw.take("initial.damping") {
        Some(e) => {
            let gamma: f64 = parse_scalar(&e, "a number")?;
            if !gamma.is_finite() || gamma < 0.0 {
                return Err(ConfigError::Constraint {
                    field: "initial.damping",
                    msg: format!("must be a nonnegative exponent, got {gamma}"),
                });
            }
            Damping::Algebraic(gamma)
        }
        None => Damping::Algebraic(1.0),
    };
    let snapshot_in = raw.take("initial.snapshot").map(|e| PathBuf::from(e.value));

    let scheme = match raw.take("integration.scheme") {
        Some(e) => match e.value.to_ascii_lowercase().as_str() {
            "strang" => Scheme::Strang,
            "lie" => Scheme::Lie,
            "duhamel_midpoint" => Scheme::DuhamelMidpoint,
            other => {
                return Err(ConfigError::Parse {
                    line: e.line,
                    msg: format!("unknown scheme {other:?} (strang | lie | duhamel_midpoint)"),
                })
            }
        },
        None => Scheme::Strang,
    };
    let dt: f64 = match raw.take("integration.dt") {
        Some(e) => parse_scalar(&e, "a number")?,
        None => 1e-3,
    };
    if !(dt.is_finite() && dt > 0.0) {
        return Err(ConfigError::Constraint {
            field: "integration.dt",
            msg: format!("must be positive, got {dt}"),
        });
    }
    let steps: usize = match raw.take("integration.steps") {
        Some(e) => parse_scalar(&e, "an integer")?,
        None => 1000,
    };
    let cadence: usize = match raw.take("integration.cadence") {
        Some(e) => parse_scalar(&e, "an integer")?,
        None => 100,
    };
    if cadence == 0 {
        return Err(ConfigError::Constraint {
            field: "integration.cadence",
            msg: "must be >= 1".into(),
        });
    }
    let guard_factor: f64 = match raw.take("integration.guard_factor") {
        Some(e) => parse_scalar(&e, "a number")?,
        None => 1e3,
    };
    if !(guard_factor.is_finite() && guard_factor > 0.0) {
        return Err(ConfigError::Constraint {
            field: "integration.guard_factor",
            msg: format!("must be positive, got {guard_factor}"),
        });
    }

    let out_dir = raw
        .take("output.directory")
        .map(|e| PathBuf::from(e.value))
        .unwrap_or_else(|| PathBuf::from("out"));
    let snapshot_cadence: usize = match raw.take("output.snapshot_cadence") {
        Some(e) => parse_scalar(&e, "an integer")?,
        None => 0,
    };
    let plots = match raw.take("output.plots") {
        Some(e) => parse_bool(&e)?,
        None => false,
    };

    debug_assert!(raw.entries.is_empty(), "all known keys consumed");
    Ok(RunConfig {
        domain,
        mass,
        weights,
        coupling,
        seed,
        damping,
        snapshot_in,
        scheme,
        dt,
        steps,
        cadence,
        guard_factor,
        out_dir,
        snapshot_cadence,
        plots,
    })
}
