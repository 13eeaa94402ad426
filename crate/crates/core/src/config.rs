//! Run configuration: a flat `key = value` text format, fully validated
//! before any solve. Unknown keys are rejected so typos fail loudly.
//!
//! ```text
//! # fractional run with preference weights
//! model = fractional_gdse
//! rts = crs
//! direction = column_max
//! direction.weights = 1, 7, 1
//! output.format = table
//! ```

use crate::catalog::PRESET_NAMES;
use crate::dataset::{DataError, RtsSpec};
use crate::direction::DirectionSpec;
use crate::models::ModelFamily;
use sha2::{Digest, Sha256};
use thiserror::Error;

/// What a run evaluates: a registry preset or a custom family invocation.
#[derive(Clone, Debug, PartialEq)]
pub enum ModelChoice {
    Preset(String),
    Family(ModelFamily),
}

impl std::fmt::Display for ModelChoice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ModelChoice::Preset(p) => write!(f, "{p}"),
            ModelChoice::Family(fam) => write!(f, "{fam}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Table,
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(token: &str) -> Option<Self> {
        match token {
            "table" => Some(Self::Table),
            "csv" => Some(Self::Csv),
            "json" => Some(Self::Json),
            _ => None,
        }
    }
}

/// Fully validated run configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub model: ModelChoice,
    pub rts: RtsSpec,
    pub direction: DirectionSpec,
    pub include_self: bool,
    pub weights: Option<Vec<f64>>,
    pub enforce_output_nonneg: bool,
    pub partition: Option<(usize, usize)>,
    pub big_m: f64,
    pub m_ray: Option<(f64, f64)>,
    pub allow_negative: bool,
    pub output_format: OutputFormat,
    pub output_path: Option<String>,
    /// SHA-256 over the canonicalized key/value pairs.
    pub config_hash: String,
}

impl RunConfig {
    /// Baseline configuration for a family run (used by tests and the
    /// diagnostics-only CLI path).
    pub fn family_defaults(family: ModelFamily) -> Self {
        Self {
            model: ModelChoice::Family(family),
            rts: RtsSpec::crs(),
            direction: DirectionSpec::ColumnMax,
            include_self: true,
            weights: None,
            enforce_output_nonneg: true,
            partition: None,
            big_m: 1e5,
            m_ray: None,
            allow_negative: false,
            output_format: OutputFormat::Table,
            output_path: None,
            config_hash: String::new(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected 'key = value', found '{text}'")]
    BadLine { line: usize, text: String },
    #[error("unknown key '{key}'")]
    UnknownKey { key: String },
    #[error("duplicate key '{key}'")]
    DuplicateKey { key: String },
    #[error("missing required key '{key}'")]
    MissingKey { key: &'static str },
    #[error("key '{key}': cannot parse '{value}' ({expected})")]
    BadValue {
        key: String,
        value: String,
        expected: &'static str,
    },
    #[error("'{model}' is neither a registry preset nor a family id")]
    UnknownModel { model: String },
    #[error("key '{key}' is not allowed here: {reason}")]
    KeyNotAllowed { key: String, reason: String },
    #[error(transparent)]
    Data(#[from] DataError),
}

const KNOWN_KEYS: &[&str] = &[
    "model",
    "rts",
    "direction",
    "direction.custom",
    "direction.include_self",
    "direction.weights",
    "enforce_output_nonneg",
    "partition.m1",
    "partition.s1",
    "params.M",
    "params.a",
    "params.b",
    "allow_negative",
    "output.format",
    "output.path",
];

fn parse_bool(key: &str, value: &str) -> Result<bool, ConfigError> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(ConfigError::BadValue {
            key: key.to_string(),
            value: value.to_string(),
            expected: "true or false",
        }),
    }
}

fn parse_f64(key: &str, value: &str) -> Result<f64, ConfigError> {
    value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| ConfigError::BadValue {
            key: key.to_string(),
            value: value.to_string(),
            expected: "a finite number",
        })
}

fn parse_usize(key: &str, value: &str) -> Result<usize, ConfigError> {
    value.parse::<usize>().map_err(|_| ConfigError::BadValue {
        key: key.to_string(),
        value: value.to_string(),
        expected: "a non-negative integer",
    })
}

fn parse_float_list(key: &str, value: &str) -> Result<Vec<f64>, ConfigError> {
    value
        .split(',')
        .map(|tok| parse_f64(key, tok.trim()))
        .collect()
}

fn parse_rts(value: &str) -> Result<RtsSpec, ConfigError> {
    match value {
        "crs" => Ok(RtsSpec::crs()),
        "vrs" => Ok(RtsSpec::vrs()),
        other => {
            let inner = other
                .strip_prefix("grs(")
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| ConfigError::BadValue {
                    key: "rts".to_string(),
                    value: value.to_string(),
                    expected: "crs, vrs, or grs(L,U)",
                })?;
            let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
            if parts.len() != 2 {
                return Err(ConfigError::BadValue {
                    key: "rts".to_string(),
                    value: value.to_string(),
                    expected: "grs(L,U)",
                });
            }
            let lower = parse_f64("rts", parts[0])?;
            let upper = if parts[1] == "inf" {
                f64::INFINITY
            } else {
                parse_f64("rts", parts[1])?
            };
            Ok(RtsSpec::grs(lower, upper)?)
        }
    }
}

/// Parses and validates configuration text.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut pairs: Vec<(String, String)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError::BadLine {
                line: idx + 1,
                text: raw.trim().to_string(),
            });
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(ConfigError::UnknownKey { key });
        }
        if pairs.iter().any(|(k, _)| *k == key) {
            return Err(ConfigError::DuplicateKey { key });
        }
        pairs.push((key, value));
    }
    let get = |key: &str| {
        pairs
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    };

    let model_token = get("model").ok_or(ConfigError::MissingKey { key: "model" })?;
    let model = if PRESET_NAMES.contains(&model_token) {
        ModelChoice::Preset(model_token.to_string())
    } else if let Some(fam) = ModelFamily::parse(model_token) {
        ModelChoice::Family(fam)
    } else {
        return Err(ConfigError::UnknownModel {
            model: model_token.to_string(),
        });
    };

    // keys that only make sense for custom family runs
    if matches!(model, ModelChoice::Preset(_)) {
        for key in [
            "rts",
            "direction",
            "direction.custom",
            "direction.include_self",
            "direction.weights",
            "enforce_output_nonneg",
            "partition.m1",
            "partition.s1",
        ] {
            if get(key).is_some() {
                return Err(ConfigError::KeyNotAllowed {
                    key: key.to_string(),
                    reason: format!("preset '{model_token}' fixes it"),
                });
            }
        }
    }

    let rts = match get("rts") {
        Some(v) => parse_rts(v)?,
        None => RtsSpec::crs(),
    };

    let custom_values = get("direction.custom")
        .map(|v| parse_float_list("direction.custom", v))
        .transpose()?;
    let direction = match get("direction") {
        None | Some("column_max") => {
            if custom_values.is_some() {
                return Err(ConfigError::KeyNotAllowed {
                    key: "direction.custom".to_string(),
                    reason: "only valid with direction = custom".to_string(),
                });
            }
            DirectionSpec::ColumnMax
        }
        Some("own_data") => DirectionSpec::OwnData,
        Some("column_range") => DirectionSpec::ColumnRange,
        Some("custom") => {
            let values = custom_values.ok_or(ConfigError::MissingKey {
                key: "direction.custom",
            })?;
            // split into inputs/outputs once the dataset shape is known
            DirectionSpec::Custom {
                inputs: values,
                outputs: Vec::new(),
            }
        }
        Some(other) => {
            return Err(ConfigError::BadValue {
                key: "direction".to_string(),
                value: other.to_string(),
                expected: "own_data, column_max, column_range, or custom",
            })
        }
    };
    if !matches!(direction, DirectionSpec::Custom { .. }) && custom_values_set(&pairs) {
        // reachable only when direction key was own_data/column_range
        return Err(ConfigError::KeyNotAllowed {
            key: "direction.custom".to_string(),
            reason: "only valid with direction = custom".to_string(),
        });
    }

    let include_self = match get("direction.include_self") {
        Some(v) => parse_bool("direction.include_self", v)?,
        None => true,
    };
    let weights = get("direction.weights")
        .map(|v| parse_float_list("direction.weights", v))
        .transpose()?;
    if let Some(w) = &weights {
        if let Some(bad) = w.iter().find(|&&x| x <= 0.0 || x.is_nan()) {
            return Err(ConfigError::BadValue {
                key: "direction.weights".to_string(),
                value: bad.to_string(),
                expected: "strictly positive weights",
            });
        }
    }

    let enforce_output_nonneg = match get("enforce_output_nonneg") {
        Some(v) => {
            if model != ModelChoice::Family(ModelFamily::Rdse) {
                return Err(ConfigError::KeyNotAllowed {
                    key: "enforce_output_nonneg".to_string(),
                    reason: "only the rdse family takes this flag".to_string(),
                });
            }
            parse_bool("enforce_output_nonneg", v)?
        }
        None => true,
    };

    let partition = match (get("partition.m1"), get("partition.s1")) {
        (None, None) => None,
        (m1, s1) => {
            if model != ModelChoice::Family(ModelFamily::Hdse) {
                return Err(ConfigError::KeyNotAllowed {
                    key: "partition.m1".to_string(),
                    reason: "only the hdse family takes a partition".to_string(),
                });
            }
            let m1 = parse_usize(
                "partition.m1",
                m1.ok_or(ConfigError::MissingKey {
                    key: "partition.m1",
                })?,
            )?;
            let s1 = parse_usize(
                "partition.s1",
                s1.ok_or(ConfigError::MissingKey {
                    key: "partition.s1",
                })?,
            )?;
            Some((m1, s1))
        }
    };

    let big_m = match get("params.M") {
        Some(v) => {
            let m = parse_f64("params.M", v)?;
            if m <= 0.0 {
                return Err(ConfigError::BadValue {
                    key: "params.M".to_string(),
                    value: v.to_string(),
                    expected: "a positive number",
                });
            }
            m
        }
        None => 1e5,
    };
    let m_ray = match (get("params.a"), get("params.b")) {
        (None, None) => None,
        (a, b) => {
            let a = parse_f64(
                "params.a",
                a.ok_or(ConfigError::MissingKey { key: "params.a" })?,
            )?;
            let b = parse_f64(
                "params.b",
                b.ok_or(ConfigError::MissingKey { key: "params.b" })?,
            )?;
            Some((a, b))
        }
    };

    let allow_negative = match get("allow_negative") {
        Some(v) => parse_bool("allow_negative", v)?,
        None => false,
    };
    let output_format = match get("output.format") {
        Some(v) => OutputFormat::parse(v).ok_or_else(|| ConfigError::BadValue {
            key: "output.format".to_string(),
            value: v.to_string(),
            expected: "table, csv, or json",
        })?,
        None => OutputFormat::Table,
    };
    let output_path = get("output.path").filter(|v| *v != "-").map(str::to_string);

    let config_hash = hash_pairs(&pairs);
    Ok(RunConfig {
        model,
        rts,
        direction,
        include_self,
        weights,
        enforce_output_nonneg,
        partition,
        big_m,
        m_ray,
        allow_negative,
        output_format,
        output_path,
        config_hash,
    })
}

fn custom_values_set(pairs: &[(String, String)]) -> bool {
    pairs.iter().any(|(k, _)| k == "direction.custom")
}

fn hash_pairs(pairs: &[(String, String)]) -> String {
    let mut sorted: Vec<String> = pairs.iter().map(|(k, v)| format!("{k}={v}")).collect();
    sorted.sort();
    let mut hasher = Sha256::new();
    for line in sorted {
        hasher.update(line.as_bytes());
        hasher.update(b"\n");
    }
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}
