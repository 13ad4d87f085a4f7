use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use homeo1::verifier::{Battery, BatterySpec};
use homeo1::ResolutionParams;
use serde::Deserialize;
use serde_json::Value;

/// Optional JSON run configuration. Command-line flags take precedence.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub battery: Option<String>,
    #[serde(default)]
    pub resolution: BTreeMap<String, Value>,
    pub samples: Option<usize>,
    pub want: Option<usize>,
    pub grid: Option<usize>,
    pub region: Option<f64>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

/// Applies config-file resolution entries, then `key=value` overrides.
pub fn resolution(file: &FileConfig, overrides: &[String]) -> Result<ResolutionParams> {
    let mut r = ResolutionParams::default();
    for (key, value) in &file.resolution {
        let text = match value {
            Value::Number(n) => n.to_string(),
            Value::String(s) => s.clone(),
            other => bail!("resolution `{key}` in config must be a number, got {other}"),
        };
        r.set(key, &text)?;
    }
    for item in overrides {
        let Some((key, value)) = item.split_once('=') else {
            bail!("resolution override `{item}` is not key=value");
        };
        r.set(key.trim(), value.trim())?;
    }
    Ok(r)
}

/// `default` (or nothing) selects the built-in battery; anything else is a
/// battery JSON path.
pub fn battery(flag: Option<&str>, file: &FileConfig) -> Result<Battery> {
    match flag.or(file.battery.as_deref()) {
        None | Some("default") => Ok(Battery::default_battery()),
        Some(path) => {
            let path = PathBuf::from(path);
            let text =
                std::fs::read_to_string(&path).with_context(|| format!("reading battery {}", path.display()))?;
            Ok(BatterySpec::from_json(&text)?.build()?)
        }
    }
}
