//! Optional JSON config file. Keys are flag names without the leading
//! dashes; a flag given on the command line always wins.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde_json::{Map, Value};

use crate::error::CliError;

const KNOWN_KEYS: &[&str] = &[
    "format",
    "alpha",
    "gamma",
    "phase",
    "runs",
    "seed",
    "aggregate",
    "transcript",
    "alpha-steps",
    "gamma-steps",
    "out",
    "spacing",
    "validate",
    "tolerance",
    "probe-gamma",
    "probe-phase",
];

#[derive(Debug, Default)]
pub struct Settings {
    values: Map<String, Value>,
}

impl Settings {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|msg| CliError::Usage(format!("{}: {msg}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let values = match serde_json::from_str::<Value>(text).map_err(|e| e.to_string())? {
            Value::Object(map) => map,
            _ => return Err("config must be a JSON object".into()),
        };
        if let Some(key) = values.keys().find(|k| !KNOWN_KEYS.contains(&k.as_str())) {
            return Err(format!("unknown config key '{key}'"));
        }
        Ok(Self { values })
    }

    fn get<T: DeserializeOwned>(&self, key: &str) -> Result<Option<T>, CliError> {
        self.values
            .get(key)
            .map(|v| {
                serde_json::from_value(v.clone())
                    .map_err(|e| CliError::Usage(format!("config key '{key}': {e}")))
            })
            .transpose()
    }

    /// Flag value if given, else the config value, else `None`.
    pub fn pick<T: DeserializeOwned>(
        &self,
        flag: Option<T>,
        key: &str,
    ) -> Result<Option<T>, CliError> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }

    pub fn pick_or<T: DeserializeOwned>(
        &self,
        flag: Option<T>,
        key: &str,
        default: T,
    ) -> Result<T, CliError> {
        Ok(self.pick(flag, key)?.unwrap_or(default))
    }

    /// Boolean switches can only be turned on from the command line.
    pub fn switch(&self, flag: bool, key: &str) -> Result<bool, CliError> {
        Ok(flag || self.get(key)?.unwrap_or(false))
    }

    pub fn require<T: DeserializeOwned>(&self, flag: Option<T>, key: &str) -> Result<T, CliError> {
        self.pick(flag, key)?
            .ok_or_else(|| CliError::Usage(format!("missing required flag '--{key}'")))
    }
}
