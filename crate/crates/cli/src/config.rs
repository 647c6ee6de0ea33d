//! Config-file loading, option resolution, and the run manifest.
//!
//! A config file is a flat JSON object whose keys mirror the command-line
//! flags (plus a nested `synth` object for the synthetic generator). Flags
//! always override file values. Every run writes `run.json` into the output
//! directory echoing the fully resolved configuration and the library
//! version; manifests carry no timestamps, so identical configs produce
//! byte-identical files.

use serde_json::{json, Map, Value};
use std::fs;
use std::path::{Path, PathBuf};
use varuq::error::{Error, Result};

/// Parsed config-file contents (empty object when no file was given).
#[derive(Debug, Clone)]
pub struct RunConfig {
    values: Value,
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let values = match path {
            None => json!({}),
            Some(p) => {
                let text = fs::read_to_string(p)?;
                serde_json::from_str(&text).map_err(|e| Error::Schema {
                    path: p.display().to_string(),
                    line: e.line(),
                    reason: e.to_string(),
                })?
            }
        };
        if !values.is_object() {
            return Err(Error::InvalidParameter {
                name: "config",
                reason: "config file must hold a JSON object".into(),
            });
        }
        Ok(Self { values })
    }

    pub fn value(&self, key: &str) -> Option<&Value> {
        self.values.get(key)
    }

    pub fn str_opt(&self, key: &str) -> Option<String> {
        self.value(key).and_then(Value::as_str).map(str::to_string)
    }

    pub fn u64_opt(&self, key: &str) -> Option<u64> {
        self.value(key).and_then(Value::as_u64)
    }

    pub fn usize_opt(&self, key: &str) -> Option<usize> {
        self.u64_opt(key).map(|v| v as usize)
    }

    pub fn path_opt(&self, key: &str) -> Option<PathBuf> {
        self.str_opt(key).map(PathBuf::from)
    }
}

/// Accumulates the resolved options a command actually used.
#[derive(Debug, Default)]
pub struct Resolved {
    options: Map<String, Value>,
}

impl Resolved {
    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.options.insert(key.to_string(), value.into());
    }

    /// Write `run.json` into the output directory.
    pub fn write_manifest(&self, out_dir: &Path, command: &str) -> Result<()> {
        let manifest = json!({
            "command": command,
            "version": varuq::VERSION,
            "options": Value::Object(self.options.clone()),
        });
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        fs::write(out_dir.join("run.json"), text + "\n")?;
        Ok(())
    }
}

/// Resolve the prediction-file format: flag, then config, then extension.
pub fn resolve_format(
    flag: Option<&str>,
    config: &RunConfig,
    path: &Path,
) -> Result<varuq::harness::FileFormat> {
    if let Some(f) = flag {
        return f.parse();
    }
    if let Some(f) = config.str_opt("format") {
        return f.parse();
    }
    match path.extension().and_then(|e| e.to_str()) {
        Some("csv") => Ok(varuq::harness::FileFormat::Csv),
        Some("jsonl") => Ok(varuq::harness::FileFormat::Jsonl),
        other => Err(Error::InvalidParameter {
            name: "format",
            reason: format!(
                "cannot infer format from extension {other:?}; pass --format csv|jsonl"
            ),
        }),
    }
}

/// Parse a comma-separated weight list.
pub fn parse_weights(spec: &str) -> Result<varuq::simplex::WeightVector> {
    let values = spec
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidParameter {
                    name: "weights",
                    reason: format!("`{s}` is not a number"),
                })
        })
        .collect::<Result<Vec<f64>>>()?;
    varuq::simplex::WeightVector::new(values)
}

/// Parse a rejection grid given as start:stop:step.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::InvalidParameter {
            name: "grid",
            reason: format!("`{spec}` is not start:stop:step"),
        });
    }
    let nums = parts
        .iter()
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidParameter {
                    name: "grid",
                    reason: format!("`{s}` is not a number"),
                })
        })
        .collect::<Result<Vec<f64>>>()?;
    let (start, stop, step) = (nums[0], nums[1], nums[2]);
    if !(step > 0.0 && start >= 0.0 && stop < 1.0 && start <= stop) {
        return Err(Error::InvalidParameter {
            name: "grid",
            reason: format!("need 0 <= start <= stop < 1 and step > 0, got {spec}"),
        });
    }
    let mut grid = Vec::new();
    let mut i = 0u64;
    loop {
        let v = start + i as f64 * step;
        if v > stop + 1e-12 {
            break;
        }
        grid.push(v);
        i += 1;
    }
    Ok(grid)
}
