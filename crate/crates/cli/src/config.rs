//! Run configuration: defaults ← config file (flat JSON) ← command-line
//! flags, with flags winning.

use moebius_mipt::sequences::SequenceKind;
use moebius_mipt::GateSet;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

/// All parameters defining one experiment; serialized verbatim into every
/// metadata sidecar.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CircuitSpec {
    pub gate_set: String,
    pub sequence: String,
    #[serde(rename = "T")]
    pub t: f64,
    pub lambda: f64,
    #[serde(rename = "L")]
    pub l: usize,
    pub n: usize,
    pub ell_list: Vec<usize>,
    pub seed: u64,
    pub realizations: usize,
}

impl Default for CircuitSpec {
    fn default() -> Self {
        CircuitSpec {
            gate_set: "eq7".into(),
            sequence: "floquet:AB".into(),
            t: 0.3,
            lambda: 0.5,
            l: 1000,
            n: 500,
            ell_list: Vec::new(),
            seed: 1,
            realizations: 1,
        }
    }
}

#[derive(Debug)]
pub enum ConfigError {
    Invalid(String),
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigError::Invalid(msg) => write!(f, "config error: {msg}"),
        }
    }
}

impl CircuitSpec {
    /// Overlay values from a flat JSON object (`{"T": 0.3, "lambda": 0.8, …}`).
    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Invalid(format!("cannot read {}: {e}", path.display())))?;
        let map: BTreeMap<String, serde_json::Value> = serde_json::from_str(&text)
            .map_err(|e| ConfigError::Invalid(format!("{} is not a flat JSON object: {e}", path.display())))?;
        for (key, value) in map {
            self.set_key(&key, &value)?;
        }
        Ok(())
    }

    fn set_key(&mut self, key: &str, value: &serde_json::Value) -> Result<(), ConfigError> {
        let bad = |what: &str| ConfigError::Invalid(format!("key {key:?}: expected {what}, got {value}"));
        let as_f64 = || value.as_f64().ok_or_else(|| bad("a number"));
        let as_usize = || {
            value
                .as_u64()
                .map(|v| v as usize)
                .ok_or_else(|| bad("a non-negative integer"))
        };
        match key {
            "gate_set" | "gate-set" => {
                self.gate_set = value.as_str().ok_or_else(|| bad("a string"))?.to_string()
            }
            "sequence" => self.sequence = value.as_str().ok_or_else(|| bad("a string"))?.to_string(),
            "T" => self.t = as_f64()?,
            "lambda" => self.lambda = as_f64()?,
            "L" => self.l = as_usize()?,
            "n" => self.n = as_usize()?,
            "seed" => self.seed = value.as_u64().ok_or_else(|| bad("a non-negative integer"))?,
            "realizations" => self.realizations = as_usize()?,
            "ell_list" => {
                let arr = value.as_array().ok_or_else(|| bad("an array of integers"))?;
                self.ell_list = arr
                    .iter()
                    .map(|v| v.as_u64().map(|u| u as usize).ok_or_else(|| bad("an array of integers")))
                    .collect::<Result<_, _>>()?;
            }
            other => {
                return Err(ConfigError::Invalid(format!("unknown config key {other:?}")));
            }
        }
        Ok(())
    }

    pub fn gate_set(&self) -> Result<GateSet, ConfigError> {
        match self.gate_set.to_lowercase().as_str() {
            "eq7" => Ok(GateSet::Eq7),
            "eq32" => Ok(GateSet::Eq32),
            "eq34" => Ok(GateSet::Eq34),
            other => Err(ConfigError::Invalid(format!(
                "field gate_set: unknown value {other:?} (expected eq7, eq32, or eq34)"
            ))),
        }
    }

    /// Parse the sequence string:
    /// `floquet:<word>`, `fibonacci:<n>`, `thue-morse:<n>`,
    /// `bernoulli:<length>`, `multipolar:<order>:<blocks>`.
    /// Random kinds take their seed from the spec.
    pub fn sequence(&self) -> Result<SequenceKind, ConfigError> {
        let err = |msg: String| ConfigError::Invalid(format!("field sequence: {msg}"));
        let parts: Vec<&str> = self.sequence.split(':').collect();
        match parts.as_slice() {
            ["floquet", word] => word
                .parse()
                .map(SequenceKind::Floquet)
                .map_err(|e: String| err(e)),
            ["fibonacci", n] => n
                .parse()
                .map(SequenceKind::Fibonacci)
                .map_err(|e| err(format!("bad index {n:?}: {e}"))),
            ["thue-morse", n] => n
                .parse()
                .map(SequenceKind::ThueMorse)
                .map_err(|e| err(format!("bad index {n:?}: {e}"))),
            ["bernoulli", len] => Ok(SequenceKind::Bernoulli {
                length: len.parse().map_err(|e| err(format!("bad length {len:?}: {e}")))?,
                seed: self.seed,
            }),
            ["multipolar", order, blocks] => Ok(SequenceKind::Multipolar {
                order: order.parse().map_err(|e| err(format!("bad order {order:?}: {e}")))?,
                num_blocks: blocks
                    .parse()
                    .map_err(|e| err(format!("bad block count {blocks:?}: {e}")))?,
                seed: self.seed,
            }),
            _ => Err(err(format!(
                "unknown sequence {:?} (expected floquet:<word>, fibonacci:<n>, thue-morse:<n>, bernoulli:<length>, or multipolar:<order>:<blocks>)",
                self.sequence
            ))),
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.l < 2 || self.l % 2 != 0 {
            return Err(ConfigError::Invalid(format!(
                "field L: chain length must be even and >= 2, got {}",
                self.l
            )));
        }
        if let Some(&max_ell) = self.ell_list.iter().max() {
            if 2 * max_ell > self.l {
                return Err(ConfigError::Invalid(format!(
                    "field ell_list: subsystem {} does not fit in half of L = {}",
                    max_ell, self.l
                )));
            }
        }
        if self.realizations < 1 {
            return Err(ConfigError::Invalid(
                "field realizations: must be >= 1".to_string(),
            ));
        }
        if !self.t.is_finite() || !self.lambda.is_finite() {
            return Err(ConfigError::Invalid(
                "fields T/lambda: must be finite".to_string(),
            ));
        }
        self.gate_set()?;
        self.sequence()?;
        Ok(())
    }
}

/// Format a float with 17 significant digits (round-trip exact for f64).
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}
