//! Run configuration: a single JSON document, hashed for reproducibility.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    Double,
    Extended,
}

/// All suite names, in dependency order.
pub const ALL_SUITES: [&str; 10] = [
    "omega",
    "kernel",
    "rep",
    "modular",
    "fsl",
    "micro",
    "additivity",
    "standard",
    "sobolev",
    "fock",
];

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    /// Casimir eigenvalue ζ > 0.
    #[serde(default = "default_zeta")]
    pub zeta: f64,
    /// de Sitter radius r > 0.
    #[serde(default = "default_radius")]
    pub radius: f64,
    /// Mode cutoff for the ω̃ table suite; other suites pin their own
    /// cutoffs as part of the criteria they implement.
    #[serde(default = "default_k", rename = "K")]
    pub k: usize,
    /// Fock mode cutoff M (must satisfy K >= M).
    #[serde(default = "default_m", rename = "M")]
    pub m: usize,
    /// Fock occupation cutoff.
    #[serde(default = "default_n_max")]
    pub n_max: usize,
    /// Spectral window Λ̄ for the modular suite.
    #[serde(default = "default_window")]
    pub window: f64,
    /// Per-metric threshold overrides, name → threshold.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    /// Suites to run; empty means none (exit 0).
    #[serde(default = "default_suites")]
    pub suites: Vec<String>,
    #[serde(default = "default_output_dir")]
    pub output_dir: String,
    #[serde(default = "default_precision")]
    pub precision: Precision,
    /// Worker threads for suite-level parallelism (0 = rayon default).
    #[serde(default)]
    pub workers: usize,
}

fn default_zeta() -> f64 {
    1.0
}
fn default_radius() -> f64 {
    1.0
}
fn default_k() -> usize {
    512
}
fn default_m() -> usize {
    2
}
fn default_n_max() -> usize {
    6
}
fn default_window() -> f64 {
    6.0
}
fn default_suites() -> Vec<String> {
    ALL_SUITES.iter().map(|s| s.to_string()).collect()
}
fn default_output_dir() -> String {
    "reports".to_string()
}
fn default_precision() -> Precision {
    Precision::Double
}

impl Default for SuiteConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("defaults parse")
    }
}

impl SuiteConfig {
    /// Field-naming validation; returns the offending field.
    pub fn validate(&self) -> Result<(), String> {
        if !(self.zeta > 0.0) || !self.zeta.is_finite() {
            return Err(format!("zeta must be > 0, got {}", self.zeta));
        }
        if !(self.radius > 0.0) || !self.radius.is_finite() {
            return Err(format!("radius must be > 0, got {}", self.radius));
        }
        if self.k < self.m {
            return Err(format!("K = {} must be >= M = {}", self.k, self.m));
        }
        if !(self.window > 0.0) {
            return Err(format!("window must be > 0, got {}", self.window));
        }
        for (name, v) in &self.tolerances {
            if !(v > &0.0) {
                return Err(format!("tolerances.{name} must be positive, got {v}"));
            }
        }
        for s in &self.suites {
            if !ALL_SUITES.contains(&s.as_str()) {
                return Err(format!("unknown suite {s:?}"));
            }
        }
        Ok(())
    }

    /// SHA-256 over the canonical serialized form.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        let mut hasher = Sha256::new();
        hasher.update(canonical.as_bytes());
        hex_string(&hasher.finalize())
    }

    /// Deterministic RNG seed derived from the config hash.
    pub fn seed(&self) -> u64 {
        let h = self.hash();
        u64::from_str_radix(&h[..16], 16).unwrap_or(0)
    }

    /// Threshold for a metric, config override first.
    pub fn threshold(&self, name: &str, default: f64) -> f64 {
        self.tolerances.get(name).copied().unwrap_or(default)
    }
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
