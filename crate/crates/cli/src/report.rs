//! Machine-readable suite reports.
//!
//! The JSON reports are byte-reproducible for a given (config, version):
//! all maps are ordered, floats print through the shortest-roundtrip
//! formatter, and wall-clock timings go to a separate `timings.csv` that
//! is excluded from the determinism contract.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::config::SuiteConfig;

#[derive(Debug, Clone, Serialize, PartialEq)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// pass ⇔ value ≤ threshold
    Le,
    /// pass ⇔ value ≥ threshold (negative controls)
    Ge,
}

#[derive(Debug, Clone, Serialize)]
pub struct Metric {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub direction: Direction,
    pub pass: bool,
}

impl Metric {
    pub fn le(name: &str, value: f64, threshold: f64) -> Metric {
        Metric {
            name: name.to_string(),
            value,
            threshold,
            direction: Direction::Le,
            pass: value <= threshold,
        }
    }

    pub fn ge(name: &str, value: f64, threshold: f64) -> Metric {
        Metric {
            name: name.to_string(),
            value,
            threshold,
            direction: Direction::Ge,
            pass: value >= threshold,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub params: BTreeMap<String, serde_json::Value>,
    pub metrics: Vec<Metric>,
    pub pass: bool,
    pub version: String,
    pub config_hash: String,
    /// CSV side tables, filename → content; written next to the report.
    #[serde(skip)]
    pub tables: BTreeMap<String, String>,
    /// Wall time, reported out of band.
    #[serde(skip)]
    pub wall_ms: u128,
}

impl SuiteReport {
    pub fn new(suite: &str, cfg: &SuiteConfig) -> SuiteReport {
        let mut params = BTreeMap::new();
        params.insert("zeta".to_string(), serde_json::json!(cfg.zeta));
        params.insert("radius".to_string(), serde_json::json!(cfg.radius));
        params.insert("K".to_string(), serde_json::json!(cfg.k));
        params.insert("M".to_string(), serde_json::json!(cfg.m));
        params.insert("n_max".to_string(), serde_json::json!(cfg.n_max));
        params.insert("window".to_string(), serde_json::json!(cfg.window));
        SuiteReport {
            suite: suite.to_string(),
            params,
            metrics: Vec::new(),
            pass: true,
            version: env!("CARGO_PKG_VERSION").to_string(),
            config_hash: cfg.hash(),
            tables: BTreeMap::new(),
            wall_ms: 0,
        }
    }

    pub fn push(&mut self, metric: Metric) {
        self.pass &= metric.pass;
        self.metrics.push(metric);
    }

    pub fn add_table(&mut self, name: &str, content: String) {
        self.tables.insert(name.to_string(), content);
    }
}

/// Writes one JSON per suite, the side-table CSVs, a summary, and the
/// volatile timing file. Returns whether every metric passed.
pub fn emit_reports(reports: &[SuiteReport], out_dir: &Path) -> std::io::Result<bool> {
    std::fs::create_dir_all(out_dir)?;
    let mut all_pass = true;
    let mut summary = Vec::new();
    let mut timings = String::from("suite,wall_ms\n");
    for report in reports {
        all_pass &= report.pass;
        let path = out_dir.join(format!("{}.json", report.suite));
        let mut f = std::fs::File::create(&path)?;
        writeln!(f, "{}", serde_json::to_string_pretty(report)?)?;
        for (name, content) in &report.tables {
            std::fs::write(out_dir.join(name), content)?;
        }
        summary.push(serde_json::json!({
            "suite": report.suite,
            "pass": report.pass,
            "metrics": report.metrics.len(),
        }));
        timings.push_str(&format!("{},{}\n", report.suite, report.wall_ms));
    }
    let summary_doc = serde_json::json!({
        "version": reports.first().map(|r| r.version.clone()).unwrap_or_default(),
        "config_hash": reports.first().map(|r| r.config_hash.clone()).unwrap_or_default(),
        "pass": all_pass,
        "suites": summary,
    });
    let mut f = std::fs::File::create(out_dir.join("summary.json"))?;
    writeln!(f, "{}", serde_json::to_string_pretty(&summary_doc)?)?;
    std::fs::write(out_dir.join("timings.csv"), timings)?;
    Ok(all_pass)
}
