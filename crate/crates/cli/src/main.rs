//! `dsqft` — batch runner for the de Sitter field verification suites.
//!
//! Exit codes: 0 all criteria pass, 1 some pass flag is false,
//! 2 configuration error, 3 numerical failure inside a suite.

mod config;
mod report;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Precision, SuiteConfig};
use report::emit_reports;

#[derive(Parser)]
#[command(name = "dsqft", version, about = "de Sitter scalar field verification suites")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites from a JSON config.
    Run {
        /// Path to the JSON configuration.
        #[arg(long)]
        config: PathBuf,
        /// Restrict to these suites (repeatable); default: config list.
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// Output directory override.
        #[arg(long = "out")]
        out: Option<PathBuf>,
    },
    /// Print tables without running suites.
    Table {
        #[command(subcommand)]
        table: TableCommand,
    },
}

#[derive(Subcommand)]
enum TableCommand {
    /// CSV table of (k, ω̃(k)), header `k,omega`, 2K+1 rows.
    Omega {
        #[arg(long)]
        zeta: f64,
        #[arg(long, short = 'r')]
        r: f64,
        #[arg(long = "K")]
        k: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, suites, out } => run(config, suites, out),
        Command::Table { table } => match table {
            TableCommand::Omega { zeta, r, k } => table_omega(zeta, r, k),
        },
    }
}

fn run(config_path: PathBuf, suite_filter: Vec<String>, out: Option<PathBuf>) -> ExitCode {
    let raw = match std::fs::read_to_string(&config_path) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("config error: cannot read {}: {e}", config_path.display());
            return ExitCode::from(2);
        }
    };
    let mut cfg: SuiteConfig = match serde_json::from_str(&raw) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Ok(mode) = std::env::var("DSQFT_PRECISION") {
        cfg.precision = match mode.as_str() {
            "double" => Precision::Double,
            "extended" => Precision::Extended,
            other => {
                eprintln!("config error: DSQFT_PRECISION must be double or extended, got {other}");
                return ExitCode::from(2);
            }
        };
    }
    if let Err(field) = cfg.validate() {
        eprintln!("config error: {field}");
        return ExitCode::from(2);
    }
    let selected: Vec<String> = if suite_filter.is_empty() {
        cfg.suites.clone()
    } else {
        for s in &suite_filter {
            if !config::ALL_SUITES.contains(&s.as_str()) {
                eprintln!("config error: unknown suite {s:?}");
                return ExitCode::from(2);
            }
        }
        suite_filter
    };
    let out_dir = out.unwrap_or_else(|| PathBuf::from(&cfg.output_dir));

    if selected.is_empty() {
        match emit_reports(&[], &out_dir) {
            Ok(_) => return ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("io error writing {}: {e}", out_dir.display());
                return ExitCode::from(3);
            }
        }
    }

    if cfg.workers > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build_global();
    }
    use rayon::prelude::*;
    let results: Vec<_> = selected
        .par_iter()
        .map(|name| suites::run_suite(name, &cfg))
        .collect();

    let mut reports = Vec::with_capacity(results.len());
    for (name, result) in selected.iter().zip(results) {
        match result {
            Ok(r) => reports.push(r),
            Err(e) => {
                eprintln!("numerical failure in suite {name}: {e}");
                return ExitCode::from(3);
            }
        }
    }
    for r in &reports {
        for m in &r.metrics {
            let status = if m.pass { "pass" } else { "FAIL" };
            eprintln!(
                "[{}] {:<38} {:>14.6e} ({} {:.3e}) {}",
                r.suite,
                m.name,
                m.value,
                match m.direction {
                    report::Direction::Le => "<=",
                    report::Direction::Ge => ">=",
                },
                m.threshold,
                status
            );
        }
    }
    match emit_reports(&reports, &out_dir) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("io error writing {}: {e}", out_dir.display());
            ExitCode::from(3)
        }
    }
}

fn table_omega(zeta: f64, r: f64, k: usize) -> ExitCode {
    let weights = dsqft_core::specfun::make_params(zeta, r)
        .and_then(|p| dsqft_core::oneparticle::SpectralWeights::new(p, k));
    match weights {
        Ok(w) => {
            println!("k,omega");
            for (k, v) in w.table() {
                println!("{k},{v}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("config error: {e}");
            ExitCode::from(2)
        }
    }
}
