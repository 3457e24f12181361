//! Scenario runner for the symmetric-space shape-operator workbench.
//!
//! Verbs: `decompose` (root-space summary of a space), `run` (execute a
//! scenario from a config file or preset), `suite` (named batteries), and
//! `dump` (detailed root data). Exit status: 0 all checks pass, 1 check
//! failure, 2 usage/schema error, 3 internal consistency error.

mod scenario;
mod suites;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cpc_core::report::DecompositionSummary;
use scenario::{CliError, Scenario, SpaceSpec, VSpecIn};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Parser)]
#[command(name = "cpc", version, about = "Shape operators of solvable orbits in symmetric spaces")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a space and print its restricted root-space decomposition.
    Decompose {
        /// Space, e.g. sl_real:3, sl_complex:3, sl_quaternion:3, so_pq:2,5, sp_real:3
        #[arg(long)]
        space: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a scenario from a config file or a preset.
    Run {
        /// JSON scenario file.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Named preset (requires --space).
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        space: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// Override for the sweep tolerance.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named suite: paper-acceptance, invariants-exhaustive, scan-nightly.
    Suite {
        name: String,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Detailed dump: roots, multiplicities, H-vector Gram matrix, k0.
    Dump {
        #[arg(long)]
        space: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(text: String, out: &Option<PathBuf>) -> Result<(), CliError> {
    match out {
        None => {
            println!("{text}");
            Ok(())
        }
        Some(path) => {
            let mut f = std::fs::File::create(path)
                .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", path.display())))?;
            writeln!(f, "{text}")
                .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
        }
    }
}

fn decompose_cmd(space: &str, format: Format, out: &Option<PathBuf>) -> Result<bool, CliError> {
    let spec = SpaceSpec::parse_cli(space)?;
    let d = spec.build()?;
    let summary = DecompositionSummary::from_decomposition(&d);
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&summary).unwrap(),
        Format::Table => summary.table(),
    };
    emit(text, out)?;
    Ok(true)
}

fn dump_cmd(space: &str, format: Format, out: &Option<PathBuf>) -> Result<bool, CliError> {
    let spec = SpaceSpec::parse_cli(space)?;
    let d = spec.build()?;
    let summary = DecompositionSummary::from_decomposition(&d);
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&serde_json::json!({
            "summary": summary,
            "abstract_system": d.system.dump_table(),
        }))
        .unwrap(),
        Format::Table => {
            let mut t = summary.table();
            t.push('\n');
            t.push_str(&d.system.dump_table());
            t.push_str("\nH-vector Gram matrix (exact):\n");
            for row in &summary.h_gram {
                t.push_str(&format!("  [{}]\n", row.join(", ")));
            }
            t
        }
    };
    emit(text, out)?;
    Ok(true)
}

#[allow(clippy::too_many_arguments)]
fn run_cmd(
    config: &Option<PathBuf>,
    preset: &Option<String>,
    space: &Option<String>,
    seed: Option<u64>,
    tol: Option<f64>,
    format: Format,
    out: &Option<PathBuf>,
) -> Result<bool, CliError> {
    let mut scenario: Scenario = match (config, preset) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("scenario schema violation: {e}")))?
        }
        (None, Some(p)) => {
            let (_, default_pass) = scenario::preset_defaults(p)
                .ok_or_else(|| CliError::Usage(format!("unknown preset `{p}`")))?;
            let space = space
                .as_ref()
                .ok_or_else(|| CliError::Usage("--preset requires --space".into()))?;
            Scenario {
                schema_version: cpc_core::report::SCHEMA_VERSION,
                space: SpaceSpec::parse_cli(space)?,
                v_spec: Some(VSpecIn::Preset { preset: p.clone() }),
                checks: vec!["sweep".into()],
                seed: 0,
                tolerances: None,
                expect: Some(if default_pass { "pass".into() } else { "fail".into() }),
                expect_transitive: None,
                scan: None,
            }
        }
        (Some(_), Some(_)) => {
            return Err(CliError::Usage("use either --config or --preset, not both".into()))
        }
        (None, None) => {
            return Err(CliError::Usage("run needs --config <file> or --preset <name>".into()))
        }
    };
    if let Some(s) = seed {
        scenario.seed = s;
    }
    let report = scenario::run_scenario(&scenario, tol)?;
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&report).unwrap(),
        Format::Table => {
            let mut t = format!(
                "scenario on {} | checks: {} | seed {}\n",
                report.space.label,
                report.scenario.checks.join(","),
                report.scenario.seed
            );
            for c in &report.checks {
                t.push_str(&format!(
                    "  {:<14} {}\n",
                    c.name,
                    if c.pass { "PASS" } else { "FAIL" }
                ));
            }
            t.push_str(&format!("all: {}", if report.all_pass { "PASS" } else { "FAIL" }));
            t
        }
    };
    emit(text, out)?;
    Ok(report.all_pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result: Result<bool, CliError> = match &cli.cmd {
        Cmd::Decompose { space, format, out } => decompose_cmd(space, *format, out),
        Cmd::Dump { space, format, out } => dump_cmd(space, *format, out),
        Cmd::Run { config, preset, space, seed, tol, format, out } => {
            run_cmd(config, preset, space, *seed, *tol, *format, out)
        }
        Cmd::Suite { name, seed, format, out } => {
            suites::run_suite(name, *seed, *format == Format::Json, out)
        }
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{e}");
            match e {
                CliError::Usage(_) => ExitCode::from(2),
                CliError::Internal(_) => ExitCode::from(3),
            }
        }
    }
}
