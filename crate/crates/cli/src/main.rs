//! Command-line front end: batch scoring runs, the preset listing, and
//! solve-free diagnostics.
//!
//! Exit codes: 0 on success, 1 on validation errors (data, config,
//! direction, unknown presets), 2 on solver or conditioning errors.

use clap::{Parser, Subcommand};
use dea_core::catalog::{preset_summaries, CatalogError};
use dea_core::config::{parse_config, RunConfig};
use dea_core::io::load_dataset;
use dea_core::lp::LpError;
use dea_core::models::{ModelError, ModelFamily};
use dea_core::report::{emit_report, run_diagnostics, run_evaluation, RunError};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "dea-super",
    version,
    about = "Directional super-efficiency scoring for DEA datasets"
)]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Subcommand)]
enum Commands {
    /// Evaluate every DMU in the dataset under a run configuration
    Run {
        /// CSV dataset (header: dmu,i:...,o:...)
        #[arg(long)]
        data: PathBuf,
        /// Run configuration file (flat key = value lines)
        #[arg(long)]
        config: PathBuf,
    },
    /// List the preset registry
    Presets,
    /// Data and direction diagnostics without solving anything
    Check {
        /// CSV dataset (header: dmu,i:...,o:...)
        #[arg(long)]
        data: PathBuf,
        /// Optional run configuration; defaults to a column-max direction
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

const EXIT_VALIDATION: u8 = 1;
const EXIT_SOLVER: u8 = 2;

fn fail(code: u8, message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(code)
}

fn model_error_code(err: &ModelError) -> u8 {
    match err {
        ModelError::Lp(LpError::UnknownVariable { .. }) => EXIT_VALIDATION,
        ModelError::Lp(_) => EXIT_SOLVER,
        _ => EXIT_VALIDATION,
    }
}

fn run_error_code(err: &RunError) -> u8 {
    match err {
        RunError::Model(e) => model_error_code(e),
        RunError::Catalog(CatalogError::Model(e)) => model_error_code(e),
        _ => EXIT_VALIDATION,
    }
}

fn read_config(path: &Path) -> Result<RunConfig, ExitCode> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        fail(
            EXIT_VALIDATION,
            format!("cannot read '{}': {e}", path.display()),
        )
    })?;
    parse_config(&text).map_err(|e| fail(EXIT_VALIDATION, e))
}

fn load(path: &Path, allow_negative: bool) -> Result<dea_core::Dataset, ExitCode> {
    load_dataset(path, allow_negative).map_err(|e| fail(EXIT_VALIDATION, e))
}

fn cmd_run(data: &Path, config: &Path) -> ExitCode {
    let cfg = match read_config(config) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let dataset = match load(data, cfg.allow_negative) {
        Ok(d) => d,
        Err(code) => return code,
    };
    let report = match run_evaluation(&dataset, &cfg) {
        Ok(r) => r,
        Err(e) => return fail(run_error_code(&e), e),
    };
    let path = cfg.output_path.as_deref().map(Path::new);
    match emit_report(&report, cfg.output_format, path) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(EXIT_VALIDATION, e),
    }
}

fn cmd_presets() -> ExitCode {
    let rows = preset_summaries();
    let width = rows.iter().map(|(n, _)| n.len()).max().unwrap_or(0);
    println!("{} presets\n", rows.len());
    for (name, summary) in rows {
        println!("{name:<width$}  {summary}");
    }
    ExitCode::SUCCESS
}

fn cmd_check(data: &Path, config: Option<&Path>) -> ExitCode {
    let cfg = match config {
        Some(p) => match read_config(p) {
            Ok(c) => c,
            Err(code) => return code,
        },
        None => RunConfig::family_defaults(ModelFamily::FractionalGdse),
    };
    let dataset = match load(data, cfg.allow_negative) {
        Ok(d) => d,
        Err(code) => return code,
    };
    let checks = match run_diagnostics(&dataset, &cfg) {
        Ok(c) => c,
        Err(e) => return fail(run_error_code(&e), e),
    };
    let fmt_set = |xs: &[String]| {
        if xs.is_empty() {
            "{}".to_string()
        } else {
            format!("{{{}}}", xs.join(", "))
        }
    };
    println!("model: {}", cfg.model);
    println!(
        "{:<12} {:<12} {:<12} {:<10} {:<13} {:<13} strictly_positive",
        "dmu", "P_o", "Q_o", "necessary", "welldef(grs)", "welldef(vrs)"
    );
    let yes_no = |b: bool| if b { "yes" } else { "NO" };
    for c in checks {
        let (necessary, grs, vrs, pos) = match &c.direction {
            Some(d) => (
                yes_no(d.necessary_ok),
                yes_no(d.welldef_grs_ok),
                yes_no(d.welldef_vrs_ok),
                yes_no(d.guaranteed_feasible),
            ),
            None => ("-", "-", "-", "-"),
        };
        println!(
            "{:<12} {:<12} {:<12} {:<10} {:<13} {:<13} {}",
            c.name,
            fmt_set(&c.problem_inputs),
            fmt_set(&c.problem_outputs),
            necessary,
            grs,
            vrs,
            pos
        );
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Commands::Run { data, config } => cmd_run(&data, &config),
        Commands::Presets => cmd_presets(),
        Commands::Check { data, config } => cmd_check(&data, config.as_deref()),
    }
}
