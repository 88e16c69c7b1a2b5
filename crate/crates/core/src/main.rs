//! Command-line front end: parse a model file, generate a covering suite,
//! optionally certify it with the brute-force oracle, and emit JSON, CSV, or
//! a text table.
//!
//! Exit codes: 0 success; 1 parse or usage error; 2 unsatisfiable model or
//! search failure; 3 I/O failure; 4 verification failure.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, ValueEnum};

use citgen::generator::{
    Budget, GeneratorConfig, DEFAULT_MAX_MODIFICATIONS, DEFAULT_TIME_BUDGET_MS,
};
use citgen::model::Strength;
use citgen::oracle::{check_rows_only, verify_suite, OracleReport};
use citgen::output;
use citgen::{generate, parse_model, Error};

const EXIT_USAGE: u8 = 1;
const EXIT_UNSATISFIABLE: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_VERIFICATION: u8 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

/// Generate a constrained t-wise covering test suite from a model file.
#[derive(Debug, Parser)]
#[command(name = "citgen", version, disable_help_subcommand = true)]
struct Cli {
    /// Model file: a PARAMETERS section and an optional CONSTRAINTS section.
    model: PathBuf,

    /// Interaction strength t.
    #[arg(short = 't', long, default_value_t = 2)]
    strength: usize,

    /// Random seed; drawn from OS entropy (and echoed) when omitted.
    #[arg(long)]
    seed: Option<u64>,

    /// Wall-clock budget for the improvement loop, in milliseconds.
    #[arg(long, conflicts_with = "improve_rounds")]
    time_budget_ms: Option<u64>,

    /// Run exactly this many improvement rounds (deterministic runtime).
    #[arg(long)]
    improve_rounds: Option<u64>,

    /// Modification budget per improvement round.
    #[arg(long, default_value_t = DEFAULT_MAX_MODIFICATIONS)]
    max_modifications: usize,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write output here instead of standard output.
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,

    /// Certify the suite with the brute-force oracle.
    #[arg(long)]
    verify: bool,
}

fn error_exit_code(err: &Error) -> u8 {
    match err {
        Error::Parse { .. }
        | Error::InvalidModel(_)
        | Error::LengthMismatch { .. }
        | Error::StrengthTooSmall { .. }
        | Error::StrengthExceedsParameters { .. }
        | Error::InvalidConfig(_) => EXIT_USAGE,
        Error::Unsatisfiable { .. }
        | Error::DerivationCapExceeded { .. }
        | Error::EnumerationCapExceeded { .. }
        | Error::Search(_) => EXIT_UNSATISFIABLE,
    }
}

fn run(cli: &Cli) -> Result<(), u8> {
    let text = std::fs::read_to_string(&cli.model).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", cli.model.display());
        EXIT_IO
    })?;
    let model = parse_model(&text).map_err(|e| {
        eprintln!("error: {e}");
        EXIT_USAGE
    })?;

    let seed = cli.seed.unwrap_or_else(rand::random::<u64>);
    if cli.seed.is_none() {
        eprintln!("seed: {seed}");
    }
    let budget = match (cli.improve_rounds, cli.time_budget_ms) {
        (Some(rounds), _) => Budget::Rounds(rounds),
        (None, Some(ms)) => Budget::TimeMs(ms),
        (None, None) => Budget::TimeMs(DEFAULT_TIME_BUDGET_MS),
    };
    let config = GeneratorConfig {
        strength: cli.strength,
        seed,
        budget,
        max_modifications: cli.max_modifications,
        ..GeneratorConfig::new(cli.strength, seed)
    };

    let suite = generate(&model, &config).map_err(|e| {
        eprintln!("error: {e}");
        error_exit_code(&e)
    })?;

    let mut verification_failed = false;
    let report: Option<OracleReport> = if cli.verify {
        let strength = Strength::new(suite.strength, model.space().k())
            .expect("generate validated the strength");
        match verify_suite(&suite.rows, &model, strength) {
            Ok(report) => {
                eprintln!("{}", report.render_text());
                verification_failed = !report.passes();
                Some(report)
            }
            Err(Error::EnumerationCapExceeded { cap }) => {
                eprintln!(
                    "warning: model exceeds the enumeration cap of {cap} test cases; \
                     checking row validity only"
                );
                let invalid = check_rows_only(&suite.rows, &model);
                if invalid.is_empty() {
                    eprintln!("row check: all {} rows valid", suite.rows.len());
                } else {
                    for (row, clause) in &invalid {
                        eprintln!("row check: row {row} violates {clause}");
                    }
                    verification_failed = true;
                }
                None
            }
            Err(e) => {
                eprintln!("error: {e}");
                return Err(error_exit_code(&e));
            }
        }
    } else {
        None
    };

    let rendered = match cli.format {
        Format::Json => {
            let doc = output::suite_document(&model, &suite, report.as_ref());
            output::to_json(&doc).map_err(|e| {
                eprintln!("error: {e}");
                EXIT_USAGE
            })?
        }
        Format::Csv => output::to_csv(&model, &suite).map_err(|e| {
            eprintln!("error: {e}");
            EXIT_USAGE
        })?,
        Format::Text => output::to_text(&model, &suite),
    };

    match &cli.output {
        Some(path) => std::fs::write(path, rendered).map_err(|e| {
            eprintln!("error: cannot write {}: {e}", path.display());
            EXIT_IO
        })?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(rendered.as_bytes()).map_err(|e| {
                eprintln!("error: cannot write to standard output: {e}");
                EXIT_IO
            })?;
        }
    }

    if verification_failed {
        return Err(EXIT_VERIFICATION);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => ExitCode::from(code),
    }
}
