//! Command-line plumbing around `sfs-norm-core`: configuration, family spec files and
//! output rendering. Every command is a function from inputs to the printed text so the
//! binary stays a thin dispatcher.

pub mod error;
pub mod family;
pub mod render;

use std::io::Write;

use sfs_norm_core::lens::{explain_n_genus, LensCurve};
use sfs_norm_core::search::{compute_norms, family_scan, FamilyScan, NormReport, SearchBudget};
use sfs_norm_core::seifert::{parse_presentation, parse_with_notation, Notation, SeifertPresentation};

pub use error::CliError;

/// Output encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
    Csv,
}

/// Options shared by every subcommand. Unset budget fields fall back to
/// [`SearchBudget::default`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CliConfig {
    pub output_format: OutputFormat,
    pub mu_window: Option<u64>,
    pub lambda_cap: Option<u64>,
    pub explain: bool,
}

impl CliConfig {
    pub fn budget(&self) -> SearchBudget {
        SearchBudget { mu_window: self.mu_window, lambda_cap: self.lambda_cap, ..SearchBudget::default() }
    }
}

/// Parses with an explicit notation, or detects it from the leading token.
pub fn read_presentation(text: &str, notation: Option<Notation>) -> Result<SeifertPresentation, CliError> {
    Ok(match notation {
        Some(n) => parse_with_notation(text, n)?,
        None => parse_presentation(text)?,
    })
}

pub fn cmd_n_genus(twok: i64, q: i64, config: &CliConfig) -> Result<String, CliError> {
    let curve = LensCurve::new(twok, q)?;
    let e = explain_n_genus(curve);
    render::n_genus(&e, config)
}

pub fn norm_report(text: &str, notation: Option<Notation>, config: &CliConfig) -> Result<NormReport, CliError> {
    let m = read_presentation(text, notation)?;
    Ok(compute_norms(&m, &config.budget())?)
}

pub fn cmd_norm(text: &str, notation: Option<Notation>, config: &CliConfig) -> Result<String, CliError> {
    let report = norm_report(text, notation, config)?;
    render::norm(&report, config)
}

pub fn cmd_convert(text: &str, notation: Option<Notation>, target: Notation) -> Result<String, CliError> {
    let m = read_presentation(text, notation)?;
    Ok(format!("{}\n", m.format(target)))
}

/// Scans every family of a spec file, logging skipped instances to `log`.
pub fn scan_families(spec: &str, config: &CliConfig, log: &mut dyn Write) -> Result<FamilyScan, CliError> {
    let budget = config.budget();
    let mut all = FamilyScan::default();
    for fam in family::parse_family_file(spec)? {
        let scan = family_scan(&fam.grid, &budget)?;
        for s in &scan.skipped {
            writeln!(log, "line {}: skipped {}: {}", fam.line, s.instance, s.error)?;
        }
        all.rows.extend(scan.rows);
        all.skipped.extend(scan.skipped);
    }
    Ok(all)
}

/// Scans and renders; the default format for scans is CSV.
pub fn cmd_scan(
    spec: &str,
    format: Option<OutputFormat>,
    config: &CliConfig,
    log: &mut dyn Write,
) -> Result<String, CliError> {
    let scan = scan_families(spec, config, log)?;
    render::scan(&scan, format.unwrap_or(OutputFormat::Csv))
}
