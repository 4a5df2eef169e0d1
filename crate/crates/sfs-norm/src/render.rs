use std::fmt::Write as _;

use serde::Serialize;
use sfs_norm_core::lens::{NGenusExplanation, NormalizationRule};
use sfs_norm_core::search::{ClassNorm, FamilyScan, NormReport};
use sfs_norm_core::surfaces::SurfaceKind;

use crate::{CliConfig, CliError, OutputFormat};

/// Fixed CSV header for norm tables.
pub const CSV_HEADER: [&str; 10] =
    ["canonical_form", "class", "e1", "e2", "e3", "min_genus", "norm", "witness_kind", "gap", "exhaustive"];

#[derive(Debug, Serialize)]
struct CsvRow<'a> {
    canonical_form: &'a str,
    class: &'a str,
    e1: u8,
    e2: u8,
    e3: u8,
    min_genus: u64,
    norm: u64,
    witness_kind: &'a str,
    gap: Option<i64>,
    exhaustive: bool,
}

fn rule_name(r: NormalizationRule) -> &'static str {
    match r {
        NormalizationRule::SignFlip => "sign flip",
        NormalizationRule::ReduceModulo => "reduce q mod 2k",
        NormalizationRule::Reflect => "reflect q to 2k - q",
    }
}

fn list(v: &[u64]) -> String {
    let parts: Vec<String> = v.iter().map(u64::to_string).collect();
    format!("[{}]", parts.join(", "))
}

pub fn n_genus(e: &NGenusExplanation, config: &CliConfig) -> Result<String, CliError> {
    let mut out = String::new();
    match config.output_format {
        OutputFormat::Text if config.explain => {
            writeln!(out, "input       {}", e.input).unwrap();
            for (rule, c) in &e.steps {
                writeln!(out, "  {:<20} {}", rule_name(*rule), c).unwrap();
            }
            writeln!(out, "normalized  {}", e.normalized).unwrap();
            writeln!(out, "digits      {}", list(&e.digits)).unwrap();
            writeln!(out, "b           {}", list(&e.b)).unwrap();
            writeln!(out, "N           {}", e.value).unwrap();
        }
        OutputFormat::Text => writeln!(out, "{}", e.value).unwrap(),
        OutputFormat::Json if config.explain => {
            out = serde_json::to_string_pretty(e)?;
            out.push('\n');
        }
        OutputFormat::Json => {
            let v = serde_json::json!({ "twok": e.input.twok(), "q": e.input.q(), "n": e.value });
            out = serde_json::to_string_pretty(&v)?;
            out.push('\n');
        }
        OutputFormat::Csv => {
            writeln!(out, "twok,q,n").unwrap();
            writeln!(out, "{},{},{}", e.input.twok(), e.input.q(), e.value).unwrap();
        }
    }
    Ok(out)
}

fn gap(c: &ClassNorm) -> Option<i64> {
    let (v, h) = (c.vertical_genus?, c.horizontal_genus?);
    (h <= v).then(|| v as i64 - h as i64)
}

fn opt(v: Option<u64>) -> String {
    v.map_or_else(|| "-".to_string(), |g| g.to_string())
}

fn witness(c: &ClassNorm) -> String {
    match &c.witness.kind {
        SurfaceKind::Vertical(v) => format!("vertical {v}"),
        SurfaceKind::Horizontal(p) => format!("horizontal {p}"),
    }
}

fn finish(wtr: csv::Writer<Vec<u8>>) -> Result<String, CliError> {
    let bytes = wtr.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn new_csv() -> Result<csv::Writer<Vec<u8>>, CliError> {
    let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    wtr.write_record(CSV_HEADER)?;
    Ok(wtr)
}

pub fn norm(report: &NormReport, config: &CliConfig) -> Result<String, CliError> {
    match config.output_format {
        OutputFormat::Json => Ok(serde_json::to_string_pretty(report)? + "\n"),
        OutputFormat::Csv => {
            let mut wtr = new_csv()?;
            for c in &report.classes {
                let [e1, e2, e3] = c.class.parities();
                wtr.serialize(CsvRow {
                    canonical_form: &report.canonical_form,
                    class: &c.label,
                    e1,
                    e2,
                    e3,
                    min_genus: c.min_genus,
                    norm: c.norm,
                    witness_kind: c.witness.kind.name(),
                    gap: gap(c),
                    exhaustive: c.exhaustive,
                })?;
            }
            finish(wtr)
        }
        OutputFormat::Text => {
            let mut out = String::new();
            writeln!(out, "manifold   {}", report.presentation).unwrap();
            writeln!(out, "orlik      {}", report.canonical_form).unwrap();
            writeln!(out, "homology   {}", report.case.name()).unwrap();
            if report.classes.is_empty() {
                writeln!(out, "no nonzero Z2 classes").unwrap();
                return Ok(out);
            }
            writeln!(
                out,
                "{:<6} {:<6} {:>9} {:>5} {:>8} {:>10} {:>10}  witness",
                "class", "e", "min_genus", "norm", "vertical", "horizontal", "exhaustive"
            )
            .unwrap();
            for c in &report.classes {
                let [e1, e2, e3] = c.class.parities();
                writeln!(
                    out,
                    "{:<6} {:<6} {:>9} {:>5} {:>8} {:>10} {:>10}  {}",
                    c.label,
                    format!("{e1}{e2}{e3}"),
                    c.min_genus,
                    c.norm,
                    opt(c.vertical_genus),
                    opt(c.horizontal_genus),
                    if c.exhaustive { "yes" } else { "no" },
                    witness(c)
                )
                .unwrap();
            }
            if config.explain {
                for c in &report.classes {
                    if let Some(p) = &c.horizontal_witness {
                        writeln!(
                            out,
                            "{}: least horizontal genus {} at slopes {}",
                            c.label,
                            opt(c.horizontal_genus),
                            p
                        )
                        .unwrap();
                    }
                    if !c.exhaustive {
                        writeln!(out, "{}: search budget exhausted; min_genus is an upper bound", c.label).unwrap();
                    }
                }
            }
            Ok(out)
        }
    }
}

pub fn scan(scan: &FamilyScan, format: OutputFormat) -> Result<String, CliError> {
    match format {
        OutputFormat::Csv => {
            let mut wtr = new_csv()?;
            for r in &scan.rows {
                let [e1, e2, e3] = r.class.parities();
                wtr.serialize(CsvRow {
                    canonical_form: &r.canonical_form,
                    class: &r.label,
                    e1,
                    e2,
                    e3,
                    min_genus: r.min_genus,
                    norm: r.norm,
                    witness_kind: &r.witness_kind,
                    gap: r.gap,
                    exhaustive: r.exhaustive,
                })?;
            }
            finish(wtr)
        }
        OutputFormat::Json => {
            let skipped: Vec<_> = scan
                .skipped
                .iter()
                .map(|s| serde_json::json!({ "instance": s.instance, "error": s.error.to_string() }))
                .collect();
            let v = serde_json::json!({ "rows": scan.rows, "skipped": skipped });
            Ok(serde_json::to_string_pretty(&v)? + "\n")
        }
        OutputFormat::Text => {
            let mut out = String::new();
            writeln!(
                out,
                "{:<14} {:<28} {:<6} {:>9} {:>5} {:<10} {:>4} {:>10}",
                "instance", "canonical_form", "class", "min_genus", "norm", "witness", "gap", "exhaustive"
            )
            .unwrap();
            for r in &scan.rows {
                writeln!(
                    out,
                    "{:<14} {:<28} {:<6} {:>9} {:>5} {:<10} {:>4} {:>10}",
                    r.instance,
                    r.canonical_form,
                    r.label,
                    r.min_genus,
                    r.norm,
                    r.witness_kind,
                    r.gap.map_or_else(|| "-".to_string(), |g| g.to_string()),
                    if r.exhaustive { "yes" } else { "no" }
                )
                .unwrap();
            }
            Ok(out)
        }
    }
}
