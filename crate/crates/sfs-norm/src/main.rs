use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sfs_norm::{cmd_convert, cmd_n_genus, cmd_norm, cmd_scan, CliConfig, CliError, OutputFormat};
use sfs_norm_core::seifert::Notation;

/// Z2-Thurston norms of small Seifert fibered 3-manifolds.
#[derive(Debug, Parser)]
#[command(name = "sfs-norm", version)]
struct Args {
    /// Output encoding.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Half-width of the slope scan on each boundary torus.
    #[arg(long, global = true, env = "SFS_NORM_MU_WINDOW")]
    mu_window: Option<u64>,
    /// Largest covering degree examined.
    #[arg(long, global = true)]
    lambda_cap: Option<u64>,
    /// Print intermediate data.
    #[arg(long, global = true)]
    explain: bool,
    /// Input notation; detected from the leading token when omitted.
    #[arg(long, global = true, value_parser = parse_notation)]
    notation: Option<Notation>,
    /// Write output to a file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Least genus N(2k, q) of a one-sided surface in a solid torus bounded by (2k, q).
    #[command(allow_negative_numbers = true)]
    NGenus { twok: i64, q: i64 },
    /// Minimal genus and norm of every nonzero Z2 class.
    Norm { presentation: String },
    /// Rewrites a presentation in another notation.
    Convert {
        presentation: String,
        #[arg(value_parser = parse_notation)]
        target: Notation,
    },
    /// Runs a family spec file and emits one row per instance and class.
    Scan { file: PathBuf },
}

fn parse_notation(s: &str) -> Result<Notation, String> {
    s.parse().map_err(|e: sfs_norm_core::Error| e.to_string())
}

fn run(args: Args) -> Result<(), CliError> {
    let config = CliConfig {
        output_format: args.format.unwrap_or_default(),
        mu_window: args.mu_window,
        lambda_cap: args.lambda_cap,
        explain: args.explain,
    };
    let text = match &args.command {
        Command::NGenus { twok, q } => cmd_n_genus(*twok, *q, &config)?,
        Command::Norm { presentation } => cmd_norm(presentation, args.notation, &config)?,
        Command::Convert { presentation, target } => cmd_convert(presentation, args.notation, *target)?,
        Command::Scan { file } => {
            let spec = fs::read_to_string(file).map_err(|source| CliError::Io { path: file.clone(), source })?;
            cmd_scan(&spec, args.format, &config, &mut io::stderr())?
        }
    };
    match &args.out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io { path: path.clone(), source }),
        None => Ok(io::stdout().write_all(text.as_bytes())?),
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
