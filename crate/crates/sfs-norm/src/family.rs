//! Family spec files: one family per line,
//!
//! ```text
//! # comment
//! S2((2,-1),(2m+1,m),(2n,1)) | m=1..3 | n=4..12 | n > 2m+1 | n <= 2m+6
//! ```
//!
//! The first segment is a presentation template. A segment `name=lo..hi` (or `name=v`)
//! adds a variable, anything else is a constraint. Variables vary in the order given,
//! the first one slowest.

use sfs_norm_core::expr::eval_constraint;
use sfs_norm_core::search::{FamilyGrid, VarRange};
use sfs_norm_core::seifert::parse_template;
use sfs_norm_core::ErrorKind;

use crate::CliError;

/// A parsed family with the line it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    pub line: usize,
    pub grid: FamilyGrid,
}

fn spec_error(line: usize, message: impl Into<String>) -> CliError {
    CliError::FamilySpec { line, message: message.into() }
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_bound(text: &str, line: usize) -> Result<i64, CliError> {
    text.trim().parse().map_err(|_| spec_error(line, format!("`{}` is not an integer", text.trim())))
}

fn parse_range(segment: &str, line: usize) -> Result<Option<VarRange>, CliError> {
    let Some((name, rest)) = segment.split_once('=') else {
        return Ok(None);
    };
    let name = name.trim();
    if rest.starts_with('=') || !is_ident(name) {
        return Ok(None);
    }
    let (lo, hi) = match rest.split_once("..") {
        Some((lo, hi)) => (parse_bound(lo, line)?, parse_bound(hi.strip_prefix('=').unwrap_or(hi), line)?),
        None => {
            let v = parse_bound(rest, line)?;
            (v, v)
        }
    };
    Ok(Some(VarRange { name: name.to_string(), lo, hi }))
}

fn parse_line(text: &str, line: usize) -> Result<FamilySpec, CliError> {
    let mut segments = text.split('|');
    let template = segments.next().unwrap_or_default().trim().to_string();
    if template.is_empty() {
        return Err(spec_error(line, "missing presentation template"));
    }
    let mut ranges: Vec<VarRange> = Vec::new();
    let mut constraints = Vec::new();
    for seg in segments {
        let seg = seg.trim();
        if seg.is_empty() {
            return Err(spec_error(line, "empty segment"));
        }
        match parse_range(seg, line)? {
            Some(r) => {
                if ranges.iter().any(|q| q.name == r.name) {
                    return Err(spec_error(line, format!("variable `{}` declared twice", r.name)));
                }
                ranges.push(r);
            }
            None => constraints.push(seg.to_string()),
        }
    }

    let probe = |name: &str| ranges.iter().any(|r| r.name == name).then_some(1);
    if let Err(e) = parse_template(&template, &probe) {
        if e.kind() == ErrorKind::Syntax {
            return Err(spec_error(line, format!("template: {e}")));
        }
    }
    for c in &constraints {
        if let Err(e) = eval_constraint(c, &probe) {
            if e.kind() == ErrorKind::Syntax {
                return Err(spec_error(line, format!("constraint `{c}`: {e}")));
            }
        }
    }
    Ok(FamilySpec { line, grid: FamilyGrid { template, ranges, constraints } })
}

/// Parses a whole spec file. Blank lines and `#` comments are ignored.
pub fn parse_family_file(text: &str) -> Result<Vec<FamilySpec>, CliError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or_default().trim();
        if !body.is_empty() {
            out.push(parse_line(body, i + 1)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_and_constraints() {
        let f =
            parse_family_file("# family\n\nS2((2,-1),(2m+1,m),(2n,1)) | m=1..2 | n=4..9 | n > 2m+1 # tail\n").unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].line, 3);
        let g = &f[0].grid;
        assert_eq!(g.ranges[0], VarRange { name: "m".into(), lo: 1, hi: 2 });
        assert_eq!(g.ranges[1], VarRange { name: "n".into(), lo: 4, hi: 9 });
        assert_eq!(g.constraints, vec!["n > 2m+1".to_string()]);
    }

    #[test]
    fn single_values_and_equality_constraints() {
        let f = parse_family_file("S2((2,-1),(2,1),(2n,1)) | n=-3 | n == -3").unwrap();
        assert_eq!(f[0].grid.ranges[0], VarRange { name: "n".into(), lo: -3, hi: -3 });
        assert_eq!(f[0].grid.constraints, vec!["n == -3".to_string()]);
    }

    #[test]
    fn errors_name_the_line() {
        let err = parse_family_file("\nS2((2,-1),(3,1),(2n,1)) | n=1..x").unwrap_err();
        assert!(matches!(err, CliError::FamilySpec { line: 2, .. }), "{err}");
        let err = parse_family_file("S2((2,-1),(3,1),(2n,1) | n=1..3").unwrap_err();
        assert!(matches!(err, CliError::FamilySpec { line: 1, .. }), "{err}");
        let err = parse_family_file("S2((2,-1),(3,1),(2k,1)) | n=1..3").unwrap_err();
        assert!(err.to_string().contains("unknown variable"), "{err}");
        let err = parse_family_file("S2((2,-1),(3,1),(2n,1)) | n=1..3 | n >").unwrap_err();
        assert!(err.to_string().contains("constraint"), "{err}");
        assert!(parse_family_file(" | n=1..2").is_err());
        assert!(parse_family_file("S2((2,-1),(3,1),(2n,1)) | n=1..2 | n=3..4").is_err());
    }
}
