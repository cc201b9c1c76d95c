//! Line-oriented operator spec files.
//!
//! A spec names a family and one `key=value` entry per line. Parameters
//! accept decimals or rationals (`1/4`); block values are either a basic
//! operator tag (`SL`) or a path to a table CSV, resolved relative to the
//! spec file. Blank lines and `#` comments are skipped.
//!
//! ```text
//! family=nullnorm-disj-i
//! e=1/4
//! k=1/2
//! block.S1=SL
//! block.S2=SL
//! block.T=TL
//! ```

use super::basic::BasicOpKind;
use super::build::{BlockSpec, OperatorSpec, RawTable};
use super::generator::Generator;
use super::table::BinaryOp;
use super::{BlockSlot, OpError};
use crate::io;
use std::path::{Path, PathBuf};

fn err(line: usize, msg: impl Into<String>) -> OpError {
    OpError::Parse {
        line,
        msg: msg.into(),
    }
}

/// Parses `1/4`-style rationals or plain decimals.
fn parse_param(line: usize, key: &str, raw: &str) -> Result<f64, OpError> {
    let v = if let Some((num, den)) = raw.split_once('/') {
        let num: f64 = num
            .trim()
            .parse()
            .map_err(|_| err(line, format!("invalid numerator in {key}={raw}")))?;
        let den: f64 = den
            .trim()
            .parse()
            .map_err(|_| err(line, format!("invalid denominator in {key}={raw}")))?;
        if den == 0.0 {
            return Err(err(line, format!("zero denominator in {key}={raw}")));
        }
        num / den
    } else {
        raw.parse()
            .map_err(|_| err(line, format!("invalid number in {key}={raw}")))?
    };
    Ok(v)
}

fn read_referenced(
    line: usize,
    base_dir: &Path,
    raw: &str,
    sources: &mut Vec<PathBuf>,
) -> Result<String, OpError> {
    let path = base_dir.join(raw);
    let text = std::fs::read_to_string(&path)
        .map_err(|e| err(line, format!("cannot read {}: {e}", path.display())))?;
    sources.push(path);
    Ok(text)
}

/// Parses a spec, resolving any referenced CSV files relative to
/// `base_dir`. Returns the spec along with the files it pulled in.
pub fn parse_operator_spec(
    text: &str,
    base_dir: &Path,
) -> Result<(OperatorSpec, Vec<PathBuf>), OpError> {
    let mut spec = OperatorSpec::default();
    let mut sources = Vec::new();
    let mut seen: Vec<String> = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw_line.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(line, format!("expected key=value, got `{content}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if value.is_empty() {
            return Err(err(line, format!("empty value for key `{key}`")));
        }
        if seen.iter().any(|k| k == key) {
            return Err(err(line, format!("duplicate key `{key}`")));
        }
        seen.push(key.to_string());
        match key {
            "family" => {
                spec.family = Some(value.parse().map_err(|e: String| err(line, e))?);
            }
            "kind" => {
                spec.kind = Some(
                    value
                        .to_ascii_uppercase()
                        .parse()
                        .map_err(|e: String| err(line, e))?,
                );
            }
            "e" => spec.e = Some(parse_param(line, key, value)?),
            "k" => spec.k = Some(parse_param(line, key, value)?),
            "a" => spec.a = Some(parse_param(line, key, value)?),
            "generator" => {
                let csv = read_referenced(line, base_dir, value, &mut sources)?;
                spec.generator = Some(Generator::from_csv_str(&csv)?);
            }
            "gfun" => {
                let csv = read_referenced(line, base_dir, value, &mut sources)?;
                let (_, samples) = io::parse_series(&csv).map_err(|e| err(e.line, e.msg))?;
                spec.gfun = Some(samples);
            }
            "table" => {
                let csv = read_referenced(line, base_dir, value, &mut sources)?;
                let (n, values) = io::parse_matrix(&csv).map_err(|e| err(e.line, e.msg))?;
                spec.table = Some(RawTable { n, values });
            }
            _ if key.starts_with("block.") => {
                let slot: BlockSlot = key["block.".len()..]
                    .parse()
                    .map_err(|e: String| err(line, e))?;
                let block = match value.to_ascii_uppercase().parse::<BasicOpKind>() {
                    Ok(kind) => BlockSpec::Basic(kind),
                    Err(_) => {
                        let csv = read_referenced(line, base_dir, value, &mut sources)?;
                        BlockSpec::Table(BinaryOp::from_csv_str(&csv)?)
                    }
                };
                spec.blocks.insert(slot, block);
            }
            _ => return Err(err(line, format!("unknown key `{key}`"))),
        }
    }
    if spec.family.is_none() {
        return Err(err(0, "spec does not name a family"));
    }
    Ok((spec, sources))
}

/// Reads and parses a spec file. The returned source list starts with the
/// spec file itself, followed by any CSVs it references.
pub fn load_operator_spec(path: &Path) -> Result<(OperatorSpec, Vec<PathBuf>), OpError> {
    let text = std::fs::read_to_string(path)?;
    let base_dir = path.parent().unwrap_or_else(|| Path::new("."));
    let (spec, mut sources) = parse_operator_spec(&text, base_dir)?;
    sources.insert(0, path.to_path_buf());
    Ok((spec, sources))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::Family;

    #[test]
    fn parses_a_nullnorm_spec_with_rational_parameters() {
        let text = "\
# three-block disjunctive nullnorm
family=nullnorm-disj-i
e=1/4
k=0.5

block.S1=SL
block.S2=SL
block.T=TL
";
        let (spec, sources) = parse_operator_spec(text, Path::new(".")).unwrap();
        assert_eq!(spec.family, Some(Family::NullnormDisjI));
        assert_eq!(spec.e, Some(0.25));
        assert_eq!(spec.k, Some(0.5));
        assert_eq!(spec.blocks.len(), 3);
        assert!(sources.is_empty());
        assert!(matches!(
            spec.blocks[&BlockSlot::T],
            BlockSpec::Basic(BasicOpKind::Tl)
        ));
    }

    #[test]
    fn unknown_key_reports_its_line() {
        let text = "family=basic-tnorm\nkind=TM\nshape=round\n";
        let e = parse_operator_spec(text, Path::new(".")).unwrap_err();
        match e {
            OpError::Parse { line, msg } => {
                assert_eq!(line, 3);
                assert!(msg.contains("shape"), "{msg}");
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn duplicate_key_is_rejected() {
        let text = "family=basic-tnorm\nkind=TM\nkind=TP\n";
        let e = parse_operator_spec(text, Path::new(".")).unwrap_err();
        assert!(e.to_string().contains("duplicate"), "{e}");
    }

    #[test]
    fn missing_family_is_rejected() {
        let e = parse_operator_spec("e=0.5\n", Path::new(".")).unwrap_err();
        assert!(e.to_string().contains("family"), "{e}");
    }

    #[test]
    fn missing_referenced_file_is_reported() {
        let text = "family=idempotent-uninorm\ne=0.5\ngfun=not-there.csv\n";
        let e = parse_operator_spec(text, Path::new("/nonexistent-dir")).unwrap_err();
        assert!(e.to_string().contains("not-there.csv"), "{e}");
    }

    #[test]
    fn zero_denominator_is_rejected() {
        let text = "family=overline-uninorm\ne=1/0\n";
        let e = parse_operator_spec(text, Path::new(".")).unwrap_err();
        assert!(e.to_string().contains("denominator"), "{e}");
    }
}
