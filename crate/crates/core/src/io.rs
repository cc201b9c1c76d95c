//! Shared CSV plumbing for the table and series formats.
//!
//! Both formats start with a header line `n=<resolution>`. A series file
//! (fuzzy truth value, generator samples, boundary function) follows with a
//! single line of `n + 1` comma-separated values; a table file follows with
//! `n + 1` such lines, row-major in the first operand.

#[derive(Debug, Clone)]
pub(crate) struct CsvError {
    pub line: usize,
    pub msg: String,
}

/// Formats with 12 significant digits, the precision both file formats pin.
pub(crate) fn fmt12(v: f64) -> String {
    format!("{v:.11e}")
}

fn parse_header(line: &str, lineno: usize) -> Result<usize, CsvError> {
    let rest = line.trim().strip_prefix("n=").ok_or_else(|| CsvError {
        line: lineno,
        msg: format!("expected header `n=<resolution>`, found `{}`", line.trim()),
    })?;
    rest.parse().map_err(|_| CsvError {
        line: lineno,
        msg: format!("invalid resolution `{rest}`"),
    })
}

fn parse_row(line: &str, lineno: usize, want: usize) -> Result<Vec<f64>, CsvError> {
    let row: Result<Vec<f64>, _> = line.trim().split(',').map(|s| s.trim().parse()).collect();
    let row = row.map_err(|_| CsvError {
        line: lineno,
        msg: "row contains a value that is not a real number".into(),
    })?;
    if row.len() != want {
        return Err(CsvError {
            line: lineno,
            msg: format!("expected {want} values, found {}", row.len()),
        });
    }
    Ok(row)
}

pub(crate) fn parse_series(text: &str) -> Result<(usize, Vec<f64>), CsvError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (ln, header) = lines.next().ok_or(CsvError {
        line: 1,
        msg: "empty input".into(),
    })?;
    let n = parse_header(header, ln + 1)?;
    let (ln, row) = lines.next().ok_or(CsvError {
        line: ln + 2,
        msg: "missing data row".into(),
    })?;
    let values = parse_row(row, ln + 1, n + 1)?;
    if let Some((ln, _)) = lines.next() {
        return Err(CsvError {
            line: ln + 1,
            msg: "trailing content after data row".into(),
        });
    }
    Ok((n, values))
}

pub(crate) fn parse_matrix(text: &str) -> Result<(usize, Vec<f64>), CsvError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (ln, header) = lines.next().ok_or(CsvError {
        line: 1,
        msg: "empty input".into(),
    })?;
    let n = parse_header(header, ln + 1)?;
    let mut values = Vec::with_capacity((n + 1) * (n + 1));
    for i in 0..=n {
        let (ln, row) = lines.next().ok_or(CsvError {
            line: ln + 2 + i,
            msg: format!("expected {} data rows, found {i}", n + 1),
        })?;
        values.extend(parse_row(row, ln + 1, n + 1)?);
    }
    if let Some((ln, _)) = lines.next() {
        return Err(CsvError {
            line: ln + 1,
            msg: "trailing content after data rows".into(),
        });
    }
    Ok((n, values))
}

pub(crate) fn series_to_csv(n: usize, values: &[f64]) -> String {
    let row: Vec<String> = values.iter().map(|&v| fmt12(v)).collect();
    format!("n={}\n{}\n", n, row.join(","))
}

pub(crate) fn matrix_to_csv(n: usize, values: &[f64]) -> String {
    let mut out = format!("n={n}\n");
    for row in values.chunks(n + 1) {
        let cells: Vec<String> = row.iter().map(|&v| fmt12(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}
