//! Tab-separated labelled matrices: a header row of labels (after an empty
//! corner cell), then one row per journal.

use std::fmt::Write;

use crate::error::{Error, Result};

use super::fmt4;

/// A value that can appear in an ASCII matrix cell.
pub trait AsciiCell: Sized {
    fn format_cell(&self) -> String;
    fn parse_cell(raw: &str) -> Option<Self>;
}

impl AsciiCell for u64 {
    fn format_cell(&self) -> String {
        self.to_string()
    }
    fn parse_cell(raw: &str) -> Option<Self> {
        raw.parse().ok()
    }
}

impl AsciiCell for f64 {
    fn format_cell(&self) -> String {
        fmt4(*self)
    }
    fn parse_cell(raw: &str) -> Option<Self> {
        raw.parse().ok().filter(|v: &f64| v.is_finite())
    }
}

impl AsciiCell for f32 {
    fn format_cell(&self) -> String {
        fmt4(f64::from(*self))
    }
    fn parse_cell(raw: &str) -> Option<Self> {
        raw.parse().ok().filter(|v: &f32| v.is_finite())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsciiMatrix<C> {
    pub labels: Vec<String>,
    pub rows: Vec<Vec<C>>,
}

pub fn write_ascii_matrix<L: AsRef<str>, C: AsciiCell>(labels: &[L], rows: &[Vec<C>]) -> Result<String> {
    let n = labels.len();
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Consistency(format!("matrix must be {n}×{n} to match its labels")));
    }
    let mut out = String::new();
    for l in labels {
        let _ = write!(out, "\t{}", l.as_ref());
    }
    out.push('\n');
    for (label, row) in labels.iter().zip(rows) {
        out.push_str(label.as_ref());
        for cell in row {
            let _ = write!(out, "\t{}", cell.format_cell());
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn parse_ascii_matrix<C: AsciiCell>(text: &str) -> Result<AsciiMatrix<C>> {
    let src = "<matrix>";
    let mut lines = text.lines().enumerate().map(|(k, l)| (k as u64 + 1, l));
    let (_, header) = lines.next().ok_or_else(|| Error::parse(src, 1, "missing label header"))?;
    let mut head = header.split('\t');
    if head.next() != Some("") {
        return Err(Error::parse(src, 1, "header must start with an empty corner cell"));
    }
    let labels: Vec<String> = head.map(str::to_string).collect();
    let n = labels.len();
    let mut rows = Vec::with_capacity(n);
    for (no, line) in lines {
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split('\t');
        let label = fields.next().unwrap_or_default();
        if rows.len() >= n || label != labels[rows.len()] {
            return Err(Error::parse(src, no, format!("unexpected row label `{label}`")));
        }
        let row = fields
            .map(|f| C::parse_cell(f).ok_or_else(|| Error::parse(src, no, format!("bad cell `{f}`"))))
            .collect::<Result<Vec<C>>>()?;
        if row.len() != n {
            return Err(Error::parse(src, no, format!("expected {n} cells, found {}", row.len())));
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(Error::parse(src, 1, format!("expected {n} rows, found {}", rows.len())));
    }
    Ok(AsciiMatrix { labels, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document() {
        let text = write_ascii_matrix(&["a"], &[vec![7u64]]).unwrap();
        assert_eq!(text, "\ta\na\t7\n");
        let back: AsciiMatrix<u64> = parse_ascii_matrix(&text).unwrap();
        assert_eq!(back.rows, vec![vec![7]]);
    }

    #[test]
    fn cosines_use_four_decimals() {
        let text = write_ascii_matrix(&["a", "b"], &[vec![1.0, 0.123456], vec![0.123456, 1.0]]).unwrap();
        assert_eq!(text, "\ta\tb\na\t1.0000\t0.1235\nb\t0.1235\t1.0000\n");
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        assert!(write_ascii_matrix(&["a", "b"], &[vec![1u64, 2]]).is_err());
        assert!(parse_ascii_matrix::<u64>("\ta\tb\na\t1\t2\n").is_err());
        assert!(parse_ascii_matrix::<u64>("\ta\nb\t1\n").is_err());
        assert!(parse_ascii_matrix::<u64>("\ta\na\tx\n").is_err());
        assert!(parse_ascii_matrix::<u64>("").is_err());
    }
}
