//! Plain-text table helpers shared by the lattice, field and report writers.

use crate::error::{Error, Result};

/// Formats a real at 17 significant digits so that output is bit-stable and
/// round-trips through `str::parse::<f64>`.
pub fn fmt_real(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

/// Iterates over the data rows of a whitespace-separated table, skipping blank
/// lines, `#` comments and a header row whose first token equals `header`.
pub(crate) fn data_rows<'a>(
    text: &'a str,
    header: &'a str,
) -> impl Iterator<Item = (usize, Vec<&'a str>)> + 'a {
    text.lines().enumerate().filter_map(move |(i, line)| {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            return None;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.first() == Some(&header) {
            return None;
        }
        Some((i + 1, tokens))
    })
}

pub(crate) fn parse_index(tok: &str, line: usize) -> Result<usize> {
    tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("bad index `{tok}`"),
    })
}

pub(crate) fn parse_real(tok: &str, line: usize) -> Result<f64> {
    tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("bad real `{tok}`"),
    })
}
