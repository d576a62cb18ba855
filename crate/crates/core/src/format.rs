//! The matroid text format.
//!
//! ```text
//! # optional comment lines
//! n r
//! 0 1
//! 0 2
//! ```
//!
//! Line one holds `n r`; every following line is one basis written as strictly
//! increasing zero-based indices separated by single spaces, with the basis
//! lines in lexicographic order. A rank-zero matroid has a single empty basis
//! line. The text must end with a newline.

use std::fmt::Write as _;
use std::iter::Peekable;

use thiserror::Error;

use crate::matroid::{Matroid, MatroidError};
use crate::set::{ElementSet, MAX_ELEMENTS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error("line {line}: invalid matroid: {source}")]
    Invalid {
        line: usize,
        #[source]
        source: MatroidError,
    },
}

impl ParseError {
    pub fn line(&self) -> usize {
        match self {
            ParseError::Syntax { line, .. } | ParseError::Invalid { line, .. } => *line,
        }
    }

    pub(crate) fn syntax(line: usize, reason: impl Into<String>) -> Self {
        ParseError::Syntax { line, reason: reason.into() }
    }
}

pub fn write_matroid(m: &Matroid) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", m.n(), m.rank()).unwrap();
    for b in m.bases() {
        writeln!(out, "{b}").unwrap();
    }
    out
}

/// Parses a single matroid and validates the basis axioms.
pub fn parse_matroid(text: &str) -> Result<Matroid, ParseError> {
    if !text.ends_with('\n') {
        let last = text.lines().count().max(1);
        return Err(ParseError::syntax(last, "missing final newline"));
    }
    let mut lines = numbered_lines(text).peekable();
    let m = parse_block(&mut lines, true)?.ok_or_else(|| ParseError::syntax(1, "no matroid found"))?;
    for (no, line) in lines {
        if !line.starts_with('#') {
            return Err(ParseError::syntax(no, "unexpected content after the last basis"));
        }
    }
    Ok(m)
}

pub(crate) fn numbered_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.split_terminator('\n').enumerate().map(|(i, l)| (i + 1, l))
}

fn skip_comments<'a, I: Iterator<Item = (usize, &'a str)>>(lines: &mut Peekable<I>) {
    while matches!(lines.peek(), Some((_, l)) if l.starts_with('#')) {
        lines.next();
    }
}

/// Reads one block: header, then basis lines up to a blank line or the end.
///
/// Returns `Ok(None)` at end of input. When `validate` is false the exchange
/// axiom is not checked.
pub(crate) fn parse_block<'a, I: Iterator<Item = (usize, &'a str)>>(
    lines: &mut Peekable<I>,
    validate: bool,
) -> Result<Option<Matroid>, ParseError> {
    skip_comments(lines);
    let Some((header_no, header)) = lines.next() else {
        return Ok(None);
    };
    let nums = parse_indices(header_no, header)?;
    let [n, r] = nums[..] else {
        return Err(ParseError::syntax(header_no, "header must be `n r`"));
    };
    if n > MAX_ELEMENTS || r > n {
        return Err(ParseError::Invalid { line: header_no, source: MatroidError::BoundsViolated { n, r } });
    }
    let mut bases = Vec::new();
    let mut last: Option<(ElementSet, usize)> = None;
    if r == 0 {
        skip_comments(lines);
        match lines.next() {
            Some((_, "")) => bases.push(ElementSet::empty(n)),
            Some((no, _)) => return Err(ParseError::syntax(no, "rank-zero matroid needs one empty basis line")),
            None => return Err(ParseError::syntax(header_no + 1, "missing empty basis line")),
        }
    } else {
        loop {
            skip_comments(lines);
            match lines.peek() {
                None | Some((_, "")) => break,
                Some(&(no, line)) => {
                    lines.next();
                    let idx = parse_indices(no, line)?;
                    if idx.windows(2).any(|w| w[0] >= w[1]) {
                        return Err(ParseError::syntax(no, "indices must be strictly increasing"));
                    }
                    let set = ElementSet::from_indices(n, idx.iter().copied())
                        .ok_or_else(|| ParseError::syntax(no, format!("index out of range for n={n}")))?;
                    if let Some((prev, _)) = last {
                        if prev >= set {
                            return Err(ParseError::syntax(no, "basis lines must be sorted and distinct"));
                        }
                    }
                    last = Some((set, no));
                    bases.push(set);
                }
            }
        }
    }
    let line = last.map(|(_, no)| no).unwrap_or(header_no);
    let built = if validate {
        Matroid::new(n, r, bases)
    } else {
        Matroid::from_bases_unchecked(n, r, bases)
    };
    built.map(Some).map_err(|source| ParseError::Invalid { line, source })
}

fn parse_indices(no: usize, line: &str) -> Result<Vec<usize>, ParseError> {
    if line.is_empty() {
        return Err(ParseError::syntax(no, "unexpected empty line"));
    }
    line.split(' ')
        .map(|tok| {
            if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
                Err(ParseError::syntax(no, format!("expected an index, found `{tok}`")))
            } else {
                tok.parse::<usize>().map_err(|e| ParseError::syntax(no, e.to_string()))
            }
        })
        .collect()
}
