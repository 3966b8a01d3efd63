//! Plain-text instance formats.
//!
//! Dense table:
//!
//! ```text
//! ksub 1
//! k=3 n=1
//! 0 0
//! 1 -1
//! 2 1
//! 3 2
//! ```
//!
//! Each payload line holds `n` label tokens and then a value. Every labeling
//! must appear exactly once, in any order.
//!
//! Sum of terms:
//!
//! ```text
//! ksum 1
//! k=2 n=2
//! term 1 1
//! 0
//! 1
//! 0
//! term 1 2
//! 0
//! 1
//! 0
//! ```
//!
//! A `term <arity> <i1> ... <ia>` line names 1-based coordinates and is
//! followed by `(k+1)^arity` values in enumeration order of the scope.
//!
//! Values are integers or `p/q`. Blank lines and lines starting with `#` are
//! ignored everywhere.

use std::fmt::Write as _;

use crate::domain::{Domain, Labeling};
use crate::dual::SignedVector;
use crate::error::{Error, Result};
use crate::function::{Backend, Term, ValuedFunction};
use crate::polyhedron::FullVector;
use crate::scalar::{parse_scalar, Scalar};

pub const TABLE_HEADER: &str = "ksub 1";
pub const SUM_HEADER: &str = "ksum 1";

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate(),
            last: 0,
        }
    }

    /// Next meaningful line with its 1-based number.
    fn next(&mut self) -> Option<(usize, &'a str)> {
        for (index, line) in self.inner.by_ref() {
            self.last = index + 1;
            let line = line.trim();
            if !line.is_empty() && !line.starts_with('#') {
                return Some((index + 1, line));
            }
        }
        None
    }

    fn expect(&mut self, what: &str) -> Result<(usize, &'a str)> {
        self.next().ok_or_else(|| parse_error(self.last + 1, format!("expected {what}")))
    }
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_value<S: Scalar>(line: usize, token: &str) -> Result<S> {
    parse_scalar(token).ok_or_else(|| parse_error(line, format!("invalid value `{token}`")))
}

fn parse_number<T: std::str::FromStr>(line: usize, token: &str, what: &str) -> Result<T> {
    token
        .parse()
        .map_err(|_| parse_error(line, format!("invalid {what} `{token}`")))
}

fn parse_header(lines: &mut Lines<'_>, header: &str) -> Result<Domain> {
    let (line, text) = lines.expect(&format!("header `{header}`"))?;
    if text != header {
        return Err(parse_error(line, format!("expected header `{header}`, found `{text}`")));
    }
    let (line, text) = lines.expect("`k=<k> n=<n>`")?;
    let mut k = None;
    let mut n = None;
    for field in text.split_whitespace() {
        match field.split_once('=') {
            Some(("k", v)) => k = Some(parse_number::<u32>(line, v, "k")?),
            Some(("n", v)) => n = Some(parse_number::<usize>(line, v, "n")?),
            _ => return Err(parse_error(line, format!("unexpected field `{field}`"))),
        }
    }
    let (Some(k), Some(n)) = (k, n) else {
        return Err(parse_error(line, "expected `k=<k> n=<n>`"));
    };
    Domain::new(k, n).map_err(|e| parse_error(line, e.to_string()))
}

/// Parses a dense table.
pub fn parse_table<S: Scalar>(text: &str) -> Result<ValuedFunction<S>> {
    let mut lines = Lines::new(text);
    let domain = parse_header(&mut lines, TABLE_HEADER)?;
    let (k, n) = (domain.k(), domain.n());
    // the payload already lists every labeling, so only overflow matters here
    let size = domain.with_cap(u128::MAX).checked_size()?;
    let mut values: Vec<Option<(usize, S)>> = vec![None; size];
    while let Some((line, text)) = lines.next() {
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() != n + 1 {
            return Err(parse_error(
                line,
                format!("expected {} label tokens and a value, found {} fields", n, fields.len()),
            ));
        }
        let tokens = fields[..n]
            .iter()
            .map(|t| parse_number::<u32>(line, t, "label token"))
            .collect::<Result<Vec<_>>>()?;
        let t = Labeling::from_tokens(k, &tokens).map_err(|e| parse_error(line, e.to_string()))?;
        let value = parse_value(line, fields[n])?;
        let slot = &mut values[domain.index_of(&t)];
        if let Some((first, _)) = slot {
            return Err(parse_error(line, format!("duplicate labeling {t} (first on line {first})")));
        }
        *slot = Some((line, value));
    }
    let mut table = Vec::with_capacity(size);
    for (index, slot) in values.into_iter().enumerate() {
        match slot {
            Some((_, v)) => table.push(v),
            None => {
                return Err(parse_error(
                    lines.last + 1,
                    format!("missing labeling {}", domain.labeling_at(index)),
                ))
            }
        }
    }
    ValuedFunction::dense(k, n, table)
}

/// Parses a sum of local terms.
pub fn parse_sum<S: Scalar>(text: &str) -> Result<ValuedFunction<S>> {
    let mut lines = Lines::new(text);
    let domain = parse_header(&mut lines, SUM_HEADER)?;
    let (k, n) = (domain.k(), domain.n());
    let mut terms = Vec::new();
    while let Some((line, text)) = lines.next() {
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.first() != Some(&"term") || fields.len() < 2 {
            return Err(parse_error(line, format!("expected `term <arity> <coordinates>`, found `{text}`")));
        }
        let arity: usize = parse_number(line, fields[1], "arity")?;
        if arity > n {
            return Err(parse_error(line, format!("arity {arity} exceeds n = {n}")));
        }
        if fields.len() != arity + 2 {
            return Err(parse_error(line, format!("expected {arity} coordinates")));
        }
        let scope = fields[2..]
            .iter()
            .map(|t| {
                let i: usize = parse_number(line, t, "coordinate")?;
                if i == 0 || i > n {
                    return Err(parse_error(line, format!("coordinate {i} outside 1..={n}")));
                }
                Ok(i - 1)
            })
            .collect::<Result<Vec<_>>>()?;
        let count = (k as usize + 1).pow(arity as u32);
        let mut table = Vec::with_capacity(count);
        for _ in 0..count {
            let (value_line, value) = lines.expect("term value")?;
            table.push(parse_value(value_line, value)?);
        }
        terms.push(Term::new(k, n, scope, table).map_err(|e| parse_error(line, e.to_string()))?);
    }
    ValuedFunction::from_terms(k, n, terms)
}

/// Parses either format, dispatching on the header.
pub fn parse_instance<S: Scalar>(text: &str) -> Result<ValuedFunction<S>> {
    let mut lines = Lines::new(text);
    match lines.next() {
        Some((_, SUM_HEADER)) => parse_sum(text),
        _ => parse_table(text),
    }
}

/// Dense table text, one line per labeling in enumeration order.
pub fn write_table<S: Scalar>(f: &ValuedFunction<S>) -> Result<String> {
    let mut out = format!("{TABLE_HEADER}\nk={} n={}\n", f.k(), f.n());
    for (t, v) in f.domain().labelings()?.zip(f.table()?) {
        writeln!(out, "{t} {v}").unwrap();
    }
    Ok(out)
}

/// Term text for a term-backed function; a nonzero offset becomes an arity-0
/// term. Dense functions are written as a single term over all coordinates.
pub fn write_sum<S: Scalar>(f: &ValuedFunction<S>) -> Result<String> {
    let mut out = format!("{SUM_HEADER}\nk={} n={}\n", f.k(), f.n());
    let mut emit = |scope: &[usize], table: &[S]| {
        let coordinates: Vec<String> = scope.iter().map(|i| (i + 1).to_string()).collect();
        write!(out, "term {}", scope.len()).unwrap();
        for c in coordinates {
            write!(out, " {c}").unwrap();
        }
        out.push('\n');
        for v in table {
            writeln!(out, "{v}").unwrap();
        }
    };
    match f.backend() {
        Backend::Dense(values) => emit(&(0..f.n()).collect::<Vec<_>>(), values),
        Backend::Terms(terms) => {
            for term in terms {
                emit(term.scope(), term.table());
            }
        }
    }
    if !f.offset().is_zero() {
        emit(&[], std::slice::from_ref(f.offset()));
    }
    Ok(out)
}

/// Two lines: magnitudes, then distinguished leaves.
pub fn write_signed<S: Scalar>(v: &SignedVector<S>) -> String {
    v.to_string()
}

pub fn parse_signed<S: Scalar>(k: u32, text: &str) -> Result<SignedVector<S>> {
    let mut lines = Lines::new(text);
    let (line, x) = lines.expect("magnitudes")?;
    let x = x
        .split_whitespace()
        .map(|t| parse_value(line, t))
        .collect::<Result<Vec<S>>>()?;
    let (line, leaves) = lines.expect("leaves")?;
    let leaves = leaves
        .split_whitespace()
        .map(|t| parse_number::<u32>(line, t, "leaf"))
        .collect::<Result<Vec<_>>>()?;
    SignedVector::new(k, x, leaves).map_err(|e| parse_error(line, e.to_string()))
}

/// `n` lines of `k` values.
pub fn write_full<S: Scalar>(x: &FullVector<S>) -> String {
    x.to_string()
}

pub fn parse_full<S: Scalar>(k: u32, text: &str) -> Result<FullVector<S>> {
    let mut lines = Lines::new(text);
    let mut rows = Vec::new();
    while let Some((line, row)) = lines.next() {
        let row = row
            .split_whitespace()
            .map(|t| parse_value(line, t))
            .collect::<Result<Vec<S>>>()?;
        if row.len() != k as usize {
            return Err(parse_error(line, format!("expected {k} values, found {}", row.len())));
        }
        rows.push(row);
    }
    FullVector::from_rows(k, rows)
}
