//! Line-oriented exact text formats.
//!
//! TRP1 (input polynomials):
//!   TRP1 p=<modulus> k=<precision>
//!   <coeff> <x-exp> <y-exp>        one term per line, duplicates summed
//! TRS1 (output series):
//!   TRS1 p=<modulus> k=<precision>
//!   <coeff> <x-exp>                nonzero coefficients, ascending exponent
//! Lines starting with '#' and blank lines are ignored. Coefficients are
//! arbitrary-length decimal integers, reduced mod p; exponents are bounded
//! to keep memory in check. Both formats are bit-exact: parse(print(x)) = x.

use std::fmt;

use truncres_core::resultant::BivariateInput;
use truncres_core::{PrimeField, TruncSeries};

/// Hard cap on exponents accepted from files.
pub const MAX_EXPONENT: usize = 1_000_000;

#[derive(Debug)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

/// Folds an arbitrary-length decimal literal into F_p.
fn decimal_mod_p(s: &str, p: u64, line: usize) -> Result<u64, ParseError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(err(line, format!("bad coefficient {s:?}")));
    }
    let mut acc: u64 = 0;
    for b in s.bytes() {
        let digit = (b - b'0') as u128;
        acc = ((acc as u128 * 10 + digit) % p as u128) as u64;
    }
    Ok(acc)
}

fn exponent(s: &str, line: usize) -> Result<usize, ParseError> {
    let v: usize = s
        .parse()
        .map_err(|_| err(line, format!("bad exponent {s:?}")))?;
    if v > MAX_EXPONENT {
        return Err(err(line, format!("exponent {v} exceeds the cap {MAX_EXPONENT}")));
    }
    Ok(v)
}

pub struct PolyFile {
    pub p: u64,
    pub k: usize,
    pub terms: Vec<(u64, usize, usize)>,
}

/// Parses the TRP1 header and term lines. The field context is constructed by
/// the caller (to honor --no-prime-check); coefficients here are kept as raw
/// residues reduced mod p.
pub fn parse_trp1(text: &str) -> Result<PolyFile, ParseError> {
    let mut header: Option<(u64, usize)> = None;
    let mut terms = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        match header {
            None => {
                if fields.len() != 3 || fields[0] != "TRP1" {
                    return Err(err(line, "expected header: TRP1 p=<int> k=<int>"));
                }
                let p = fields[1]
                    .strip_prefix("p=")
                    .and_then(|s| s.parse::<u64>().ok())
                    .ok_or_else(|| err(line, "bad p= field"))?;
                let k = fields[2]
                    .strip_prefix("k=")
                    .and_then(|s| s.parse::<usize>().ok())
                    .ok_or_else(|| err(line, "bad k= field"))?;
                if k == 0 || k > MAX_EXPONENT {
                    return Err(err(line, format!("precision k={k} out of range")));
                }
                header = Some((p, k));
            }
            Some((p, _)) => {
                if fields.len() != 3 {
                    return Err(err(line, "expected: <coeff> <x-exp> <y-exp>"));
                }
                let c = decimal_mod_p(fields[0], p, line)?;
                let xe = exponent(fields[1], line)?;
                let ye = exponent(fields[2], line)?;
                terms.push((c, xe, ye));
            }
        }
    }
    let (p, k) = header.ok_or_else(|| err(0, "missing TRP1 header"))?;
    Ok(PolyFile { p, k, terms })
}

/// Builds the pipeline input from parsed terms at an effective precision.
pub fn build_input(f: &PrimeField, k: usize, file: &PolyFile) -> BivariateInput {
    BivariateInput::from_terms(f, k, &file.terms)
}

/// Renders a polynomial file; inverse of `parse_trp1` up to comments.
pub fn write_trp1(p: u64, k: usize, terms: &[(u64, usize, usize)]) -> String {
    let mut out = format!("TRP1 p={p} k={k}\n");
    for &(c, xe, ye) in terms {
        if c != 0 {
            out.push_str(&format!("{c} {xe} {ye}\n"));
        }
    }
    out
}

/// Renders a truncated series in TRS1 form: nonzero coefficients only, in
/// increasing x-exponent; a zero series has an empty body.
pub fn write_trs1(p: u64, series: &TruncSeries) -> String {
    let mut out = format!("TRS1 p={p} k={}\n", series.precision());
    for (xe, &c) in series.coeffs().iter().enumerate() {
        if c != 0 {
            out.push_str(&format!("{c} {xe}\n"));
        }
    }
    out
}

/// Parses a TRS1 file back into a series (used by tests and tooling).
pub fn parse_trs1(text: &str) -> Result<(u64, TruncSeries), ParseError> {
    let mut header: Option<(u64, usize)> = None;
    let mut coeffs: Vec<(usize, u64)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        match header {
            None => {
                if fields.len() != 3 || fields[0] != "TRS1" {
                    return Err(err(line, "expected header: TRS1 p=<int> k=<int>"));
                }
                let p = fields[1]
                    .strip_prefix("p=")
                    .and_then(|s| s.parse::<u64>().ok())
                    .ok_or_else(|| err(line, "bad p= field"))?;
                let k = fields[2]
                    .strip_prefix("k=")
                    .and_then(|s| s.parse::<usize>().ok())
                    .ok_or_else(|| err(line, "bad k= field"))?;
                header = Some((p, k));
            }
            Some((p, k)) => {
                if fields.len() != 2 {
                    return Err(err(line, "expected: <coeff> <x-exp>"));
                }
                let c = decimal_mod_p(fields[0], p, line)?;
                let xe = exponent(fields[1], line)?;
                if xe >= k {
                    return Err(err(line, format!("exponent {xe} beyond precision {k}")));
                }
                coeffs.push((xe, c));
            }
        }
    }
    let (p, k) = header.ok_or_else(|| err(0, "missing TRS1 header"))?;
    let mut v = vec![0u64; k];
    for (xe, c) in coeffs {
        v[xe] = c;
    }
    Ok((p, TruncSeries::from_coeffs(k, v)))
}
