//! Factorization hints: one line per integer, `n = p1^e1 * p2^e2 * ...`.
//! Blank lines and lines starting with `#` are skipped.

use std::path::Path;

use freetrace_core::numtheory::{is_prime, Factored};
use num_bigint::BigUint;

use crate::CliError;

fn bad(line: usize, reason: impl Into<String>) -> CliError {
    CliError::Hints { line, reason: reason.into() }
}

fn number(line: usize, text: &str) -> Result<BigUint, CliError> {
    let text = text.trim();
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad(line, format!("{text:?} is not a decimal integer")));
    }
    Ok(text.parse().expect("digits only"))
}

/// Parses and validates every line: each base must be prime and the
/// product must equal the left-hand side.
pub fn parse_hints(text: &str) -> Result<Vec<Factored>, CliError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let raw = raw.trim();
        if raw.is_empty() || raw.starts_with('#') {
            continue;
        }
        let (lhs, rhs) = raw.split_once('=').ok_or_else(|| bad(line, "missing '='"))?;
        let n = number(line, lhs)?;
        let mut pairs = Vec::new();
        for term in rhs.split('*') {
            let (base, exp) = match term.split_once('^') {
                Some((b, e)) => (number(line, b)?, number(line, e)?),
                None => (number(line, term)?, BigUint::from(1u32)),
            };
            if !is_prime(&base) {
                return Err(bad(line, format!("{base} is not prime")));
            }
            let exp = u32::try_from(&exp).map_err(|_| bad(line, "exponent too large"))?;
            if exp == 0 {
                return Err(bad(line, "zero exponent"));
            }
            pairs.push((base, exp));
        }
        let f = Factored::from_factors(pairs).map_err(|e| bad(line, e.to_string()))?;
        if f.value() != &n {
            return Err(bad(line, format!("factors multiply to {}, not {n}", f.value())));
        }
        out.push(f);
    }
    Ok(out)
}

pub fn load_hints(path: &Path) -> Result<Vec<Factored>, CliError> {
    parse_hints(&std::fs::read_to_string(path)?)
}

/// Every prime mentioned in the hints, deduplicated.
pub fn hint_primes(entries: &[Factored]) -> Vec<BigUint> {
    let mut primes: Vec<BigUint> = entries.iter().flat_map(|f| f.primes().cloned()).collect();
    primes.sort();
    primes.dedup();
    primes
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_validates() {
        let text = "# comment\n\n360 = 2^3 * 3^2 * 5\n97 = 97^1\n";
        let entries = parse_hints(text).unwrap();
        assert_eq!(entries.len(), 2);
        assert_eq!(hint_primes(&entries), [2u32, 3, 5, 97].map(BigUint::from));
    }

    #[test]
    fn rejects_bad_lines() {
        for (text, line) in [
            ("12 = 2^2 * 3\n10 = 2 * 6", 2),
            ("12 = 2^2 * 5", 1),
            ("12 2^2 * 3", 1),
            ("x = 2", 1),
            ("8 = 2^0 * 8", 1),
        ] {
            match parse_hints(text) {
                Err(CliError::Hints { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }
}
