//! Primitive elements of F_{p^4} with absolute trace 0 for Mersenne primes p,
//! against a stored table of known values.

use freetrace_core::formulas::z_mersenne_quartic;
use freetrace_core::numtheory::is_mersenne_prime;
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// (ℓ, Z_{p,4,p^4−1}(0)) for p = 2^ℓ − 1, the first ten Mersenne primes.
pub const KNOWN_VALUES: [(u32, &str); 10] = [
    (2, "8"),
    (3, "80"),
    (5, "6912"),
    (7, "464256"),
    (13, "111974400000"),
    (17, "519390596431872"),
    (19, "30572599504748544"),
    (31, "1968482608781191263129600000"),
    (61, "2159465982279294537199679191374585254935265280000000000"),
    (89, "51505739520752637174787391794396705748179291647742969497437393928825245616046080"),
];

/// Exponents computed when no hints file is given.
pub const DEFAULT_EXPONENTS: [u32; 8] = [2, 3, 5, 7, 13, 17, 19, 31];

/// Exponents whose p^4 − 1 is slow to factor blind.
pub const HINTED_EXPONENTS: [u32; 2] = [61, 89];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub ell: u32,
    pub p: String,
    pub value: String,
    pub expected: String,
    #[serde(rename = "match")]
    pub matched: bool,
}

pub fn expected_value(ell: u32) -> Option<&'static str> {
    KNOWN_VALUES.iter().find(|(l, _)| *l == ell).map(|(_, v)| *v)
}

pub fn cmd_table(exponents: &[u32], hints: &[BigUint]) -> Result<Vec<TableRow>, CliError> {
    let mut rows = Vec::new();
    for &ell in exponents {
        let expected = expected_value(ell)
            .ok_or_else(|| CliError::Usage(format!("no stored value for exponent {ell}")))?;
        let p = (BigUint::from(1u32) << ell) - 1u32;
        if !is_mersenne_prime(&p) {
            return Err(CliError::Usage(format!("2^{ell} - 1 is not prime")));
        }
        let value = z_mersenne_quartic(&p, hints)?.value.to_string();
        rows.push(TableRow {
            ell,
            p: p.to_string(),
            matched: value == expected,
            value,
            expected: expected.to_string(),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_rows_match() {
        let rows = cmd_table(&[2, 3, 5, 7], &[]).unwrap();
        assert!(rows.iter().all(|r| r.matched), "{rows:?}");
        assert_eq!(rows[0].p, "3");
    }

    #[test]
    fn rejects_unknown_exponents() {
        assert!(matches!(cmd_table(&[11], &[]), Err(CliError::Usage(_))));
    }
}
