//! Structural facts about F_{q^m} over F_q.

use freetrace_core::formulas::FieldShape;
use freetrace_core::numtheory::{mersenne_quartic_criterion, radical_equality, Factored, RadicalSemiPrimitivity};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// (p, s) with q = p^s, if q is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let f = Factored::from_u64(q).ok()?;
    match f.factors() {
        [(p, s)] => Some((p.to_u64()?, *s)),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub q: u64,
    pub m: u32,
    /// Rad(q^m − 1) = Rad(Q): primitive elements are equidistributed over
    /// the nonzero traces.
    pub uniform: bool,
    pub semi_primitive: String,
    pub j: Option<u64>,
    #[serde(rename = "D")]
    pub d: String,
    #[serde(rename = "L_Q")]
    pub l_q: String,
    /// K_Q for N = q^m − 1.
    #[serde(rename = "K_Q")]
    pub k_q: String,
}

pub fn cmd_classify(q: u64, m: u32, hints: &[BigUint]) -> Result<Classification, CliError> {
    let (p, s) = prime_power(q).ok_or_else(|| CliError::Usage(format!("{q} is not a prime power")))?;
    if m < 2 {
        return Err(CliError::Usage("m must be at least 2".into()));
    }
    let shape = FieldShape::new(p, s, m, hints)?;
    let kind = mersenne_quartic_criterion(p, s, m)?;
    let semi_primitive = match kind {
        RadicalSemiPrimitivity::QuadraticExtension { .. } => "quadratic-extension",
        RadicalSemiPrimitivity::MersenneQuartic { .. } => "mersenne-quartic",
        RadicalSemiPrimitivity::NotSemiPrimitive => "none",
    };
    Ok(Classification {
        q,
        m,
        uniform: radical_equality(&BigUint::from(q), m as u64)?,
        semi_primitive: semi_primitive.to_string(),
        j: kind.witness(),
        d: shape.d().value().to_string(),
        l_q: shape.l_q().to_string(),
        k_q: shape.k_q(shape.order_factored()).value().to_string(),
    })
}
