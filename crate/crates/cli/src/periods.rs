//! Gaussian period tables as JSON.

use freetrace_core::ffield::build_field_ctx;
use freetrace_core::gauss::GaussEngine;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// η_k^{(d)} for k = 0, …, d − 1, each as its p − 1 coordinates in the
/// basis 1, ζ, …, ζ^{p−2}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodDump {
    pub d: u64,
    pub integer: bool,
    pub values: Vec<Vec<i64>>,
}

pub fn cmd_periods(p: u64, s: u32, m: u32, d: u64, budget: u64) -> Result<PeriodDump, CliError> {
    let ctx = build_field_ctx(p, s, m, None)?;
    let engine = GaussEngine::with_budget(&ctx, budget)?;
    let table = engine.periods(d)?;
    let values = table
        .values
        .iter()
        .map(|v| v.coords().iter().map(|c| c.to_i64().expect("bounded by the field size")).collect())
        .collect();
    Ok(PeriodDump { d, integer: table.is_integral(), values })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f9_quadratic_periods() {
        let dump = cmd_periods(3, 1, 2, 2, 1000).unwrap();
        assert!(dump.integer);
        assert_eq!(dump.values[0], [1, 0]);
        let json = serde_json::to_string(&dump).unwrap();
        assert_eq!(serde_json::from_str::<PeriodDump>(&json).unwrap(), dump);
    }
}
