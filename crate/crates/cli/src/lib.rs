//! Command-line plumbing for `freetrace-core`: argument types, hints files,
//! report rendering and the subcommands themselves.

pub mod classify;
pub mod count;
mod error;
pub mod hints;
pub mod periods;
pub mod report;
pub mod table;
pub mod verify;

pub use error::CliError;

/// Name of the environment variable that overrides the enumeration budget.
pub const BUDGET_ENV: &str = "FREETRACE_BUDGET";

/// The enumeration budget: an explicit value, else the environment
/// variable, else `default`.
pub fn resolve_budget(explicit: Option<u64>, default: u64) -> Result<u64, CliError> {
    if let Some(b) = explicit {
        return Ok(b);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{BUDGET_ENV} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(default),
    }
}
