use freetrace_core::ffield::FieldError;
use freetrace_core::formulas::FormulaError;
use freetrace_core::gauss::GaussError;
use freetrace_core::numtheory::NumberTheoryError;
use freetrace_core::oracle::OracleError;

/// Everything a subcommand can fail with, each mapped to an exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("hints file line {line}: {reason}")]
    Hints { line: usize, reason: String },
    #[error("non-integer result: {0}")]
    NonInteger(String),
    #[error("budget: {0}")]
    Budget(String),
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Hints { .. } => 2,
            CliError::NonInteger(_) => 3,
            CliError::Budget(_) => 4,
            CliError::Mismatch(_) | CliError::Io(_) | CliError::Json(_) | CliError::Csv(_) => 1,
        }
    }
}

impl From<NumberTheoryError> for CliError {
    fn from(e: NumberTheoryError) -> Self {
        match e {
            NumberTheoryError::FactorizationTimeout(_) => CliError::Budget(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> Self {
        match e {
            FieldError::TooLarge { .. } | FieldError::SubfieldTooLarge(_) => CliError::Budget(e.to_string()),
            FieldError::NumberTheory(inner) => inner.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<GaussError> for CliError {
    fn from(e: GaussError) -> Self {
        match e {
            GaussError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            GaussError::Field(inner) => inner.into(),
            GaussError::NumberTheory(inner) => inner.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            OracleError::Field(inner) => inner.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<FormulaError> for CliError {
    fn from(e: FormulaError) -> Self {
        match e {
            FormulaError::NonIntegerResult(_) => CliError::NonInteger(e.to_string()),
            FormulaError::IdentityFailed(_) => CliError::Mismatch(e.to_string()),
            FormulaError::Gauss(inner) => inner.into(),
            FormulaError::NumberTheory(inner) => inner.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}
