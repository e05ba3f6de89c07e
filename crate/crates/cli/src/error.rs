use capacity_core::CapacityError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] CapacityError),
    /// A checked property did not hold.
    #[error("{0}")]
    Mismatch(String),
    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    /// 2 for bad input, 3 when a budget or cap refuses the work, 4 when a
    /// verification fails.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(CapacityError::CapExceeded { .. } | CapacityError::BudgetExceeded { .. }) => 3,
            CliError::Core(CapacityError::Verification(_) | CapacityError::RankCheck(_)) => 4,
            CliError::Mismatch(_) => 4,
            _ => 2,
        }
    }
}
