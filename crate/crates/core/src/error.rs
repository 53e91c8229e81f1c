use thiserror::Error;

use crate::ambient::ValidationReport;

/// Every failure the engine can report.
///
/// The variants follow the failure categories the CLI maps onto exit codes:
/// everything here is a configuration-level problem (exit 2), never a failed
/// inequality.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite input data: {0}")]
    Data(String),

    #[error("ambient structure violates almost contact metric identities: {0}")]
    Structure(ValidationReport),

    #[error("domain error: {0}")]
    Domain(String),

    /// The structure vector field is not tangent to the submanifold; every
    /// inequality in this crate assumes it is.
    #[error("hypothesis violated: xi is not tangent to the submanifold (distance {residual:.3e})")]
    XiNotTangent { residual: f64 },

    #[error("degenerate classification: {0}")]
    DegenerateClassification(String),

    #[error("configuration error: {0}")]
    Configuration(String),
}

pub type Result<T> = std::result::Result<T, Error>;
