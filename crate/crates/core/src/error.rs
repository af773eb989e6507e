use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("coin entries are not normalized: |a|^2 + |b|^2 = {0}")]
    CoinNotNormalized(f64),

    #[error("matrix is not of the special-unitary coin form [[a, b], [-b*, a*]]")]
    NotCoinForm,

    #[error("matrix is not unitary (max entry deviation of U U^dagger from identity: {0:e})")]
    NotUnitary(f64),

    #[error("rotation does not have order {order}: {reason}")]
    RotationOrder { order: u64, reason: String },

    #[error("field {field} is not 2*pi*n/{period} with n coprime to {period}")]
    FieldNotCommensurate { field: f64, period: u64 },

    #[error("dispersion relation out of range: cos(omega) = {0}")]
    DispersionOutOfRange(f64),

    #[error("{0} is outside the open interval (0, 1)")]
    OutOfUnitInterval(String),

    #[error("continued fraction: {0}")]
    ContinuedFraction(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
