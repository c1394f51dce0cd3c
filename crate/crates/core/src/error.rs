use thiserror::Error;

use crate::channel::User;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} must be finite and non-negative, got {value}")]
    NegativeOrNonFinite { name: &'static str, value: f64 },

    #[error("{name} must be finite and strictly positive, got {value}")]
    NotPositive { name: &'static str, value: f64 },

    #[error("{name} must lie in the open interval (0, 1), got {value}")]
    MarginOutOfRange { name: &'static str, value: f64 },

    #[error("SNR of user {user} must lie in [0, {max}], got {value}")]
    SnrOutOfRange { user: User, value: f64, max: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub(crate) fn non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::NegativeOrNonFinite { name, value })
    }
}

pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::NotPositive { name, value })
    }
}

pub(crate) fn open_unit(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value < 1.0 {
        Ok(value)
    } else {
        Err(Error::MarginOutOfRange { name, value })
    }
}
