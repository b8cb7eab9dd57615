use std::path::PathBuf;

use clap::ValueEnum;

/// Hard cap on the dimension of any requested moduli space.
pub const MAX_DIM: i64 = 10;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone)]
pub struct Config {
    pub cache: Option<PathBuf>,
    pub format: Format,
    pub threads: Option<usize>,
    pub decimal: Option<usize>,
}

#[derive(Debug, thiserror::Error)]
pub enum UsageError {
    #[error("(g, n) = ({0}, {1}) is not stable: need 2g - 2 + n > 0")]
    Unstable(u32, usize),
    #[error("dimension {0} exceeds the cap {MAX_DIM}")]
    TooLarge(i64),
    #[error("{0}")]
    Invalid(String),
}

pub fn check_type(g: u32, n: usize) -> Result<(), UsageError> {
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(UsageError::Unstable(g, n));
    }
    let dim = 3 * g as i64 - 3 + n as i64;
    if dim > MAX_DIM {
        return Err(UsageError::TooLarge(dim));
    }
    Ok(())
}

pub fn check_bound(dimmax: i64) -> Result<(), UsageError> {
    if dimmax < 0 {
        return Err(UsageError::Invalid("bounds must be non-negative".into()));
    }
    if dimmax > MAX_DIM {
        return Err(UsageError::TooLarge(dimmax));
    }
    Ok(())
}
