//! Exact scalars and the special functions built on them.

mod bernoulli;
mod rational;
mod stirling;
mod symmetric;

pub use bernoulli::{bernoulli_number, bernoulli_poly};
pub use rational::{binomial, factorial, ExactRational, ParseRationalError};
pub use stirling::{
    stirling1, stirling2, stirling_generalized_first, stirling_generalized_second, StirlingError,
};
pub use symmetric::SymmetricEvalContext;

/// Shorthand for `ExactRational::new(num, den)`.
pub fn q(num: i64, den: i64) -> ExactRational {
    ExactRational::new(num, den)
}
