//! Exact rational arithmetic, p-adic valuations and linear algebra over ℚ and
//! the local ring ℤ_(p).

pub mod matrix;
pub mod rational;
pub mod smith;

pub use matrix::RationalMatrix;
pub use rational::{
    format_rational, parse_rational, rational_from_frac, rational_from_i64, RationalScalar,
    Valuation, ValuationContext,
};
pub use smith::{smith_local, SmithDecomposition};
