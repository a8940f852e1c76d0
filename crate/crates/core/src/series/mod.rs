//! Exact truncated series.
//!
//! [`UniSeries`] is a dense univariate power series with rational
//! coefficients. [`IndexSeries`] is a sparse multivariate series in the
//! power-sum variables `x_1, x_2, ...` (and `y_1, y_2, ...` for two-sort
//! species) where `x_i` and `y_i` carry weight `i`.

mod index;
mod uni;

pub use index::{IndexSeries, Monomial, SeriesError, Sorts, Specialization, Var};
pub use uni::UniSeries;

/// Default weight cap for index series.
pub const DEFAULT_CAP: u32 = 30;
