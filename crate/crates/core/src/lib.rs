//! Exact enumeration of plane and planar 2-trees.
//!
//! The crate is organised bottom-up:
//!
//! * [`catalan`]: extended Catalan numbers and the coefficients of the powers
//!   of the rooted-triangulation series `A = 1 + X A^2`.
//! * [`series`]: truncated univariate series and multivariate index series
//!   (cycle index / asymmetry index) with plethystic substitution.
//! * [`species_index`]: cycle and asymmetry index series of small molecular
//!   species, both from closed forms and from their stabilizer groups.
//! * [`molecular`]: molecular expansions, addition formulas and the full
//!   expansions of plane and planar 2-trees.
//! * [`enumerate`]: closed-form counts, generating functions and index series.
//! * [`kind`]: family, pointing and mode selectors.
//! * [`oracle`]: brute-force triangulations of polygons, used as ground truth.
//! * [`verify`]: the verification suites and the known-discrepancy ledger.

#![allow(clippy::needless_range_loop)]

pub mod catalan;
pub mod enumerate;
pub mod kind;
pub mod molecular;
pub mod oracle;
pub mod series;
pub mod species_index;
pub mod verify;

pub use catalan::{a_series, catalan, catalan_power, ExtendedCatalanIndex, PowerMethod};
pub use kind::{Family, Mode, Pointing, SymmetryGroup};
pub use series::{IndexSeries, Monomial, Sorts, UniSeries, Var};

/// Exact rational scalar used throughout.
pub type Rational = num_rational::BigRational;
