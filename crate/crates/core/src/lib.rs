pub mod enumerate;
pub mod error;
pub mod injection;
pub mod perm;
pub mod series;
pub mod tableaux;

pub use enumerate::{GrowthRate, IntegerSeries};
pub use error::{Error, Result};
pub use perm::{Family, Pattern, PatternSet, Permutation, RankProfile};
pub use series::{GrowthEstimate, PolynomialODE, RationalPolynomial};
pub use tableaux::{Shape, StandardTableau};
