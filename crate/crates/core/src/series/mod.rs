//! Exact guessing of rational and D-finite generating functions, ODE
//! checking and recurrences, and growth estimates by differential
//! approximation.

mod diffapprox;
mod guess;
mod linalg;
mod ode;
mod poly;
mod roots;

pub use diffapprox::{
    differential_approximation, differential_approximation_with, ApproximationOutcome, Confidence,
    DiffApproxConfig, FitSummary, GrowthEstimate, SubdominantSingularity, RECOMMENDED_TERMS,
};
pub use guess::{
    dfinite_search_order, guess_dfinite, guess_dfinite_with, guess_rational, guess_rational_with,
    RationalFunction, DFINITE_HOLDOUT, MIN_RATIONAL_TERMS, RATIONAL_HOLDOUT,
};
pub use linalg::{integer_nullspace, nullity};
pub use ode::{
    ode_to_recurrence, verify_ode, verify_ode_rational, OdeCheck, PolynomialODE, Recurrence, A55_ODE_TEXT,
};
pub use poly::RationalPolynomial;
pub use roots::{dominant_root, root_isolation, Root, DEFAULT_PRECISION, MAX_PRECISION};
