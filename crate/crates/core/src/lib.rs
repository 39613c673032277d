//! Exact single-buyer Bayesian pricing over independent two-point
//! distributions, together with executable versions of three hardness
//! reductions that embed counting and sum-of-square-roots problems in
//! pricing instances.
//!
//! The algorithms are generic over a [`Scalar`]: [`Rational`] and
//! [`SqrtExpr`] give exact answers, `f64` gives quick approximations.

pub mod cli;
pub mod distmodel;
pub mod error;
pub mod exactnum;
pub mod format;
pub mod reductions;
pub mod scalar;
pub mod soap;
pub mod unitdemand;

pub use error::{Error, Result};
pub use exactnum::{Rational, Sign, SqrtExpr, SqrtTerm};
pub use scalar::Scalar;

pub type SoapInstanceF64 = distmodel::SoapInstance<f64>;
pub type SurvivalTableF64 = distmodel::SurvivalTable<f64>;
pub type PriceReportF64 = soap::PriceReport<f64>;

pub type RationalItem = unitdemand::TwoPointItem<Rational>;
pub type SqrtItem = unitdemand::TwoPointItem<SqrtExpr>;
pub type RationalPriceVector = unitdemand::PriceVector<Rational>;
pub type SqrtPriceVector = unitdemand::PriceVector<SqrtExpr>;
