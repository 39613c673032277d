//! Exact arithmetic: rationals, integer square roots, dyadic enclosures of
//! `√a`, and canonical sums of square roots with exact sign determination.

pub mod integer;
pub mod interval;
pub mod rational;
pub mod sqrtexpr;

pub use integer::{is_perfect_square, sqrt_floor, square_free_split, FactorBudget};
pub use interval::{sqrt_interval, DyadicInterval};
pub use rational::{format_ratio, parse_ratio, Rational};
pub use sqrtexpr::{
    normalize, normalize_with, sign, sqrtsum_compare, Sign, SignReport, SqrtExpr, SqrtTerm,
    INITIAL_SIGN_PRECISION,
};
