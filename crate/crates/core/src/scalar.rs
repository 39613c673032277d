//! The scalar abstraction shared by the distribution, pricing, and
//! unit-demand code.
//!
//! Exact work uses [`Rational`] or [`SqrtExpr`]; `f64`/`f32` instantiate the
//! same algorithms for quick approximate sweeps. Only ring operations and a
//! total-enough order are required, so square-root expressions (which are not
//! closed under division in this crate) qualify.

use std::fmt::Debug;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exactnum::{rational, Rational, SqrtExpr};

pub trait Scalar:
    Clone + Debug + PartialOrd + Zero + One + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self>
{
    fn from_rational(r: &Rational) -> Self;

    fn from_u64(v: u64) -> Self;

    fn approx(&self) -> f64;
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn from_u64(v: u64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn approx(&self) -> f64 {
        rational::to_f64(self)
    }
}

impl Scalar for SqrtExpr {
    fn from_rational(r: &Rational) -> Self {
        SqrtExpr::from_rational(r.clone())
    }
    fn from_u64(v: u64) -> Self {
        SqrtExpr::from_rational(Rational::from_integer(BigInt::from(v)))
    }
    fn approx(&self) -> f64 {
        self.to_f64()
    }
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        rational::to_f64(r)
    }
    fn from_u64(v: u64) -> Self {
        v as f64
    }
    fn approx(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    fn from_rational(r: &Rational) -> Self {
        rational::to_f64(r) as f32
    }
    fn from_u64(v: u64) -> Self {
        v as f32
    }
    fn approx(&self) -> f64 {
        *self as f64
    }
}
