use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::integer::sqrt_floor;
use super::rational::Rational;

/// A closed interval `[lo / 2^k, hi / 2^k]` with a shared power-of-two denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyadicInterval {
    lo: BigInt,
    hi: BigInt,
    precision: u32,
}

impl DyadicInterval {
    pub fn new(lo: BigInt, hi: BigInt, precision: u32) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        DyadicInterval { lo, hi, precision }
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Numerators over the shared denominator `2^precision`.
    pub fn scaled_bounds(&self) -> (&BigInt, &BigInt) {
        (&self.lo, &self.hi)
    }

    fn scale(&self) -> BigInt {
        BigInt::one() << self.precision
    }

    pub fn lo(&self) -> Rational {
        Rational::new(self.lo.clone(), self.scale())
    }

    pub fn hi(&self) -> Rational {
        Rational::new(self.hi.clone(), self.scale())
    }

    pub fn width(&self) -> Rational {
        Rational::new(&self.hi - &self.lo, self.scale())
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lo() <= *x && *x <= self.hi()
    }

    pub fn contains_interval(&self, other: &DyadicInterval) -> bool {
        self.lo() <= other.lo() && other.hi() <= self.hi()
    }
}

/// Encloses `√a` in a dyadic interval of width at most `2^-k`.
///
/// Exact square roots collapse to a point. Refinement is monotone: the
/// interval at `k + 1` lies inside the interval at `k`.
pub fn sqrt_interval(a: &BigUint, k: u32) -> DyadicInterval {
    let scaled = a << (2 * k as usize);
    let root = sqrt_floor(&scaled);
    let exact = &root * &root == scaled;
    let lo = BigInt::from(root);
    let hi = if exact { lo.clone() } else { &lo + 1 };
    DyadicInterval::new(lo, hi, k)
}

impl DyadicInterval {
    pub fn is_point(&self) -> bool {
        (&self.hi - &self.lo).is_zero()
    }
}
