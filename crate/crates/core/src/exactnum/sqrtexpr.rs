//! Exact ℚ-linear combinations of square roots of integers.
//!
//! Every [`SqrtExpr`] is kept in a canonical form `q + Σ r_d·√d` where each
//! `d ≥ 2` is square-free and each `r_d ≠ 0`. Because `{√d : d square-free}`
//! is linearly independent over ℚ, two expressions denote the same real
//! number exactly when their canonical forms are equal, which makes zero
//! testing symbolic. Nonzero signs are found by interval refinement.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign as BigSign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::integer::{square_free_split, FactorBudget};
use super::interval::sqrt_interval;
use super::rational::{self, Rational};
use crate::error::Result;

/// `coefficient · √radicand`, not yet normalized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SqrtTerm {
    pub coefficient: Rational,
    pub radicand: BigUint,
}

impl SqrtTerm {
    pub fn new(coefficient: Rational, radicand: impl Into<BigUint>) -> Self {
        SqrtTerm { coefficient, radicand: radicand.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn to_ordering(self) -> Ordering {
        match self {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }
}

/// Outcome of a sign determination, with the refinement effort it took.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignReport {
    pub sign: Sign,
    /// Number of interval evaluations performed (0 when decided symbolically).
    pub rounds: u32,
    /// Bits of precision of the final evaluation.
    pub precision: u32,
}

/// Precision of the first refinement round; each further round doubles it.
pub const INITIAL_SIGN_PRECISION: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SqrtExpr {
    rational: Rational,
    terms: BTreeMap<BigUint, Rational>,
}

impl Default for SqrtExpr {
    fn default() -> Self {
        SqrtExpr::zero()
    }
}

impl SqrtExpr {
    pub fn zero() -> Self {
        SqrtExpr { rational: Rational::zero(), terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        SqrtExpr::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        SqrtExpr { rational: r, terms: BTreeMap::new() }
    }

    pub fn from_integer(v: i64) -> Self {
        SqrtExpr::from_rational(rational::int(v))
    }

    /// `√n`.
    pub fn sqrt(n: impl Into<BigUint>) -> Result<Self> {
        normalize(&[SqrtTerm::new(Rational::one(), n)])
    }

    /// `√(num/den)` for positive `den`, written as `√(num·den) / den`.
    pub fn sqrt_ratio(num: u64, den: u64) -> Result<Self> {
        assert!(den > 0, "zero denominator under square root");
        let radicand = BigUint::from(num) * BigUint::from(den);
        normalize(&[SqrtTerm::new(rational::ratio(1, den as i64), radicand)])
    }

    pub fn rational_part(&self) -> &Rational {
        &self.rational
    }

    /// Irrational part as `(square-free radicand, coefficient)` pairs in ascending radicand order.
    pub fn terms(&self) -> impl Iterator<Item = (&BigUint, &Rational)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.rational.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.terms.is_empty().then_some(&self.rational)
    }

    /// Builds from parts that are already canonical (square-free keys ≥ 2).
    fn insert_canonical(&mut self, d: &BigUint, coef: Rational) {
        if coef.is_zero() {
            return;
        }
        match self.terms.get_mut(d) {
            Some(c) => {
                *c += coef;
                if c.is_zero() {
                    self.terms.remove(d);
                }
            }
            None => {
                self.terms.insert(d.clone(), coef);
            }
        }
    }

    pub fn scale(&self, k: &Rational) -> SqrtExpr {
        if k.is_zero() {
            return SqrtExpr::zero();
        }
        SqrtExpr {
            rational: &self.rational * k,
            terms: self.terms.iter().map(|(d, c)| (d.clone(), c * k)).collect(),
        }
    }

    /// Rational enclosure `[lo, hi]` of the value using `√d` intervals of width `2^-k`.
    pub fn enclosure(&self, k: u32) -> (Rational, Rational) {
        // Work over the common denominator L·2^k so the sum stays integral.
        let denom = self
            .terms
            .values()
            .fold(self.rational.denom().clone(), |acc, c| acc.lcm(c.denom()));
        let mut lo = (self.rational.numer() * (&denom / self.rational.denom())) << k as usize;
        let mut hi = lo.clone();
        for (d, c) in &self.terms {
            let iv = sqrt_interval(d, k);
            let (ilo, ihi) = iv.scaled_bounds();
            let n = c.numer() * (&denom / c.denom());
            if n.is_positive() {
                lo += &n * ilo;
                hi += &n * ihi;
            } else {
                lo += &n * ihi;
                hi += &n * ilo;
            }
        }
        let full = denom << k as usize;
        (Rational::new(lo, full.clone()), Rational::new(hi, full))
    }

    /// Exact sign. Zero is detected from the canonical form; otherwise the
    /// enclosure is refined at doubling precision until it excludes zero.
    pub fn sign(&self) -> Sign {
        self.sign_report().sign
    }

    pub fn sign_report(&self) -> SignReport {
        if self.terms.is_empty() {
            let sign = match self.rational.numer().sign() {
                BigSign::Minus => Sign::Negative,
                BigSign::NoSign => Sign::Zero,
                BigSign::Plus => Sign::Positive,
            };
            return SignReport { sign, rounds: 0, precision: 0 };
        }
        let mut k = INITIAL_SIGN_PRECISION;
        let mut rounds = 0;
        loop {
            rounds += 1;
            let (lo, hi) = self.enclosure(k);
            if lo.is_positive() {
                return SignReport { sign: Sign::Positive, rounds, precision: k };
            }
            if hi.is_negative() {
                return SignReport { sign: Sign::Negative, rounds, precision: k };
            }
            k *= 2;
        }
    }

    /// Approximate value, for display only.
    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.enclosure(64);
        (rational::to_f64(&lo) + rational::to_f64(&hi)) / 2.0
    }

    fn mul_ref(&self, other: &SqrtExpr) -> SqrtExpr {
        let mut out = SqrtExpr::from_rational(&self.rational * &other.rational);
        for (d, c) in &other.terms {
            out.insert_canonical(d, &self.rational * c);
        }
        for (d, c) in &self.terms {
            out.insert_canonical(d, c * &other.rational);
        }
        for (d1, c1) in &self.terms {
            for (d2, c2) in &other.terms {
                // √d1·√d2 = g·√((d1/g)(d2/g)); the cofactors are coprime and square-free
                let g = d1.gcd(d2);
                let kernel = (d1 / &g) * (d2 / &g);
                let coef = c1 * c2 * Rational::from_integer(BigInt::from(g));
                if kernel.is_one() {
                    out.rational += coef;
                } else {
                    out.insert_canonical(&kernel, coef);
                }
            }
        }
        out
    }

    fn add_ref(&self, other: &SqrtExpr) -> SqrtExpr {
        let mut out = self.clone();
        out.rational += &other.rational;
        for (d, c) in &other.terms {
            out.insert_canonical(d, c.clone());
        }
        out
    }

    fn neg_ref(&self) -> SqrtExpr {
        SqrtExpr {
            rational: -&self.rational,
            terms: self.terms.iter().map(|(d, c)| (d.clone(), -c)).collect(),
        }
    }
}

/// Canonicalizes a term list with the default factoring budget.
pub fn normalize(terms: &[SqrtTerm]) -> Result<SqrtExpr> {
    normalize_with(terms, &FactorBudget::default())
}

pub fn normalize_with(terms: &[SqrtTerm], budget: &FactorBudget) -> Result<SqrtExpr> {
    let mut out = SqrtExpr::zero();
    for t in terms {
        if t.coefficient.is_zero() || t.radicand.is_zero() {
            continue;
        }
        let (s, d) = square_free_split(&t.radicand, budget)?;
        let coef = &t.coefficient * rational::from_biguint(&s);
        if d.is_one() {
            out.rational += coef;
        } else {
            out.insert_canonical(&d, coef);
        }
    }
    Ok(out)
}

pub fn sign(e: &SqrtExpr) -> Sign {
    e.sign()
}

/// Trichotomy of `Σ √a_i` against `k`.
pub fn sqrtsum_compare(a: &[u64], k: u64) -> Result<Ordering> {
    let mut terms: Vec<SqrtTerm> = a.iter().map(|&x| SqrtTerm::new(Rational::one(), x)).collect();
    terms.push(SqrtTerm::new(-rational::int(k as i64), 1u32));
    Ok(normalize(&terms)?.sign().to_ordering())
}

impl PartialOrd for SqrtExpr {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SqrtExpr {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.terms.is_empty() && other.terms.is_empty() {
            return self.rational.cmp(&other.rational);
        }
        (self - other).sign().to_ordering()
    }
}

impl From<Rational> for SqrtExpr {
    fn from(r: Rational) -> Self {
        SqrtExpr::from_rational(r)
    }
}

macro_rules! forward_binop {
    ($Trait:ident, $method:ident, $inner:ident) => {
        impl $Trait<&SqrtExpr> for &SqrtExpr {
            type Output = SqrtExpr;
            fn $method(self, rhs: &SqrtExpr) -> SqrtExpr {
                self.$inner(rhs)
            }
        }
        impl $Trait<SqrtExpr> for SqrtExpr {
            type Output = SqrtExpr;
            fn $method(self, rhs: SqrtExpr) -> SqrtExpr {
                self.$inner(&rhs)
            }
        }
        impl $Trait<&SqrtExpr> for SqrtExpr {
            type Output = SqrtExpr;
            fn $method(self, rhs: &SqrtExpr) -> SqrtExpr {
                self.$inner(rhs)
            }
        }
    };
}

impl SqrtExpr {
    fn sub_ref(&self, other: &SqrtExpr) -> SqrtExpr {
        self.add_ref(&other.neg_ref())
    }
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl Neg for SqrtExpr {
    type Output = SqrtExpr;
    fn neg(self) -> SqrtExpr {
        self.neg_ref()
    }
}

impl Neg for &SqrtExpr {
    type Output = SqrtExpr;
    fn neg(self) -> SqrtExpr {
        self.neg_ref()
    }
}

impl Zero for SqrtExpr {
    fn zero() -> Self {
        SqrtExpr::zero()
    }
    fn is_zero(&self) -> bool {
        SqrtExpr::is_zero(self)
    }
}

impl One for SqrtExpr {
    fn one() -> Self {
        SqrtExpr::one()
    }
}

impl fmt::Display for SqrtExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "{}", self.rational);
        }
        let mut first = true;
        if !self.rational.is_zero() {
            write!(f, "{}", self.rational)?;
            first = false;
        }
        for (d, c) in &self.terms {
            let (neg, mag) = if c.is_negative() { (true, -c) } else { (false, c.clone()) };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            if mag.is_one() {
                write!(f, "√{d}")?;
            } else {
                write!(f, "{mag}·√{d}")?;
            }
            first = false;
        }
        Ok(())
    }
}
