//! Independent two-point attributes and the exact distribution of their sum.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::scalar::Scalar;

/// Default cap on distinct achievable sums tracked by the convolution.
pub const DEFAULT_STATE_BUDGET: usize = 10_000_000;

/// Outcome enumeration is exponential; refuse beyond this many attributes.
pub const MAX_ENUMERATED_ATTRIBUTES: usize = 20;

/// A random variable equal to `high` with probability `p_high`, else `low`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPointAttribute<S = Rational> {
    pub high: u64,
    pub low: u64,
    pub p_high: S,
}

impl<S: Scalar> TwoPointAttribute<S> {
    pub fn new(high: u64, low: u64, p_high: S) -> Result<Self> {
        if p_high < S::zero() || p_high > S::one() {
            return Err(Error::InvalidInstance(format!("probability {p_high:?} outside [0, 1]")));
        }
        Ok(TwoPointAttribute { high, low, p_high })
    }

    pub fn max_value(&self) -> u64 {
        self.high.max(self.low)
    }

    pub fn p_low(&self) -> S {
        S::one() - self.p_high.clone()
    }
}

impl TwoPointAttribute<Rational> {
    pub fn approximate<T: Scalar>(&self) -> TwoPointAttribute<T> {
        TwoPointAttribute { high: self.high, low: self.low, p_high: T::from_rational(&self.p_high) }
    }
}

/// A nonempty collection of independent attributes whose sum is the buyer's value.
#[derive(Debug, Clone, PartialEq)]
pub struct SoapInstance<S = Rational> {
    attributes: Vec<TwoPointAttribute<S>>,
}

impl<S: Scalar> SoapInstance<S> {
    pub fn new(attributes: Vec<TwoPointAttribute<S>>) -> Result<Self> {
        if attributes.is_empty() {
            return Err(Error::InvalidInstance("instance has no attributes".into()));
        }
        let mut total = 0u64;
        for a in &attributes {
            total = total
                .checked_add(a.max_value())
                .ok_or_else(|| Error::InvalidInstance("maximum sum overflows u64".into()))?;
        }
        Ok(SoapInstance { attributes })
    }

    pub fn attributes(&self) -> &[TwoPointAttribute<S>] {
        &self.attributes
    }

    pub fn len(&self) -> usize {
        self.attributes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attributes.is_empty()
    }

    /// Largest achievable sum, `Σ max(u_i, v_i)`.
    pub fn max_sum(&self) -> u64 {
        self.attributes.iter().map(TwoPointAttribute::max_value).sum()
    }
}

impl SoapInstance<Rational> {
    pub fn approximate<T: Scalar>(&self) -> SoapInstance<T> {
        SoapInstance { attributes: self.attributes.iter().map(|a| a.approximate()).collect() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurvivalPoint<S = Rational> {
    pub sum: u64,
    pub mass: S,
    /// `Pr[total ≥ sum]`.
    pub tail: S,
}

/// Sorted support of a sum of attributes with point masses and upper tails.
#[derive(Debug, Clone, PartialEq)]
pub struct SurvivalTable<S = Rational> {
    points: Vec<SurvivalPoint<S>>,
}

impl<S: Scalar> SurvivalTable<S> {
    fn from_masses(masses: BTreeMap<u64, S>) -> Self {
        let mut points: Vec<SurvivalPoint<S>> = masses
            .into_iter()
            .filter(|(_, m)| !m.is_zero())
            .map(|(sum, mass)| SurvivalPoint { sum, mass, tail: S::zero() })
            .collect();
        let mut acc = S::zero();
        for p in points.iter_mut().rev() {
            acc = acc + p.mass.clone();
            p.tail = acc.clone();
        }
        SurvivalTable { points }
    }

    /// The point mass at 0.
    pub fn degenerate_zero() -> Self {
        SurvivalTable { points: vec![SurvivalPoint { sum: 0, mass: S::one(), tail: S::one() }] }
    }

    pub fn points(&self) -> &[SurvivalPoint<S>] {
        &self.points
    }

    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.points.iter().map(|p| p.sum)
    }

    pub fn max_sum(&self) -> u64 {
        self.points.last().map_or(0, |p| p.sum)
    }

    /// `Pr[total ≥ t]`.
    pub fn survival(&self, t: u64) -> S {
        let idx = self.points.partition_point(|p| p.sum < t);
        self.points.get(idx).map_or_else(S::zero, |p| p.tail.clone())
    }

    pub fn mass(&self, s: u64) -> S {
        match self.points.binary_search_by_key(&s, |p| p.sum) {
            Ok(i) => self.points[i].mass.clone(),
            Err(_) => S::zero(),
        }
    }

    /// Distribution of `total + X` for an independent attribute `X`.
    pub fn convolve(&self, attr: &TwoPointAttribute<S>, budget: usize) -> Result<Self> {
        let masses: BTreeMap<u64, S> = self.points.iter().map(|p| (p.sum, p.mass.clone())).collect();
        Ok(SurvivalTable::from_masses(convolve_step(masses, attr, budget)?))
    }
}

fn convolve_step<S: Scalar>(
    states: BTreeMap<u64, S>,
    attr: &TwoPointAttribute<S>,
    budget: usize,
) -> Result<BTreeMap<u64, S>> {
    let p_high = attr.p_high.clone();
    let p_low = attr.p_low();
    let mut next: BTreeMap<u64, S> = BTreeMap::new();
    let mut push = |s: u64, m: S| {
        next.entry(s).and_modify(|e| *e = e.clone() + m.clone()).or_insert(m);
    };
    for (s, m) in states {
        if !p_high.is_zero() {
            push(s + attr.high, m.clone() * p_high.clone());
        }
        if !p_low.is_zero() {
            push(s + attr.low, m * p_low.clone());
        }
    }
    if next.len() > budget {
        return Err(Error::BudgetExceeded { states: next.len(), budget });
    }
    Ok(next)
}

/// Exact distribution of `Σ X_i` with the default state budget.
pub fn sum_distribution<S: Scalar>(instance: &SoapInstance<S>) -> Result<SurvivalTable<S>> {
    sum_distribution_with_budget(instance, DEFAULT_STATE_BUDGET)
}

/// Sparse dynamic program over achievable sums, one convolution per attribute.
pub fn sum_distribution_with_budget<S: Scalar>(
    instance: &SoapInstance<S>,
    budget: usize,
) -> Result<SurvivalTable<S>> {
    let mut states = BTreeMap::from([(0u64, S::one())]);
    for attr in instance.attributes() {
        states = convolve_step(states, attr, budget)?;
    }
    Ok(SurvivalTable::from_masses(states))
}

pub fn survival<S: Scalar>(instance: &SoapInstance<S>, t: u64) -> Result<S> {
    Ok(sum_distribution(instance)?.survival(t))
}

/// All `2^n` outcomes as `(sum, probability)`, unaggregated.
///
/// Outcome `m` sets attribute `i` high when bit `i` of `m` is clear, so the
/// all-high outcome comes first.
pub fn enumerate_outcomes<S: Scalar>(instance: &SoapInstance<S>) -> Result<Vec<(u64, S)>> {
    let n = instance.len();
    if n > MAX_ENUMERATED_ATTRIBUTES {
        return Err(Error::TooManyAttributes(n));
    }
    let attrs = instance.attributes();
    let lows: Vec<S> = attrs.iter().map(TwoPointAttribute::p_low).collect();
    let outcomes = (0u32..1 << n)
        .map(|mask| {
            let mut sum = 0u64;
            let mut prob = S::one();
            for (i, a) in attrs.iter().enumerate() {
                if mask >> i & 1 == 0 {
                    sum += a.high;
                    prob = prob * a.p_high.clone();
                } else {
                    sum += a.low;
                    prob = prob * lows[i].clone();
                }
            }
            (sum, prob)
        })
        .collect();
    Ok(outcomes)
}
