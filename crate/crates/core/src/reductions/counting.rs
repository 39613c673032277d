//! Counting subsets with an optimal-price oracle.
//!
//! Given positive integers `a_1..a_n` and a target `T ≤ Σ a_i`, build a
//! sum-of-attributes instance with `n + 1` attributes:
//!
//! * attribute `i ≤ n` is `a_i` with probability `p₁ = 1/(2ⁿ·n·(n+1+Σa)²)`, else 0;
//! * the last attribute is `T + 1` with a free probability `p`, else 1.
//!
//! For every `p` the optimal price is 1 or `T + 1`, and the answer flips
//! exactly once, at `p* = (1/(T+1) − Q)/(1 − Q)` where `Q = Pr[V_n ≥ T]` is
//! the tail of the first `n` attributes. Bisecting on `p` pins down `p*`,
//! inverting gives `Q`, and the base-`(1/p₁ − 1)` digits of `Q/p₁ⁿ` are the
//! numbers `S(k)` of size-`k` subsets reaching `T`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::distmodel::{
    sum_distribution_with_budget, SoapInstance, SurvivalTable, TwoPointAttribute,
    DEFAULT_STATE_BUDGET,
};
use crate::error::{Error, Result};
use crate::exactnum::rational::{self, ratio};
use crate::exactnum::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetSumInstance {
    a: Vec<u64>,
    target: u64,
}

impl SubsetSumInstance {
    pub fn new(a: Vec<u64>, target: u64) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidInstance("no integers given".into()));
        }
        if a.contains(&0) {
            return Err(Error::InvalidInstance("integers must be positive".into()));
        }
        let total = a
            .iter()
            .try_fold(0u64, |acc, &x| acc.checked_add(x))
            .ok_or_else(|| Error::InvalidInstance("sum overflows u64".into()))?;
        if target == 0 {
            return Err(Error::InvalidInstance("target must be positive".into()));
        }
        if target > total {
            return Err(Error::InvalidInstance(format!("target {target} exceeds the total {total}")));
        }
        Ok(SubsetSumInstance { a, target })
    }

    pub fn a(&self) -> &[u64] {
        &self.a
    }

    pub fn target(&self) -> u64 {
        self.target
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.a.iter().sum()
    }
}

/// Constants of the constructed pricing instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountingParameters {
    /// Shared high-value probability of the first `n` attributes.
    pub p1: Rational,
    /// `1/p₁ − 1`, the digit base of `Q/p₁ⁿ`.
    pub base: BigUint,
    /// `n·p₁`, an upper bound on `Pr[V_n ≥ 1]`.
    pub epsilon: Rational,
    /// High value `T + 1` of the last attribute.
    pub top_value: u64,
    /// Low value of the last attribute.
    pub floor_value: u64,
}

impl CountingParameters {
    pub fn for_instance(ssi: &SubsetSumInstance) -> Self {
        let n = ssi.len() as u64;
        let spread = BigUint::from(n + 1 + ssi.total());
        let eps_den = (BigUint::one() << ssi.len()) * &spread * &spread;
        let p1_den = &eps_den * n;
        let base = &p1_den - 1u32;
        CountingParameters {
            p1: Rational::new(BigInt::one(), p1_den.into()),
            base,
            epsilon: Rational::new(BigInt::one(), eps_den.into()),
            top_value: ssi.target() + 1,
            floor_value: 1,
        }
    }

    /// `p₁ⁿ`, the weight of one unit of `Q/p₁ⁿ`.
    pub fn unit(&self, n: usize) -> Rational {
        num_traits::pow(self.p1.clone(), n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoPriceAnswer {
    PriceOne,
    /// Also reported when both prices tie, so the set of `p` answering this
    /// is a closed half-line.
    PriceTPlusOne,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleCall {
    pub p: Rational,
    pub answer: TwoPriceAnswer,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CountTranscript {
    pub instance: SubsetSumInstance,
    pub params: CountingParameters,
    pub calls: Vec<OracleCall>,
    /// Final bisection bracket `(lo, hi]` around the threshold.
    pub bracket: (Rational, Rational),
    pub pstar: Rational,
    /// `Pr[V_n ≥ T]`.
    pub q: Rational,
    /// `S(k)` for `k = 0..=n`.
    pub counts: Vec<u64>,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdSearch {
    pub pstar: Rational,
    pub q: Rational,
    pub bracket: (Rational, Rational),
    pub calls: Vec<OracleCall>,
}

/// Revenue at every integer price with the two-price checks applied.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseReport {
    pub p: Rational,
    /// `(B, revenue)` for `B = 1..=T + 2 + Σa`.
    pub revenues: Vec<(u64, Rational)>,
    pub optimal_price: u64,
    pub optimal_revenue: Rational,
}

/// The constructed instance with the distribution of the first `n`
/// attributes cached; it does not depend on `p`.
#[derive(Debug, Clone)]
pub struct CountingReduction {
    instance: SubsetSumInstance,
    params: CountingParameters,
    prefix: SurvivalTable<Rational>,
    /// `Pr[V_n ≥ s]·p₁⁻ⁿ` at each support point `s` of `V_n`; all integers.
    scaled_tails: Vec<(u64, BigInt)>,
    budget: usize,
}

fn violation(msg: String) -> Error {
    Error::ProofViolation(msg)
}

impl CountingReduction {
    pub fn new(ssi: &SubsetSumInstance) -> Result<Self> {
        Self::with_budget(ssi, DEFAULT_STATE_BUDGET)
    }

    pub fn with_budget(ssi: &SubsetSumInstance, budget: usize) -> Result<Self> {
        let params = CountingParameters::for_instance(ssi);
        let attrs = ssi
            .a()
            .iter()
            .map(|&a| TwoPointAttribute::new(a, 0, params.p1.clone()))
            .collect::<Result<Vec<_>>>()?;
        let prefix = sum_distribution_with_budget(&SoapInstance::new(attrs)?, budget)?;
        let scale = params.unit(ssi.len()).recip();
        let scaled_tails = prefix
            .points()
            .iter()
            .map(|pt| {
                let v = &pt.tail * &scale;
                debug_assert!(v.is_integer());
                (pt.sum, v.to_integer())
            })
            .collect();
        Ok(CountingReduction { instance: ssi.clone(), params, prefix, scaled_tails, budget })
    }

    pub fn params(&self) -> &CountingParameters {
        &self.params
    }

    pub fn instance(&self) -> &SubsetSumInstance {
        &self.instance
    }

    /// Distribution of `V_n`, the sum of the first `n` attributes.
    pub fn prefix_distribution(&self) -> &SurvivalTable<Rational> {
        &self.prefix
    }

    fn last_attribute(&self, p: &Rational) -> Result<TwoPointAttribute> {
        TwoPointAttribute::new(self.params.top_value, self.params.floor_value, p.clone())
    }

    pub fn build_instance(&self, p: &Rational) -> Result<SoapInstance> {
        let mut attrs: Vec<TwoPointAttribute> = self
            .instance
            .a()
            .iter()
            .map(|&a| TwoPointAttribute { high: a, low: 0, p_high: self.params.p1.clone() })
            .collect();
        attrs.push(self.last_attribute(p)?);
        SoapInstance::new(attrs)
    }

    /// Exact distribution of the full `(n+1)`-attribute sum at probability `p`.
    pub fn distribution(&self, p: &Rational) -> Result<SurvivalTable<Rational>> {
        self.prefix.convolve(&self.last_attribute(p)?, self.budget)
    }

    /// `Pr[V_n ≥ x]·p₁⁻ⁿ`.
    fn scaled_tail(&self, x: u64) -> &BigInt {
        static ZERO: std::sync::OnceLock<BigInt> = std::sync::OnceLock::new();
        let i = self.scaled_tails.partition_point(|(s, _)| *s < x);
        match self.scaled_tails.get(i) {
            Some((_, t)) => t,
            None => ZERO.get_or_init(BigInt::zero),
        }
    }

    /// Solves the constructed instance and reports which of the two prices is optimal.
    ///
    /// With `p = k/m`, revenue at price `B` is
    /// `B·(k·G(B−T−1) + (m−k)·G(B−1)) / (m·p₁⁻ⁿ)` where `G` is the tail of
    /// `V_n`, so candidate prices are compared on integer numerators. The
    /// candidates are the support points `s + 1` and `s + T + 1` of the
    /// full sum; ties resolve to the lower price.
    pub fn oracle(&self, p: &Rational) -> Result<TwoPriceAnswer> {
        if !rational::is_probability(p) {
            return Err(Error::InvalidInstance(format!("p = {p} outside [0, 1]")));
        }
        let (k, m) = (p.numer(), p.denom());
        let rest = m - k;
        let top = self.params.top_value;
        let score = |b: u64| -> BigInt {
            let high = self.scaled_tail(b.saturating_sub(top)) * k;
            let low = self.scaled_tail(b.saturating_sub(self.params.floor_value)) * &rest;
            (high + low) * b
        };
        let mut prices: Vec<u64> = self
            .scaled_tails
            .iter()
            .flat_map(|(s, _)| [s + self.params.floor_value, s + top])
            .collect();
        prices.sort_unstable();
        prices.dedup();
        let mut best: Option<(u64, BigInt)> = None;
        for b in prices {
            let v = score(b);
            if best.as_ref().is_none_or(|(_, bv)| v > *bv) {
                best = Some((b, v));
            }
        }
        let (best_price, best_score) = best.expect("the prefix distribution is nonempty");
        if score(top) == best_score {
            Ok(TwoPriceAnswer::PriceTPlusOne)
        } else if best_price == self.params.floor_value {
            Ok(TwoPriceAnswer::PriceOne)
        } else {
            Err(violation(format!(
                "optimal price {} at p = {} is neither 1 nor {}",
                best_price,
                rational::format_ratio(p),
                top
            )))
        }
    }

    /// Bisects on dyadic `p` for the threshold and recovers it exactly.
    ///
    /// The bracket `(lo, hi]` is narrowed to width `≤ p₁ⁿ/4`. With
    /// `c = 1/(T+1) ≤ 1/2`, `Q(p) = (c − p)/(1 − p)` has slope
    /// `(1 − c)/(1 − p)²`, which is below `2.2` on `[0, c + 1/100]`, so the
    /// midpoint's `Q` lies within `2.2·p₁ⁿ/8 < p₁ⁿ/2` of the true `Q`. Since
    /// the true `Q` is an integer multiple of `p₁ⁿ`, rounding recovers it.
    /// The result is then re-checked: it must fall in the bracket and make
    /// both prices earn exactly 1.
    pub fn find_threshold(&self) -> Result<ThresholdSearch> {
        let n = self.instance.len();
        let unit = self.params.unit(n);
        let resolution = &unit / rational::int(4);
        let mut calls = Vec::new();
        let ask = |p: Rational, calls: &mut Vec<OracleCall>| -> Result<TwoPriceAnswer> {
            let answer = self.oracle(&p)?;
            calls.push(OracleCall { p, answer });
            Ok(answer)
        };

        let mut lo = Rational::zero();
        let mut hi = Rational::one();
        if ask(lo.clone(), &mut calls)? != TwoPriceAnswer::PriceOne {
            return Err(violation("price T+1 already optimal at p = 0".into()));
        }
        if ask(hi.clone(), &mut calls)? != TwoPriceAnswer::PriceTPlusOne {
            return Err(violation("price 1 still optimal at p = 1".into()));
        }
        while &hi - &lo > resolution {
            let mid = (&lo + &hi) / rational::int(2);
            match ask(mid.clone(), &mut calls)? {
                TwoPriceAnswer::PriceTPlusOne => hi = mid,
                TwoPriceAnswer::PriceOne => lo = mid,
            }
        }

        let c = ratio(1, self.params.top_value as i64);
        let mid = (&lo + &hi) / rational::int(2);
        let q_est = (&c - &mid) / (Rational::one() - &mid);
        let units = (q_est / &unit).round();
        if units.is_negative() {
            return Err(violation("recovered a negative tail probability".into()));
        }
        let q = &unit * &units;
        let pstar = (&c - &q) / (Rational::one() - &q);

        if !(lo < pstar && pstar <= hi) {
            return Err(violation(format!(
                "recovered threshold {} lies outside the bracket ({}, {}]; oracle answers are not monotone",
                rational::format_ratio(&pstar),
                rational::format_ratio(&lo),
                rational::format_ratio(&hi)
            )));
        }
        let table = self.distribution(&pstar)?;
        let at_one = table.revenue_at_integer(1);
        let at_top = table.revenue_at_integer(self.params.top_value);
        if at_one != Rational::one() || at_top != Rational::one() {
            return Err(violation(format!(
                "revenues at the recovered threshold are {} (price 1) and {} (price T+1), not both 1",
                rational::format_ratio(&at_one),
                rational::format_ratio(&at_top)
            )));
        }
        ask(pstar.clone(), &mut calls)?;
        Ok(ThresholdSearch { pstar, q, bracket: (lo, hi), calls })
    }

    pub fn count(&self) -> Result<CountTranscript> {
        let ThresholdSearch { pstar, q, bracket, calls } = self.find_threshold()?;
        let n = self.instance.len();
        let counts = decode_counts(&q, n, &self.params.p1).map_err(|e| violation(e.to_string()))?;
        let count = counts.iter().sum();
        Ok(CountTranscript {
            instance: self.instance.clone(),
            params: self.params.clone(),
            calls,
            bracket,
            pstar,
            q,
            counts,
            count,
        })
    }

    pub fn verify_cases(&self, p: &Rational) -> Result<CaseReport> {
        if !rational::is_probability(p) {
            return Err(Error::InvalidInstance(format!("p = {p} outside [0, 1]")));
        }
        let table = self.distribution(p)?;
        let top = self.params.top_value;
        let total = self.instance.total();
        let eps = &self.params.epsilon;
        let one = Rational::one();
        let last = top + total + 1;
        let mut revenues = Vec::with_capacity(last as usize);
        let fail = |case: &str, b: u64, rev: &Rational| {
            violation(format!(
                "{case} fails at price {b} (p = {}): revenue {}",
                rational::format_ratio(p),
                rational::format_ratio(rev)
            ))
        };
        let case2_rate = p + (&one - p) * eps;
        let case4_cap = rational::int((top + total) as i64) * eps;

        for b in 1..=last {
            let rev = table.revenue_at_integer(b);
            let big_b = rational::int(b as i64);
            if b == 1 && rev != one {
                return Err(fail("case B = 1 (revenue exactly 1)", b, &rev));
            }
            if 1 < b && b < top && rev > &big_b * &case2_rate {
                return Err(fail("case 1 < B < T+1 (revenue ≤ B(p + (1−p)ε))", b, &rev));
            }
            if b == top && rev < p * &big_b {
                return Err(fail("case B = T+1 (revenue ≥ p(T+1))", b, &rev));
            }
            if top < b && b <= top + total && (rev > case4_cap || rev >= one) {
                return Err(fail("case T+1 < B ≤ T+1+Σa (revenue < 1)", b, &rev));
            }
            if b > top + total && !rev.is_zero() {
                return Err(fail("case B > T+1+Σa (revenue 0)", b, &rev));
            }
            // between integers the tail is constant, so B − 1/2 earns less than B
            let half_below = table.revenue_at(&(&big_b - ratio(1, 2)));
            if half_below > rev {
                return Err(fail("non-integral price dominance", b, &half_below));
            }
            revenues.push((b, rev));
        }

        let (optimal_price, optimal_revenue) = revenues
            .iter()
            .fold(None::<&(u64, Rational)>, |best, cur| match best {
                Some(b) if b.1 >= cur.1 => Some(b),
                _ => Some(cur),
            })
            .cloned()
            .expect("price range is nonempty");
        let at_top = &revenues[(top - 1) as usize].1;
        if optimal_revenue != one && *at_top != optimal_revenue {
            return Err(violation(format!(
                "optimal price {optimal_price} at p = {} is neither 1 nor T+1",
                rational::format_ratio(p)
            )));
        }
        Ok(CaseReport { p: p.clone(), revenues, optimal_price, optimal_revenue })
    }
}

/// The constructed pricing instance at free probability `p`.
pub fn build_counting_instance(ssi: &SubsetSumInstance, p: &Rational) -> Result<SoapInstance> {
    if !rational::is_probability(p) {
        return Err(Error::InvalidInstance(format!("p = {p} outside [0, 1]")));
    }
    CountingReduction::new(ssi)?.build_instance(p)
}

pub fn two_price_oracle(ssi: &SubsetSumInstance, p: &Rational) -> Result<TwoPriceAnswer> {
    if !rational::is_probability(p) {
        return Err(Error::InvalidInstance(format!("p = {p} outside [0, 1]")));
    }
    CountingReduction::new(ssi)?.oracle(p)
}

pub fn find_threshold(ssi: &SubsetSumInstance) -> Result<Rational> {
    Ok(CountingReduction::new(ssi)?.find_threshold()?.pstar)
}

pub fn count_subsets(ssi: &SubsetSumInstance) -> Result<u64> {
    Ok(count_subsets_with_transcript(ssi)?.count)
}

pub fn count_subsets_with_transcript(ssi: &SubsetSumInstance) -> Result<CountTranscript> {
    CountingReduction::new(ssi)?.count()
}

pub fn verify_two_price_cases(ssi: &SubsetSumInstance, p: &Rational) -> Result<CaseReport> {
    CountingReduction::new(ssi)?.verify_cases(p)
}

fn binomial(n: usize, k: usize) -> BigUint {
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Reads `S(0..=n)` off the base-`(1/p₁ − 1)` digits of `Q/p₁ⁿ`; the digit
/// of `B^(n−k)` is `S(k)`.
pub fn decode_counts(q: &Rational, n: usize, p1: &Rational) -> Result<Vec<u64>> {
    if !p1.is_positive() || !p1.numer().is_one() {
        return Err(Error::DecodeError(format!("p1 = {p1} is not the reciprocal of an integer")));
    }
    let base = p1.denom() - 1;
    if base <= BigInt::one() << n {
        return Err(Error::DecodeError(format!("base {base} does not exceed 2^{n}")));
    }
    let scaled = q / num_traits::pow(p1.clone(), n);
    if !scaled.is_integer() || scaled.is_negative() {
        return Err(Error::DecodeError(format!(
            "Q/p1^n = {} is not a nonnegative integer",
            rational::format_ratio(&scaled)
        )));
    }
    let mut rest = scaled.to_integer();
    let mut counts = vec![0u64; n + 1];
    for j in 0..=n {
        let (quot, digit) = rest.div_rem(&base);
        rest = quot;
        let k = n - j;
        let bound = BigInt::from(binomial(n, k));
        if digit > bound {
            return Err(Error::DecodeError(format!("S({k}) = {digit} exceeds C({n}, {k}) = {bound}")));
        }
        counts[k] = digit.to_u64().expect("bounded by a binomial coefficient");
    }
    if !rest.is_zero() {
        return Err(Error::DecodeError("Q/p1^n has more than n + 1 digits".into()));
    }
    Ok(counts)
}
