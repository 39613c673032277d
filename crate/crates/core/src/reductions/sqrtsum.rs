//! Deciding `Σ √a_i > K` with two unit-demand pricing constructions.
//!
//! Both constructions add a dominant item `n + 1` whose value is `T/2` or
//! `T`, and compare two pricings: scheme 1 sells only item `n + 1` at `T/2`;
//! scheme 2 prices every item at its high value. Whichever earns more
//! answers the sum-of-square-roots question, and the comparison is made
//! exactly through the canonical square-root form.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::exactnum::rational::{int, ratio};
use crate::exactnum::{sqrtsum_compare, Rational, Sign, SqrtExpr};
use crate::unitdemand::{expected_revenue, BuyerModel, Price, PriceVector, TwoPointItem};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SqrtSumInstance {
    a: Vec<u64>,
    k: u64,
}

impl SqrtSumInstance {
    /// The integers are sorted; the question does not depend on their order.
    pub fn new(mut a: Vec<u64>, k: u64) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidInstance("no integers given".into()));
        }
        if a.contains(&0) || k == 0 {
            return Err(Error::InvalidInstance("integers and K must be positive".into()));
        }
        a.sort_unstable();
        Ok(SqrtSumInstance { a, k })
    }

    pub fn a(&self) -> &[u64] {
        &self.a
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn compare(&self) -> Result<Ordering> {
        sqrtsum_compare(&self.a, self.k)
    }

    fn require_strict(&self) -> Result<()> {
        match self.compare()? {
            Ordering::Equal => Err(Error::EqualityInstance),
            _ => Ok(()),
        }
    }
}

/// Items carrying square-root values with rational probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueConstruction {
    pub items: Vec<TwoPointItem>,
    pub scheme1: PriceVector,
    pub scheme2: PriceVector,
    pub epsilon: Rational,
    pub t: Rational,
}

/// Items carrying integer values with square-root probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityConstruction {
    pub items: Vec<TwoPointItem>,
    pub scheme1: PriceVector,
    pub scheme2: PriceVector,
    /// The integer `X` with `X > max(3K/n, a_n)`; `a_{n+1} = X²`.
    pub x: u64,
    pub t: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeComparison {
    /// `Greater` iff `Σ √a_i > K`.
    pub decision: Ordering,
    pub scheme1_revenue: SqrtExpr,
    pub scheme2_revenue: SqrtExpr,
}

fn q(r: Rational) -> SqrtExpr {
    SqrtExpr::from_rational(r)
}

/// Item `i ≤ n` is `√a_i` with probability `1/i`, else 0; item `n + 1` is
/// `T` with probability `1/2 − ε`, else `T/2`, where
/// `ε = K/(4n·max(K, a_n))` and `T = (1/2 + ε)K/(nε)`.
pub fn build_value_instance(sq: &SqrtSumInstance) -> Result<ValueConstruction> {
    sq.require_strict()?;
    let n = sq.len() as i64;
    let k = int(sq.k() as i64);
    let a_max = *sq.a().last().expect("nonempty");
    let epsilon = &k / int(4 * n * sq.k().max(a_max) as i64);
    let half = ratio(1, 2);
    let t = (&half + &epsilon) * &k / (int(n) * &epsilon);
    let half_t = &t / int(2);

    let mut items = Vec::with_capacity(sq.len() + 1);
    let mut scheme1 = Vec::with_capacity(sq.len() + 1);
    let mut scheme2 = Vec::with_capacity(sq.len() + 1);
    for (i, &a) in sq.a().iter().enumerate() {
        let root = SqrtExpr::sqrt(a)?;
        items.push(TwoPointItem::new(root.clone(), SqrtExpr::zero(), q(ratio(1, i as i64 + 1)))?);
        scheme1.push(Price::Unpriced);
        scheme2.push(Price::At(root));
    }
    items.push(TwoPointItem::new(q(t.clone()), q(half_t.clone()), q(&half - &epsilon))?);
    scheme1.push(Price::At(q(half_t.clone())));
    scheme2.push(Price::At(q(t.clone())));

    if q(half_t) <= SqrtExpr::sqrt(a_max)? {
        return Err(Error::ProofViolation("T/2 does not exceed the largest √a_i".into()));
    }
    Ok(ValueConstruction { items, scheme1, scheme2, epsilon, t })
}

/// `X = ⌊max(3K/n, a_n)⌋ + 1`, the smallest integer strictly above both.
fn smallest_x(sq: &SqrtSumInstance) -> u64 {
    let n = sq.len() as u64;
    let three_k_over_n = 3 * sq.k() / n;
    let a_max = *sq.a().last().expect("nonempty");
    three_k_over_n.max(a_max) + 1
}

/// Item `i ≤ n` is worth `i` with probability `1 − √(a_i/a_{i+1})`, else 0,
/// with `a_{n+1} = X²`; item `n + 1` is `T` with probability `1/4`, else
/// `T/2`, where `T = 3(n − K/X)`.
pub fn build_probability_instance(sq: &SqrtSumInstance) -> Result<ProbabilityConstruction> {
    sq.require_strict()?;
    let n = sq.len();
    let x = smallest_x(sq);
    let x_sq = x
        .checked_mul(x)
        .ok_or_else(|| Error::InvalidInstance("X² overflows u64".into()))?;
    let t = int(3) * (int(n as i64) - ratio(sq.k() as i64, x as i64));
    let half_t = &t / int(2);

    let mut items = Vec::with_capacity(n + 1);
    let mut scheme1 = Vec::with_capacity(n + 1);
    let mut scheme2 = Vec::with_capacity(n + 1);
    for i in 0..n {
        let next = if i + 1 < n { sq.a()[i + 1] } else { x_sq };
        let p = SqrtExpr::one() - SqrtExpr::sqrt_ratio(sq.a()[i], next)?;
        let value = q(int(i as i64 + 1));
        items.push(TwoPointItem::new(value.clone(), SqrtExpr::zero(), p)?);
        scheme1.push(Price::Unpriced);
        scheme2.push(Price::At(value));
    }
    items.push(TwoPointItem::new(q(t.clone()), q(half_t.clone()), q(ratio(1, 4)))?);
    scheme1.push(Price::At(q(half_t.clone())));
    scheme2.push(Price::At(q(t.clone())));

    if half_t <= int(n as i64) {
        return Err(Error::ProofViolation("T/2 does not exceed n".into()));
    }
    Ok(ProbabilityConstruction { items, scheme1, scheme2, x, t })
}

fn compare_schemes(
    items: &[TwoPointItem],
    scheme1: &[Price],
    scheme2: &[Price],
    scheme1_wins_means_greater: bool,
) -> Result<SchemeComparison> {
    let model = BuyerModel::default();
    let scheme1_revenue = expected_revenue(items, scheme1, model)?;
    let scheme2_revenue = expected_revenue(items, scheme2, model)?;
    let diff = &scheme1_revenue - &scheme2_revenue;
    let scheme1_wins = match diff.sign() {
        Sign::Positive => true,
        Sign::Negative => false,
        Sign::Zero => {
            return Err(Error::ProofViolation(
                "the two schemes tie on an instance with Σ√a ≠ K".into(),
            ))
        }
    };
    let decision = if scheme1_wins == scheme1_wins_means_greater {
        Ordering::Greater
    } else {
        Ordering::Less
    };
    Ok(SchemeComparison { decision, scheme1_revenue, scheme2_revenue })
}

/// Greater iff pricing every item at its high value beats selling only the
/// dominant item at `T/2`.
pub fn decide_via_values(sq: &SqrtSumInstance) -> Result<SchemeComparison> {
    let c = build_value_instance(sq)?;
    compare_schemes(&c.items, &c.scheme1, &c.scheme2, false)
}

/// Greater iff selling only the dominant item at `T/2` beats pricing every
/// item at its high value.
pub fn decide_via_probs(sq: &SqrtSumInstance) -> Result<SchemeComparison> {
    let c = build_probability_instance(sq)?;
    compare_schemes(&c.items, &c.scheme1, &c.scheme2, true)
}

impl ValueConstruction {
    /// The closed form for scheme 2: `(1/2 − ε)T + (1/2 + ε)/n · Σ √a_i`.
    pub fn scheme2_closed_form(&self, sq: &SqrtSumInstance) -> Result<SqrtExpr> {
        let half = ratio(1, 2);
        let n = int(sq.len() as i64);
        let mut total = q((&half - &self.epsilon) * &self.t);
        let w = (&half + &self.epsilon) / n;
        for &a in sq.a() {
            total = total + SqrtExpr::sqrt(a)?.scale(&w);
        }
        Ok(total)
    }
}

impl ProbabilityConstruction {
    /// The closed form for scheme 2: `T/4 + (3/4)(n − Σ √a_i / X)`.
    pub fn scheme2_closed_form(&self, sq: &SqrtSumInstance) -> Result<SqrtExpr> {
        let mut total = q(&self.t / int(4) + ratio(3, 4) * int(sq.len() as i64));
        let w = -ratio(3, 4) / int(self.x as i64);
        for &a in sq.a() {
            total = total + SqrtExpr::sqrt(a)?.scale(&w);
        }
        Ok(total)
    }
}
