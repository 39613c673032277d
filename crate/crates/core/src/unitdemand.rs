//! Unit-demand buyer over independent two-point items.
//!
//! Values, prices and probabilities are generic scalars; with [`SqrtExpr`]
//! every utility comparison is an exact sign computation.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::exactnum::SqrtExpr;
use crate::scalar::Scalar;

/// Outcome enumeration limit (`2^n` value profiles).
pub const MAX_ITEMS: usize = 20;

/// Largest Cartesian product of candidate prices searched exhaustively.
pub const MAX_SEARCH: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// Highest price wins; remaining ties go to the lowest index.
    #[default]
    MostExpensive,
    /// Lowest price wins; remaining ties go to the lowest index.
    Cheapest,
    LowestIndex,
}

/// Whether a purchase at exactly zero utility happens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PurchaseRule {
    /// Buy only when `value − price > 0`.
    StrictlyPositive,
    /// Buy when `value − price ≥ 0`, matching a buyer who accepts any price
    /// not exceeding their value.
    #[default]
    WeaklyPositive,
}

pub const DEFAULT_PURCHASE_RULE: PurchaseRule = PurchaseRule::WeaklyPositive;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BuyerModel {
    pub tie: TieBreak,
    pub purchase: PurchaseRule,
}

impl BuyerModel {
    pub fn new(tie: TieBreak, purchase: PurchaseRule) -> Self {
        BuyerModel { tie, purchase }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Price<S = SqrtExpr> {
    At(S),
    /// Infinite price; the item is never bought.
    Unpriced,
}

impl<S> Price<S> {
    pub fn amount(&self) -> Option<&S> {
        match self {
            Price::At(p) => Some(p),
            Price::Unpriced => None,
        }
    }
}

pub type PriceVector<S = SqrtExpr> = Vec<Price<S>>;

#[derive(Debug, Clone, PartialEq, Eq, Copy)]
pub enum Choice {
    Item(usize),
    NoPurchase,
}

/// Value `high` with probability `p_high`, else `low`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPointItem<S = SqrtExpr> {
    pub high: S,
    pub low: S,
    pub p_high: S,
}

impl<S: Scalar> TwoPointItem<S> {
    pub fn new(high: S, low: S, p_high: S) -> Result<Self> {
        if p_high < S::zero() || p_high > S::one() {
            return Err(Error::InvalidInstance(format!("probability {p_high:?} outside [0, 1]")));
        }
        if low > high {
            return Err(Error::InvalidInstance(format!("low value {low:?} exceeds high value {high:?}")));
        }
        Ok(TwoPointItem { high, low, p_high })
    }

    pub fn deterministic(value: S) -> Self {
        TwoPointItem { high: value.clone(), low: value, p_high: S::one() }
    }

    pub fn p_low(&self) -> S {
        S::one() - self.p_high.clone()
    }
}

/// The item a buyer with the given values purchases.
pub fn buyer_choice<S: Scalar>(values: &[S], prices: &[Price<S>], model: BuyerModel) -> Choice {
    assert_eq!(values.len(), prices.len(), "one price per item");
    let mut best: Option<(usize, S, &S)> = None;
    for (i, (v, p)) in values.iter().zip(prices).enumerate() {
        let Some(price) = p.amount() else { continue };
        let utility = v.clone() - price.clone();
        let acceptable = match utility.partial_cmp(&S::zero()) {
            Some(Ordering::Greater) => true,
            Some(Ordering::Equal) => model.purchase == PurchaseRule::WeaklyPositive,
            _ => false,
        };
        if !acceptable {
            continue;
        }
        let replace = match &best {
            None => true,
            Some((_, best_u, best_p)) => match utility.partial_cmp(best_u) {
                Some(Ordering::Greater) => true,
                Some(Ordering::Equal) => match model.tie {
                    TieBreak::MostExpensive => price > *best_p,
                    TieBreak::Cheapest => price < *best_p,
                    TieBreak::LowestIndex => false,
                },
                _ => false,
            },
        };
        if replace {
            best = Some((i, utility, price));
        }
    }
    best.map_or(Choice::NoPurchase, |(i, _, _)| Choice::Item(i))
}

/// Value profiles with nonzero probability, in a fixed depth-first order
/// (high before low, item 0 outermost). Items in `skip` are pinned to their
/// low value with probability one.
fn profiles<S: Scalar>(items: &[TwoPointItem<S>], skip: &[bool]) -> Vec<(Vec<S>, S)> {
    let mut out = Vec::new();
    let mut values = Vec::with_capacity(items.len());
    fn walk<S: Scalar>(
        items: &[TwoPointItem<S>],
        skip: &[bool],
        values: &mut Vec<S>,
        prob: S,
        out: &mut Vec<(Vec<S>, S)>,
    ) {
        let i = values.len();
        if i == items.len() {
            out.push((values.clone(), prob));
            return;
        }
        let item = &items[i];
        if skip[i] {
            values.push(item.low.clone());
            walk(items, skip, values, prob, out);
            values.pop();
            return;
        }
        for (v, p) in [(&item.high, item.p_high.clone()), (&item.low, item.p_low())] {
            if p.is_zero() {
                continue;
            }
            values.push(v.clone());
            walk(items, skip, values, prob.clone() * p, out);
            values.pop();
        }
    }
    walk(items, skip, &mut values, S::one(), &mut out);
    out
}

fn revenue_over<S: Scalar>(profiles: &[(Vec<S>, S)], prices: &[Price<S>], model: BuyerModel) -> S {
    let mut total = S::zero();
    for (values, prob) in profiles {
        if let Choice::Item(j) = buyer_choice(values, prices, model) {
            let paid = prices[j].amount().expect("chosen items are priced");
            total = total + prob.clone() * paid.clone();
        }
    }
    total
}

/// Exact expected payment of the buyer, summed over all value profiles.
pub fn expected_revenue<S: Scalar>(
    items: &[TwoPointItem<S>],
    prices: &[Price<S>],
    model: BuyerModel,
) -> Result<S> {
    if items.len() > MAX_ITEMS {
        return Err(Error::TooManyItems(items.len()));
    }
    if items.len() != prices.len() {
        return Err(Error::InvalidInstance(format!(
            "{} prices for {} items",
            prices.len(),
            items.len()
        )));
    }
    // unpriced items never influence the choice, so their values are not enumerated
    let skip: Vec<bool> = prices.iter().map(|p| matches!(p, Price::Unpriced)).collect();
    Ok(revenue_over(&profiles(items, &skip), prices, model))
}

/// Exhaustive search over the Cartesian product of per-item candidate prices.
///
/// Returns the first maximizer in odometer order (item 0 most significant).
pub fn best_over_candidates<S: Scalar>(
    items: &[TwoPointItem<S>],
    candidates: &[Vec<Price<S>>],
    model: BuyerModel,
) -> Result<(PriceVector<S>, S)> {
    if items.len() > MAX_ITEMS {
        return Err(Error::TooManyItems(items.len()));
    }
    if candidates.len() != items.len() {
        return Err(Error::InvalidInstance(format!(
            "{} candidate sets for {} items",
            candidates.len(),
            items.len()
        )));
    }
    if candidates.iter().any(Vec::is_empty) {
        return Err(Error::InvalidInstance("empty candidate price set".into()));
    }
    let size = candidates.iter().try_fold(1u128, |acc, c| acc.checked_mul(c.len() as u128));
    match size {
        Some(s) if s <= MAX_SEARCH => {}
        Some(s) => return Err(Error::SearchTooLarge(s)),
        None => return Err(Error::SearchTooLarge(u128::MAX)),
    }

    let all = profiles(items, &vec![false; items.len()]);
    let mut idx = vec![0usize; items.len()];
    let mut best: Option<(PriceVector<S>, S)> = None;
    loop {
        let prices: PriceVector<S> = idx.iter().zip(candidates).map(|(&k, c)| c[k].clone()).collect();
        let rev = revenue_over(&all, &prices, model);
        if best.as_ref().is_none_or(|(_, b)| rev > *b) {
            best = Some((prices, rev));
        }
        // advance the odometer, last item fastest
        let mut pos = items.len();
        loop {
            if pos == 0 {
                return Ok(best.expect("at least one vector evaluated"));
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < candidates[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Each item's two support values plus `Unpriced`, deduplicated.
pub fn support_candidates<S: Scalar>(items: &[TwoPointItem<S>]) -> Vec<Vec<Price<S>>> {
    items
        .iter()
        .map(|it| {
            let mut c = vec![Price::At(it.low.clone())];
            if it.high != it.low {
                c.push(Price::At(it.high.clone()));
            }
            c.push(Price::Unpriced);
            c
        })
        .collect()
}
