//! Single-price selling of a sum-of-attributes good, equivalently the grand
//! bundle for an additive buyer with independent item values.
//!
//! The buyer accepts a price `P` whenever their value is at least `P`, so the
//! seller's revenue is `P · Pr[Σ X_i ≥ P]`. Between two adjacent support
//! points the tail is constant, so only support points need to be tried.

use num_bigint::{BigInt, RandBigInt};
use num_traits::{Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::distmodel::{sum_distribution, SoapInstance, SurvivalTable, TwoPointAttribute};
use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct PriceReport<S = Rational> {
    pub price: u64,
    pub revenue: S,
    /// Revenue at every candidate price, in ascending price order.
    pub curve: Option<Vec<(u64, S)>>,
}

impl<S: Scalar> SurvivalTable<S> {
    /// `P · Pr[total ≥ P]` for a nonnegative rational price.
    pub fn revenue_at(&self, price: &Rational) -> S {
        assert!(!price.is_negative(), "negative price");
        let threshold = price.ceil().to_integer();
        match threshold.to_u64() {
            Some(t) => S::from_rational(price) * self.survival(t),
            None => S::zero(),
        }
    }

    pub fn revenue_at_integer(&self, price: u64) -> S {
        S::from_u64(price) * self.survival(price)
    }

    /// Best price among the nonzero support points; ties go to the lowest price.
    pub fn optimal_price(&self, with_curve: bool) -> PriceReport<S> {
        let mut best = PriceReport { price: 0, revenue: S::zero(), curve: None };
        let mut curve = with_curve.then(Vec::new);
        for p in self.points().iter().filter(|p| p.sum > 0) {
            let rev = S::from_u64(p.sum) * p.tail.clone();
            if best.price == 0 || rev > best.revenue {
                best.price = p.sum;
                best.revenue = rev.clone();
            }
            if let Some(c) = curve.as_mut() {
                c.push((p.sum, rev));
            }
        }
        best.curve = curve;
        best
    }
}

pub fn revenue_at<S: Scalar>(instance: &SoapInstance<S>, price: &Rational) -> Result<S> {
    if price.is_negative() {
        return Err(Error::InvalidInstance(format!("negative price {price}")));
    }
    Ok(sum_distribution(instance)?.revenue_at(price))
}

pub fn optimal_price<S: Scalar>(instance: &SoapInstance<S>) -> Result<PriceReport<S>> {
    Ok(sum_distribution(instance)?.optimal_price(false))
}

pub fn optimal_price_with_curve<S: Scalar>(instance: &SoapInstance<S>) -> Result<PriceReport<S>> {
    Ok(sum_distribution(instance)?.optimal_price(true))
}

/// Optimal take-it-or-leave-it price for the bundle of all `items`.
pub fn grand_bundle_price<S: Scalar>(items: &[TwoPointAttribute<S>]) -> Result<PriceReport<S>> {
    optimal_price(&SoapInstance::new(items.to_vec())?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct McEstimate {
    /// Sample mean of the realized revenue.
    pub estimate: Rational,
    /// Standard error of the mean.
    pub std_error: f64,
    pub samples: u64,
}

/// Monte-Carlo estimate of `revenue_at`, deterministic in `seed`.
///
/// Each attribute is drawn with exactly its rational probability (a uniform
/// integer below the denominator compared against the numerator).
pub fn mc_revenue(
    instance: &SoapInstance<Rational>,
    price: &Rational,
    samples: u64,
    seed: u64,
) -> Result<McEstimate> {
    if samples == 0 {
        return Err(Error::InvalidInstance("at least one sample is required".into()));
    }
    if price.is_negative() {
        return Err(Error::InvalidInstance(format!("negative price {price}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut accepted = 0u64;
    for _ in 0..samples {
        let mut total = BigInt::zero();
        for a in instance.attributes() {
            let p = &a.p_high;
            let draw = rng.gen_bigint_range(&BigInt::zero(), p.denom());
            total += if draw < *p.numer() { a.high } else { a.low };
        }
        if Rational::from_integer(total) >= *price {
            accepted += 1;
        }
    }
    // Revenue per sample is either P or 0, so the variance is P²·q(1−q).
    let q = Rational::new(accepted.into(), samples.into());
    let estimate = price * &q;
    let qf = q.approx();
    let pf = price.approx();
    let var = if samples > 1 {
        pf * pf * qf * (1.0 - qf) * samples as f64 / (samples - 1) as f64
    } else {
        0.0
    };
    Ok(McEstimate { estimate, std_error: (var / samples as f64).sqrt(), samples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{int, ratio};
    use proptest::prelude::*;

    fn attr(u: u64, v: u64, n: i64, d: i64) -> TwoPointAttribute {
        TwoPointAttribute::new(u, v, ratio(n, d)).unwrap()
    }

    fn two() -> SoapInstance {
        SoapInstance::new(vec![attr(4, 0, 1, 2), attr(3, 0, 1, 2)]).unwrap()
    }

    #[test]
    fn revenue_examples() {
        let one = SoapInstance::new(vec![attr(10, 0, 1, 2)]).unwrap();
        assert_eq!(revenue_at(&one, &int(10)).unwrap(), int(5));
        assert_eq!(revenue_at(&two(), &int(3)).unwrap(), ratio(9, 4));
        assert_eq!(revenue_at(&two(), &int(8)).unwrap(), int(0));
        assert_eq!(revenue_at(&two(), &int(0)).unwrap(), int(0));
        // 5/2 behaves like threshold 3
        assert_eq!(revenue_at(&two(), &ratio(5, 2)).unwrap(), ratio(15, 8));
        assert!(revenue_at(&two(), &int(-1)).is_err());
    }

    #[test]
    fn optimal_examples() {
        let one = SoapInstance::new(vec![attr(10, 0, 1, 2)]).unwrap();
        let r = optimal_price(&one).unwrap();
        assert_eq!((r.price, r.revenue), (10, int(5)));

        let r = optimal_price_with_curve(&two()).unwrap();
        assert_eq!((r.price, r.revenue.clone()), (3, ratio(9, 4)));
        assert_eq!(
            r.curve.unwrap(),
            vec![(3, ratio(9, 4)), (4, int(2)), (7, ratio(7, 4))]
        );
        assert_eq!(grand_bundle_price(two().attributes()).unwrap().price, 3);
    }

    #[test]
    fn ties_go_low() {
        // price 1 and price 2 both earn 1
        let i = SoapInstance::new(vec![attr(2, 1, 1, 2)]).unwrap();
        let r = optimal_price(&i).unwrap();
        assert_eq!((r.price, r.revenue), (1, int(1)));
    }

    #[test]
    fn all_zero_values() {
        let i = SoapInstance::new(vec![attr(0, 0, 1, 2)]).unwrap();
        let r = optimal_price(&i).unwrap();
        assert_eq!((r.price, r.revenue), (0, int(0)));
    }

    #[test]
    fn mc_examples() {
        let one = SoapInstance::new(vec![attr(10, 0, 1, 2)]).unwrap();
        let est = mc_revenue(&one, &int(10), 100_000, 42).unwrap();
        let err = (est.estimate.approx() - 5.0).abs();
        assert!(err <= 5.0 * est.std_error, "{err} vs {}", est.std_error);
        assert_eq!(mc_revenue(&one, &int(10), 100_000, 42).unwrap(), est);

        let never = SoapInstance::new(vec![attr(1, 0, 0, 1)]).unwrap();
        assert_eq!(mc_revenue(&never, &int(1), 10, 7).unwrap().estimate, int(0));
        let always = SoapInstance::new(vec![attr(1, 0, 1, 1)]).unwrap();
        assert_eq!(mc_revenue(&always, &int(1), 10, 7).unwrap().estimate, int(1));
        assert!(mc_revenue(&always, &int(1), 0, 7).is_err());
    }

    fn arb_instance(max_n: usize, max_v: u64) -> impl Strategy<Value = SoapInstance> {
        prop::collection::vec((0..=max_v, 0..=max_v, 1i64..=9), 1..=max_n).prop_flat_map(|raw| {
            let n = raw.len();
            (Just(raw), prop::collection::vec(0i64..=9, n)).prop_map(|(raw, nums)| {
                let attrs = raw
                    .into_iter()
                    .zip(nums)
                    .map(|((u, v, d), k)| attr(u, v, k.min(d), d))
                    .collect();
                SoapInstance::new(attrs).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn grid_never_beats_support(i in arb_instance(10, 30)) {
            let table = sum_distribution(&i).unwrap();
            let best = table.optimal_price(false);
            let top = i.max_sum() as i64 * 64;
            for k in 0..=top {
                prop_assert!(table.revenue_at(&ratio(k, 64)) <= best.revenue);
            }
        }

        #[test]
        fn scaling_equivariance(i in arb_instance(6, 20), c in 1u64..=7) {
            let scaled = SoapInstance::new(
                i.attributes().iter().map(|a| attr(a.high * c, a.low * c, 0, 1))
                    .zip(i.attributes())
                    .map(|(mut s, a)| { s.p_high = a.p_high.clone(); s })
                    .collect(),
            ).unwrap();
            let base = optimal_price(&i).unwrap();
            let up = optimal_price(&scaled).unwrap();
            prop_assert_eq!(up.price, base.price * c);
            prop_assert_eq!(up.revenue, base.revenue * int(c as i64));
        }

        #[test]
        fn revenue_boundaries(i in arb_instance(6, 20), extra in 1u64..10) {
            prop_assert_eq!(revenue_at(&i, &int(0)).unwrap(), int(0));
            let above = int((i.max_sum() + extra) as i64);
            prop_assert_eq!(revenue_at(&i, &above).unwrap(), int(0));
        }
    }
}
