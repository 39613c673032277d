//! Seeded random instance generators.

use std::cmp::Ordering;

use num_integer::Roots;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::distmodel::{SoapInstance, TwoPointAttribute};
use crate::error::{Error, Result};
use crate::exactnum::rational::ratio;
use crate::reductions::{SqrtSumInstance, SubsetSumInstance};

/// Largest probability denominator drawn for SOAP attributes.
pub const MAX_DENOMINATOR: i64 = 1000;

fn check_size(n: usize, max: u64) -> Result<()> {
    if n == 0 || max == 0 {
        return Err(Error::InvalidInstance("n and max must be positive".into()));
    }
    Ok(())
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` integers in `[1, max]` and a target drawn uniformly from `[1, Σa]`.
pub fn subset_sum<R: Rng>(rng: &mut R, n: usize, max: u64) -> Result<SubsetSumInstance> {
    check_size(n, max)?;
    let a: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=max)).collect();
    let total: u64 = a.iter().sum();
    let t = rng.gen_range(1..=total);
    SubsetSumInstance::new(a, t)
}

/// `n` integers in `[1, max]` with `K` within two of `⌊Σ √a_i⌋`, so both
/// outcomes and near ties are common. With `exclude_equal`, instances whose
/// sum equals `K` are redrawn.
pub fn sqrt_sum<R: Rng>(rng: &mut R, n: usize, max: u64, exclude_equal: bool) -> Result<SqrtSumInstance> {
    check_size(n, max)?;
    loop {
        let a: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=max)).collect();
        // ⌊Σ √a_i⌋ is within n of Σ ⌊√a_i⌋
        let floor_sum: u64 = a.iter().map(|x| x.sqrt()).sum();
        let center = floor_sum + rng.gen_range(0..=n as u64);
        let k = rng.gen_range(center.saturating_sub(2).max(1)..=center + 2);
        let inst = SqrtSumInstance::new(a, k)?;
        if !exclude_equal || inst.compare()? != Ordering::Equal {
            return Ok(inst);
        }
    }
}

/// `n` attributes with `0 ≤ v ≤ u ≤ maxval` and `p = num/den`, `den ≤ 1000`.
pub fn soap<R: Rng>(rng: &mut R, n: usize, maxval: u64) -> Result<SoapInstance> {
    check_size(n, maxval)?;
    let attrs = (0..n)
        .map(|_| {
            let u = rng.gen_range(0..=maxval);
            let v = rng.gen_range(0..=u);
            let den = rng.gen_range(1..=MAX_DENOMINATOR);
            let num = rng.gen_range(0..=den);
            TwoPointAttribute::new(u, v, ratio(num, den))
        })
        .collect::<Result<Vec<_>>>()?;
    SoapInstance::new(attrs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_sum_shape() {
        let a = subset_sum(&mut rng(1), 5, 20).unwrap();
        let b = subset_sum(&mut rng(1), 5, 20).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 5);
        assert!(a.a().iter().all(|&x| (1..=20).contains(&x)));
    }

    #[test]
    fn sqrt_sum_excludes_equal() {
        let mut r = rng(2);
        for _ in 0..200 {
            let s = sqrt_sum(&mut r, 4, 50, true).unwrap();
            assert_eq!(s.len(), 4);
            assert_ne!(s.compare().unwrap(), Ordering::Equal);
        }
    }

    #[test]
    fn soap_shape() {
        let s = soap(&mut rng(3), 6, 30).unwrap();
        assert_eq!(s.len(), 6);
        for a in s.attributes() {
            assert!(a.high <= 30 && a.low <= a.high);
            assert!(*a.p_high.denom() <= MAX_DENOMINATOR.into());
        }
    }

    #[test]
    fn rejects_empty_sizes() {
        assert!(subset_sum(&mut rng(0), 0, 5).is_err());
        assert!(soap(&mut rng(0), 3, 0).is_err());
    }
}
