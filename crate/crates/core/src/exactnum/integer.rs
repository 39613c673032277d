//! Integer square roots and square-free decomposition.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// `⌊√n⌋`.
pub fn sqrt_floor(n: &BigUint) -> BigUint {
    n.sqrt()
}

pub fn is_perfect_square(n: &BigUint) -> bool {
    let r = n.sqrt();
    &r * &r == *n
}

/// Limits on how hard [`square_free_split`] works before giving up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorBudget {
    /// Trial division runs over all candidates up to this bound.
    pub trial_bound: u64,
    /// Cofactors left after trial division that need Pollard rho must fit in
    /// this many bits. Keep it at or below 81: Miller-Rabin with the first
    /// thirteen prime bases is deterministic below 3.317·10²⁴.
    pub max_rho_bits: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget { trial_bound: 1 << 16, max_rho_bits: 81 }
    }
}

/// Splits `n = s²·d` with `d` square-free. `n = 0` maps to `(0, 1)`.
pub fn square_free_split(n: &BigUint, budget: &FactorBudget) -> Result<(BigUint, BigUint)> {
    if n.is_zero() {
        return Ok((BigUint::zero(), BigUint::one()));
    }
    let mut m = n.clone();
    let mut square = BigUint::one();
    let mut kernel = BigUint::one();

    let absorb = |p: &BigUint, e: u32, square: &mut BigUint, kernel: &mut BigUint| {
        *square *= p.pow(e / 2);
        if e % 2 == 1 {
            *kernel *= p;
        }
    };

    let mut candidate = 2u64;
    while candidate <= budget.trial_bound {
        let p = BigUint::from(candidate);
        if &p * &p > m {
            break;
        }
        let mut e = 0;
        while (&m % &p).is_zero() {
            m /= &p;
            e += 1;
        }
        if e > 0 {
            absorb(&p, e, &mut square, &mut kernel);
        }
        candidate += if candidate == 2 { 1 } else { 2 };
    }

    if m.is_one() {
        return Ok((square, kernel));
    }
    // every prime factor of m now exceeds the trial bound (or m is prime)
    let bound = BigUint::from(budget.trial_bound);
    if is_perfect_square(&m) {
        square *= m.sqrt();
        return Ok((square, kernel));
    }
    if m < &bound * &bound * &bound {
        // at most two prime factors, and not a square: square-free
        kernel *= m;
        return Ok((square, kernel));
    }
    if m.bits() > budget.max_rho_bits {
        return Err(Error::InstanceTooLarge(format!(
            "radicand {n} leaves a {}-bit cofactor after trial division (limit {} bits)",
            m.bits(),
            budget.max_rho_bits
        )));
    }
    let mut primes = Vec::new();
    factor_into(&m, &mut primes);
    primes.sort();
    for group in primes.chunk_by(|a, b| a == b) {
        absorb(&group[0], group.len() as u32, &mut square, &mut kernel);
    }
    Ok((square, kernel))
}

const MR_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Deterministic for `n < 3.317·10²⁴`.
fn is_prime(n: &BigUint) -> bool {
    if *n < BigUint::from(2u32) {
        return false;
    }
    for &b in &MR_BASES {
        let b = BigUint::from(b);
        if *n == b {
            return true;
        }
        if (n % &b).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n_minus_one = n - &one;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    'bases: for &b in &MR_BASES {
        let mut x = BigUint::from(b).modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == n_minus_one {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn factor_into(n: &BigUint, out: &mut Vec<BigUint>) {
    if n.is_one() {
        return;
    }
    if is_prime(n) {
        out.push(n.clone());
        return;
    }
    let f = pollard_rho(n);
    factor_into(&f, out);
    factor_into(&(n / &f), out);
}

/// Returns a nontrivial factor of the composite `n`.
fn pollard_rho(n: &BigUint) -> BigUint {
    if n.is_even() {
        return BigUint::from(2u32);
    }
    let one = BigUint::one();
    let mut c = one.clone();
    loop {
        let step = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        let mut d = one.clone();
        while d.is_one() {
            x = step(&x);
            y = step(&step(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            d = diff.gcd(n);
        }
        if d != *n {
            return d;
        }
        c += 1u32;
    }
}
