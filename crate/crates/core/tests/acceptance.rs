//! Acceptance suite. Prints one `[PASS]`/`[FAIL]` line per criterion and
//! exits nonzero if any criterion fails.
//!
//! Every check compares the library against an oracle written here: brute
//! force subset enumeration, direct outcome enumeration, closed-form
//! constants, and a fixed-point Newton square root with an explicit error
//! bound.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use bayes_pricing::cli::generate;
use bayes_pricing::distmodel::{enumerate_outcomes, sum_distribution};
use bayes_pricing::exactnum::rational::{int, ratio};
use bayes_pricing::exactnum::{normalize, sqrt_interval, sqrtsum_compare, Sign, SqrtTerm};
use bayes_pricing::reductions::{
    build_probability_instance, build_value_instance, decide_via_probs, decide_via_values,
    CountingParameters, CountingReduction, SqrtSumInstance, SubsetSumInstance, TwoPriceAnswer,
};
use bayes_pricing::Rational;
use num_bigint::{BigInt, BigUint, Sign as BigSign};
use num_traits::{One, Signed, Zero};
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn timed_limit(elapsed: Duration, limit_s: u64) -> (bool, String) {
    let ok = elapsed < Duration::from_secs(limit_s);
    (ok, format!("{:.1} s, limit {limit_s} s", elapsed.as_secs_f64()))
}

// ---------------------------------------------------------------- oracles

fn brute_count(a: &[u64], t: u64) -> u64 {
    (0u32..1 << a.len())
        .filter(|m| (0..a.len()).filter(|i| m >> i & 1 == 1).map(|i| a[i]).sum::<u64>() >= t)
        .count() as u64
}

/// Distribution of the first `n` attributes of the counting construction,
/// by direct enumeration of all `2ⁿ` subsets.
fn brute_prefix(a: &[u64], p1: &Rational) -> BTreeMap<u64, Rational> {
    let n = a.len();
    let q1 = Rational::one() - p1;
    let mut dist = BTreeMap::new();
    for mask in 0u32..1 << n {
        let k = mask.count_ones() as usize;
        let sum: u64 = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| a[i]).sum();
        let mass = num_traits::pow(p1.clone(), k) * num_traits::pow(q1.clone(), n - k);
        *dist.entry(sum).or_insert_with(Rational::zero) += mass;
    }
    dist
}

/// Revenue at every integer price `1..=max_price` once the last attribute
/// (`T+1` w.p. `p`, else 1) is added.
fn brute_revenues(prefix: &BTreeMap<u64, Rational>, t: u64, p: &Rational, max_price: u64) -> Vec<Rational> {
    let mut dist: BTreeMap<u64, Rational> = BTreeMap::new();
    for (s, m) in prefix {
        *dist.entry(s + t + 1).or_insert_with(Rational::zero) += m * p;
        *dist.entry(s + 1).or_insert_with(Rational::zero) += m * (Rational::one() - p);
    }
    let mut tail: Rational = dist.range(max_price + 1..).map(|(_, m)| m.clone()).sum();
    let mut revenues = vec![Rational::zero(); max_price as usize];
    for b in (1..=max_price).rev() {
        if let Some(m) = dist.get(&b) {
            tail += m;
        }
        revenues[b as usize - 1] = int(b as i64) * &tail;
    }
    revenues
}

/// `⌊√n⌋` by Newton iteration from above.
fn newton_isqrt(n: &BigUint) -> BigUint {
    if n.is_zero() {
        return BigUint::zero();
    }
    let mut x = BigUint::one() << n.bits().div_ceil(2);
    loop {
        let y = (&x + n / &x) >> 1;
        if y >= x {
            return x;
        }
        x = y;
    }
}

const FIXED_BITS: usize = 256;

/// Sign of `Σ c_i √d_i` from a 256-bit fixed-point evaluation, or `None`
/// when the certified error bound does not separate the value from zero.
///
/// With `s_i = ⌊√d_i · 2²⁵⁶⌋` and `c_i = n_i/m_i`, each term
/// `⌊n_i s_i / m_i⌋` (floor toward −∞) is within `|c_i| + 1` of
/// `c_i √d_i · 2²⁵⁶`, so the total error is below `Σ (|c_i| + 1)`.
fn fixed_point_sign(terms: &[SqrtTerm]) -> Option<Sign> {
    let mut approx = BigInt::zero();
    let mut bound = Rational::zero();
    for t in terms {
        let s = BigInt::from(newton_isqrt(&(&t.radicand << (2 * FIXED_BITS))));
        let num = t.coefficient.numer() * s;
        approx += num_integer::Integer::div_floor(&num, t.coefficient.denom());
        bound += t.coefficient.abs() + Rational::one();
    }
    let mag = Rational::from_integer(approx.abs());
    if mag <= bound {
        return None;
    }
    Some(match approx.sign() {
        BigSign::Minus => Sign::Negative,
        BigSign::NoSign => Sign::Zero,
        BigSign::Plus => Sign::Positive,
    })
}

/// Whether `Σ c_i √d_i` vanishes, by grouping terms on square-free kernels
/// found with naive trial division.
fn symbolic_zero(terms: &[SqrtTerm]) -> bool {
    let mut groups: BTreeMap<u64, Rational> = BTreeMap::new();
    for t in terms {
        let mut rest: u64 = t.radicand.to_string().parse().expect("radicand fits in u64");
        if rest == 0 {
            continue;
        }
        let (mut square, mut kernel) = (1u64, 1u64);
        let mut f = 2u64;
        while f * f <= rest {
            while rest.is_multiple_of(f * f) {
                rest /= f * f;
                square *= f;
            }
            if rest.is_multiple_of(f) {
                rest /= f;
                kernel *= f;
            }
            f += 1;
        }
        kernel *= rest;
        *groups.entry(kernel).or_insert_with(Rational::zero) += &t.coefficient * int(square as i64);
    }
    groups.values().all(Zero::is_zero)
}

// ---------------------------------------------------------------- corpus

const SUBSET_INSTANCES: usize = 200;

fn subset_corpus() -> Vec<SubsetSumInstance> {
    let mut rng = generate::rng(0xAC01);
    (0..SUBSET_INSTANCES)
        .map(|_| {
            let n = rng.gen_range(1..=8);
            generate::subset_sum(&mut rng, n, 20).expect("valid generator parameters")
        })
        .collect()
}

/// Uniform rationals in `[0, 1]` mixed with points clustered around `p*`.
fn sample_ps<R: Rng>(rng: &mut R, count: usize, pstar: &Rational, unit: &Rational) -> Vec<Rational> {
    let mut ps = Vec::with_capacity(count);
    for i in 0..count {
        let p = match i % 4 {
            0 | 1 => {
                let den = rng.gen_range(1..=1000i64);
                ratio(rng.gen_range(0..=den), den)
            }
            2 => pstar + unit * int(rng.gen_range(-8..=8)),
            _ => pstar + ratio(rng.gen_range(-1000..=1000), 1 << 20),
        };
        let p = p.clamp(Rational::zero(), Rational::one());
        ps.push(p);
    }
    ps
}

// ---------------------------------------------------------------- criteria

fn ac1(corpus: &[SubsetSumInstance]) -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    for inst in corpus {
        let got = CountingReduction::new(inst).and_then(|r| r.count()).map(|t| t.count);
        let want = brute_count(inst.a(), inst.target());
        if got.as_ref().ok() != Some(&want) {
            bad.push(format!("a={:?} T={} got {got:?} want {want}", inst.a(), inst.target()));
        }
    }
    let (fast, time) = timed_limit(start.elapsed(), 60);
    let first = bad.first().cloned().unwrap_or_default();
    outcome(
        bad.is_empty() && fast,
        format!("{}/{} counts exact ({time}) {first}", corpus.len() - bad.len(), corpus.len()),
    )
}

fn ac2(corpus: &[SubsetSumInstance]) -> Outcome {
    let start = Instant::now();
    let mut rng = generate::rng(0xAC02);
    let mut checked = 0usize;
    let mut bad = Vec::new();
    for inst in corpus {
        let params = CountingParameters::for_instance(inst);
        let prefix = brute_prefix(inst.a(), &params.p1);
        let t = inst.target();
        let max_price = t + 1 + inst.total();
        let red = match CountingReduction::new(inst).and_then(|r| r.find_threshold()) {
            Ok(s) => s,
            Err(e) => {
                bad.push(format!("a={:?} T={t}: {e}", inst.a()));
                continue;
            }
        };
        let unit = params.unit(inst.len());
        for p in sample_ps(&mut rng, 20, &red.pstar, &unit) {
            let revs = brute_revenues(&prefix, t, &p, max_price);
            let best = revs.iter().max().expect("nonempty price range");
            let top = &revs[t as usize];
            if revs[0] != *best && top != best {
                let arg = revs.iter().position(|r| r == best).unwrap() + 1;
                bad.push(format!("a={:?} T={t} p={p}: maximum at price {arg}", inst.a()));
            }
            checked += 1;
        }
    }
    let (fast, time) = timed_limit(start.elapsed(), 120);
    let first = bad.first().cloned().unwrap_or_default();
    outcome(
        bad.is_empty() && fast,
        format!("{checked} (instance, p) pairs peak at 1 or T+1 ({time}) {first}"),
    )
}

fn ac3(corpus: &[SubsetSumInstance]) -> Outcome {
    let mut bad = Vec::new();
    for inst in corpus {
        let params = CountingParameters::for_instance(inst);
        let t = inst.target();
        match CountingReduction::new(inst).and_then(|r| r.find_threshold()) {
            Ok(s) => {
                let prefix = brute_prefix(inst.a(), &params.p1);
                let revs = brute_revenues(&prefix, t, &s.pstar, t + 1);
                if revs[0] != Rational::one() || revs[t as usize] != Rational::one() {
                    bad.push(format!(
                        "a={:?} T={t}: revenues {} and {}",
                        inst.a(),
                        revs[0],
                        revs[t as usize]
                    ));
                }
            }
            Err(e) => bad.push(format!("a={:?} T={t}: {e}", inst.a())),
        }
    }
    let first = bad.first().cloned().unwrap_or_default();
    outcome(
        bad.is_empty(),
        format!("{}/{} thresholds give revenue exactly 1 at both prices {first}", corpus.len() - bad.len(), corpus.len()),
    )
}

fn ac4(corpus: &[SubsetSumInstance]) -> Outcome {
    let mut rng = generate::rng(0xAC04);
    let mut bad = Vec::new();
    let mut calls = 0usize;
    for inst in corpus {
        let red = match CountingReduction::new(inst) {
            Ok(r) => r,
            Err(e) => {
                bad.push(e.to_string());
                continue;
            }
        };
        let pstar = match red.find_threshold() {
            Ok(s) => s.pstar,
            Err(e) => {
                bad.push(e.to_string());
                continue;
            }
        };
        let unit = red.params().unit(inst.len());
        let mut ps = sample_ps(&mut rng, 50, &pstar, &unit);
        ps.sort();
        let mut seen_top = false;
        for p in ps {
            calls += 1;
            match red.oracle(&p) {
                Ok(TwoPriceAnswer::PriceOne) if seen_top => {
                    bad.push(format!("a={:?} T={}: price 1 again at p={p}", inst.a(), inst.target()));
                    break;
                }
                Ok(TwoPriceAnswer::PriceOne) => {}
                Ok(TwoPriceAnswer::PriceTPlusOne) => seen_top = true,
                Err(e) => {
                    bad.push(e.to_string());
                    break;
                }
            }
        }
    }
    let first = bad.first().cloned().unwrap_or_default();
    outcome(bad.is_empty(), format!("{calls} oracle answers monotone in p {first}"))
}

fn ac5() -> Outcome {
    let start = Instant::now();
    let mut rng = generate::rng(0xAC05);
    let mut bad = Vec::new();
    let total = 200;
    for _ in 0..total {
        let n = rng.gen_range(1..=6);
        let sq = generate::sqrt_sum(&mut rng, n, 50, true).expect("valid generator parameters");
        let truth = sqrtsum_compare(sq.a(), sq.k());
        let values = decide_via_values(&sq).map(|c| c.decision);
        let probs = decide_via_probs(&sq).map(|c| c.decision);
        let agree = matches!((&truth, &values, &probs), (Ok(t), Ok(v), Ok(p)) if t == v && v == p && *t != Ordering::Equal);
        if !agree {
            bad.push(format!("a={:?} K={}: {truth:?} {values:?} {probs:?}", sq.a(), sq.k()));
        }
    }
    let (fast, time) = timed_limit(start.elapsed(), 60);
    let first = bad.first().cloned().unwrap_or_default();
    outcome(
        bad.is_empty() && fast,
        format!("{}/{total} decisions agree ({time}) {first}", total - bad.len()),
    )
}

fn ac6() -> Outcome {
    let mut bad = Vec::new();
    let mut check = |name: &str, got: Option<Rational>, want: Rational| {
        if got.as_ref() != Some(&want) {
            bad.push(format!("{name}: got {got:?}, want {want}"));
        }
    };

    let ssi = SubsetSumInstance::new(vec![1, 2], 2).expect("valid instance");
    check("p1", Some(CountingParameters::for_instance(&ssi).p1), ratio(1, 288));
    let pstar = CountingReduction::new(&ssi).and_then(|r| r.find_threshold()).ok().map(|s| s.pstar);
    check("p*", pstar, ratio(95, 287));

    let sq = SqrtSumInstance::new(vec![1, 4], 2).expect("valid instance");
    let v = build_value_instance(&sq).ok();
    check("epsilon", v.as_ref().map(|c| c.epsilon.clone()), ratio(1, 16));
    check("T (values)", v.as_ref().map(|c| c.t.clone()), int(9));
    let dv = decide_via_values(&sq).ok();
    check("scheme 1 (values)", dv.as_ref().and_then(|c| c.scheme1_revenue.as_rational().cloned()), ratio(9, 2));
    check("scheme 2 (values)", dv.as_ref().and_then(|c| c.scheme2_revenue.as_rational().cloned()), ratio(153, 32));

    let pc = build_probability_instance(&sq).ok();
    check("X", pc.as_ref().map(|c| int(c.x as i64)), int(5));
    check("T (probs)", pc.as_ref().map(|c| c.t.clone()), ratio(24, 5));
    let dp = decide_via_probs(&sq).ok();
    check("scheme 1 (probs)", dp.as_ref().and_then(|c| c.scheme1_revenue.as_rational().cloned()), ratio(12, 5));
    check("scheme 2 (probs)", dp.as_ref().and_then(|c| c.scheme2_revenue.as_rational().cloned()), ratio(9, 4));

    let first = bad.first().cloned().unwrap_or_default();
    outcome(bad.is_empty(), format!("10 constants, {} mismatches {first}", bad.len()))
}

fn ac7() -> Outcome {
    let start = Instant::now();
    let mut rng = generate::rng(0xAC07);
    let total = 500;
    let mut bad = Vec::new();
    for _ in 0..total {
        let n = rng.gen_range(1..=12);
        let maxval = rng.gen_range(1..=30);
        let inst = generate::soap(&mut rng, n, maxval).expect("valid generator parameters");
        let mut oracle: BTreeMap<u64, Rational> = BTreeMap::new();
        for (s, m) in enumerate_outcomes(&inst).expect("at most 12 attributes") {
            *oracle.entry(s).or_insert_with(Rational::zero) += m;
        }
        oracle.retain(|_, m| !m.is_zero());
        let dp: BTreeMap<u64, Rational> = match sum_distribution(&inst) {
            Ok(t) => t.points().iter().map(|p| (p.sum, p.mass.clone())).collect(),
            Err(e) => {
                bad.push(e.to_string());
                continue;
            }
        };
        if dp != oracle {
            bad.push(format!("instance with {n} attributes differs"));
        }
    }
    let first = bad.first().cloned().unwrap_or_default();
    outcome(
        bad.is_empty(),
        format!(
            "{}/{total} distributions equal enumeration ({:.1} s) {first}",
            total - bad.len(),
            start.elapsed().as_secs_f64()
        ),
    )
}

fn random_terms<R: Rng>(rng: &mut R, max_terms: usize, max_radicand: u64) -> Vec<SqrtTerm> {
    (0..rng.gen_range(0..=max_terms))
        .map(|_| {
            let coef = ratio(rng.gen_range(-30..=30), rng.gen_range(1..=12));
            let radicand = match rng.gen_range(0..4) {
                // squares times small kernels exercise the square-free split
                0 => {
                    let s = rng.gen_range(1..=30u64);
                    s * s * rng.gen_range(1..=12u64)
                }
                _ => rng.gen_range(0..=max_radicand),
            };
            SqrtTerm::new(coef, radicand)
        })
        .collect()
}

fn ac8() -> Outcome {
    const CASES: usize = 10_000;
    let start = Instant::now();
    let mut rng = generate::rng(0xAC08);
    let mut bad = Vec::new();

    // interval soundness and width
    for _ in 0..CASES {
        let a = BigUint::from(rng.gen_range(0..=1_000_000u64));
        let k = rng.gen_range(0..=128u32);
        let iv = sqrt_interval(&a, k);
        let (lo, hi) = iv.scaled_bounds();
        let scaled: BigInt = BigInt::from(a.clone()) << (2 * iv.precision() as usize);
        let sound = !lo.is_negative() && lo * lo <= scaled && scaled <= hi * hi;
        let narrow = iv.width() <= Rational::new(BigInt::one(), BigInt::one() << k as usize);
        if !(sound && narrow) {
            bad.push(format!("interval for √{a} at k={k}"));
        }
    }

    // canonicity under concatenation
    for _ in 0..CASES {
        let x = random_terms(&mut rng, 5, 2000);
        let y = random_terms(&mut rng, 5, 2000);
        let joined: Vec<SqrtTerm> = x.iter().chain(&y).cloned().collect();
        let lhs = normalize(&joined);
        let rhs = normalize(&x).and_then(|a| normalize(&y).map(|b| a + b));
        if lhs.is_err() || lhs != rhs {
            bad.push(format!("normalize not additive on {x:?} ++ {y:?}"));
        }
    }

    // sign against fixed-point evaluation
    let mut zeros = 0usize;
    for i in 0..CASES {
        let mut terms = random_terms(&mut rng, 6, 1_000_000);
        if i % 5 == 0 {
            // an expression that cancels symbolically: x − x with rewritten radicands
            let negated: Vec<SqrtTerm> = terms
                .iter()
                .map(|t| {
                    let s = rng.gen_range(1..=5u64);
                    SqrtTerm::new(-t.coefficient.clone() / int(s as i64), &t.radicand * (s * s))
                })
                .collect();
            terms.extend(negated);
        }
        let exact = match normalize(&terms) {
            Ok(e) => e.sign(),
            Err(e) => {
                bad.push(e.to_string());
                continue;
            }
        };
        let zero = symbolic_zero(&terms);
        if zero {
            zeros += 1;
        }
        match (zero, fixed_point_sign(&terms)) {
            (true, _) if exact == Sign::Zero => {}
            (true, _) => bad.push(format!("cancelling sum reported {exact:?}: {terms:?}")),
            (false, Some(s)) if s == exact && s != Sign::Zero => {}
            (false, Some(s)) => bad.push(format!("sign {exact:?} but fixed point says {s:?} for {terms:?}")),
            (false, None) => bad.push(format!("fixed point could not separate {terms:?} from zero")),
        }
    }

    let (fast, time) = timed_limit(start.elapsed(), 60);
    let first = bad.first().cloned().unwrap_or_default();
    outcome(
        bad.is_empty() && fast,
        format!(
            "{} cases ({CASES} intervals, {CASES} normalizations, {CASES} signs incl. {zeros} exact zeros), {} failures ({time}) {first}",
            3 * CASES,
            bad.len()
        ),
    )
}

type Criterion<'a> = (&'static str, &'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() {
    let corpus = subset_corpus();
    let criteria: Vec<Criterion> = vec![
        ("AC1", "subset-count pipeline", Box::new(|| ac1(&corpus))),
        ("AC2", "two-price property", Box::new(|| ac2(&corpus))),
        ("AC3", "threshold identity", Box::new(|| ac3(&corpus))),
        ("AC4", "oracle monotonicity", Box::new(|| ac4(&corpus))),
        ("AC5", "square-root-sum agreement", Box::new(ac5)),
        ("AC6", "worked constants", Box::new(ac6)),
        ("AC7", "distribution oracle", Box::new(ac7)),
        ("AC8", "exact numerics", Box::new(ac8)),
    ];
    let mut failed = 0;
    for (id, name, check) in criteria {
        let o = check();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        if !o.pass {
            failed += 1;
        }
        println!("[{tag}] {id} {name}: {}", o.detail.trim_end());
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
