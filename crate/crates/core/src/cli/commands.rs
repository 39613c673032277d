use serde::Deserialize;
use serde_json::{json, Map, Value};

use super::generate;
use super::{Command, GlobalOpts, Kind};
use crate::distmodel::{sum_distribution_with_budget, SoapInstance, TwoPointAttribute};
use crate::error::{Error, Result};
use crate::exactnum::rational::{format_ratio, parse_ratio, ratio_string, to_f64};
use crate::exactnum::{Rational, SqrtExpr};
use crate::format::{self, from_value};
use crate::reductions::{
    build_probability_instance, build_value_instance, decide_via_probs, decide_via_values,
    CountingReduction, SqrtSumInstance, SubsetSumInstance,
};
use crate::soap::mc_revenue;
use crate::unitdemand::{best_over_candidates, expected_revenue, support_candidates, Price, TwoPointItem};

type Output = Result<(Value, String)>;

pub(super) fn dispatch(cmd: &Command, opts: &GlobalOpts, input: Value) -> Output {
    match cmd {
        Command::SolveSoap { curve, mc_samples } => solve_soap(opts, input, *curve, *mc_samples),
        Command::SolveBundle { curve } => solve_bundle(opts, input, *curve),
        Command::SolveUnitdemand => solve_unitdemand(opts, input),
        Command::EvalPricing => eval_pricing(opts, input),
        Command::ReduceCount { transcript } => reduce_count(opts, input, *transcript),
        Command::ReduceSqrtsumValues => reduce_sqrtsum_values(opts, input),
        Command::ReduceSqrtsumProbs => reduce_sqrtsum_probs(opts, input),
        Command::VerifyThm1 { p } => verify_cases(opts, input, p.as_deref()),
        Command::GenInstance { .. } => unreachable!("generation reads no input"),
    }
}

fn require_seed(opts: &GlobalOpts, what: &str) -> Result<u64> {
    opts.seed.ok_or_else(|| Error::InvalidInstance(format!("--seed is required for {what}")))
}

fn add_approx(out: &mut Value, opts: &GlobalOpts, fields: Vec<(&str, f64)>) {
    if opts.approx {
        let m: Map<String, Value> = fields.into_iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
        out["approx"] = Value::Object(m);
    }
}

fn solve_distribution(opts: &GlobalOpts, inst: &SoapInstance, curve: bool) -> Output {
    let report = sum_distribution_with_budget(inst, opts.budget)?.optimal_price(curve);
    let mut out = format::price_report_json(&report);
    add_approx(&mut out, opts, vec![("revenue", to_f64(&report.revenue))]);
    let summary = format!(
        "{} attributes: optimal price {} with revenue {} (~{:.6})",
        inst.len(),
        report.price,
        format_ratio(&report.revenue),
        to_f64(&report.revenue)
    );
    Ok((out, summary))
}

fn solve_soap(opts: &GlobalOpts, input: Value, curve: bool, mc: Option<u64>) -> Output {
    let inst: SoapInstance = from_value(input)?;
    let seed = match mc {
        Some(_) => Some(require_seed(opts, "Monte-Carlo estimation")?),
        None => None,
    };
    let (mut out, mut summary) = solve_distribution(opts, &inst, curve)?;
    if let (Some(samples), Some(seed)) = (mc, seed) {
        let price = Rational::from_integer(out["price"].as_u64().unwrap_or(0).into());
        let est = mc_revenue(&inst, &price, samples, seed)?;
        summary.push_str(&format!(
            "; sampled revenue {:.6} ± {:.6} over {} draws",
            to_f64(&est.estimate),
            est.std_error,
            est.samples
        ));
        out["mc"] = json!({
            "estimate": format_ratio(&est.estimate),
            "std_error_approx": est.std_error,
            "samples": est.samples,
        });
    }
    Ok((out, summary))
}

#[derive(Deserialize)]
struct BundleItem {
    u: u64,
    v: u64,
    #[serde(with = "ratio_string")]
    p: Rational,
}

#[derive(Deserialize)]
struct BundleInput {
    #[serde(alias = "attributes")]
    items: Vec<BundleItem>,
}

fn solve_bundle(opts: &GlobalOpts, input: Value, curve: bool) -> Output {
    let b: BundleInput = from_value(input)?;
    let attrs = b
        .items
        .into_iter()
        .map(|i| TwoPointAttribute::new(i.u, i.v, i.p))
        .collect::<Result<Vec<_>>>()?;
    solve_distribution(opts, &SoapInstance::new(attrs)?, curve)
}

#[derive(Deserialize)]
struct UnitDemandInput {
    items: Vec<TwoPointItem>,
    #[serde(default)]
    candidates: Option<Vec<Vec<Price>>>,
}

#[derive(Deserialize)]
struct PricingInput {
    items: Vec<TwoPointItem>,
    prices: Vec<Price>,
}

fn revenue_output(opts: &GlobalOpts, revenue: &SqrtExpr, prices: Option<&[Price]>) -> Value {
    let mut out = json!({ "revenue": revenue });
    if let Some(p) = prices {
        out["prices"] = serde_json::to_value(p).expect("prices serialize");
    }
    add_approx(&mut out, opts, vec![("revenue", revenue.to_f64())]);
    out
}

fn solve_unitdemand(opts: &GlobalOpts, input: Value) -> Output {
    let u: UnitDemandInput = from_value(input)?;
    let candidates = u.candidates.unwrap_or_else(|| support_candidates(&u.items));
    let (prices, revenue) = best_over_candidates(&u.items, &candidates, opts.buyer_model())?;
    let summary = format!("{} items: best revenue {} (~{:.6})", u.items.len(), revenue, revenue.to_f64());
    Ok((revenue_output(opts, &revenue, Some(&prices)), summary))
}

fn eval_pricing(opts: &GlobalOpts, input: Value) -> Output {
    let e: PricingInput = from_value(input)?;
    let revenue = expected_revenue(&e.items, &e.prices, opts.buyer_model())?;
    let summary = format!("{} items: expected revenue {} (~{:.6})", e.items.len(), revenue, revenue.to_f64());
    Ok((revenue_output(opts, &revenue, None), summary))
}

fn reduce_count(opts: &GlobalOpts, input: Value, with_transcript: bool) -> Output {
    let inst: SubsetSumInstance = from_value(input)?;
    let t = CountingReduction::with_budget(&inst, opts.budget)?.count()?;
    let mut out = json!({
        "count": t.count,
        "pstar": format_ratio(&t.pstar),
        "Q": format_ratio(&t.q),
    });
    add_approx(&mut out, opts, vec![("pstar", to_f64(&t.pstar))]);
    if with_transcript {
        out["transcript"] = format::transcript_json(&t);
    }
    let summary = format!(
        "{} subsets of {:?} sum to {} ({} oracle calls, p* = {})",
        t.count,
        inst.a(),
        inst.target(),
        t.calls.len(),
        format_ratio(&t.pstar)
    );
    Ok((out, summary))
}

fn comparison_output(opts: &GlobalOpts, sq: &SqrtSumInstance, c: &crate::reductions::SchemeComparison) -> (Value, String) {
    let mut out = format::comparison_json(c);
    add_approx(
        &mut out,
        opts,
        vec![("scheme1_revenue", c.scheme1_revenue.to_f64()), ("scheme2_revenue", c.scheme2_revenue.to_f64())],
    );
    let relation = match c.decision {
        std::cmp::Ordering::Greater => ">",
        std::cmp::Ordering::Less => "<",
        std::cmp::Ordering::Equal => "=",
    };
    let summary = format!("sum of square roots of {:?} {} {}", sq.a(), relation, sq.k());
    (out, summary)
}

fn reduce_sqrtsum_values(opts: &GlobalOpts, input: Value) -> Output {
    let sq: SqrtSumInstance = from_value(input)?;
    let c = decide_via_values(&sq)?;
    let cons = build_value_instance(&sq)?;
    let (mut out, summary) = comparison_output(opts, &sq, &c);
    out["epsilon"] = format::rational_json(&cons.epsilon);
    out["T"] = format::rational_json(&cons.t);
    Ok((out, summary))
}

fn reduce_sqrtsum_probs(opts: &GlobalOpts, input: Value) -> Output {
    let sq: SqrtSumInstance = from_value(input)?;
    let c = decide_via_probs(&sq)?;
    let cons = build_probability_instance(&sq)?;
    let (mut out, summary) = comparison_output(opts, &sq, &c);
    out["X"] = json!(cons.x);
    out["T"] = format::rational_json(&cons.t);
    Ok((out, summary))
}

#[derive(Deserialize)]
struct CasesInput {
    a: Vec<u64>,
    #[serde(rename = "T")]
    t: u64,
    #[serde(default, with = "optional_ratio")]
    p: Option<Rational>,
}

mod optional_ratio {
    use super::*;
    use serde::Deserializer;

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Rational>, D::Error> {
        #[derive(Deserialize)]
        struct Wrap(#[serde(with = "ratio_string")] Rational);
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }
}

fn verify_cases(opts: &GlobalOpts, input: Value, flag_p: Option<&str>) -> Output {
    let c: CasesInput = from_value(input)?;
    let inst = SubsetSumInstance::new(c.a, c.t)?;
    let p = match flag_p {
        Some(s) => parse_ratio(s)?,
        None => c.p.ok_or_else(|| Error::InvalidInstance("a probability p is required (field \"p\" or --p)".into()))?,
    };
    let report = CountingReduction::with_budget(&inst, opts.budget)?.verify_cases(&p)?;
    let mut out = format::case_report_json(&report);
    add_approx(&mut out, opts, vec![("optimal_revenue", to_f64(&report.optimal_revenue))]);
    let summary = format!(
        "p = {}: optimal price {} with revenue {}; two-price property holds over {} integer prices",
        format_ratio(&p),
        report.optimal_price,
        format_ratio(&report.optimal_revenue),
        report.revenues.len()
    );
    Ok((out, summary))
}

pub(super) fn gen_instance(opts: &GlobalOpts, kind: Kind, n: usize, max: u64, exclude_equal: bool) -> Result<(Value, String)> {
    let seed = require_seed(opts, "gen-instance")?;
    let mut rng = generate::rng(seed);
    let v = match kind {
        Kind::Subsetsum => serde_json::to_value(generate::subset_sum(&mut rng, n, max)?),
        Kind::Sqrtsum => serde_json::to_value(generate::sqrt_sum(&mut rng, n, max, exclude_equal)?),
        Kind::Soap => serde_json::to_value(generate::soap(&mut rng, n, max)?),
    }
    .map_err(|e| Error::Parse(e.to_string()))?;
    Ok((v, format!("generated {kind:?} instance with n = {n}, seed {seed}")))
}
