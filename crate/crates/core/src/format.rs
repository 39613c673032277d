//! JSON wire formats.
//!
//! Rationals travel as `"numerator/denominator"` strings. Square-root
//! expressions travel as `{"rational": "q", "terms": [{"coef": "r", "radicand": d}]}`
//! with square-free `d`; on input a bare rational string or integer is also
//! accepted and radicands are normalized. Price vectors use `"inf"` for an
//! unpriced item.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::distmodel::{SoapInstance, TwoPointAttribute};
use crate::exactnum::rational::{self, format_ratio, parse_ratio, ratio_string};
use crate::exactnum::{normalize, Rational, SqrtExpr, SqrtTerm};
use crate::reductions::{
    CaseReport, CountTranscript, SchemeComparison, SqrtSumInstance, SubsetSumInstance,
    TwoPriceAnswer,
};
use crate::soap::PriceReport;
use crate::unitdemand::{Price, TwoPointItem};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RadicandRepr {
    Int(u64),
    Text(String),
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    #[serde(with = "ratio_string")]
    coef: Rational,
    radicand: RadicandRepr,
}

#[derive(Serialize, Deserialize)]
struct SqrtExprRepr {
    #[serde(with = "ratio_string", default = "zero_ratio")]
    rational: Rational,
    #[serde(default)]
    terms: Vec<TermRepr>,
}

fn zero_ratio() -> Rational {
    rational::int(0)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SqrtExprInput {
    Text(String),
    Int(i64),
    Expr(SqrtExprRepr),
}

impl Serialize for SqrtExpr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SqrtExprRepr {
            rational: self.rational_part().clone(),
            terms: self
                .terms()
                .map(|(d, c)| TermRepr {
                    coef: c.clone(),
                    radicand: match d.to_u64() {
                        Some(v) => RadicandRepr::Int(v),
                        None => RadicandRepr::Text(d.to_string()),
                    },
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SqrtExpr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match SqrtExprInput::deserialize(d)? {
            SqrtExprInput::Text(t) => parse_ratio(&t).map(SqrtExpr::from_rational).map_err(de::Error::custom),
            SqrtExprInput::Int(v) => Ok(SqrtExpr::from_integer(v)),
            SqrtExprInput::Expr(repr) => {
                let mut terms = vec![SqrtTerm::new(repr.rational, 1u32)];
                for t in repr.terms {
                    let radicand = match t.radicand {
                        RadicandRepr::Int(v) => BigUint::from(v),
                        RadicandRepr::Text(s) => s.parse().map_err(de::Error::custom)?,
                    };
                    terms.push(SqrtTerm::new(t.coef, radicand));
                }
                normalize(&terms).map_err(de::Error::custom)
            }
        }
    }
}

impl Serialize for Price<SqrtExpr> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Price::At(p) => p.serialize(s),
            Price::Unpriced => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Price<SqrtExpr> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        if v.as_str().is_some_and(|s| s.trim().eq_ignore_ascii_case("inf")) {
            return Ok(Price::Unpriced);
        }
        SqrtExpr::deserialize(v).map(Price::At).map_err(de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct AttributeRepr {
    u: u64,
    v: u64,
    #[serde(with = "ratio_string")]
    p: Rational,
}

#[derive(Serialize, Deserialize)]
struct SoapInstanceRepr {
    attributes: Vec<AttributeRepr>,
}

impl Serialize for SoapInstance<Rational> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SoapInstanceRepr {
            attributes: self
                .attributes()
                .iter()
                .map(|a| AttributeRepr { u: a.high, v: a.low, p: a.p_high.clone() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SoapInstance<Rational> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = SoapInstanceRepr::deserialize(d)?;
        let attrs = repr
            .attributes
            .into_iter()
            .map(|a| TwoPointAttribute::new(a.u, a.v, a.p))
            .collect::<crate::Result<Vec<_>>>()
            .map_err(de::Error::custom)?;
        SoapInstance::new(attrs).map_err(de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct ItemRepr {
    high: SqrtExpr,
    low: SqrtExpr,
    p: SqrtExpr,
}

impl Serialize for TwoPointItem<SqrtExpr> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ItemRepr { high: self.high.clone(), low: self.low.clone(), p: self.p_high.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TwoPointItem<SqrtExpr> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = ItemRepr::deserialize(d)?;
        TwoPointItem::new(r.high, r.low, r.p).map_err(de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct SubsetSumRepr {
    a: Vec<u64>,
    #[serde(rename = "T")]
    t: u64,
}

impl Serialize for SubsetSumInstance {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SubsetSumRepr { a: self.a().to_vec(), t: self.target() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SubsetSumInstance {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = SubsetSumRepr::deserialize(d)?;
        SubsetSumInstance::new(r.a, r.t).map_err(de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct SqrtSumRepr {
    a: Vec<u64>,
    #[serde(rename = "K")]
    k: u64,
}

impl Serialize for SqrtSumInstance {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SqrtSumRepr { a: self.a().to_vec(), k: self.k() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SqrtSumInstance {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = SqrtSumRepr::deserialize(d)?;
        SqrtSumInstance::new(r.a, r.k).map_err(de::Error::custom)
    }
}

pub fn price_report_json(report: &PriceReport<Rational>) -> Value {
    let mut out = json!({ "price": report.price, "revenue": format_ratio(&report.revenue) });
    if let Some(curve) = &report.curve {
        out["curve"] = curve
            .iter()
            .map(|(p, r)| json!({ "price": p, "revenue": format_ratio(r) }))
            .collect();
    }
    out
}

fn answer_str(a: TwoPriceAnswer) -> &'static str {
    match a {
        TwoPriceAnswer::PriceOne => "PriceOne",
        TwoPriceAnswer::PriceTPlusOne => "PriceTplus1",
    }
}

pub fn transcript_json(t: &CountTranscript) -> Value {
    json!({
        "instance": t.instance,
        "p1": format_ratio(&t.params.p1),
        "base": t.params.base.to_string(),
        "epsilon": format_ratio(&t.params.epsilon),
        "calls": t.calls.iter()
            .map(|c| json!({ "p": format_ratio(&c.p), "answer": answer_str(c.answer) }))
            .collect::<Vec<_>>(),
        "bracket": [format_ratio(&t.bracket.0), format_ratio(&t.bracket.1)],
        "pstar": format_ratio(&t.pstar),
        "Q": format_ratio(&t.q),
        "counts": t.counts,
        "count": t.count,
    })
}

pub fn case_report_json(r: &CaseReport) -> Value {
    json!({
        "p": format_ratio(&r.p),
        "optimal_price": r.optimal_price,
        "optimal_revenue": format_ratio(&r.optimal_revenue),
        "revenues": r.revenues.iter()
            .map(|(b, v)| json!({ "price": b, "revenue": format_ratio(v) }))
            .collect::<Vec<_>>(),
        "passed": true,
    })
}

pub fn comparison_json(c: &SchemeComparison) -> Value {
    json!({
        "decision": format!("{:?}", c.decision),
        "scheme1_revenue": c.scheme1_revenue,
        "scheme2_revenue": c.scheme2_revenue,
    })
}

pub fn decision_str(o: std::cmp::Ordering) -> String {
    format!("{o:?}")
}

/// Parses a JSON value, mapping failures to [`crate::Error::Parse`].
pub fn from_value<T: for<'de> Deserialize<'de>>(v: Value) -> crate::Result<T> {
    serde_json::from_value(v).map_err(|e| crate::Error::Parse(e.to_string()))
}

pub fn rational_json(r: &Rational) -> Value {
    Value::String(format_ratio(r))
}
