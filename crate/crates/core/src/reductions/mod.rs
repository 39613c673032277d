//! Executable hardness reductions.
//!
//! * [`counting`] recovers the number of subsets reaching a target sum from
//!   nothing but exact optimal-price queries on a sum-of-attributes instance.
//! * [`sqrtsum`] decides `Σ √a_i > K` by comparing the revenue of two item
//!   pricings for a unit-demand buyer, once with square-root item values and
//!   once with square-root purchase probabilities.
//!
//! Every pipeline re-checks the inequalities its correctness rests on and
//! reports [`Error::ProofViolation`](crate::Error::ProofViolation) if one
//! fails on a concrete instance.

pub mod counting;
pub mod sqrtsum;

pub use counting::{
    build_counting_instance, count_subsets, count_subsets_with_transcript, decode_counts,
    find_threshold, two_price_oracle, verify_two_price_cases, CaseReport, CountTranscript,
    CountingParameters, CountingReduction, OracleCall, SubsetSumInstance, ThresholdSearch, TwoPriceAnswer,
};
pub use sqrtsum::{
    build_probability_instance, build_value_instance, decide_via_probs, decide_via_values,
    ProbabilityConstruction, SchemeComparison, SqrtSumInstance, ValueConstruction,
};
