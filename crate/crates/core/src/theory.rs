//! Analytic facts about the per-symbol entropy term `y = x * log2(1/x)`.
//!
//! `y` rises steeply to its maximum `1/(e ln 2)` at `x = 1/e` and falls more
//! slowly after it. Lowering a probability that sits at or below `1/e`
//! therefore never raises its entropy term; above `1/e` the direction is not
//! fixed. With only two symbols in the line alphabet most of the probability
//! mass sits above `1/e`, and the transform can raise entropy.

use std::f64::consts::{E, LN_2};

use serde::Serialize;
use thiserror::Error;

use crate::entropy::{histogram, shannon_entropy};
use crate::transform::{sse_encode, LineSet, SseConfig};

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum TheoryError {
    #[error("y is defined on (0, 1], got {0}")]
    Domain(f64),
    #[error("pair {index} is not 0 <= lower <= upper <= 1: ({lower}, {upper})")]
    MalformedPair { index: usize, lower: f64, upper: f64 },
}

/// Location and height of the maximum of `y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct YFunctionFacts {
    pub argmax: f64,
    pub max_value: f64,
}

pub const Y_FACTS: YFunctionFacts = YFunctionFacts {
    argmax: 1.0 / E,
    max_value: 1.0 / (E * LN_2),
};

/// `x * log2(1/x)` on `(0, 1]`.
pub fn y(x: f64) -> Result<f64, TheoryError> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(TheoryError::Domain(x));
    }
    Ok(y_closed(x))
}

/// `y` extended continuously to `y(0) = 0`.
fn y_closed(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundClass {
    /// `upper <= 1/e`: `y(lower) <= y(upper)` always holds.
    Guaranteed,
    /// `upper > 1/e`: either direction is possible.
    Uncertain,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairVerdict {
    pub lower: f64,
    pub upper: f64,
    pub y_lower: f64,
    pub y_upper: f64,
    pub class: BoundClass,
    /// Whether `y(lower) <= y(upper)` actually holds.
    pub holds: bool,
}

/// Classifies each `(p', p)` pair, `p' <= p`, by whether shrinking `p` to `p'`
/// is guaranteed not to raise the entropy term.
pub fn entropy_delta_bound_check(pairs: &[(f64, f64)]) -> Result<Vec<PairVerdict>, TheoryError> {
    pairs
        .iter()
        .enumerate()
        .map(|(index, &(lower, upper))| {
            if !(0.0 <= lower && lower <= upper && upper <= 1.0) {
                return Err(TheoryError::MalformedPair { index, lower, upper });
            }
            let (y_lower, y_upper) = (y_closed(lower), y_closed(upper));
            let class = if upper <= Y_FACTS.argmax {
                BoundClass::Guaranteed
            } else {
                BoundClass::Uncertain
            };
            Ok(PairVerdict {
                lower,
                upper,
                y_lower,
                y_upper,
                class,
                holds: y_lower <= y_upper,
            })
        })
        .collect()
}

/// A two-symbol line set whose transform raises entropy.
#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub lines: LineSet,
    pub source_text: Vec<u8>,
    pub transformed_text: Vec<u8>,
    pub source_entropy: f64,
    pub target_entropy: f64,
}

/// Lines of the witness, found by exhaustive search over every set of at most
/// six distinct lines of length at most four over {a, b}; this set maximizes
/// `H' - H` within that space.
pub const TWO_SYMBOL_WITNESS: &[&str] = &["aaa", "aaaa"];

pub fn two_symbol_counterexample() -> Counterexample {
    let lines = LineSet::from_strs(TWO_SYMBOL_WITNESS).expect("witness lines have no LF");
    let config = SseConfig::default();
    let records = sse_encode(&lines, &config).expect("witness avoids the empty symbol");
    let header = (&config).into();
    let transformed_text = crate::container::serialize_payload(&records, &header);
    let source_text = crate::transform::sort_lines(&lines, config.collation()).to_text();
    let source_entropy = shannon_entropy(&histogram(&source_text)).expect("nonempty");
    let target_entropy = shannon_entropy(&histogram(&transformed_text)).expect("nonempty");
    Counterexample {
        lines,
        source_text,
        transformed_text,
        source_entropy,
        target_entropy,
    }
}
