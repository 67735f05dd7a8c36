//! Order-0 entropy of byte texts and the before/after comparison for a
//! literal-mode transform.
//!
//! Every count-level identity between the source and transformed histograms
//! is checked in integer arithmetic. Probabilities share the denominator `m`
//! (both texts have the same length), so the probability-level identities
//! reduce to the same integer comparisons.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EntropyError {
    #[error("entropy of an empty text is undefined")]
    EmptyText,
    #[error("texts differ in length: source {source_len} bytes, transformed {transformed_len} bytes")]
    LengthMismatch { source_len: usize, transformed_len: usize },
}

/// Occurrence counts for all 256 byte values.
#[derive(Clone, PartialEq, Eq)]
pub struct ByteHistogram {
    counts: [u64; 256],
    total: u64,
}

impl Default for ByteHistogram {
    fn default() -> Self {
        Self {
            counts: [0; 256],
            total: 0,
        }
    }
}

impl std::fmt::Debug for ByteHistogram {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let nonzero: Vec<(u8, u64)> = self.nonzero().collect();
        f.debug_struct("ByteHistogram")
            .field("total", &self.total)
            .field("counts", &nonzero)
            .finish()
    }
}

impl Serialize for ByteHistogram {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("ByteHistogram", 2)?;
        s.serialize_field("counts", &self.counts[..])?;
        s.serialize_field("total", &self.total)?;
        s.end()
    }
}

impl ByteHistogram {
    pub fn from_bytes(text: &[u8]) -> Self {
        let mut hist = Self::default();
        hist.update(text);
        hist
    }

    pub fn from_counts(counts: [u64; 256]) -> Self {
        Self {
            total: counts.iter().sum(),
            counts,
        }
    }

    pub fn update(&mut self, text: &[u8]) {
        for &b in text {
            self.counts[b as usize] += 1;
        }
        self.total += text.len() as u64;
    }

    /// Exact merge of two partial histograms.
    pub fn merge(&mut self, other: &ByteHistogram) {
        for (a, b) in self.counts.iter_mut().zip(other.counts.iter()) {
            *a += b;
        }
        self.total += other.total;
    }

    pub fn counts(&self) -> &[u64; 256] {
        &self.counts
    }

    pub fn count(&self, byte: u8) -> u64 {
        self.counts[byte as usize]
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn distinct(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (u8, u64)> + '_ {
        (0u8..=255).zip(self.counts.iter().copied()).filter(|&(_, c)| c > 0)
    }

    pub fn probability(&self, byte: u8) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.count(byte) as f64 / self.total as f64
        }
    }
}

pub fn histogram(text: &[u8]) -> ByteHistogram {
    ByteHistogram::from_bytes(text)
}

/// Shannon entropy in bits per byte, skipping zero counts.
pub fn shannon_entropy(hist: &ByteHistogram) -> Result<f64, EntropyError> {
    if hist.total == 0 {
        return Err(EntropyError::EmptyText);
    }
    let m = hist.total as f64;
    let h: f64 = hist
        .nonzero()
        .map(|(_, q)| {
            let q = q as f64;
            q / m * (m / q).log2()
        })
        .sum();
    // rounding can leave a tiny negative for single-symbol texts
    Ok(h.max(0.0))
}

/// Theoretical compression ratio of an order-0 entropy coder.
pub fn compression_ratio(bits_per_byte: f64) -> f64 {
    bits_per_byte / 8.0
}

/// The four count and probability identities that hold between a source
/// text and its literal-mode transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FormulaChecks {
    /// q'_i <= q_i for every byte other than the empty symbol.
    pub counts_not_increased: bool,
    /// q0 = sum of (q_i - q'_i).
    pub empty_count_balance: bool,
    /// 0 <= p'_i <= p_i <= 1.
    pub probabilities_bounded: bool,
    /// 0 <= p0 = sum of (p_i - p'_i) <= 1.
    pub empty_probability_balance: bool,
}

impl FormulaChecks {
    pub fn all_hold(&self) -> bool {
        self.counts_not_increased
            && self.empty_count_balance
            && self.probabilities_bounded
            && self.empty_probability_balance
    }

    pub fn evaluate(source: &ByteHistogram, target: &ByteHistogram, empty_symbol: u8) -> Self {
        let m = source.total;
        let empty = empty_symbol as usize;
        // the empty symbol is new to the transformed alphabet
        let source_clean = source.counts[empty] == 0;
        let others = || (0..256).filter(|&i| i != empty);

        let counts_not_increased = others().all(|i| target.counts[i] <= source.counts[i]);

        let removed: i128 = others()
            .map(|i| source.counts[i] as i128 - target.counts[i] as i128)
            .sum();
        let q0 = target.counts[empty] as i128;
        let empty_count_balance = source_clean && q0 == removed;

        let probabilities_bounded =
            source.total == target.total && others().all(|i| target.counts[i] <= source.counts[i] && source.counts[i] <= m);

        let empty_probability_balance =
            source.total == target.total && empty_count_balance && 0 <= q0 && q0 <= m as i128;

        Self {
            counts_not_increased,
            empty_count_balance,
            probabilities_bounded,
            empty_probability_balance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyReport {
    pub source_hist: ByteHistogram,
    pub target_hist: ByteHistogram,
    pub source_entropy: f64,
    pub target_entropy: f64,
    pub source_ratio: f64,
    pub target_ratio: f64,
    pub empty_symbol: u8,
    pub empty_count: u64,
    pub formula_checks: FormulaChecks,
    /// Set when any formula check fails: the texts are not a literal-mode pair.
    pub corrupt: bool,
}

pub fn sse_entropy_report(
    source_text: &[u8],
    transformed_text: &[u8],
    empty_symbol: u8,
) -> Result<EntropyReport, EntropyError> {
    if source_text.len() != transformed_text.len() {
        return Err(EntropyError::LengthMismatch {
            source_len: source_text.len(),
            transformed_len: transformed_text.len(),
        });
    }
    let source_hist = histogram(source_text);
    let target_hist = histogram(transformed_text);
    let source_entropy = shannon_entropy(&source_hist)?;
    let target_entropy = shannon_entropy(&target_hist)?;
    let formula_checks = FormulaChecks::evaluate(&source_hist, &target_hist, empty_symbol);
    Ok(EntropyReport {
        empty_count: target_hist.count(empty_symbol),
        source_ratio: compression_ratio(source_entropy),
        target_ratio: compression_ratio(target_entropy),
        source_hist,
        target_hist,
        source_entropy,
        target_entropy,
        empty_symbol,
        formula_checks,
        corrupt: !formula_checks.all_hold(),
    })
}
