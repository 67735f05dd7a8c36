//! Monte Carlo study of entropy before and after the transform over random
//! alphabets of 2 to 52 letters.
//!
//! Each trial draws a probability vector uniformly from the simplex, generates
//! a corpus of random lines from it, runs a literal-mode transform and records
//! both entropies. Trial seeds are derived from the master seed, the alphabet
//! size and the trial index, so results do not depend on scheduling.

use std::io::{self, Write};
use std::ops::RangeInclusive;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::container::{serialize_payload, ContainerHeader};
use crate::entropy::{sse_entropy_report, EntropyError};
use crate::transform::{encode_sorted, sort_lines, Collation, LineSet, SseConfig, TransformError};

/// 'A'..='Z' then 'a'..='z'.
pub const ALPHABET: &[u8; 52] = b"ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz";

#[derive(Debug, Error)]
pub enum SimulateError {
    #[error("invalid study config: {0}")]
    InvalidConfig(String),
    #[error("alphabet of {0} symbols is outside 2..=52")]
    AlphabetSize(usize),
    #[error("probability vector is invalid: {0}")]
    InvalidProbabilities(String),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Entropy(#[from] EntropyError),
    #[error("formula checks failed for alphabet size {alphabet_size}, trial {trial}")]
    FormulaViolation { alphabet_size: usize, trial: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StudyConfig {
    pub min_alphabet: usize,
    pub max_alphabet: usize,
    pub trials_per_size: usize,
    pub lines_per_corpus: usize,
    pub min_line_len: usize,
    pub max_line_len: usize,
    pub seed: u64,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            min_alphabet: 2,
            max_alphabet: 52,
            trials_per_size: 100,
            lines_per_corpus: 2000,
            min_line_len: 3,
            max_line_len: 12,
            seed: 42,
        }
    }
}

impl StudyConfig {
    pub fn alphabet_sizes(&self) -> RangeInclusive<usize> {
        self.min_alphabet..=self.max_alphabet
    }

    pub fn validate(&self) -> Result<(), SimulateError> {
        let invalid = |msg: &str| Err(SimulateError::InvalidConfig(msg.to_string()));
        if self.min_alphabet < 2 {
            return invalid("alphabet sizes must be at least 2");
        }
        if self.max_alphabet > ALPHABET.len() {
            return invalid("alphabet sizes must be at most 52");
        }
        if self.min_alphabet > self.max_alphabet {
            return invalid("alphabet size range is empty");
        }
        if self.trials_per_size == 0 || self.lines_per_corpus == 0 {
            return invalid("trial and line counts must be at least 1");
        }
        if self.min_line_len == 0 {
            return invalid("line lengths must be at least 1");
        }
        if self.min_line_len > self.max_line_len {
            return invalid("minimum line length exceeds maximum");
        }
        Ok(())
    }
}

/// Aggregated entropies (bits per byte) for one alphabet size.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyRow {
    pub alphabet_size: usize,
    pub source_mean: f64,
    pub source_min: f64,
    pub source_max: f64,
    pub target_mean: f64,
    pub target_min: f64,
    pub target_max: f64,
    /// `target_mean / source_mean`.
    pub ratio_mean: f64,
}

/// `n` positive probabilities drawn uniformly from the simplex.
pub fn sample_probabilities(n: usize, rng: &mut impl Rng) -> Result<Vec<f64>, SimulateError> {
    if n < 2 {
        return Err(SimulateError::AlphabetSize(n));
    }
    loop {
        let draws: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let sum: f64 = draws.iter().sum();
        // an all-zero draw has probability ~0 but would divide by zero
        if sum > 0.0 && draws.iter().all(|&d| d > 0.0) {
            return Ok(draws.into_iter().map(|d| d / sum).collect());
        }
    }
}

pub fn generate_corpus(probs: &[f64], cfg: &StudyConfig, rng: &mut impl Rng) -> Result<LineSet, SimulateError> {
    if probs.is_empty() || probs.len() > ALPHABET.len() {
        return Err(SimulateError::AlphabetSize(probs.len()));
    }
    let dist = WeightedIndex::new(probs).map_err(|e| SimulateError::InvalidProbabilities(e.to_string()))?;
    let lines = (0..cfg.lines_per_corpus)
        .map(|_| {
            let len = rng.random_range(cfg.min_line_len..=cfg.max_line_len);
            (0..len).map(|_| ALPHABET[dist.sample(rng)]).collect()
        })
        .collect();
    Ok(LineSet::new(lines)?)
}

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn trial_seed(master: u64, alphabet_size: usize, trial: usize) -> u64 {
    mix(mix(mix(master) ^ alphabet_size as u64) ^ trial as u64)
}

/// Source and target entropy of one trial.
fn run_trial(cfg: &StudyConfig, alphabet_size: usize, trial: usize) -> Result<(f64, f64), SimulateError> {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(cfg.seed, alphabet_size, trial));
    let probs = sample_probabilities(alphabet_size, &mut rng)?;
    let corpus = generate_corpus(&probs, cfg, &mut rng)?;
    let config = SseConfig::default();
    let sorted = sort_lines(&corpus, Collation::ByteWise);
    let records = encode_sorted(&sorted);
    let target = serialize_payload(&records, &ContainerHeader::from(&config));
    let report = sse_entropy_report(&sorted.to_text(), &target, config.empty_symbol())?;
    if report.corrupt {
        return Err(SimulateError::FormulaViolation { alphabet_size, trial });
    }
    Ok((report.source_entropy, report.target_entropy))
}

fn aggregate(alphabet_size: usize, trials: &[(f64, f64)]) -> StudyRow {
    let n = trials.len() as f64;
    let stats = |pick: fn(&(f64, f64)) -> f64| {
        let values = trials.iter().map(pick);
        let mean = values.clone().sum::<f64>() / n;
        let min = values.clone().fold(f64::INFINITY, f64::min);
        let max = values.fold(f64::NEG_INFINITY, f64::max);
        (mean, min, max)
    };
    let (source_mean, source_min, source_max) = stats(|t| t.0);
    let (target_mean, target_min, target_max) = stats(|t| t.1);
    StudyRow {
        alphabet_size,
        source_mean,
        source_min,
        source_max,
        target_mean,
        target_min,
        target_max,
        ratio_mean: target_mean / source_mean,
    }
}

pub fn run_study(cfg: &StudyConfig) -> Result<Vec<StudyRow>, SimulateError> {
    cfg.validate()?;
    let jobs: Vec<(usize, usize)> = cfg
        .alphabet_sizes()
        .flat_map(|n| (0..cfg.trials_per_size).map(move |t| (n, t)))
        .collect();
    let results: Vec<(f64, f64)> = jobs
        .par_iter()
        .map(|&(n, t)| run_trial(cfg, n, t))
        .collect::<Result<_, _>>()?;
    Ok(results
        .chunks(cfg.trials_per_size)
        .zip(cfg.alphabet_sizes())
        .map(|(trials, n)| aggregate(n, trials))
        .collect())
}

pub const CSV_COLUMNS: &str =
    "alphabet_size,source_mean,source_min,source_max,target_mean,target_min,target_max,ratio_mean";

/// Writes a `# {config json}` comment line, the column header, then one row
/// per alphabet size.
pub fn write_csv<W: Write>(mut out: W, cfg: &StudyConfig, rows: &[StudyRow]) -> io::Result<()> {
    let meta = serde_json::json!({
        "config": cfg,
        "probabilities": "uniform on the simplex (normalized exponential draws)",
        "line_lengths": "uniform",
        "alphabet": "A-Z then a-z",
        "empty_symbol": "0x20",
    });
    writeln!(out, "# {meta}")?;
    writeln!(out, "{CSV_COLUMNS}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.alphabet_size,
            r.source_mean,
            r.source_min,
            r.source_max,
            r.target_mean,
            r.target_min,
            r.target_max,
            r.ratio_mean
        )?;
    }
    Ok(())
}
