//! Table-style comparison of compression ratios with and without the
//! transform, in entropy terms (`H/8`) and with an actual codec.

use serde::Serialize;

use crate::backend::{measure_pipeline, pipeline_arms, BackendError, Codec, PipelineMeasurement};
use crate::entropy::{compression_ratio, histogram, shannon_entropy};
use crate::transform::{LineSet, SseConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioColumns {
    pub source: f64,
    pub sse: f64,
    /// `sse / source`.
    pub ratio_of_ratios: f64,
}

impl RatioColumns {
    fn new(source: f64, sse: f64) -> Self {
        Self {
            source,
            sse,
            ratio_of_ratios: sse / source,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub label: String,
    pub lines: usize,
    pub source_bytes: u64,
    pub codec: String,
    pub entropy: RatioColumns,
    pub actual: RatioColumns,
    pub pipeline: PipelineMeasurement,
}

pub fn bench_lines(
    label: impl Into<String>,
    lines: &LineSet,
    config: &SseConfig,
    codec: &dyn Codec,
) -> Result<BenchRow, BackendError> {
    let (sorted, payload) = pipeline_arms(lines, config)?;
    let entropy_ratio = |text: &[u8]| shannon_entropy(&histogram(text)).map(compression_ratio).unwrap_or(0.0);
    let entropy = RatioColumns::new(entropy_ratio(&sorted), entropy_ratio(&payload));
    let pipeline = measure_pipeline(lines, config, codec)?;
    Ok(BenchRow {
        label: label.into(),
        lines: lines.len(),
        source_bytes: sorted.len() as u64,
        codec: codec.describe(),
        entropy,
        actual: RatioColumns::new(pipeline.source.ratio, pipeline.sse.ratio),
        pipeline,
    })
}
