//! Downstream compressors and the two-arm pipeline measurement.

mod external;
mod huffman;

use std::path::PathBuf;
use std::time::Duration;

use serde::Serialize;
use thiserror::Error;

use crate::container::{serialize_payload, ContainerHeader};
use crate::transform::{sort_lines, sse_encode, LineSet, SseConfig, TransformError};

pub use external::{external_compress, DEFAULT_TIMEOUT};
pub use huffman::{huffman_decode, huffman_encode, CodeLengths, HuffmanError, HEADER_LEN as HUFFMAN_HEADER_LEN};

#[derive(Debug, Error)]
pub enum BackendError {
    #[error(transparent)]
    Huffman(#[from] HuffmanError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error("invalid command template: {0}")]
    InvalidTemplate(String),
    #[error("compressor not found: {0}")]
    ToolNotFound(String),
    #[error("`{command}` exited with {code:?}: {stderr}{}", kept_note(kept))]
    NonZeroExit {
        command: String,
        code: Option<i32>,
        stderr: String,
        kept: Option<PathBuf>,
    },
    #[error("`{command}` timed out after {seconds} s{}", kept_note(kept))]
    Timeout {
        command: String,
        seconds: f64,
        kept: Option<PathBuf>,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn kept_note(kept: &Option<PathBuf>) -> String {
    kept.as_ref()
        .map(|p| format!(" (temporary files kept in {})", p.display()))
        .unwrap_or_default()
}

/// Sizes before and after compression; `ratio = compressed / original`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CodecResult {
    pub original_size: u64,
    pub compressed_size: u64,
    pub ratio: f64,
}

impl CodecResult {
    pub fn new(original_size: u64, compressed_size: u64) -> Self {
        let ratio = if original_size == 0 {
            0.0
        } else {
            compressed_size as f64 / original_size as f64
        };
        Self {
            original_size,
            compressed_size,
            ratio,
        }
    }
}

pub trait Codec: Sync {
    /// Human-readable description, including the exact command where relevant.
    fn describe(&self) -> String;
    fn compress(&self, input: &[u8]) -> Result<CodecResult, BackendError>;
}

/// The built-in canonical Huffman coder. Sizes include its 264-byte header.
#[derive(Debug, Clone, Copy, Default)]
pub struct BuiltinHuffman;

impl Codec for BuiltinHuffman {
    fn describe(&self) -> String {
        "builtin order-0 canonical Huffman".into()
    }

    fn compress(&self, input: &[u8]) -> Result<CodecResult, BackendError> {
        let coded = huffman_encode(input)?;
        Ok(CodecResult::new(input.len() as u64, coded.len() as u64))
    }
}

#[derive(Debug, Clone)]
pub struct ExternalCommand {
    pub template: String,
    pub timeout: Duration,
}

impl ExternalCommand {
    pub fn new(template: impl Into<String>) -> Self {
        Self {
            template: template.into(),
            timeout: DEFAULT_TIMEOUT,
        }
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self
    }
}

impl Codec for ExternalCommand {
    fn describe(&self) -> String {
        format!("external: {}", self.template)
    }

    fn compress(&self, input: &[u8]) -> Result<CodecResult, BackendError> {
        external_compress(&self.template, input, self.timeout)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PipelineMeasurement {
    /// Codec applied to the sorted text.
    pub source: CodecResult,
    /// The same codec applied to the transformed payload (no container header).
    pub sse: CodecResult,
    /// `sse.ratio / source.ratio`; below 1 means the transform helped.
    pub ratio_of_ratios: f64,
}

/// The two texts a pipeline compares: sorted lines and the transformed payload.
pub fn pipeline_arms(input: &LineSet, config: &SseConfig) -> Result<(Vec<u8>, Vec<u8>), TransformError> {
    let records = sse_encode(input, config)?;
    let sorted = sort_lines(input, config.collation()).to_text();
    let payload = serialize_payload(&records, &ContainerHeader::from(config));
    Ok((sorted, payload))
}

pub fn measure_pipeline(
    input: &LineSet,
    config: &SseConfig,
    codec: &dyn Codec,
) -> Result<PipelineMeasurement, BackendError> {
    let (sorted, payload) = pipeline_arms(input, config)?;
    let source = codec.compress(&sorted)?;
    let sse = codec.compress(&payload)?;
    Ok(PipelineMeasurement {
        source,
        sse,
        ratio_of_ratios: sse.ratio / source.ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::RunMode;

    /// Records every input it sees so the arms can be compared.
    struct Recorder(std::sync::Mutex<Vec<Vec<u8>>>);

    impl Codec for Recorder {
        fn describe(&self) -> String {
            "recorder".into()
        }
        fn compress(&self, input: &[u8]) -> Result<CodecResult, BackendError> {
            self.0.lock().unwrap().push(input.to_vec());
            Ok(CodecResult::new(input.len() as u64, input.len() as u64 / 2))
        }
    }

    #[test]
    fn arms_differ_only_by_transform() {
        let lines = LineSet::from_strs(&["dog", "car", "cat", "card"]).unwrap();
        let rec = Recorder(Default::default());
        let m = measure_pipeline(&lines, &SseConfig::default(), &rec).unwrap();
        let seen = rec.0.into_inner().unwrap();
        assert_eq!(seen[0], b"car\ncard\ncat\ndog\n");
        assert_eq!(seen[1], b"car\n   d\n  t\ndog\n");
        assert_eq!(m.source.original_size, m.sse.original_size);
    }

    #[test]
    fn counted_arm_uses_counted_payload() {
        let lines = LineSet::from_strs(&["car", "card"]).unwrap();
        let cfg = SseConfig::default().with_run_mode(RunMode::Counted).unwrap();
        let (sorted, payload) = pipeline_arms(&lines, &cfg).unwrap();
        assert_eq!(sorted, b"car\ncard\n");
        assert_eq!(payload, b"0 car\n3 d\n");
    }

    #[test]
    fn builtin_ratio_of_ratios_below_one_for_shared_prefixes() {
        let lines: Vec<String> = (0..500).map(|i| format!("http://www.example.com/path/{i:05}")).collect();
        let lines = LineSet::from_strs(&lines).unwrap();
        let m = measure_pipeline(&lines, &SseConfig::default(), &BuiltinHuffman).unwrap();
        assert!(m.ratio_of_ratios < 1.0, "{m:?}");
    }

    #[test]
    fn codec_result_ratio() {
        let r = CodecResult::new(200, 50);
        assert_eq!(r.ratio, 0.25);
        assert_eq!(CodecResult::new(0, 0).ratio, 0.0);
    }
}
