//! Sort and Set Empty (SSE): a reversible preprocessing transform for text
//! whose line order carries no meaning, such as word, URL or hash lists.
//!
//! Lines are sorted and each line's shared prefix with its predecessor is
//! replaced by an empty symbol. A general-purpose compressor then sees a
//! lower-entropy text. The crate also carries the entropy analysis, a
//! Monte Carlo study, a built-in Huffman coder and a benchmark harness.
//!
//! ```
//! use sse_core::{decode_container, encode_container, LineSet, SseConfig};
//!
//! let lines = LineSet::from_strs(&["dog", "car", "cat", "card"]).unwrap();
//! let container = encode_container(&lines, &SseConfig::default()).unwrap();
//! assert_eq!(container.payload, b"car\n   d\n  t\ndog\n");
//! let decoded = decode_container(&container.to_bytes()).unwrap();
//! assert_eq!(decoded.to_text(), b"car\ncard\ncat\ndog\n");
//! ```

pub mod backend;
pub mod bench;
pub mod container;
pub mod corpus;
pub mod entropy;
pub mod simulate;
pub mod theory;
pub mod transform;

use thiserror::Error;

pub use container::{ContainerError, ContainerHeader, SseContainer};
pub use transform::{Collation, LineSet, RunMode, SseConfig, TransformError, TransformedLine};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecodeError {
    #[error(transparent)]
    Container(#[from] ContainerError),
    #[error(transparent)]
    Transform(#[from] TransformError),
}

/// Sorts, sets empty and serializes `lines` into a container.
pub fn encode_container(lines: &LineSet, config: &SseConfig) -> Result<SseContainer, TransformError> {
    let records = transform::sse_encode(lines, config)?;
    let container = SseContainer::new(&records, ContainerHeader::from(config));
    if config.run_mode() == RunMode::Literal {
        // Set Empty is a 1:1 byte substitution
        assert_eq!(container.payload.len(), lines.text_len(), "literal payload length law");
    }
    Ok(container)
}

/// Parses a container and restores the sorted lines.
pub fn decode_container(bytes: &[u8]) -> Result<LineSet, DecodeError> {
    let (header, records) = container::deserialize(bytes)?;
    let config = header.config().map_err(|_| ContainerError::BadEmptySymbol(header.empty_symbol))?;
    Ok(transform::sse_decode(&records, &config)?)
}
