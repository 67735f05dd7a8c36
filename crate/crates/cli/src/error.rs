use std::path::PathBuf;

use thiserror::Error;

use sse_core::backend::BackendError;
use sse_core::corpus::CorpusError;
use sse_core::simulate::SimulateError;
use sse_core::{ContainerError, DecodeError, TransformError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error(transparent)]
    Backend(#[from] BackendError),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Simulate(#[from] SimulateError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: input exceeds --max-bytes {limit}")]
    TooLarge { path: PathBuf, limit: u64 },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Corpus(_) => 1,
            CliError::Transform(TransformError::AlphabetViolation(_) | TransformError::AllBytesUsed) => 2,
            CliError::Transform(_) => 1,
            CliError::Io { .. } | CliError::TooLarge { .. } => 3,
            CliError::Decode(DecodeError::Container(err)) => match err {
                ContainerError::BadMagic
                | ContainerError::BadVersion(_)
                | ContainerError::BadFlags(_)
                | ContainerError::BadEmptySymbol(_) => 4,
                ContainerError::TruncatedHeader
                | ContainerError::MalformedLine { .. }
                | ContainerError::TruncatedPayload => 5,
            },
            CliError::Decode(DecodeError::Transform(_)) => 5,
            CliError::Backend(err) => match err {
                BackendError::ToolNotFound(_)
                | BackendError::NonZeroExit { .. }
                | BackendError::Timeout { .. }
                | BackendError::InvalidTemplate(_) => 6,
                BackendError::Transform(TransformError::AlphabetViolation(_)) => 2,
                BackendError::Io(_) => 3,
                BackendError::Huffman(_) | BackendError::Transform(_) => 1,
            },
            CliError::Simulate(_) => 1,
        }
    }

    pub fn hint(&self) -> Option<&'static str> {
        match self {
            CliError::Transform(TransformError::AlphabetViolation(_))
            | CliError::Backend(BackendError::Transform(TransformError::AlphabetViolation(_))) => {
                Some("pick a byte absent from the input with --empty auto")
            }
            _ => None,
        }
    }
}
