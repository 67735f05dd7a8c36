//! On-disk format for transformed text.
//!
//! ```text
//! offset  size  field
//! 0       4     magic "SSE1"
//! 4       1     version 0x01
//! 5       1     flags: bit0 run mode (0 literal, 1 counted)
//!                      bit1 collation (0 byte-wise, 1 case-insensitive)
//!                      bits 2-7 zero
//! 6       1     empty symbol
//! 7       ..    payload, one LF-terminated line per record
//! ```
//!
//! Literal lines are `empty_symbol * elided ++ suffix ++ LF`. Counted lines
//! are `decimal(elided) ++ empty_symbol ++ suffix ++ LF`.

use thiserror::Error;

use crate::transform::{
    check_empty_symbol, Collation, RunMode, SseConfig, TransformError, TransformedLine, LF,
};

pub const MAGIC: [u8; 4] = *b"SSE1";
pub const VERSION: u8 = 0x01;
pub const HEADER_LEN: usize = 7;
/// Conventional file extension.
pub const EXTENSION: &str = "sse";

const FLAG_COUNTED: u8 = 0b01;
const FLAG_CASE_INSENSITIVE: u8 = 0b10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ContainerError {
    #[error("bad magic: expected \"SSE1\"")]
    BadMagic,
    #[error("unsupported version 0x{0:02X}")]
    BadVersion(u8),
    #[error("reserved flag bits set: 0b{0:08b}")]
    BadFlags(u8),
    #[error("header names invalid empty symbol 0x{0:02X}")]
    BadEmptySymbol(u8),
    #[error("container is shorter than its {HEADER_LEN}-byte header")]
    TruncatedHeader,
    #[error("malformed line {line}: {reason}")]
    MalformedLine { line: usize, reason: &'static str },
    #[error("payload does not end with a line feed")]
    TruncatedPayload,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ContainerHeader {
    pub run_mode: RunMode,
    pub collation: Collation,
    pub empty_symbol: u8,
}

impl From<&SseConfig> for ContainerHeader {
    fn from(config: &SseConfig) -> Self {
        Self {
            run_mode: config.run_mode(),
            collation: config.collation(),
            empty_symbol: config.empty_symbol(),
        }
    }
}

impl ContainerHeader {
    pub fn config(&self) -> Result<SseConfig, TransformError> {
        Ok(SseConfig::default()
            .with_empty_symbol(self.empty_symbol)?
            .with_run_mode(self.run_mode)?
            .with_collation(self.collation))
    }

    pub fn flags(&self) -> u8 {
        let mut flags = 0;
        if self.run_mode == RunMode::Counted {
            flags |= FLAG_COUNTED;
        }
        if self.collation == Collation::CaseInsensitiveByteWise {
            flags |= FLAG_CASE_INSENSITIVE;
        }
        flags
    }

    pub fn to_bytes(&self) -> [u8; HEADER_LEN] {
        let [m0, m1, m2, m3] = MAGIC;
        [m0, m1, m2, m3, VERSION, self.flags(), self.empty_symbol]
    }

    /// Parses the header and returns it with the remaining payload.
    pub fn parse(bytes: &[u8]) -> Result<(Self, &[u8]), ContainerError> {
        let magic_seen = &bytes[..bytes.len().min(MAGIC.len())];
        if magic_seen != &MAGIC[..magic_seen.len()] {
            return Err(ContainerError::BadMagic);
        }
        if bytes.len() < HEADER_LEN {
            return Err(ContainerError::TruncatedHeader);
        }
        if bytes[4] != VERSION {
            return Err(ContainerError::BadVersion(bytes[4]));
        }
        let flags = bytes[5];
        if flags & !(FLAG_COUNTED | FLAG_CASE_INSENSITIVE) != 0 {
            return Err(ContainerError::BadFlags(flags));
        }
        let run_mode = if flags & FLAG_COUNTED != 0 {
            RunMode::Counted
        } else {
            RunMode::Literal
        };
        let collation = if flags & FLAG_CASE_INSENSITIVE != 0 {
            Collation::CaseInsensitiveByteWise
        } else {
            Collation::ByteWise
        };
        let empty_symbol = bytes[6];
        check_empty_symbol(empty_symbol, run_mode).map_err(|_| ContainerError::BadEmptySymbol(empty_symbol))?;
        let header = Self {
            run_mode,
            collation,
            empty_symbol,
        };
        Ok((header, &bytes[HEADER_LEN..]))
    }
}

/// A header together with its serialized payload.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SseContainer {
    pub header: ContainerHeader,
    pub payload: Vec<u8>,
}

impl SseContainer {
    pub fn new(records: &[TransformedLine], header: ContainerHeader) -> Self {
        Self {
            header,
            payload: serialize_payload(records, &header),
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + self.payload.len());
        out.extend_from_slice(&self.header.to_bytes());
        out.extend_from_slice(&self.payload);
        out
    }
}

/// Payload bytes only, without the header.
pub fn serialize_payload(records: &[TransformedLine], header: &ContainerHeader) -> Vec<u8> {
    let empty = header.empty_symbol;
    let mut out = Vec::new();
    match header.run_mode {
        RunMode::Literal => {
            out.reserve(records.iter().map(|r| r.elided + r.suffix.len() + 1).sum());
            for rec in records {
                out.resize(out.len() + rec.elided, empty);
                out.extend_from_slice(&rec.suffix);
                out.push(LF);
            }
        }
        RunMode::Counted => {
            for rec in records {
                out.extend_from_slice(rec.elided.to_string().as_bytes());
                out.push(empty);
                out.extend_from_slice(&rec.suffix);
                out.push(LF);
            }
        }
    }
    out
}

pub fn serialize(records: &[TransformedLine], header: &ContainerHeader) -> Vec<u8> {
    SseContainer::new(records, *header).to_bytes()
}

pub fn deserialize(bytes: &[u8]) -> Result<(ContainerHeader, Vec<TransformedLine>), ContainerError> {
    let (header, payload) = ContainerHeader::parse(bytes)?;
    let records = deserialize_payload(payload, &header)?;
    Ok((header, records))
}

pub fn deserialize_payload(payload: &[u8], header: &ContainerHeader) -> Result<Vec<TransformedLine>, ContainerError> {
    if payload.is_empty() {
        return Ok(Vec::new());
    }
    let body = payload.strip_suffix(&[LF]).ok_or(ContainerError::TruncatedPayload)?;
    let empty = header.empty_symbol;
    body.split(|&b| b == LF)
        .enumerate()
        .map(|(line, raw)| match header.run_mode {
            RunMode::Literal => {
                let elided = raw.iter().take_while(|&&b| b == empty).count();
                Ok(TransformedLine::new(elided, &raw[elided..]))
            }
            RunMode::Counted => parse_counted(line, raw, empty),
        })
        .collect()
}

fn parse_counted(line: usize, raw: &[u8], empty: u8) -> Result<TransformedLine, ContainerError> {
    let malformed = |reason| ContainerError::MalformedLine { line, reason };
    let delim = raw
        .iter()
        .position(|&b| b == empty)
        .ok_or(malformed("missing empty-symbol delimiter"))?;
    let digits = &raw[..delim];
    if digits.is_empty() {
        return Err(malformed("missing elided count"));
    }
    if !digits.iter().all(u8::is_ascii_digit) {
        return Err(malformed("non-digit before delimiter"));
    }
    let elided = std::str::from_utf8(digits)
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .ok_or(malformed("elided count overflows"))?;
    Ok(TransformedLine::new(elided, &raw[delim + 1..]))
}
