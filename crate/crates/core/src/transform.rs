//! Sort and Set Empty.
//!
//! Lines are sorted, then every byte a line shares with the start of its
//! predecessor is replaced by the empty symbol. Decoding walks the records in
//! order and copies the elided bytes back from the previously reconstructed
//! line.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

/// Line separator. Never part of a line.
pub const LF: u8 = 0x0A;
/// Carriage return, reserved so CRLF framing cannot collide with the empty symbol.
pub const CR: u8 = 0x0D;
/// Default empty symbol (ASCII space).
pub const DEFAULT_EMPTY_SYMBOL: u8 = 0x20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error("line {line} contains a line separator at offset {offset}")]
    LineSeparator { line: usize, offset: usize },
    #[error("byte 0x{0:02X} cannot be used as the empty symbol")]
    InvalidEmptySymbol(u8),
    #[error(transparent)]
    AlphabetViolation(#[from] AlphabetViolation),
    #[error("every eligible byte value occurs in the input; no empty symbol is available")]
    AllBytesUsed,
    #[error("corrupt stream at record {record}: {reason}")]
    CorruptStream { record: usize, reason: String },
}

/// Where the empty symbol was first found in the input.
#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("empty symbol 0x{byte:02X} occurs in line {line} at offset {offset}")]
pub struct AlphabetViolation {
    pub line: usize,
    pub offset: usize,
    pub byte: u8,
}

/// An ordered collection of byte lines. Duplicates and empty lines are legal.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LineSet {
    lines: Vec<Vec<u8>>,
}

impl LineSet {
    pub fn new(lines: Vec<Vec<u8>>) -> Result<Self, TransformError> {
        for (line, bytes) in lines.iter().enumerate() {
            if let Some(offset) = bytes.iter().position(|&b| b == LF) {
                return Err(TransformError::LineSeparator { line, offset });
            }
        }
        Ok(Self { lines })
    }

    /// Convenience constructor for tests and generators.
    pub fn from_strs<S: AsRef<[u8]>>(lines: &[S]) -> Result<Self, TransformError> {
        Self::new(lines.iter().map(|l| l.as_ref().to_vec()).collect())
    }

    pub fn lines(&self) -> &[Vec<u8>] {
        &self.lines
    }

    pub fn into_lines(self) -> Vec<Vec<u8>> {
        self.lines
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// Length of the LF-terminated text form.
    pub fn text_len(&self) -> usize {
        self.lines.iter().map(|l| l.len() + 1).sum()
    }

    /// Every line followed by one LF.
    pub fn to_text(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.text_len());
        for line in &self.lines {
            out.extend_from_slice(line);
            out.push(LF);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum RunMode {
    /// Each elided byte becomes one empty symbol.
    #[default]
    Literal,
    /// Each line starts with the decimal elided count and one empty symbol as delimiter.
    Counted,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum Collation {
    #[default]
    ByteWise,
    /// Sort key lower-cases ASCII letters; stored bytes are untouched.
    CaseInsensitiveByteWise,
}

impl Collation {
    pub fn compare(self, a: &[u8], b: &[u8]) -> Ordering {
        match self {
            Collation::ByteWise => a.cmp(b),
            Collation::CaseInsensitiveByteWise => a
                .iter()
                .map(u8::to_ascii_lowercase)
                .cmp(b.iter().map(u8::to_ascii_lowercase))
                // raw bytes break ties so the order never depends on input order
                .then_with(|| a.cmp(b)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SseConfig {
    empty_symbol: u8,
    run_mode: RunMode,
    collation: Collation,
}

impl Default for SseConfig {
    fn default() -> Self {
        Self {
            empty_symbol: DEFAULT_EMPTY_SYMBOL,
            run_mode: RunMode::Literal,
            collation: Collation::ByteWise,
        }
    }
}

impl SseConfig {
    /// Literal, byte-wise configuration with the given empty symbol.
    pub fn new(empty_symbol: u8) -> Result<Self, TransformError> {
        Self::default()
            .with_empty_symbol(empty_symbol)?
            .with_run_mode(RunMode::Literal)
    }

    pub fn with_empty_symbol(mut self, empty_symbol: u8) -> Result<Self, TransformError> {
        check_empty_symbol(empty_symbol, self.run_mode)?;
        self.empty_symbol = empty_symbol;
        Ok(self)
    }

    pub fn with_run_mode(mut self, run_mode: RunMode) -> Result<Self, TransformError> {
        check_empty_symbol(self.empty_symbol, run_mode)?;
        self.run_mode = run_mode;
        Ok(self)
    }

    pub fn with_collation(mut self, collation: Collation) -> Self {
        self.collation = collation;
        self
    }

    pub fn empty_symbol(&self) -> u8 {
        self.empty_symbol
    }

    pub fn run_mode(&self) -> RunMode {
        self.run_mode
    }

    pub fn collation(&self) -> Collation {
        self.collation
    }
}

/// LF and CR frame lines; in counted mode a digit delimiter would make the
/// count ambiguous.
pub(crate) fn check_empty_symbol(empty_symbol: u8, run_mode: RunMode) -> Result<(), TransformError> {
    let digit_clash = run_mode == RunMode::Counted && empty_symbol.is_ascii_digit();
    if empty_symbol == LF || empty_symbol == CR || digit_clash {
        return Err(TransformError::InvalidEmptySymbol(empty_symbol));
    }
    Ok(())
}

/// One output line of the transform: `elided` bytes copied from the previous
/// line, then `suffix`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct TransformedLine {
    pub elided: usize,
    pub suffix: Vec<u8>,
}

impl TransformedLine {
    pub fn new(elided: usize, suffix: impl Into<Vec<u8>>) -> Self {
        Self {
            elided,
            suffix: suffix.into(),
        }
    }
}

impl fmt::Display for TransformedLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {:?})", self.elided, String::from_utf8_lossy(&self.suffix))
    }
}

pub fn sort_lines(input: &LineSet, collation: Collation) -> LineSet {
    let mut lines = input.lines.clone();
    match collation {
        Collation::ByteWise => lines.sort_unstable(),
        Collation::CaseInsensitiveByteWise => lines.sort_unstable_by(|a, b| collation.compare(a, b)),
    }
    LineSet { lines }
}

/// Length of the longest common prefix, compared byte for byte.
pub fn common_prefix_len(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

pub fn validate_alphabet(input: &LineSet, empty_symbol: u8) -> Result<(), AlphabetViolation> {
    for (line, bytes) in input.lines.iter().enumerate() {
        if let Some(offset) = bytes.iter().position(|&b| b == empty_symbol) {
            return Err(AlphabetViolation {
                line,
                offset,
                byte: empty_symbol,
            });
        }
    }
    Ok(())
}

/// Smallest byte outside {LF, CR} that no line uses.
pub fn choose_empty_symbol(input: &LineSet) -> Result<u8, TransformError> {
    let mut seen = [false; 256];
    for line in &input.lines {
        for &b in line {
            seen[b as usize] = true;
        }
    }
    (0u8..=255)
        .find(|&b| b != LF && b != CR && !seen[b as usize])
        .ok_or(TransformError::AllBytesUsed)
}

pub fn sse_encode(input: &LineSet, config: &SseConfig) -> Result<Vec<TransformedLine>, TransformError> {
    check_empty_symbol(config.empty_symbol, config.run_mode)?;
    validate_alphabet(input, config.empty_symbol)?;
    let sorted = sort_lines(input, config.collation);
    Ok(encode_sorted(&sorted))
}

/// Set Empty over lines that are already in their final order.
pub(crate) fn encode_sorted(sorted: &LineSet) -> Vec<TransformedLine> {
    let mut previous: &[u8] = &[];
    sorted
        .lines
        .iter()
        .map(|line| {
            let elided = common_prefix_len(previous, line);
            previous = line;
            TransformedLine::new(elided, &line[elided..])
        })
        .collect()
}

pub fn sse_decode(records: &[TransformedLine], config: &SseConfig) -> Result<LineSet, TransformError> {
    check_empty_symbol(config.empty_symbol, config.run_mode)?;
    let mut lines: Vec<Vec<u8>> = Vec::with_capacity(records.len());
    for (record, rec) in records.iter().enumerate() {
        let previous = lines.last().map(Vec::as_slice).unwrap_or(&[]);
        if rec.elided > previous.len() {
            let reason = if record == 0 {
                format!("first record elides {} bytes with no predecessor", rec.elided)
            } else {
                format!(
                    "elides {} bytes but the previous line has only {}",
                    rec.elided,
                    previous.len()
                )
            };
            return Err(TransformError::CorruptStream { record, reason });
        }
        if rec.suffix.contains(&LF) {
            return Err(TransformError::CorruptStream {
                record,
                reason: "suffix contains a line separator".into(),
            });
        }
        let mut line = Vec::with_capacity(rec.elided + rec.suffix.len());
        line.extend_from_slice(&previous[..rec.elided]);
        line.extend_from_slice(&rec.suffix);
        lines.push(line);
    }
    Ok(LineSet { lines })
}
