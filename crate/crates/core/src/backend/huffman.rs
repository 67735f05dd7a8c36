//! Canonical order-0 Huffman coder.
//!
//! Stream layout:
//!
//! ```text
//! 256 bytes   code length per byte value, 0..=32 (0 = absent)
//! 8 bytes     original length, little-endian u64
//! ..          codewords packed MSB-first, last byte zero-padded
//! ```
//!
//! Code lengths come from package-merge with a 32-bit limit, which yields the
//! same total cost as plain Huffman whenever the unconstrained code fits.
//! Codewords are assigned canonically by (length, byte value).

use thiserror::Error;

use crate::entropy::ByteHistogram;

pub const MAX_CODE_LEN: u8 = 32;
pub const TABLE_LEN: usize = 256;
pub const HEADER_LEN: usize = TABLE_LEN + 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HuffmanError {
    #[error("cannot encode empty input")]
    EmptyInput,
    #[error("corrupt Huffman stream: {0}")]
    CorruptStream(&'static str),
}

/// Code lengths for all 256 byte values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeLengths([u8; 256]);

impl CodeLengths {
    pub fn from_histogram(hist: &ByteHistogram) -> Self {
        let symbols: Vec<(u64, u8)> = hist.nonzero().map(|(b, q)| (q, b)).collect();
        let mut lengths = [0u8; 256];
        match symbols.len() {
            0 => {}
            // a zero-length code cannot be packed
            1 => lengths[symbols[0].1 as usize] = 1,
            _ => {
                for (sym, len) in package_merge(&symbols, MAX_CODE_LEN) {
                    lengths[sym as usize] = len;
                }
            }
        }
        Self(lengths)
    }

    pub fn as_array(&self) -> &[u8; 256] {
        &self.0
    }

    /// Bits needed for the codewords of a text with this histogram.
    pub fn payload_bits(&self, hist: &ByteHistogram) -> u64 {
        hist.nonzero().map(|(b, q)| q * self.0[b as usize] as u64).sum()
    }

    /// Kraft sum scaled by 2^32; a complete prefix code sums to exactly 2^32.
    fn kraft_scaled(&self) -> u64 {
        self.0
            .iter()
            .filter(|&&l| l > 0)
            .map(|&l| 1u64 << (MAX_CODE_LEN - l))
            .sum()
    }

    /// Canonical codewords, indexed by byte value.
    fn codewords(&self) -> [u32; 256] {
        let mut order: Vec<u8> = (0u8..=255).filter(|&b| self.0[b as usize] > 0).collect();
        order.sort_by_key(|&b| (self.0[b as usize], b));
        let mut codes = [0u32; 256];
        let mut code: u64 = 0;
        let mut prev_len = 0u8;
        for (i, &b) in order.iter().enumerate() {
            let len = self.0[b as usize];
            if i > 0 {
                code = (code + 1) << (len - prev_len);
            } else {
                code = 0;
            }
            codes[b as usize] = code as u32;
            prev_len = len;
        }
        codes
    }
}

/// Package-merge over `(weight, symbol)` pairs. Returns `(symbol, length)`.
fn package_merge(symbols: &[(u64, u8)], limit: u8) -> Vec<(u8, u8)> {
    let n = symbols.len();
    debug_assert!(n >= 2 && n <= 1 << limit);
    let mut leaves: Vec<(u64, u8)> = symbols.to_vec();
    leaves.sort();

    // each item carries how often every leaf occurs inside it
    #[derive(Clone)]
    struct Item {
        weight: u64,
        counts: Vec<u8>,
    }
    let leaf_items: Vec<Item> = (0..n)
        .map(|i| {
            let mut counts = vec![0u8; n];
            counts[i] = 1;
            Item {
                weight: leaves[i].0,
                counts,
            }
        })
        .collect();

    let mut list = leaf_items.clone();
    for _ in 1..limit {
        let packages = list.chunks_exact(2).map(|pair| Item {
            weight: pair[0].weight + pair[1].weight,
            counts: pair[0].counts.iter().zip(&pair[1].counts).map(|(a, b)| a + b).collect(),
        });
        let mut merged = Vec::with_capacity(n + list.len() / 2);
        let mut leaves_iter = leaf_items.iter().cloned().peekable();
        let mut packages = packages.peekable();
        loop {
            let take_leaf = match (leaves_iter.peek(), packages.peek()) {
                (Some(l), Some(p)) => l.weight <= p.weight,
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (None, None) => break,
            };
            let next = if take_leaf { leaves_iter.next() } else { packages.next() };
            merged.extend(next);
        }
        // only the cheapest 2n - 2 items can ever be selected
        merged.truncate(2 * n - 2);
        list = merged;
    }

    let mut lengths = vec![0u8; n];
    for item in &list[..2 * n - 2] {
        for (len, c) in lengths.iter_mut().zip(&item.counts) {
            *len += c;
        }
    }
    leaves.iter().zip(lengths).map(|(&(_, sym), len)| (sym, len)).collect()
}

struct BitWriter {
    out: Vec<u8>,
    acc: u64,
    filled: u32,
}

impl BitWriter {
    fn new(out: Vec<u8>) -> Self {
        Self { out, acc: 0, filled: 0 }
    }

    fn push(&mut self, code: u32, len: u8) {
        self.acc = (self.acc << len) | code as u64;
        self.filled += len as u32;
        while self.filled >= 8 {
            self.filled -= 8;
            self.out.push((self.acc >> self.filled) as u8);
        }
        self.acc &= (1u64 << self.filled) - 1;
    }

    fn finish(mut self) -> Vec<u8> {
        if self.filled > 0 {
            self.out.push((self.acc << (8 - self.filled)) as u8);
        }
        self.out
    }
}

pub fn huffman_encode(input: &[u8]) -> Result<Vec<u8>, HuffmanError> {
    if input.is_empty() {
        return Err(HuffmanError::EmptyInput);
    }
    let hist = ByteHistogram::from_bytes(input);
    let lengths = CodeLengths::from_histogram(&hist);
    let codes = lengths.codewords();
    let payload_bytes = lengths.payload_bits(&hist).div_ceil(8) as usize;

    let mut out = Vec::with_capacity(HEADER_LEN + payload_bytes);
    out.extend_from_slice(lengths.as_array());
    out.extend_from_slice(&(input.len() as u64).to_le_bytes());
    let mut writer = BitWriter::new(out);
    for &b in input {
        writer.push(codes[b as usize], lengths.0[b as usize]);
    }
    Ok(writer.finish())
}

pub fn huffman_decode(coded: &[u8]) -> Result<Vec<u8>, HuffmanError> {
    if coded.len() < HEADER_LEN {
        return Err(HuffmanError::CorruptStream("shorter than the table header"));
    }
    let mut table = [0u8; 256];
    table.copy_from_slice(&coded[..TABLE_LEN]);
    if table.iter().any(|&l| l > MAX_CODE_LEN) {
        return Err(HuffmanError::CorruptStream("code length above 32"));
    }
    let lengths = CodeLengths(table);
    let declared = u64::from_le_bytes(coded[TABLE_LEN..HEADER_LEN].try_into().expect("8 bytes"));
    let used: Vec<u8> = (0u8..=255).filter(|&b| table[b as usize] > 0).collect();
    if used.is_empty() {
        return if declared == 0 {
            Ok(Vec::new())
        } else {
            Err(HuffmanError::CorruptStream("no codes but nonzero length"))
        };
    }
    if lengths.kraft_scaled() > 1u64 << MAX_CODE_LEN {
        return Err(HuffmanError::CorruptStream("code lengths violate the Kraft inequality"));
    }
    let payload = &coded[HEADER_LEN..];
    // every symbol takes at least one bit
    if declared > payload.len() as u64 * 8 {
        return Err(HuffmanError::CorruptStream("stream ends early"));
    }

    // canonical decoding tables: per length, first code and index of first symbol
    let mut order = used;
    order.sort_by_key(|&b| (table[b as usize], b));
    let max_len = table[*order.last().expect("nonempty") as usize];
    let mut count = [0u32; MAX_CODE_LEN as usize + 1];
    for &b in &order {
        count[table[b as usize] as usize] += 1;
    }
    let mut first_code = [0u64; MAX_CODE_LEN as usize + 2];
    let mut first_index = [0usize; MAX_CODE_LEN as usize + 2];
    let mut code = 0u64;
    let mut index = 0usize;
    for len in 1..=MAX_CODE_LEN as usize {
        first_code[len] = code;
        first_index[len] = index;
        code = (code + count[len] as u64) << 1;
        index += count[len] as usize;
    }

    let mut out = Vec::with_capacity(declared as usize);
    let mut bits = payload.iter().flat_map(|&byte| (0..8).rev().map(move |k| (byte >> k) & 1));
    for _ in 0..declared {
        let mut code = 0u64;
        let mut len = 0usize;
        loop {
            let bit = bits.next().ok_or(HuffmanError::CorruptStream("stream ends early"))?;
            code = (code << 1) | bit as u64;
            len += 1;
            let offset = code.wrapping_sub(first_code[len]);
            if code >= first_code[len] && offset < count[len] as u64 {
                out.push(order[first_index[len] + offset as usize]);
                break;
            }
            if len >= max_len as usize {
                return Err(HuffmanError::CorruptStream("invalid codeword"));
            }
        }
    }
    Ok(out)
}
