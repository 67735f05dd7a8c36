//! Reading line files and generating deterministic synthetic corpora.
//!
//! Three families stand in for real line-order-independent files:
//! pronounceable word lists, URL lists with heavily shared prefixes, and
//! uniformly random 32-digit hex lines with MD5-like statistics.

use std::fmt;
use std::io::{self, BufRead};
use std::str::FromStr;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::transform::{LineSet, CR, LF};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CorpusError {
    #[error("corpus line count must be at least 1")]
    EmptyCorpus,
    #[error("unknown corpus family {0:?} (expected word, url or hex)")]
    UnknownFamily(String),
    #[error("bad corpus spec {0:?}: expected family:count:seed")]
    BadSpec(String),
}

/// Splits a stream on LF. A final line without LF is kept. With `crlf`, one
/// trailing CR is stripped from each line.
pub fn read_lines<R: BufRead>(mut reader: R, crlf: bool) -> io::Result<LineSet> {
    let mut lines = Vec::new();
    let mut buf = Vec::new();
    loop {
        buf.clear();
        if reader.read_until(LF, &mut buf)? == 0 {
            break;
        }
        if buf.last() == Some(&LF) {
            buf.pop();
        }
        if crlf && buf.last() == Some(&CR) {
            buf.pop();
        }
        lines.push(buf.clone());
    }
    Ok(LineSet::new(lines).expect("LF was split out"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CorpusFamily {
    WordList,
    UrlList,
    HexList,
}

impl CorpusFamily {
    pub const ALL: [CorpusFamily; 3] = [CorpusFamily::WordList, CorpusFamily::UrlList, CorpusFamily::HexList];

    pub fn short_name(self) -> &'static str {
        match self {
            CorpusFamily::WordList => "word",
            CorpusFamily::UrlList => "url",
            CorpusFamily::HexList => "hex",
        }
    }
}

impl fmt::Display for CorpusFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for CorpusFamily {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "word" | "words" | "wordlist" => Ok(CorpusFamily::WordList),
            "url" | "urls" | "urllist" => Ok(CorpusFamily::UrlList),
            "hex" | "md5" | "hexlist" => Ok(CorpusFamily::HexList),
            _ => Err(CorpusError::UnknownFamily(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CorpusSpec {
    pub family: CorpusFamily,
    pub count: usize,
    pub seed: u64,
}

impl CorpusSpec {
    pub fn new(family: CorpusFamily, count: usize, seed: u64) -> Result<Self, CorpusError> {
        if count == 0 {
            return Err(CorpusError::EmptyCorpus);
        }
        Ok(Self { family, count, seed })
    }
}

/// Parses `family:count:seed`, e.g. `url:10000:42`.
impl FromStr for CorpusSpec {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CorpusError::BadSpec(s.to_string());
        let mut parts = s.split(':');
        let (Some(family), Some(count), Some(seed), None) = (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(bad());
        };
        let family = family.parse()?;
        let count = count.parse().map_err(|_| bad())?;
        let seed = seed.parse().map_err(|_| bad())?;
        Self::new(family, count, seed)
    }
}

const CONSONANTS: &[u8] = b"bcdfghjklmnprstvwz";
const VOWELS: &[u8] = b"aeiou";
const TLDS: &[&str] = &["com", "org", "net", "edu", "io"];
const DOMAIN_COUNT: usize = 50;
const PATH_POOL: usize = 200;

fn pseudo_word(rng: &mut impl Rng, len: usize) -> String {
    let mut consonant = rng.random_bool(0.5);
    (0..len)
        .map(|_| {
            let pool = if consonant { CONSONANTS } else { VOWELS };
            consonant = !consonant;
            *pool.choose(rng).expect("nonempty pool") as char
        })
        .collect()
}

pub fn generate(spec: &CorpusSpec) -> LineSet {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let lines: Vec<String> = match spec.family {
        CorpusFamily::WordList => (0..spec.count)
            .map(|_| {
                let len = rng.random_range(3..=12);
                pseudo_word(&mut rng, len)
            })
            .collect(),
        CorpusFamily::UrlList => {
            let domains: Vec<String> = (0..DOMAIN_COUNT)
                .map(|_| {
                    let len = rng.random_range(4..=10);
                    let name = pseudo_word(&mut rng, len);
                    let tld = TLDS.choose(&mut rng).expect("nonempty");
                    format!("www.{name}.{tld}")
                })
                .collect();
            let segments: Vec<String> = (0..PATH_POOL)
                .map(|_| {
                    let len = rng.random_range(3..=9);
                    pseudo_word(&mut rng, len)
                })
                .collect();
            (0..spec.count)
                .map(|_| {
                    let domain = domains.choose(&mut rng).expect("nonempty");
                    let depth = rng.random_range(1..=4);
                    let path: Vec<&str> = (0..depth)
                        .map(|_| segments.choose(&mut rng).expect("nonempty").as_str())
                        .collect();
                    format!("http://{domain}/{}", path.join("/"))
                })
                .collect()
        }
        CorpusFamily::HexList => (0..spec.count)
            .map(|_| {
                let v: u128 = rng.random();
                format!("{v:032x}")
            })
            .collect(),
    };
    LineSet::from_strs(&lines).expect("generated lines have no LF")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::{common_prefix_len, sort_lines, Collation};

    fn strs(set: &LineSet) -> Vec<String> {
        set.lines().iter().map(|l| String::from_utf8(l.clone()).unwrap()).collect()
    }

    #[test]
    fn reads_lines() {
        assert_eq!(strs(&read_lines(&b"cat\ndog\n"[..], false).unwrap()), ["cat", "dog"]);
        assert_eq!(strs(&read_lines(&b"cat\ndog"[..], false).unwrap()), ["cat", "dog"]);
        assert_eq!(strs(&read_lines(&b"a\r\nb\r\n"[..], true).unwrap()), ["a", "b"]);
        assert_eq!(strs(&read_lines(&b"a\r\nb\r\n"[..], false).unwrap()), ["a\r", "b\r"]);
        assert!(read_lines(&b""[..], false).unwrap().is_empty());
        assert_eq!(strs(&read_lines(&b"\n\nx\n"[..], false).unwrap()), ["", "", "x"]);
        // only one CR is stripped
        assert_eq!(strs(&read_lines(&b"a\r\r\n"[..], true).unwrap()), ["a\r"]);
    }

    #[test]
    fn parses_specs() {
        let spec: CorpusSpec = "url:10000:42".parse().unwrap();
        assert_eq!(spec, CorpusSpec::new(CorpusFamily::UrlList, 10000, 42).unwrap());
        assert_eq!("md5:5:1".parse::<CorpusSpec>().unwrap().family, CorpusFamily::HexList);
        assert_eq!("word:0:1".parse::<CorpusSpec>(), Err(CorpusError::EmptyCorpus));
        assert!(matches!("zip:5:1".parse::<CorpusSpec>(), Err(CorpusError::UnknownFamily(_))));
        assert!(matches!("word:5".parse::<CorpusSpec>(), Err(CorpusError::BadSpec(_))));
        assert!(matches!("word:5:1:2".parse::<CorpusSpec>(), Err(CorpusError::BadSpec(_))));
        assert!(matches!("word:x:1".parse::<CorpusSpec>(), Err(CorpusError::BadSpec(_))));
    }

    #[test]
    fn hex_lines_are_32_lowercase_digits() {
        let set = generate(&CorpusSpec::new(CorpusFamily::HexList, 2000, 7).unwrap());
        assert_eq!(set.len(), 2000);
        for line in set.lines() {
            assert_eq!(line.len(), 32);
            assert!(line.iter().all(|b| b.is_ascii_digit() || (b'a'..=b'f').contains(b)));
        }
    }

    #[test]
    fn words_alternate_consonants_and_vowels() {
        let set = generate(&CorpusSpec::new(CorpusFamily::WordList, 2000, 7).unwrap());
        for line in set.lines() {
            assert!((3..=12).contains(&line.len()));
            for w in line.windows(2) {
                assert_ne!(VOWELS.contains(&w[0]), VOWELS.contains(&w[1]));
            }
        }
    }

    #[test]
    fn urls_share_long_prefixes() {
        let set = generate(&CorpusSpec::new(CorpusFamily::UrlList, 1000, 42).unwrap());
        assert!(set.lines().iter().all(|l| l.starts_with(b"http://www.")));
        let sorted = sort_lines(&set, Collation::ByteWise);
        let total: usize = sorted.lines().windows(2).map(|w| common_prefix_len(&w[0], &w[1])).sum();
        let mean = total as f64 / (sorted.len() - 1) as f64;
        assert!(mean >= 8.0, "mean adjacent prefix {mean}");
    }

    #[test]
    fn generation_is_deterministic_and_safe() {
        for family in CorpusFamily::ALL {
            let spec = CorpusSpec::new(family, 500, 99).unwrap();
            let a = generate(&spec);
            assert_eq!(a, generate(&spec));
            assert_ne!(a, generate(&CorpusSpec { seed: 100, ..spec }));
            for line in a.lines() {
                assert!(!line.iter().any(|&b| b == LF || b == CR || b == b' '));
            }
        }
    }
}
