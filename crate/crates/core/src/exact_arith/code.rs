use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite digit word over `{0, …, m-1}`.
pub type Word = Vec<u8>;

/// How a [`Code`] continues after its explicit prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tail {
    /// `0^∞`
    Zero,
    /// `(m-1)^∞`
    Max,
    /// Unknown continuation; only bounded by the two explicit completions.
    Truncated,
}

impl Tail {
    fn keyword(self) -> &'static str {
        match self {
            Tail::Zero => "zero",
            Tail::Max => "max",
            Tail::Truncated => "trunc",
        }
    }
}

/// An infinite digit stream given by a finite prefix and a tail marker.
///
/// Codes with an explicit tail are stored in canonical form (no trailing
/// prefix digits equal to the tail digit), so two such codes are `==`
/// exactly when they describe the same infinite stream.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Code {
    m: u32,
    prefix: Word,
    tail: Tail,
}

impl Code {
    pub fn new(m: u32, prefix: impl Into<Word>, tail: Tail) -> Result<Self> {
        if !(2..=256).contains(&m) {
            return Err(Error::Domain(format!("alphabet size m = {m} must lie in [2, 256]")));
        }
        let mut prefix = prefix.into();
        if let Some(&d) = prefix.iter().find(|&&d| u32::from(d) >= m) {
            return Err(Error::Domain(format!("digit {d} is not below m = {m}")));
        }
        let fill = match tail {
            Tail::Zero => Some(0u8),
            Tail::Max => Some((m - 1) as u8),
            Tail::Truncated => None,
        };
        if let Some(fill) = fill {
            while prefix.last() == Some(&fill) {
                prefix.pop();
            }
        }
        Ok(Code { m, prefix, tail })
    }

    pub fn zero_tail(m: u32, prefix: impl Into<Word>) -> Result<Self> {
        Code::new(m, prefix, Tail::Zero)
    }

    pub fn max_tail(m: u32, prefix: impl Into<Word>) -> Result<Self> {
        Code::new(m, prefix, Tail::Max)
    }

    /// Parses `"<word>:<zero|max|trunc>"`, e.g. `"11:zero"` or `":max"`.
    pub fn parse(m: u32, s: &str) -> Result<Self> {
        let (word, tail) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("code {s:?} must look like <word>:<zero|max|trunc>")))?;
        let tail = match tail.trim() {
            "zero" | "0" => Tail::Zero,
            "max" => Tail::Max,
            "trunc" | "truncated" => Tail::Truncated,
            other => return Err(Error::Parse(format!("unknown tail {other:?}"))),
        };
        Code::new(m, parse_word(word.trim())?, tail)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn prefix(&self) -> &[u8] {
        &self.prefix
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    pub fn max_digit(&self) -> u8 {
        (self.m - 1) as u8
    }

    /// Digit at 0-based position `i` of the stream, `None` past the prefix
    /// of a truncated code.
    pub fn digit(&self, i: usize) -> Option<u8> {
        match self.prefix.get(i) {
            Some(&d) => Some(d),
            None => match self.tail {
                Tail::Zero => Some(0),
                Tail::Max => Some(self.max_digit()),
                Tail::Truncated => None,
            },
        }
    }

    /// True for the stream `0^∞`.
    pub fn is_zero_stream(&self) -> bool {
        self.tail == Tail::Zero && self.prefix.is_empty()
    }

    /// The two explicit completions `(prefix 0^∞, prefix (m-1)^∞)`.
    pub fn completions(&self) -> (Code, Code) {
        (
            Code::new(self.m, self.prefix.clone(), Tail::Zero).expect("validated"),
            Code::new(self.m, self.prefix.clone(), Tail::Max).expect("validated"),
        )
    }

    /// Lexicographic order on the induced digit streams. A truncated code
    /// is compared through both of its completions and yields `None` when
    /// they disagree.
    pub fn lex_cmp(&self, other: &Code) -> Option<Ordering> {
        if self.m != other.m {
            return None;
        }
        match (self.tail, other.tail) {
            (Tail::Truncated, _) => {
                let (lo, hi) = self.completions();
                let a = lo.lex_cmp(other)?;
                let b = hi.lex_cmp(other)?;
                (a == b).then_some(a)
            }
            (_, Tail::Truncated) => other.lex_cmp(self).map(Ordering::reverse),
            _ => {
                let n = self.prefix.len().max(other.prefix.len());
                for i in 0..n {
                    let (a, b) = (self.digit(i)?, other.digit(i)?);
                    if a != b {
                        return Some(a.cmp(&b));
                    }
                }
                let fill = |t: Tail| if t == Tail::Zero { 0 } else { self.max_digit() };
                Some(fill(self.tail).cmp(&fill(other.tail)))
            }
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", format_word(self.m, &self.prefix), self.tail.keyword())
    }
}

/// Renders a word as concatenated digits for `m ≤ 10`, dot-separated
/// otherwise.
pub fn format_word(m: u32, word: &[u8]) -> String {
    if m <= 10 {
        word.iter().map(|d| char::from(b'0' + d)).collect()
    } else {
        word.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(".")
    }
}

/// Inverse of [`format_word`]: single decimal digits, or dot-separated
/// numbers when the text contains a `.`.
pub fn parse_word(s: &str) -> Result<Word> {
    let bad = || Error::Parse(format!("cannot parse word {s:?}"));
    if s.contains('.') {
        s.split('.').map(|t| t.parse::<u8>().map_err(|_| bad())).collect()
    } else {
        s.chars().map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(bad)).collect()
    }
}
