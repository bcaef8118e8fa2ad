use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::Error;

/// A finite word over the symbols `1` and `2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(symbols: Vec<u8>) -> Result<Self, Error> {
        if let Some(s) = symbols.iter().find(|&&s| s != 1 && s != 2) {
            return Err(Error::InvalidParams(format!("symbol {s} is not 1 or 2")));
        }
        Ok(Word(symbols))
    }

    /// The `index`-th word of length `len` in lexicographic order.
    pub fn from_index(index: u64, len: usize) -> Self {
        Word(
            (0..len)
                .map(|i| 1 + ((index >> (len - 1 - i)) & 1) as u8)
                .collect(),
        )
    }

    /// All `2^len` words of length `len`, lexicographically.
    pub fn all(len: usize) -> Vec<Word> {
        (0..1u64 << len).map(|i| Word::from_index(i, len)).collect()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<u8> {
        self.0.first().copied()
    }

    /// The word repeated `times` times.
    pub fn repeat(&self, times: usize) -> Word {
        Word(self.0.repeat(times))
    }

    /// The shift `sigma` rotated cyclically: `w_2 ... w_m w_1`.
    pub fn rotate(&self) -> Word {
        let mut v = self.0.clone();
        if !v.is_empty() {
            v.rotate_left(1);
        }
        Word(v)
    }

    /// Index of the first position where the words differ.
    pub fn first_difference(&self, other: &Word) -> Option<usize> {
        self.0.iter().zip(&other.0).position(|(a, b)| a != b)
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Accepts `"1,2,2"`, `"1 2 2"` or `"122"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let symbols: Vec<u8> = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .map(|c| match c {
                '1' => Ok(1),
                '2' => Ok(2),
                _ => Err(Error::InvalidParams(format!("bad symbol {c:?} in word"))),
            })
            .collect::<Result<_, _>>()?;
        if symbols.is_empty() {
            return Err(Error::InvalidParams("empty word".to_string()));
        }
        Word::new(symbols)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}
