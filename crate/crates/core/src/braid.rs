//! Braid words in the Artin generators of B_n.
//!
//! A word is stored as a list of signed generator indices: `k > 0` is
//! `σ_k`, `k < 0` is `σ_{|k|}^{-1}`. The leftmost letter acts first on
//! coordinates, and `σ_i` interchanges punctures `i` and `i + 1`
//! counterclockwise.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawWord", into = "RawWord")]
pub struct BraidWord {
    n: usize,
    letters: Vec<i32>,
}

#[derive(Serialize, Deserialize)]
struct RawWord {
    n: usize,
    letters: Vec<i32>,
}

impl TryFrom<RawWord> for BraidWord {
    type Error = Error;

    fn try_from(raw: RawWord) -> Result<Self> {
        BraidWord::new(raw.n, raw.letters)
    }
}

impl From<BraidWord> for RawWord {
    fn from(w: BraidWord) -> Self {
        RawWord {
            n: w.n,
            letters: w.letters,
        }
    }
}

impl BraidWord {
    pub fn new(n: usize, letters: Vec<i32>) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewPunctures(n));
        }
        if letters.is_empty() {
            return Err(Error::EmptyWord);
        }
        for &k in &letters {
            if k == 0 {
                return Err(Error::ZeroLetter);
            }
            if k.unsigned_abs() as usize > n - 1 {
                return Err(Error::LetterOutOfRange {
                    letter: k as i64,
                    n,
                });
            }
        }
        Ok(BraidWord { n, letters })
    }

    /// Parses whitespace-separated signed generator indices.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewPunctures(n));
        }
        let letters = text
            .split_whitespace()
            .map(|tok| {
                tok.parse::<i64>()
                    .map_err(|_| Error::BadToken(tok.to_string()))
                    .and_then(|k| {
                        i32::try_from(k).map_err(|_| Error::LetterOutOfRange { letter: k, n })
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, letters)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The group inverse: reversed, with every sign flipped.
    pub fn inverse(&self) -> Self {
        BraidWord {
            n: self.n,
            letters: self.letters.iter().rev().map(|k| -k).collect(),
        }
    }

    /// Concatenation, `self` acting first.
    pub fn then(&self, other: &BraidWord) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                coords: self.n,
                word: other.n,
            });
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord { n: self.n, letters })
    }

    /// Cancels adjacent `k, -k` pairs. Returns `None` when the word reduces
    /// to the identity, which is not a valid `BraidWord`.
    pub fn reduced(&self) -> Option<Self> {
        let mut out: Vec<i32> = Vec::with_capacity(self.letters.len());
        for &k in &self.letters {
            if out.last() == Some(&-k) {
                out.pop();
            } else {
                out.push(k);
            }
        }
        (!out.is_empty()).then_some(BraidWord {
            n: self.n,
            letters: out,
        })
    }
}

pub fn inverse_word(w: &BraidWord) -> BraidWord {
    w.inverse()
}

pub fn parse_word(text: &str, n: usize) -> Result<BraidWord> {
    BraidWord::parse(text, n)
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, k) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{k}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_examples() {
        assert_eq!(parse_word("1 -2", 3).unwrap().letters(), &[1, -2]);
        assert_eq!(
            parse_word("1 2 3 4 -5", 6).unwrap().letters(),
            &[1, 2, 3, 4, -5]
        );
        assert_eq!(parse_word("  1\t-2\n", 3).unwrap().letters(), &[1, -2]);
    }

    #[test]
    fn parse_errors() {
        assert_eq!(parse_word("0", 3), Err(Error::ZeroLetter));
        assert_eq!(parse_word("   ", 3), Err(Error::EmptyWord));
        assert_eq!(parse_word("1", 2), Err(Error::TooFewPunctures(2)));
        assert!(matches!(
            parse_word("1 3", 3),
            Err(Error::LetterOutOfRange { letter: 3, n: 3 })
        ));
        assert!(matches!(
            parse_word("1 -3", 3),
            Err(Error::LetterOutOfRange { letter: -3, .. })
        ));
        assert!(matches!(parse_word("1 x", 3), Err(Error::BadToken(_))));
    }

    #[test]
    fn inverse_examples() {
        let w = parse_word("1 -2", 3).unwrap();
        assert_eq!(w.inverse().letters(), &[2, -1]);
        assert_eq!(parse_word("1", 3).unwrap().inverse().letters(), &[-1]);
    }

    #[test]
    fn reduce_cancels_pairs() {
        let w = parse_word("1 2 -2 -1 3", 4).unwrap();
        assert_eq!(w.reduced().unwrap().letters(), &[3]);
        assert!(parse_word("1 -1", 3).unwrap().reduced().is_none());
    }

    #[test]
    fn json_rejects_invalid() {
        let ok: BraidWord = serde_json::from_str(r#"{"n":3,"letters":[1,-2]}"#).unwrap();
        assert_eq!(ok.letters(), &[1, -2]);
        assert!(serde_json::from_str::<BraidWord>(r#"{"n":3,"letters":[0]}"#).is_err());
    }

    fn word_strategy() -> impl Strategy<Value = BraidWord> {
        (3usize..10).prop_flat_map(|n| {
            let m = (n - 1) as i32;
            prop::collection::vec((1..=m, any::<bool>()), 1..20).prop_map(move |ls| {
                let letters = ls
                    .into_iter()
                    .map(|(k, s)| if s { k } else { -k })
                    .collect();
                BraidWord::new(n, letters).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn display_round_trips(w in word_strategy()) {
            let text = w.to_string();
            let back = parse_word(&text, w.n()).unwrap();
            prop_assert_eq!(back.to_string(), text);
            prop_assert_eq!(back, w);
        }

        #[test]
        fn inverse_is_involution(w in word_strategy()) {
            prop_assert_eq!(w.inverse().inverse(), w);
        }
    }
}
