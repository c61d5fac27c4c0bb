//! Addressing words over the alphabet `{1, 2, 3, 4}`.
//!
//! A word of length `k` addresses one of the `4^k` squares of the `k`-th
//! construction level of the carpet. The empty word addresses the unit
//! square. Words are serialized as digit strings (`"134"`, `""`) and display
//! as `∅` when empty.

use std::fmt;

use crate::error::Error;

/// Default limit on word length; extending a word past the cap is an error
/// rather than unbounded recursion.
pub const DEPTH_CAP: usize = 64;

/// A finite word over `{1,2,3,4}`. Ordering is lexicographic on digits, so a
/// word sorts immediately before its extensions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    digits: Vec<u8>,
}

impl Word {
    /// The empty word.
    pub fn empty() -> Self {
        Word { digits: Vec::new() }
    }

    /// Builds a word from digits in `1..=4`, enforcing the default depth cap.
    pub fn from_digits(digits: &[u8]) -> Result<Self, Error> {
        Self::from_digits_with_cap(digits, DEPTH_CAP)
    }

    /// Builds a word from digits in `1..=4` under an explicit depth cap.
    pub fn from_digits_with_cap(digits: &[u8], cap: usize) -> Result<Self, Error> {
        if digits.len() > cap {
            return Err(Error::DepthCap {
                len: digits.len(),
                cap,
            });
        }
        for &d in digits {
            if !(1..=4).contains(&d) {
                return Err(Error::InvalidDigit {
                    digit: (b'0' + d) as char,
                });
            }
        }
        Ok(Word {
            digits: digits.to_vec(),
        })
    }

    /// Parses a digit string such as `"134"`; the empty string is the empty word.
    pub fn parse(s: &str) -> Result<Self, Error> {
        let mut digits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '1'..='4' => digits.push(c as u8 - b'0'),
                _ => return Err(Error::InvalidDigit { digit: c }),
            }
        }
        Self::from_digits(&digits)
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    /// Number of digits equal to 3 or 4: the count of heavy-weight map
    /// applications, which determines the word's probability.
    pub fn heavy_count(&self) -> usize {
        self.digits.iter().filter(|&&d| d >= 3).count()
    }

    /// The word extended by one digit.
    pub fn child(&self, digit: u8) -> Result<Self, Error> {
        debug_assert!((1..=4).contains(&digit));
        if self.len() + 1 > DEPTH_CAP {
            return Err(Error::DepthCap {
                len: self.len() + 1,
                cap: DEPTH_CAP,
            });
        }
        let mut digits = self.digits.clone();
        digits.push(digit);
        Ok(Word { digits })
    }

    /// True if `self` is a (not necessarily proper) prefix of `other`.
    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.digits.starts_with(&self.digits)
    }

    /// Serialized digit string (empty for the empty word).
    pub fn as_string(&self) -> String {
        self.digits.iter().map(|d| (b'0' + d) as char).collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "∅")
        } else {
            write!(f, "{}", self.as_string())
        }
    }
}

/// Checks that no word in `words` is a prefix of another, i.e. that the
/// addressed squares are pairwise non-overlapping.
pub fn check_prefix_free(words: &[Word]) -> Result<(), Error> {
    let mut sorted: Vec<&Word> = words.iter().collect();
    sorted.sort();
    for pair in sorted.windows(2) {
        if pair[0].is_prefix_of(pair[1]) {
            return Err(Error::OverlappingWords {
                prefix: pair[0].to_string(),
                word: pair[1].to_string(),
            });
        }
    }
    Ok(())
}

/// All words of exactly length `k`, in lexicographic order.
pub fn words_of_length(k: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    for _ in 0..k {
        let mut next = Vec::with_capacity(out.len() * 4);
        for w in &out {
            for d in 1..=4 {
                next.push(w.child(d).expect("within depth cap"));
            }
        }
        out = next;
    }
    out
}
