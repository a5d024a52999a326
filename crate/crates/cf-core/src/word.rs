//! Finite words over the digit alphabet 1..=9.

use crate::{CfError, Result, MAX_ALPHABET};
use std::fmt;

/// A single continued-fraction digit (partial quotient), always in 1..=9.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Digit(u8);

impl Digit {
    pub fn new(v: u8) -> Result<Self> {
        if (1..=MAX_ALPHABET).contains(&v) {
            Ok(Digit(v))
        } else {
            Err(CfError::DigitRange(v, MAX_ALPHABET))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

impl fmt::Debug for Digit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite word of digits. May be empty only where a middle word is optional.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Word(pub(crate) Vec<u8>);

impl Word {
    pub fn new(digits: Vec<u8>) -> Result<Self> {
        for &d in &digits {
            if !(1..=MAX_ALPHABET).contains(&d) {
                return Err(CfError::DigitRange(d, MAX_ALPHABET));
            }
        }
        Ok(Word(digits))
    }

    /// Parse from a plain digit string like "12111".
    pub fn parse(s: &str) -> Result<Self> {
        let mut v = Vec::with_capacity(s.len());
        for (i, ch) in s.char_indices() {
            match ch.to_digit(10) {
                Some(d) if d >= 1 => v.push(d as u8),
                _ => {
                    return Err(CfError::Syntax {
                        offset: i,
                        msg: format!("expected digit 1-9, found {ch:?}"),
                    })
                }
            }
        }
        Word::new(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub fn max_digit(&self) -> u8 {
        self.0.iter().copied().max().unwrap_or(1)
    }

    /// Reversal. Spectrum-relevant quantities are invariant under it.
    pub fn transpose(&self) -> Word {
        let mut v = self.0.clone();
        v.reverse();
        Word(v)
    }

    pub fn is_palindrome(&self) -> bool {
        self.0.iter().eq(self.0.iter().rev())
    }

    /// A palindrome or a concatenation of two palindromes (empty factors count).
    pub fn is_semi_symmetric(&self) -> bool {
        let n = self.0.len();
        (0..=n).any(|k| {
            let (r, s) = self.0.split_at(k);
            r.iter().eq(r.iter().rev()) && s.iter().eq(s.iter().rev())
        })
    }

    /// Does `factor` occur as a contiguous subword?
    pub fn contains_factor(&self, factor: &Word) -> bool {
        if factor.is_empty() {
            return true;
        }
        self.0
            .windows(factor.0.len())
            .any(|w| w == factor.0.as_slice())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn repeat(&self, times: usize) -> Word {
        let mut v = Vec::with_capacity(self.0.len() * times);
        for _ in 0..times {
            v.extend_from_slice(&self.0);
        }
        Word(v)
    }

    /// Cyclic left rotation by `k`.
    pub fn rotate_left(&self, k: usize) -> Word {
        if self.0.is_empty() {
            return self.clone();
        }
        let n = self.0.len();
        let k = k % n;
        let mut v = Vec::with_capacity(n);
        v.extend_from_slice(&self.0[k..]);
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    /// Smallest p such that the word is a power of its length-p prefix.
    pub fn minimal_period(&self) -> Word {
        let n = self.0.len();
        for p in 1..=n {
            if n % p == 0 && (p..n).all(|i| self.0[i] == self.0[i - p]) {
                return Word(self.0[..p].to_vec());
            }
        }
        self.clone()
    }

    /// Lexicographically least rotation; canonical representative of the
    /// rotation class of a period.
    pub fn canonical_rotation(&self) -> Word {
        (0..self.0.len().max(1))
            .map(|k| self.rotate_left(k))
            .min()
            .unwrap_or_else(|| self.clone())
    }

    /// Digit of the periodic unrolling at index i (i may be any integer,
    /// with index 0 = first digit of the word).
    pub fn cyclic(&self, i: i64) -> u8 {
        let n = self.0.len() as i64;
        debug_assert!(n > 0);
        self.0[(i.rem_euclid(n)) as usize]
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.0 {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A finite word with one distinguished (0th) position.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MarkedWord {
    pub word: Word,
    pub mark: usize,
}

impl MarkedWord {
    pub fn new(word: Word, mark: usize) -> Result<Self> {
        if mark >= word.len() {
            return Err(CfError::MarkRange {
                mark,
                len: word.len(),
            });
        }
        Ok(MarkedWord { word, mark })
    }

    /// Parse "121*13" style notation: `*` follows the marked digit.
    pub fn parse(s: &str) -> Result<Self> {
        let mut digits = Vec::new();
        let mut mark = None;
        for (i, ch) in s.char_indices() {
            if ch == '*' {
                if digits.is_empty() || mark.is_some() {
                    return Err(CfError::Syntax {
                        offset: i,
                        msg: "misplaced mark".into(),
                    });
                }
                mark = Some(digits.len() - 1);
            } else {
                match ch.to_digit(10) {
                    Some(d) if d >= 1 => digits.push(d as u8),
                    _ => {
                        return Err(CfError::Syntax {
                            offset: i,
                            msg: format!("expected digit 1-9 or '*', found {ch:?}"),
                        })
                    }
                }
            }
        }
        let mark = mark.ok_or(CfError::MarkCount(0))?;
        MarkedWord::new(Word::new(digits)?, mark)
    }

    /// Mark maps to the mirrored position.
    pub fn transpose(&self) -> MarkedWord {
        MarkedWord {
            word: self.word.transpose(),
            mark: self.word.len() - 1 - self.mark,
        }
    }

    /// Digits strictly right of the mark.
    pub fn right_of_mark(&self) -> &[u8] {
        &self.word.digits()[self.mark + 1..]
    }

    /// Digits strictly left of the mark, nearest first.
    pub fn left_of_mark(&self) -> Vec<u8> {
        let mut v = self.word.digits()[..self.mark].to_vec();
        v.reverse();
        v
    }

    pub fn marked_digit(&self) -> u8 {
        self.word.digits()[self.mark]
    }
}

impl fmt::Debug for MarkedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.word.digits().iter().enumerate() {
            write!(f, "{d}")?;
            if i == self.mark {
                write!(f, "*")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for MarkedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transpose_involution() {
        let w = Word::parse("12111233311133232").unwrap();
        assert_eq!(w.transpose().transpose(), w);
        assert_eq!(Word::parse("123").unwrap().transpose(), Word::parse("321").unwrap());
    }

    #[test]
    fn semi_symmetric_cases() {
        assert!(Word::parse("2111").unwrap().is_semi_symmetric());
        assert!(Word::parse("1221").unwrap().is_semi_symmetric());
        // brute-force over all split points says no
        assert!(!Word::parse("12111233311133232").unwrap().is_semi_symmetric());
        assert!(!Word::parse("21133311121").unwrap().is_semi_symmetric());
    }

    #[test]
    fn minimal_period_and_rotation() {
        assert_eq!(
            Word::parse("121212").unwrap().minimal_period(),
            Word::parse("12").unwrap()
        );
        assert_eq!(
            Word::parse("211").unwrap().canonical_rotation(),
            Word::parse("112").unwrap()
        );
    }

    #[test]
    fn marked_word_parse() {
        let m = MarkedWord::parse("3*113").unwrap();
        assert_eq!(m.mark, 0);
        assert_eq!(m.marked_digit(), 3);
        let t = m.transpose();
        assert_eq!(t.mark, 3);
        assert_eq!(format!("{t}"), "3113*");
    }
}
