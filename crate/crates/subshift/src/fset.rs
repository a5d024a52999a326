//! Finite sets of forbidden factors defining subshifts of finite type.

use crate::SubshiftError;
use cf_core::{MarkedBiSeq, TailSpec, Word};
use std::collections::BTreeSet;
use std::fmt;

/// A finite set of forbidden words over {1..alphabet}. After `normalize` it
/// is closed under transposition and no word is a factor of another.
#[derive(Clone, PartialEq, Eq)]
pub struct ForbiddenSet {
    pub words: BTreeSet<Word>,
    pub alphabet: u8,
}

impl ForbiddenSet {
    pub fn new(words: impl IntoIterator<Item = Word>, alphabet: u8) -> Result<Self, SubshiftError> {
        let set: BTreeSet<Word> = words.into_iter().collect();
        for w in &set {
            if w.is_empty() {
                return Err(SubshiftError::EmptyWord);
            }
            if w.max_digit() > alphabet {
                return Err(SubshiftError::DigitOutsideAlphabet {
                    word: w.to_string(),
                    alphabet,
                });
            }
        }
        Ok(ForbiddenSet {
            words: set,
            alphabet,
        })
    }

    pub fn empty(alphabet: u8) -> Self {
        ForbiddenSet {
            words: BTreeSet::new(),
            alphabet,
        }
    }

    pub fn from_strs(words: &[&str], alphabet: u8) -> Result<Self, SubshiftError> {
        let ws: Result<Vec<Word>, _> = words.iter().map(|s| Word::parse(s)).collect();
        ForbiddenSet::new(ws.map_err(SubshiftError::Word)?, alphabet)
    }

    pub fn max_len(&self) -> usize {
        self.words.iter().map(|w| w.len()).max().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    /// Transpose closure plus removal of any word containing another as a
    /// factor. Idempotent.
    pub fn normalize(&self) -> ForbiddenSet {
        let mut closed: BTreeSet<Word> = BTreeSet::new();
        for w in &self.words {
            closed.insert(w.clone());
            closed.insert(w.transpose());
        }
        let keep: BTreeSet<Word> = closed
            .iter()
            .filter(|w| {
                !closed
                    .iter()
                    .any(|other| other.len() < w.len() && w.contains_factor(other))
            })
            .cloned()
            .collect();
        // equal-length distinct words can't contain each other
        ForbiddenSet {
            words: keep,
            alphabet: self.alphabet,
        }
    }

    pub fn is_normalized(&self) -> bool {
        *self == self.normalize()
    }

    /// Union with another set over the same alphabet.
    pub fn union(&self, other: &ForbiddenSet) -> ForbiddenSet {
        let mut words = self.words.clone();
        words.extend(other.words.iter().cloned());
        ForbiddenSet {
            words,
            alphabet: self.alphabet.max(other.alphabet),
        }
    }

    pub fn with_words_removed(&self, remove: &[Word]) -> ForbiddenSet {
        let words = self
            .words
            .iter()
            .filter(|w| !remove.contains(w))
            .cloned()
            .collect();
        ForbiddenSet {
            words,
            alphabet: self.alphabet,
        }
    }

    /// Does the finite word avoid every forbidden factor?
    pub fn avoids(&self, w: &Word) -> bool {
        !self.words.iter().any(|f| w.contains_factor(f))
    }

    /// Does the determined part of a sequence avoid every forbidden factor?
    /// Periodic tails are scanned over period + max_len windows, which covers
    /// every factor the tail can ever produce.
    pub fn avoids_biseq(&self, s: &MarkedBiSeq) -> bool {
        let ml = self.max_len() as i64;
        let mark = s.middle.mark as i64;
        let left_extra = match &s.left {
            TailSpec::Periodic(p) => p.len() as i64 + ml,
            _ => 0,
        };
        let right_extra = match &s.right {
            TailSpec::Periodic(p) => p.len() as i64 + ml,
            _ => 0,
        };
        let from = -mark - left_extra;
        let to = (s.middle.word.len() as i64 - mark) + right_extra;
        let mut window: Vec<u8> = Vec::new();
        for j in from..to {
            match s.digit_at(j) {
                Some(d) => window.push(d),
                None => {
                    // free side: check what we have, then restart collection
                    if !self.avoids(&Word::new(std::mem::take(&mut window)).unwrap_or_default()) {
                        return false;
                    }
                }
            }
        }
        self.avoids(&Word::new(window).unwrap_or_default())
    }

    /// Parse the forbidden-set file format: optional `alphabet: A` header,
    /// `#` comments, one word per line. Transposes are added on load.
    pub fn parse_file(text: &str) -> Result<Self, SubshiftError> {
        let mut alphabet = 0u8;
        let mut words = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("alphabet:") {
                alphabet = rest.trim().parse::<u8>().map_err(|_| SubshiftError::Parse {
                    line: lineno + 1,
                    msg: format!("bad alphabet {rest:?}"),
                })?;
                continue;
            }
            let w = Word::parse(line).map_err(|e| SubshiftError::Parse {
                line: lineno + 1,
                msg: e.to_string(),
            })?;
            words.push(w);
        }
        if alphabet == 0 {
            alphabet = words.iter().map(|w| w.max_digit()).max().unwrap_or(1);
        }
        Ok(ForbiddenSet::new(words, alphabet)?.normalize())
    }
}

impl fmt::Debug for ForbiddenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{{")?;
        for (i, w) in self.words.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{w}")?;
        }
        write!(f, "}}/{}", self.alphabet)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_transpose_closure() {
        let f = ForbiddenSet::from_strs(&["122212"], 2).unwrap().normalize();
        assert_eq!(f.words.len(), 2);
        assert!(f.words.contains(&Word::parse("212221").unwrap()));
        // palindrome stays singleton
        let f = ForbiddenSet::from_strs(&["121"], 2).unwrap().normalize();
        assert_eq!(f.words.len(), 1);
    }

    #[test]
    fn normalize_factor_removal() {
        let f = ForbiddenSet::from_strs(&["12", "123"], 3).unwrap().normalize();
        // 123 contains 12; its transpose 321 contains 21
        let words: Vec<String> = f.words.iter().map(|w| w.to_string()).collect();
        assert_eq!(words, ["12", "21"]);
    }

    #[test]
    fn normalize_idempotent() {
        let f = ForbiddenSet::from_strs(&["121", "122212", "3"], 3).unwrap();
        let n1 = f.normalize();
        assert_eq!(n1, n1.normalize());
    }

    #[test]
    fn avoids_scan() {
        let f = ForbiddenSet::from_strs(&["121", "122212"], 2).unwrap().normalize();
        // 1222122 begins with the forbidden factor 122212
        assert!(!f.avoids(&Word::parse("1222122").unwrap()));
        assert!(f.avoids(&Word::parse("1222112").unwrap()));
        assert!(!f.avoids(&Word::parse("21212").unwrap()));
        let s = cf_core::parse_word("<1*>").unwrap();
        let f11 = ForbiddenSet::from_strs(&["11"], 2).unwrap().normalize();
        assert!(!f11.avoids_biseq(&s));
    }

    #[test]
    fn file_format() {
        let text = "# test\nalphabet: 3\n121\n122212 # inline\n";
        let f = ForbiddenSet::parse_file(text).unwrap();
        assert_eq!(f.alphabet, 3);
        assert_eq!(f.words.len(), 3);
    }
}
