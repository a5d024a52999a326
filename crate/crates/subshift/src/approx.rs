//! Finite-type outer approximation of the sublevel set Σ_t.
//!
//! F(n, t) forbids every (2n+1)-word whose center-marked λ exceeds t for all
//! bi-infinite extensions. Sequences with Markov value ≤ t avoid every such
//! word, and conversely anything avoiding F(n, t) has Markov value at most
//! t + w(n) where w(n) ≤ 2^{1-n} is the worst all-extensions interval width.

use crate::ForbiddenSet;
use cf_core::{bound_all_extensions, Cmp, MarkedWord, Precision, Word};
use num_rational::BigRational;

/// All length-(2n+1) words over {1..alphabet} whose center-position λ is
/// certifiably > t for every extension. Boundary words whose bound straddles
/// t are conservatively kept admissible.
pub fn approx_sigma_t(t: &BigRational, n: usize, alphabet: u8) -> ForbiddenSet {
    assert!(n >= 1);
    let len = 2 * n + 1;
    let mut forbidden = Vec::new();
    let mut word = vec![1u8; len];
    loop {
        let w = Word::new(word.clone()).unwrap();
        let m = MarkedWord::new(w.clone(), n).unwrap();
        let b = bound_all_extensions(&m, alphabet);
        if b.compare_rational(t, Precision::default()) == Cmp::Greater {
            forbidden.push(w);
        }
        // next word in lexicographic order
        let mut i = len;
        loop {
            if i == 0 {
                let f = ForbiddenSet::new(forbidden, alphabet).expect("valid words");
                return f.normalize();
            }
            i -= 1;
            if word[i] < alphabet {
                word[i] += 1;
                for d in word.iter_mut().skip(i + 1) {
                    *d = 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn huge_threshold_gives_empty() {
        // λ < a₀ + 2 always, so t ≥ alphabet + 2 forbids nothing
        let f = approx_sigma_t(&rat(6, 1), 1, 3);
        assert!(f.is_empty());
    }

    #[test]
    fn t3_n2_contains_11311() {
        let f = approx_sigma_t(&rat(3, 1), 2, 3);
        assert!(f.words.iter().any(|w| {
            // 11311 may have been dropped as redundant; membership in the
            // normalized set means some factor of it is forbidden
            Word::parse("11311").unwrap().contains_factor(w)
        }));
    }

    #[test]
    fn monotone_in_t() {
        let f_lo = approx_sigma_t(&rat(3, 1), 2, 2);
        let f_hi = approx_sigma_t(&rat(31, 10), 2, 2);
        // larger t forbids fewer words: every word kept admissible by f_lo is
        // admissible for f_hi as well
        for w in &f_hi.words {
            assert!(
                !f_lo.avoids(w),
                "word {w} forbidden at t=3.1 but not at t=3"
            );
        }
    }
}
