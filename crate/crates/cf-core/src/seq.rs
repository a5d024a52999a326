//! Marked bi-infinite sequences: periodic or free tails around a finite
//! marked middle, the word grammar, and rigorous λ evaluation.

use crate::mobius::Mobius;
use crate::quad::QuadExt;
use crate::value::{SpectrumValue, Val};
use crate::word::{MarkedWord, Word};
use crate::{CfError, Result, MAX_ALPHABET};
use std::fmt;

/// How a sequence continues beyond the middle word, in natural reading order
/// (left tails repeat leftward, right tails rightward).
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum TailSpec {
    /// …www (left) or www… (right).
    Periodic(Word),
    /// Any digits from 1..=bound.
    Free(u8),
    /// A fixed finite stretch, then free. Normalized away into the middle on
    /// sequence construction.
    Finite(Word, u8),
}

impl TailSpec {
    pub fn periodic(s: &str) -> Result<Self> {
        let w = Word::parse(s)?;
        if w.is_empty() {
            return Err(CfError::EmptyWord);
        }
        Ok(TailSpec::Periodic(w))
    }

    pub fn transpose(&self) -> TailSpec {
        match self {
            TailSpec::Periodic(w) => TailSpec::Periodic(w.transpose()),
            TailSpec::Free(a) => TailSpec::Free(*a),
            TailSpec::Finite(w, a) => TailSpec::Finite(w.transpose(), *a),
        }
    }

    pub fn max_digit(&self) -> u8 {
        match self {
            TailSpec::Periodic(w) => w.max_digit(),
            TailSpec::Free(a) => *a,
            TailSpec::Finite(w, a) => w.max_digit().max(*a),
        }
    }
}

impl fmt::Debug for TailSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TailSpec::Periodic(w) => write!(f, "<{w}>"),
            TailSpec::Free(a) => write!(f, "free{a}"),
            TailSpec::Finite(w, a) => write!(f, "{w}+free{a}"),
        }
    }
}

/// Value range of a one-sided digit stream `[d₀; d₁, d₂, …]` over all
/// admissible completions; exact when the stream is determined.
#[derive(Clone, Debug)]
pub enum SideValue {
    Exact(QuadExt),
    Range(QuadExt, QuadExt),
}

impl SideValue {
    pub fn lo(&self) -> &QuadExt {
        match self {
            SideValue::Exact(x) => x,
            SideValue::Range(lo, _) => lo,
        }
    }

    pub fn hi(&self) -> &QuadExt {
        match self {
            SideValue::Exact(x) => x,
            SideValue::Range(_, hi) => hi,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, SideValue::Exact(_))
    }
}

/// Extremal free continuation values: all-extensions of a digit stream end in
/// tails alternating between 1 and the alphabet bound. Returns the closed
/// range of `[t₁; t₂, …]` over free tails.
pub fn free_tail_range(alphabet: u8) -> (QuadExt, QuadExt) {
    assert!((1..=MAX_ALPHABET).contains(&alphabet));
    if alphabet == 1 {
        let x = Mobius::of_word(&[1]).fixed_point();
        return (x.clone(), x);
    }
    let lo = Mobius::of_word(&[1, alphabet]).fixed_point();
    let hi = Mobius::of_word(&[alphabet, 1]).fixed_point();
    (lo, hi)
}

/// Value of `[d₀; d₁, …, dₙ, tail…]` where `digits` are read outward from the
/// evaluation position. `digits` may be empty only when the tail determines
/// the stream or bounds it.
pub fn side_value(digits: &[u8], tail: &TailSpec) -> SideValue {
    let m = Mobius::of_word(digits);
    match tail {
        TailSpec::Periodic(p) => {
            let x = Mobius::of_word(p.digits()).fixed_point();
            SideValue::Exact(m.apply_quad(&x))
        }
        TailSpec::Free(a) => {
            let (xlo, xhi) = free_tail_range(*a);
            if xlo == xhi {
                return SideValue::Exact(m.apply_quad(&xlo));
            }
            let lo = m.apply_quad(&xlo);
            let hi = m.apply_quad(&xhi);
            if m.det_sign() >= 0 {
                SideValue::Range(lo, hi)
            } else {
                SideValue::Range(hi, lo)
            }
        }
        TailSpec::Finite(w, a) => {
            let mut all = digits.to_vec();
            all.extend_from_slice(w.digits());
            side_value(&all, &TailSpec::Free(*a))
        }
    }
}

/// `[0; d₁, d₂, …, tail…]` — the left half of λ.
pub fn side_value_recip(digits: &[u8], tail: &TailSpec) -> SideValue {
    let m = Mobius::reciprocal();
    match side_value(digits, tail) {
        SideValue::Exact(x) => SideValue::Exact(m.apply_quad(&x)),
        // reciprocal reverses order
        SideValue::Range(lo, hi) => SideValue::Range(m.apply_quad(&hi), m.apply_quad(&lo)),
    }
}

/// `[0; \overline{p}]` as an exact quadratic irrational.
pub fn eval_periodic(p: &Word) -> QuadExt {
    assert!(!p.is_empty());
    let x = Mobius::of_word(p.digits()).fixed_point();
    Mobius::reciprocal().apply_quad(&x)
}

/// A bi-infinite sequence with one marked position: periodic or free tails
/// around a finite marked middle. Finite tails are absorbed into the middle.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MarkedBiSeq {
    pub left: TailSpec,
    pub middle: MarkedWord,
    pub right: TailSpec,
}

impl MarkedBiSeq {
    pub fn new(left: TailSpec, middle: MarkedWord, right: TailSpec) -> Self {
        let (left, middle) = match left {
            TailSpec::Finite(w, a) => {
                let shift = w.len();
                let word = w.concat(&middle.word);
                (
                    TailSpec::Free(a),
                    MarkedWord {
                        word,
                        mark: middle.mark + shift,
                    },
                )
            }
            other => (other, middle),
        };
        let (right, middle) = match right {
            TailSpec::Finite(w, a) => (
                TailSpec::Free(a),
                MarkedWord {
                    word: middle.word.concat(&w),
                    mark: middle.mark,
                },
            ),
            other => (other, middle),
        };
        MarkedBiSeq {
            left,
            middle,
            right,
        }
    }

    /// Fully-determined sequence (both tails periodic)?
    pub fn is_determined(&self) -> bool {
        matches!(self.left, TailSpec::Periodic(_)) && matches!(self.right, TailSpec::Periodic(_))
    }

    pub fn max_digit(&self) -> u8 {
        self.middle
            .word
            .max_digit()
            .max(self.left.max_digit())
            .max(self.right.max_digit())
    }

    /// Digit at signed offset `j` from the mark; None inside a free tail.
    pub fn digit_at(&self, j: i64) -> Option<u8> {
        let pos = self.middle.mark as i64 + j;
        let len = self.middle.word.len() as i64;
        if (0..len).contains(&pos) {
            return Some(self.middle.word.digits()[pos as usize]);
        }
        if pos < 0 {
            match &self.left {
                // tail ends just before middle: offset -1 from middle start = last period digit
                TailSpec::Periodic(p) => Some(p.cyclic(p.len() as i64 + pos)),
                _ => None,
            }
        } else {
            match &self.right {
                TailSpec::Periodic(p) => Some(p.cyclic(pos - len)),
                _ => None,
            }
        }
    }

    /// The same sequence reversed; mark maps to the mirrored position.
    pub fn transpose(&self) -> MarkedBiSeq {
        MarkedBiSeq {
            left: self.right.transpose(),
            middle: self.middle.transpose(),
            right: self.left.transpose(),
        }
    }

    /// λ_j = [a_j; a_{j+1}, …] + [0; a_{j-1}, a_{j-2}, …] with the sequence
    /// indexed from the mark. Free tails give the all-extensions range.
    /// Fails only if `j` itself lands in a free tail.
    pub fn lambda_at(&self, j: i64) -> Result<SpectrumValue> {
        if self.digit_at(j).is_none() {
            return Err(CfError::Invalid(format!(
                "position {j} is not determined by the tails"
            )));
        }
        let (right_digits, right_tail) = self.ray(j, true);
        let (left_digits, left_tail) = self.ray(j - 1, false);
        let r = side_value(&right_digits, &right_tail);
        let l = side_value_recip(&left_digits, &left_tail);
        match (r, l) {
            (SideValue::Exact(a), SideValue::Exact(b)) => Ok(SpectrumValue::exact(Val::new(a, b))),
            (r, l) => Ok(SpectrumValue::range(
                Val::new(r.lo().clone(), l.lo().clone()),
                Val::new(r.hi().clone(), l.hi().clone()),
            )),
        }
    }

    pub fn lambda0(&self) -> Result<SpectrumValue> {
        self.lambda_at(0)
    }

    /// Digits from offset `j` heading right (`true`) or left (`false`),
    /// together with the tail beyond them. Periodic tails are rotated so the
    /// returned spec continues exactly where the digits stop.
    fn ray(&self, j: i64, rightward: bool) -> (Vec<u8>, TailSpec) {
        let len = self.middle.word.len() as i64;
        let mark = self.middle.mark as i64;
        let pos = mark + j; // absolute index into middle coordinates
        let mut digits = Vec::new();
        if rightward {
            let mut p = pos;
            // unroll any left-tail stretch between pos and the middle
            if p < 0 {
                match &self.left {
                    TailSpec::Periodic(per) => {
                        let n = per.len() as i64;
                        while p < 0 {
                            digits.push(per.cyclic(n + p));
                            p += 1;
                        }
                    }
                    _ => unreachable!("checked by digit_at"),
                }
            }
            while p < len {
                digits.push(self.middle.word.digits()[p as usize]);
                p += 1;
            }
            let tail = match &self.right {
                TailSpec::Periodic(per) => {
                    let off = (p - len).rem_euclid(per.len() as i64);
                    TailSpec::Periodic(per.rotate_left(off as usize))
                }
                other => other.clone(),
            };
            (digits, tail)
        } else {
            let mut p = pos;
            if p >= len {
                match &self.right {
                    TailSpec::Periodic(per) => {
                        while p >= len {
                            digits.push(per.cyclic(p - len));
                            p -= 1;
                        }
                    }
                    _ => unreachable!("checked by digit_at"),
                }
            }
            while p >= 0 {
                digits.push(self.middle.word.digits()[p as usize]);
                p -= 1;
            }
            let tail = match &self.left {
                TailSpec::Periodic(per) => {
                    let n = per.len() as i64;
                    // next leftward digit has middle-offset p (< 0): period index n+p mod n,
                    // and the reversed stream must continue with the reversed period
                    let idx = (n + 1 + p).rem_euclid(n);
                    TailSpec::Periodic(per.rotate_left(idx as usize).transpose())
                }
                other => other.clone(),
            };
            (digits, tail)
        }
    }
}

impl fmt::Debug for MarkedBiSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_word(self))
    }
}

impl fmt::Display for MarkedBiSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_word(self))
    }
}

/// All-extensions bound: λ₀ range over every bi-infinite extension of the
/// marked word over {1..alphabet}. The extremes are attained by alternating
/// tails, so the endpoints are exact values of explicit completions.
pub fn bound_all_extensions(m: &MarkedWord, alphabet: u8) -> SpectrumValue {
    let s = MarkedBiSeq::new(
        TailSpec::Free(alphabet),
        m.clone(),
        TailSpec::Free(alphabet),
    );
    s.lambda_at(0).expect("mark is determined")
}

/// Parse the word grammar: `[ '<' word '>' ] word? [ '<' word '>' ]` with
/// exactly one `*` placed immediately after the marked digit. A lone marked
/// `<w>` denotes a purely periodic sequence. Whitespace is ignored.
pub fn parse_word(text: &str) -> Result<MarkedBiSeq> {
    #[derive(Debug)]
    struct Part {
        bracketed: bool,
        digits: Vec<u8>,
        mark: Option<usize>,
    }
    let mut parts: Vec<Part> = Vec::new();
    let mut cur: Option<Part> = None;
    let mut marks = 0usize;
    let mut in_bracket = false;
    for (i, ch) in text.char_indices() {
        match ch {
            c if c.is_whitespace() => continue,
            '<' => {
                if in_bracket {
                    return Err(CfError::Syntax {
                        offset: i,
                        msg: "nested '<'".into(),
                    });
                }
                if let Some(p) = cur.take() {
                    parts.push(p);
                }
                in_bracket = true;
                cur = Some(Part {
                    bracketed: true,
                    digits: Vec::new(),
                    mark: None,
                });
            }
            '>' => {
                if !in_bracket {
                    return Err(CfError::Syntax {
                        offset: i,
                        msg: "unmatched '>'".into(),
                    });
                }
                in_bracket = false;
                let p = cur.take().unwrap();
                if p.digits.is_empty() {
                    return Err(CfError::Syntax {
                        offset: i,
                        msg: "empty period".into(),
                    });
                }
                parts.push(p);
            }
            '*' => {
                let p = cur.as_mut().ok_or(CfError::Syntax {
                    offset: i,
                    msg: "mark before any digit".into(),
                })?;
                if p.digits.is_empty() || p.mark.is_some() {
                    return Err(CfError::Syntax {
                        offset: i,
                        msg: "misplaced mark".into(),
                    });
                }
                p.mark = Some(p.digits.len() - 1);
                marks += 1;
            }
            c => match c.to_digit(10) {
                Some(d) if d >= 1 => {
                    if cur.is_none() {
                        cur = Some(Part {
                            bracketed: false,
                            digits: Vec::new(),
                            mark: None,
                        });
                    }
                    cur.as_mut().unwrap().digits.push(d as u8);
                }
                _ => {
                    return Err(CfError::Syntax {
                        offset: i,
                        msg: format!("unexpected character {c:?}"),
                    })
                }
            },
        }
    }
    if in_bracket {
        return Err(CfError::Syntax {
            offset: text.len(),
            msg: "unclosed '<'".into(),
        });
    }
    if let Some(p) = cur.take() {
        parts.push(p);
    }
    if marks != 1 {
        return Err(CfError::MarkCount(marks));
    }
    // shape check: at most <w> w <w>, with brackets only at the ends
    if parts.len() > 3 || parts.is_empty() {
        return Err(CfError::Syntax {
            offset: 0,
            msg: "expected [<w>] w [<w>]".into(),
        });
    }
    if parts.len() == 3 && (!(parts[0].bracketed && parts[2].bracketed) || parts[1].bracketed) {
        return Err(CfError::Syntax {
            offset: 0,
            msg: "expected [<w>] w [<w>]".into(),
        });
    }
    let alphabet = parts
        .iter()
        .flat_map(|p| p.digits.iter().copied())
        .max()
        .unwrap_or(1);

    // locate mark and assemble left tail / middle / right tail
    let marked_idx = parts.iter().position(|p| p.mark.is_some()).unwrap();
    let n = parts.len();
    let part_word = |p: &Part| Word::new(p.digits.clone()).unwrap();

    let mp = &parts[marked_idx];
    if mp.bracketed && marked_idx + 1 < n {
        // mark inside the left periodic part with material after it:
        // handle by reversing the whole expression and transposing back
        let transposed = parse_word(&reverse_expr(text)?)?;
        return Ok(transposed.transpose());
    }
    if mp.bracketed && marked_idx > 0 {
        // mark inside the right periodic part: unroll one period into the
        // middle (the period copy adjacent to the middle carries the mark)
        let p = part_word(mp);
        let mid = if parts[marked_idx - 1].bracketed {
            Word::default()
        } else {
            part_word(&parts[marked_idx - 1])
        };
        let left = if marked_idx >= 2 || (marked_idx == 1 && parts[0].bracketed) {
            if parts[0].bracketed {
                TailSpec::Periodic(part_word(&parts[0]))
            } else {
                TailSpec::Free(alphabet)
            }
        } else {
            TailSpec::Free(alphabet)
        };
        let mark = mid.len() + mp.mark.unwrap();
        let mid = mid.concat(&p);
        return Ok(MarkedBiSeq::new(
            left,
            MarkedWord::new(mid, mark)?,
            TailSpec::Periodic(p),
        ));
    }
    if mp.bracketed {
        // lone `<w*>` (n == 1): purely periodic, unroll one copy as middle
        let p = part_word(mp);
        return Ok(MarkedBiSeq::new(
            TailSpec::Periodic(p.clone()),
            MarkedWord::new(p.clone(), mp.mark.unwrap())?,
            TailSpec::Periodic(p),
        ));
    }
    // mark in the bare middle
    let mid = MarkedWord::new(part_word(mp), mp.mark.unwrap())?;
    let left = if marked_idx > 0 && parts[0].bracketed {
        TailSpec::Periodic(part_word(&parts[0]))
    } else {
        TailSpec::Free(alphabet)
    };
    let right = if marked_idx + 1 < n && parts[marked_idx + 1].bracketed {
        TailSpec::Periodic(part_word(&parts[marked_idx + 1]))
    } else {
        TailSpec::Free(alphabet)
    };
    Ok(MarkedBiSeq::new(left, mid, right))
}

/// Textual reversal of a grammar expression (for right-periodic marks).
fn reverse_expr(text: &str) -> Result<String> {
    let mut out = String::new();
    let mut chunk = String::new();
    let mut chunks: Vec<String> = Vec::new();
    for ch in text.chars().filter(|c| !c.is_whitespace()) {
        match ch {
            '<' => {
                if !chunk.is_empty() {
                    chunks.push(std::mem::take(&mut chunk));
                }
                chunk.push('<');
            }
            '>' => {
                chunk.push('>');
                chunks.push(std::mem::take(&mut chunk));
            }
            c => chunk.push(c),
        }
    }
    if !chunk.is_empty() {
        chunks.push(chunk);
    }
    for c in chunks.into_iter().rev() {
        let inner: String = c.trim_matches(|ch| ch == '<' || ch == '>').to_string();
        let rev = reverse_marked_string(&inner);
        if c.starts_with('<') {
            out.push('<');
            out.push_str(&rev);
            out.push('>');
        } else {
            out.push_str(&rev);
        }
    }
    Ok(out)
}

/// Reverse a digit string keeping `*` attached to its digit.
fn reverse_marked_string(s: &str) -> String {
    let mut toks: Vec<String> = Vec::new();
    for ch in s.chars() {
        if ch == '*' {
            if let Some(last) = toks.last_mut() {
                last.push('*');
            }
        } else {
            toks.push(ch.to_string());
        }
    }
    toks.into_iter().rev().collect()
}

/// Render a sequence back into the word grammar. Purely periodic sequences
/// collapse to the compact `<…*…>` form with the marked digit leading.
pub fn format_word(s: &MarkedBiSeq) -> String {
    if let (TailSpec::Periodic(pl), TailSpec::Periodic(pr)) = (&s.left, &s.right) {
        if let Some(p) = purely_periodic_form(s, pl, pr) {
            let mut out = String::from("<");
            for (i, d) in p.digits().iter().enumerate() {
                out.push((b'0' + d) as char);
                if i == 0 {
                    out.push('*');
                }
            }
            out.push('>');
            return out;
        }
    }
    let mut out = String::new();
    if let TailSpec::Periodic(p) = &s.left {
        out.push('<');
        out.push_str(&p.to_string());
        out.push('>');
    }
    for (i, d) in s.middle.word.digits().iter().enumerate() {
        out.push((b'0' + d) as char);
        if i == s.middle.mark {
            out.push('*');
        }
    }
    if let TailSpec::Periodic(p) = &s.right {
        out.push('<');
        out.push_str(&p.to_string());
        out.push('>');
    }
    out
}

/// If the sequence is purely periodic, return the period rotated to start at
/// the mark.
fn purely_periodic_form(s: &MarkedBiSeq, pl: &Word, pr: &Word) -> Option<Word> {
    if pl.len() != pr.len() {
        return None;
    }
    let n = pl.len() as i64;
    // candidate period starting at the mark
    let mut cand = Vec::new();
    for k in 0..n {
        cand.push(s.digit_at(k)?);
    }
    let cand = Word::new(cand).ok()?;
    // verify a generous window in both directions
    let span = 3 * n + s.middle.word.len() as i64;
    for k in -span..span {
        if s.digit_at(k)? != cand.cyclic(k) {
            return None;
        }
    }
    Some(cand)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::{Cmp, Precision};

    #[test]
    fn parse_golden() {
        let s = parse_word("<1*>").unwrap();
        assert!(s.is_determined());
        let v = s.lambda0().unwrap();
        // √5
        assert_eq!(v.decimal(7), "2.2360679…");
        assert_eq!(format_word(&s), "<1*>");
    }

    #[test]
    fn parse_three_parts() {
        let s = parse_word("<12>3*113<21>").unwrap();
        assert_eq!(s.middle.word, Word::parse("3113").unwrap());
        assert_eq!(s.middle.mark, 0);
        assert_eq!(s.left, TailSpec::Periodic(Word::parse("12").unwrap()));
        assert_eq!(s.right, TailSpec::Periodic(Word::parse("21").unwrap()));
        assert_eq!(format_word(&s), "<12>3*113<21>");
        // digits around the mark: ...1 2 | 3 1 1 3 | 2 1...
        assert_eq!(s.digit_at(0), Some(3));
        assert_eq!(s.digit_at(-1), Some(2));
        assert_eq!(s.digit_at(-2), Some(1));
        assert_eq!(s.digit_at(4), Some(2));
        assert_eq!(s.digit_at(5), Some(1));
        assert_eq!(s.digit_at(6), Some(2));
    }

    #[test]
    fn parse_freiman_word() {
        let s = parse_word("<121313>22344*3211<313121>").unwrap();
        assert_eq!(s.middle.mark, 4);
        assert_eq!(s.max_digit(), 4);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_word("<12>"), Err(CfError::MarkCount(0))));
        assert!(matches!(
            parse_word("<1*>2*"),
            Err(CfError::MarkCount(2))
        ));
        assert!(parse_word("<1a*>").is_err());
    }

    #[test]
    fn lambda_shift_invariance() {
        // λ_j(s) equals λ₀ of the re-marked expression of the same sequence
        let s = parse_word("<12>3*113<21>").unwrap();
        let remarked = [
            (-3, "<21>2*123113<21>"),
            (-2, "<12>1*23113<21>"),
            (-1, "<21>2*3113<21>"),
            (1, "<12>31*13<21>"),
            (2, "<12>311*3<21>"),
            (3, "<12>3113*<21>"),
            (4, "<12>31132*<12>"),
        ];
        for (j, expr) in remarked {
            let direct = s.lambda_at(j).unwrap();
            let re = parse_word(expr).unwrap().lambda0().unwrap();
            assert_eq!(
                direct.compare(&re, Precision::default()),
                Cmp::Equal,
                "j={j}"
            );
        }
    }

    #[test]
    fn transpose_value_symmetry() {
        let s = parse_word("<12>3*113<21>").unwrap();
        let t = s.transpose();
        let a = s.lambda0().unwrap();
        let b = t.lambda0().unwrap();
        assert_eq!(a.compare(&b, Precision::default()), Cmp::Equal);
    }

    #[test]
    fn free_bound_degenerate() {
        let m = MarkedWord::parse("1*").unwrap();
        let v = bound_all_extensions(&m, 1);
        assert!(v.exact);
        assert_eq!(v.decimal(7), "2.2360679…");
    }

    #[test]
    fn free_bound_contains_samples() {
        // prefix [2], free tail over {1,2}: interval must contain both
        // extreme completions sampled at depth 12
        let m = MarkedWord::parse("2*").unwrap();
        let v = bound_all_extensions(&m, 2);
        assert!(!v.exact);
        for tail in ["12", "21"] {
            let s = parse_word(&format!("<{tail}>2*<{tail}>")).unwrap();
            let inner = s.lambda0().unwrap();
            let iv = v.enclosure(256);
            let pt = inner.enclosure(256);
            assert!(iv.lo <= pt.lo && pt.hi <= iv.hi);
        }
    }
}
