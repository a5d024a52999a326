//! Exact arithmetic for real quadratic irrationals `(a + b√d)/c` and for
//! finite sums of such numbers.
//!
//! Single quadratics compare exactly. Sums of several are reduced by merging
//! radicals that are rationally dependent (equal radicands after square
//! extraction, or pairwise products that are perfect squares); a sum that
//! reduces to at most one radical has a decidable sign, anything else falls
//! back to escalating-precision interval separation.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Closed interval with arbitrary-precision rational endpoints.
#[derive(Clone, PartialEq, Eq)]
pub struct RatInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RatInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        RatInterval { lo, hi }
    }

    pub fn point(v: BigRational) -> Self {
        RatInterval {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, v: &BigRational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn contains_interval(&self, other: &RatInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &RatInterval) -> bool {
        !(self.hi < other.lo || other.hi < self.lo)
    }

    pub fn hull(&self, other: &RatInterval) -> RatInterval {
        RatInterval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn add(&self, other: &RatInterval) -> RatInterval {
        RatInterval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn to_f64(&self) -> f64 {
        rat_to_f64(&self.lo)
    }
}

impl fmt::Debug for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.12}, {:.12}]", rat_to_f64(&self.lo), rat_to_f64(&self.hi))
    }
}

pub fn rat_to_f64(r: &BigRational) -> f64 {
    // good enough for display/heuristics; exact paths never use this
    let num = r.numer();
    let den = r.denom();
    let nb = num.bits() as i64;
    let db = den.bits() as i64;
    let shift = (nb.max(db) - 52).max(0);
    let n = (num >> shift).to_string().parse::<f64>().unwrap_or(0.0);
    let d = (den >> shift).to_string().parse::<f64>().unwrap_or(1.0);
    if d == 0.0 {
        0.0
    } else {
        n / d
    }
}

/// Floor of sqrt for non-negative BigInt.
pub fn isqrt(n: &BigInt) -> BigInt {
    debug_assert!(!n.is_negative());
    n.sqrt()
}

/// Enclose √d (d ≥ 0 integer) within 2^-bits.
pub fn sqrt_interval(d: &BigInt, bits: u32) -> RatInterval {
    if d.is_zero() {
        return RatInterval::point(BigRational::zero());
    }
    let scale = BigInt::one() << (2 * bits);
    let lo_num = isqrt(&(d * &scale));
    let denom = BigInt::one() << bits;
    let lo = BigRational::new(lo_num.clone(), denom.clone());
    let hi = BigRational::new(lo_num + 1, denom);
    RatInterval::new(lo, hi)
}

/// A real quadratic irrational `(a + b√d)/c` with `c > 0`, `d ≥ 0`,
/// `b = 0 ⇒ d = 0`, and gcd(a, b, c) = 1. Rationals are the `d = 0` case.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadExt {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl QuadExt {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        assert!(!c.is_zero(), "zero denominator");
        assert!(!d.is_negative(), "negative radicand");
        let mut q = QuadExt { a, b, c, d };
        q.normalize();
        q
    }

    fn normalize(&mut self) {
        if self.c.is_negative() {
            self.a = -std::mem::take(&mut self.a);
            self.b = -std::mem::take(&mut self.b);
            self.c = -std::mem::take(&mut self.c);
        }
        if self.b.is_zero() || self.d.is_zero() {
            self.b = BigInt::zero();
            self.d = BigInt::zero();
        } else {
            // pull perfect-square content out of d so equal values share radicands
            let r = isqrt(&self.d);
            if &r * &r == self.d {
                self.a += &self.b * r;
                self.b = BigInt::zero();
                self.d = BigInt::zero();
            } else {
                let f = square_part(&self.d);
                if !f.is_one() {
                    self.d = &self.d / (&f * &f);
                    self.b *= f;
                }
            }
        }
        let g = self.a.gcd(&self.b).gcd(&self.c);
        if !g.is_one() && !g.is_zero() {
            self.a /= &g;
            self.b /= &g;
            self.c /= g;
        }
    }

    pub fn from_int(n: i64) -> Self {
        QuadExt::new(BigInt::from(n), BigInt::zero(), BigInt::one(), BigInt::zero())
    }

    pub fn from_rational(r: &BigRational) -> Self {
        QuadExt::new(
            r.numer().clone(),
            BigInt::zero(),
            r.denom().clone(),
            BigInt::zero(),
        )
    }

    /// √n for a non-negative integer n.
    pub fn sqrt_of(n: u64) -> Self {
        QuadExt::new(BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::from(n))
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.is_rational()
            .then(|| BigRational::new(self.a.clone(), self.c.clone()))
    }

    pub fn neg(&self) -> QuadExt {
        QuadExt::new(-&self.a, -&self.b, self.c.clone(), self.d.clone())
    }

    pub fn add_rational(&self, r: &BigRational) -> QuadExt {
        QuadExt::new(
            &self.a * r.denom() + r.numer() * &self.c,
            &self.b * r.denom(),
            &self.c * r.denom(),
            self.d.clone(),
        )
    }

    /// Exact sign: -1, 0, +1.
    pub fn sign(&self) -> i32 {
        // sign of a + b√d (c > 0)
        let sa = int_sign(&self.a);
        if self.b.is_zero() {
            return sa;
        }
        let sb = int_sign(&self.b);
        if sa == sb || sa == 0 {
            return sb;
        }
        if sb == 0 {
            return sa;
        }
        // opposite signs: compare a² with b²d
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * &self.d;
        match a2.cmp(&b2d) {
            Ordering::Equal => 0,
            Ordering::Greater => sa,
            Ordering::Less => sb,
        }
    }

    /// Exact comparison; total order.
    pub fn cmp_exact(&self, other: &QuadExt) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        let diff = RadicalSum::from_quad(self).sub_quad(other);
        match diff.sign_exact() {
            Some(s) => match s {
                0 => Ordering::Equal,
                x if x < 0 => Ordering::Less,
                _ => Ordering::Greater,
            },
            None => {
                // two independent radicals: separate by refinement, which
                // terminates because independence rules out equality
                let mut bits = 64;
                loop {
                    let si = self.interval(bits);
                    let oi = other.interval(bits);
                    if si.hi < oi.lo {
                        return Ordering::Less;
                    }
                    if oi.hi < si.lo {
                        return Ordering::Greater;
                    }
                    bits *= 2;
                }
            }
        }
    }

    /// Rational enclosure good to roughly 2^-bits (relative to √d scale).
    pub fn interval(&self, bits: u32) -> RatInterval {
        let c = BigRational::from(self.c.clone());
        let a = BigRational::from(self.a.clone());
        if self.b.is_zero() {
            return RatInterval::point(a / c);
        }
        let s = sqrt_interval(&self.d, bits);
        let b = BigRational::from(self.b.clone());
        let (t0, t1) = if self.b.is_negative() {
            (&b * &s.hi, &b * &s.lo)
        } else {
            (&b * &s.lo, &b * &s.hi)
        };
        RatInterval::new((&a + t0) / c.clone(), (&a + t1) / c)
    }

    pub fn to_f64(&self) -> f64 {
        self.interval(80).to_f64()
    }
}

impl fmt::Debug for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}/{}", self.a, self.c)
        } else {
            write!(f, "({} + {}√{})/{}", self.a, self.b, self.d, self.c)
        }
    }
}

fn int_sign(n: &BigInt) -> i32 {
    match n.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Largest f (built from small primes and a final perfect-square test) with
/// f² | n. Full square-free factorization of huge radicands is not attempted.
fn square_part(n: &BigInt) -> BigInt {
    let mut n = n.clone();
    let mut f = BigInt::one();
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let p = BigInt::from(p);
        let p2 = &p * &p;
        while (&n % &p2).is_zero() {
            n /= &p2;
            f *= &p;
        }
    }
    f
}

/// `rat + Σ coef_i √rad_i` with distinct, square-free-reduced, pairwise
/// independent radicands after `reduce`.
#[derive(Clone)]
pub struct RadicalSum {
    pub rat: BigRational,
    pub terms: Vec<(BigRational, BigInt)>,
}

impl RadicalSum {
    pub fn zero() -> Self {
        RadicalSum {
            rat: BigRational::zero(),
            terms: Vec::new(),
        }
    }

    pub fn from_rational(r: BigRational) -> Self {
        RadicalSum {
            rat: r,
            terms: Vec::new(),
        }
    }

    pub fn from_quad(q: &QuadExt) -> Self {
        let mut s = RadicalSum {
            rat: BigRational::new(q.a.clone(), q.c.clone()),
            terms: Vec::new(),
        };
        if !q.b.is_zero() {
            s.terms
                .push((BigRational::new(q.b.clone(), q.c.clone()), q.d.clone()));
        }
        s
    }

    pub fn add_quad(mut self, q: &QuadExt) -> Self {
        self.rat += BigRational::new(q.a.clone(), q.c.clone());
        if !q.b.is_zero() {
            self.terms
                .push((BigRational::new(q.b.clone(), q.c.clone()), q.d.clone()));
        }
        self.reduce();
        self
    }

    pub fn sub_quad(mut self, q: &QuadExt) -> Self {
        self.rat -= BigRational::new(q.a.clone(), q.c.clone());
        if !q.b.is_zero() {
            self.terms
                .push((-BigRational::new(q.b.clone(), q.c.clone()), q.d.clone()));
        }
        self.reduce();
        self
    }

    /// Merge dependent radicals: equal radicands, and pairs whose product is a
    /// perfect square (√m = (s/n)√n when mn = s²).
    fn reduce(&mut self) {
        let mut i = 0;
        while i < self.terms.len() {
            if self.terms[i].0.is_zero() || self.terms[i].1.is_zero() {
                self.terms.remove(i);
                continue;
            }
            let mut j = i + 1;
            let mut removed_i = false;
            while j < self.terms.len() {
                if self.terms[i].1 == self.terms[j].1 {
                    let cj = self.terms.remove(j).0;
                    self.terms[i].0 += cj;
                } else {
                    let prod = &self.terms[i].1 * &self.terms[j].1;
                    let s = isqrt(&prod);
                    if &s * &s == prod {
                        // √rad_j = (s / rad_i) √rad_i / ... fold j into i
                        let (cj, dj) = self.terms.remove(j);
                        let factor = BigRational::new(s.clone(), dj);
                        self.terms[i].0 += cj * factor;
                    } else {
                        j += 1;
                    }
                }
                if self.terms[i].0.is_zero() {
                    self.terms.remove(i);
                    removed_i = true;
                    break;
                }
            }
            if !removed_i {
                i += 1;
            }
        }
    }

    pub fn is_zero_exact(&self) -> bool {
        self.rat.is_zero() && self.terms.is_empty()
    }

    /// Exact sign when decidable without refinement (≤ 1 radical, or 2
    /// radicals with no rational part).
    pub fn sign_exact(&self) -> Option<i32> {
        match self.terms.len() {
            0 => Some(rat_sign(&self.rat)),
            1 => {
                let q = QuadExt::new(
                    self.rat.numer() * self.terms[0].0.denom(),
                    self.terms[0].0.numer() * self.rat.denom(),
                    self.rat.denom() * self.terms[0].0.denom(),
                    self.terms[0].1.clone(),
                );
                Some(q.sign())
            }
            2 if self.rat.is_zero() => {
                // c1√m1 vs -c2√m2, m1 ≠ m2 independent ⇒ never equal
                let (c1, m1) = &self.terms[0];
                let (c2, m2) = &self.terms[1];
                let s1 = rat_sign(c1);
                let s2 = rat_sign(c2);
                if s1 == s2 {
                    return Some(s1);
                }
                let lhs = c1 * c1 * BigRational::from(m1.clone());
                let rhs = c2 * c2 * BigRational::from(m2.clone());
                Some(match lhs.cmp(&rhs) {
                    Ordering::Greater => s1,
                    Ordering::Less => s2,
                    Ordering::Equal => 0, // unreachable after reduce
                })
            }
            _ => None,
        }
    }

    pub fn interval(&self, bits: u32) -> RatInterval {
        let mut lo = self.rat.clone();
        let mut hi = self.rat.clone();
        for (c, m) in &self.terms {
            let s = sqrt_interval(m, bits);
            if c.is_negative() {
                lo += c * &s.hi;
                hi += c * &s.lo;
            } else {
                lo += c * &s.lo;
                hi += c * &s.hi;
            }
        }
        RatInterval::new(lo, hi)
    }

    /// Sign with refinement up to `max_bits`; None = undecided (only possible
    /// for ≥ 3 mutually dependent radicals that escaped reduction).
    pub fn sign(&self, max_bits: u32) -> Option<i32> {
        if let Some(s) = self.sign_exact() {
            return Some(s);
        }
        let mut bits = 128;
        loop {
            let iv = self.interval(bits);
            if iv.lo > BigRational::zero() {
                return Some(1);
            }
            if iv.hi < BigRational::zero() {
                return Some(-1);
            }
            if bits >= max_bits {
                return None;
            }
            bits = (bits * 2).min(max_bits);
        }
    }
}

fn rat_sign(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_negative() {
        -1
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn golden_ratio_sign() {
        // (√5 - 1)/2 > 0, and (1 - √5)/2 < 0
        let g = QuadExt::new(BigInt::from(-1), BigInt::from(1), BigInt::from(2), BigInt::from(5));
        assert_eq!(g.sign(), 1);
        assert_eq!(g.neg().sign(), -1);
    }

    #[test]
    fn square_extraction() {
        // √8 = 2√2
        let q = QuadExt::sqrt_of(8);
        assert_eq!(q.d, BigInt::from(2));
        assert_eq!(q.b, BigInt::from(2));
        // √49 folds into the rational part
        let q = QuadExt::sqrt_of(49);
        assert!(q.is_rational());
        assert_eq!(q.as_rational().unwrap(), rat(7, 1));
    }

    #[test]
    fn exact_compare_distinct_radicals() {
        let a = QuadExt::sqrt_of(2); // 1.414...
        let b = QuadExt::sqrt_of(3); // 1.732...
        assert_eq!(a.cmp_exact(&b), Ordering::Less);
        assert_eq!(b.cmp_exact(&a), Ordering::Greater);
        assert_eq!(a.cmp_exact(&a.clone()), Ordering::Equal);
    }

    #[test]
    fn radical_sum_merges_dependents() {
        // √2 + √8 - √18 = √2 + 2√2 - 3√2 = 0
        let s = RadicalSum::zero()
            .add_quad(&QuadExt::sqrt_of(2))
            .add_quad(&QuadExt::sqrt_of(8))
            .sub_quad(&QuadExt::sqrt_of(18));
        assert!(s.is_zero_exact());
        // √6·√24 = 12: dependent pair across different radicands
        let s = RadicalSum::zero()
            .add_quad(&QuadExt::sqrt_of(24))
            .sub_quad(&QuadExt::sqrt_of(6))
            .sub_quad(&QuadExt::sqrt_of(6));
        assert!(s.is_zero_exact());
    }

    #[test]
    fn sqrt_interval_tight() {
        let iv = sqrt_interval(&BigInt::from(5), 200);
        assert!(iv.width() < rat(1, 1_000_000_000));
        let two = rat(2, 1);
        assert!(iv.lo < &two + rat(1, 4) && iv.hi > two);
    }
}
