//! Two-sided continued-fraction values and certified comparisons.

use crate::quad::{RadicalSum, RatInterval, QuadExt};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use std::cmp::Ordering;
use std::fmt;

/// Outcome of a certified comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Less,
    Greater,
    Equal,
    Undecided,
}

/// Precision policy for interval separation. Widths below 2^-max_bits give up
/// with `Undecided` rather than guessing.
#[derive(Clone, Copy, Debug)]
pub struct Precision {
    pub start_bits: u32,
    pub max_bits: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            start_bits: 192,
            max_bits: 16384,
        }
    }
}

/// λ-value split at the mark: `right = [a₀; a₁, …]` and `left = [0; a₋₁, …]`,
/// both exact quadratic irrationals. The value is their sum.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Val {
    pub right: QuadExt,
    pub left: QuadExt,
}

impl Val {
    pub fn new(right: QuadExt, left: QuadExt) -> Self {
        Val { right, left }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        Val {
            right: QuadExt::from_rational(r),
            left: QuadExt::from_int(0),
        }
    }

    pub fn sum(&self) -> RadicalSum {
        RadicalSum::from_quad(&self.right).add_quad(&self.left)
    }

    /// Exact total-order comparison. Terminates for all pairs built from
    /// quadratic irrationals (independent radicals separate, dependent ones
    /// merge away).
    pub fn cmp_exact(&self, other: &Val) -> Ordering {
        let diff = self
            .sum()
            .sub_quad(&other.right)
            .sub_quad(&other.left);
        sign_to_ordering(diff.sign(u32::MAX).expect("radical sign"))
    }

    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        // shifting the rational part leaves the radical terms reduced
        let mut diff = self.sum();
        diff.rat -= r;
        sign_to_ordering(diff.sign(u32::MAX).expect("radical sign"))
    }

    pub fn interval(&self, bits: u32) -> RatInterval {
        self.sum().interval(bits)
    }

    pub fn to_f64(&self) -> f64 {
        self.interval(96).to_f64()
    }
}

impl fmt::Debug for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.12}", self.to_f64())
    }
}

fn sign_to_ordering(s: i32) -> Ordering {
    match s {
        0 => Ordering::Equal,
        x if x < 0 => Ordering::Less,
        _ => Ordering::Greater,
    }
}

/// A continued-fraction-derived real with a certified enclosure. When the
/// underlying digit stream is fully determined the endpoints coincide as an
/// exact pair of quadratic irrationals.
#[derive(Clone)]
pub struct SpectrumValue {
    /// Smallest admissible value (attained by an extremal completion).
    pub lo: Val,
    /// Largest admissible value.
    pub hi: Val,
    /// True when lo == hi as exact values (deterministic digit stream).
    pub exact: bool,
}

impl SpectrumValue {
    pub fn exact(v: Val) -> Self {
        SpectrumValue {
            lo: v.clone(),
            hi: v,
            exact: true,
        }
    }

    pub fn range(lo: Val, hi: Val) -> Self {
        SpectrumValue {
            lo,
            hi,
            exact: false,
        }
    }

    pub fn exact_pair(&self) -> Option<(&QuadExt, &QuadExt)> {
        self.exact.then_some((&self.lo.right, &self.lo.left))
    }

    /// Rational enclosure; tightening `bits` yields nested intervals whose
    /// width shrinks to the spread between extremal completions.
    pub fn enclosure(&self, bits: u32) -> RatInterval {
        let a = self.lo.interval(bits);
        let b = self.hi.interval(bits);
        RatInterval::new(a.lo, b.hi)
    }

    /// Certified three-way comparison of two values given as ranges: decided
    /// only when every admissible pair is on the same side.
    pub fn compare(&self, other: &SpectrumValue, prec: Precision) -> Cmp {
        let _ = prec;
        if self.exact && other.exact {
            return match self.lo.cmp_exact(&other.lo) {
                Ordering::Less => Cmp::Less,
                Ordering::Greater => Cmp::Greater,
                Ordering::Equal => Cmp::Equal,
            };
        }
        if self.hi.cmp_exact(&other.lo) == Ordering::Less {
            return Cmp::Less;
        }
        if other.hi.cmp_exact(&self.lo) == Ordering::Less {
            return Cmp::Greater;
        }
        Cmp::Undecided
    }

    pub fn compare_rational(&self, r: &BigRational, prec: Precision) -> Cmp {
        let _ = prec;
        if self.exact {
            return match self.lo.cmp_rational(r) {
                Ordering::Less => Cmp::Less,
                Ordering::Greater => Cmp::Greater,
                Ordering::Equal => Cmp::Equal,
            };
        }
        if self.hi.cmp_rational(r) == Ordering::Less {
            return Cmp::Less;
        }
        if self.lo.cmp_rational(r) == Ordering::Greater {
            return Cmp::Greater;
        }
        Cmp::Undecided
    }

    pub fn to_f64(&self) -> f64 {
        self.lo.to_f64()
    }

    /// Decimal expansion truncated to `digits` fractional digits, with a
    /// trailing `…` when the value continues. Digits are only printed once
    /// certified by the enclosure.
    pub fn decimal(&self, digits: usize) -> String {
        let mut bits = 128u32;
        loop {
            let iv = self.enclosure(bits);
            if let Some(s) = decimal_from_interval(&iv, digits) {
                return s;
            }
            if bits > 1 << 20 {
                return format!("~{:.6}(unresolved)", iv.to_f64());
            }
            // not exact: the spread itself limits printable digits
            if !self.exact && bits >= 4096 {
                let lo = self.lo.interval(bits);
                let hi = self.hi.interval(bits);
                if lo.hi < hi.lo {
                    // genuine range; print the certified enclosure
                    return format!(
                        "[{}, {}]",
                        decimal_from_interval(&RatInterval::new(lo.lo.clone(), lo.hi.clone()), digits)
                            .unwrap_or_else(|| format!("{:.8}", lo.to_f64())),
                        decimal_from_interval(&RatInterval::new(hi.lo.clone(), hi.hi.clone()), digits)
                            .unwrap_or_else(|| format!("{:.8}", hi.to_f64()))
                    );
                }
            }
            bits *= 2;
        }
    }
}

impl fmt::Debug for SpectrumValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exact {
            write!(f, "{:?}", self.lo)
        } else {
            write!(f, "[{:?}, {:?}]", self.lo, self.hi)
        }
    }
}

/// Truncated decimal of an interval, or None if its endpoints do not yet
/// agree on the first `digits` fractional digits.
pub fn decimal_from_interval(iv: &RatInterval, digits: usize) -> Option<String> {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let lo_scaled = (&iv.lo * BigRational::from(scale.clone())).floor();
    let hi_scaled = (&iv.hi * BigRational::from(scale.clone())).floor();
    if lo_scaled != hi_scaled {
        return None;
    }
    let n = lo_scaled.to_integer();
    let exactly =
        iv.lo == iv.hi && iv.lo == BigRational::new(n.clone(), scale.clone());
    let neg = n.is_negative();
    let mag = n.magnitude().clone();
    let whole = &mag / scale.magnitude();
    let frac = &mag % scale.magnitude();
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    s.push_str(&whole.to_string());
    if digits > 0 {
        s.push('.');
        s.push_str(&format!("{:0>width$}", frac.to_string(), width = digits));
    }
    if !exactly {
        s.push('…');
    }
    Some(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    #[test]
    fn sqrt5_value_decimal() {
        // [1;1,1,...] + [0;1,1,...] = √5
        let right = Mobius_fixed(&[1]);
        let left = left_fixed(&[1]);
        let v = SpectrumValue::exact(Val::new(right, left));
        assert_eq!(v.decimal(7), "2.2360679…");
        let sum = v.lo.sum();
        assert_eq!(sum.terms.len(), 1);
        assert!(sum.rat.is_zero());
        assert_eq!(sum.terms[0].1, BigInt::from(5));
        assert!(sum.terms[0].0.is_one());
    }

    fn Mobius_fixed(w: &[u8]) -> QuadExt {
        crate::mobius::Mobius::of_word(w).fixed_point()
    }

    fn left_fixed(w: &[u8]) -> QuadExt {
        let x = Mobius_fixed(w);
        crate::mobius::Mobius::reciprocal().apply_quad(&x)
    }

    #[test]
    fn compare_exact_gap() {
        // √5 < 2√2
        let a = SpectrumValue::exact(Val::new(Mobius_fixed(&[1]), left_fixed(&[1])));
        let b = SpectrumValue::exact(Val::new(Mobius_fixed(&[2]), left_fixed(&[2])));
        assert_eq!(a.compare(&b, Precision::default()), Cmp::Less);
        assert_eq!(a.compare(&a.clone(), Precision::default()), Cmp::Equal);
    }
}
