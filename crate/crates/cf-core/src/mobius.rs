//! Integer Möbius transformations and convergent arithmetic.

use crate::quad::{QuadExt, RatInterval};
use crate::word::Word;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// x ↦ (p·x + q)/(r·x + s), composed like matrix multiplication.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mobius {
    pub p: BigInt,
    pub q: BigInt,
    pub r: BigInt,
    pub s: BigInt,
}

impl Mobius {
    pub fn identity() -> Self {
        Mobius {
            p: BigInt::one(),
            q: BigInt::zero(),
            r: BigInt::zero(),
            s: BigInt::one(),
        }
    }

    /// The partial-quotient step x ↦ a + 1/x.
    pub fn digit(a: u8) -> Self {
        Mobius {
            p: BigInt::from(a),
            q: BigInt::one(),
            r: BigInt::one(),
            s: BigInt::zero(),
        }
    }

    /// x ↦ 1/x; turns [a₁;a₂,…] into [0;a₁,a₂,…].
    pub fn reciprocal() -> Self {
        Mobius {
            p: BigInt::zero(),
            q: BigInt::one(),
            r: BigInt::one(),
            s: BigInt::zero(),
        }
    }

    /// self ∘ other (apply `other` first).
    pub fn compose(&self, other: &Mobius) -> Mobius {
        Mobius {
            p: &self.p * &other.p + &self.q * &other.r,
            q: &self.p * &other.q + &self.q * &other.s,
            r: &self.r * &other.p + &self.s * &other.r,
            s: &self.r * &other.q + &self.s * &other.s,
        }
    }

    /// Composition of digit steps for a word, left digit applied last, so
    /// `of_word(w)(x) = [w₁; w₂, …, wₙ, x]`.
    pub fn of_word(w: &[u8]) -> Mobius {
        let mut m = Mobius::identity();
        for &d in w {
            m = m.compose(&Mobius::digit(d));
        }
        m
    }

    pub fn det_sign(&self) -> i32 {
        let det = &self.p * &self.s - &self.q * &self.r;
        if det.is_negative() {
            -1
        } else if det.is_zero() {
            0
        } else {
            1
        }
    }

    pub fn apply_quad(&self, x: &QuadExt) -> QuadExt {
        // (p(a+b√d)/c + q) / (r(a+b√d)/c + s) with conjugate rationalization
        let n0 = &self.p * &x.a + &self.q * &x.c;
        let n1 = &self.p * &x.b;
        let m0 = &self.r * &x.a + &self.s * &x.c;
        let m1 = &self.r * &x.b;
        // (n0 + n1√d)(m0 - m1√d) / (m0² - m1²d)
        let den = &m0 * &m0 - &m1 * &m1 * &x.d;
        let a = &n0 * &m0 - &n1 * &m1 * &x.d;
        let b = &n1 * &m0 - &n0 * &m1;
        QuadExt::new(a, b, den, x.d.clone())
    }

    pub fn apply_rational(&self, x: &BigRational) -> BigRational {
        let num = &self.p * x.numer() + &self.q * x.denom();
        let den = &self.r * x.numer() + &self.s * x.denom();
        BigRational::new(num, den)
    }

    /// Image of an interval of tail values; monotone by determinant sign.
    /// Valid when the denominator keeps one sign on the interval (always true
    /// for tail values > 0 with non-negative r, s).
    pub fn apply_interval(&self, iv: &RatInterval) -> RatInterval {
        let a = self.apply_rational(&iv.lo);
        let b = self.apply_rational(&iv.hi);
        if self.det_sign() >= 0 {
            RatInterval::new(a, b)
        } else {
            RatInterval::new(b, a)
        }
    }

    /// Attracting fixed point x = (p x + q)/(r x + s) with x > 1; exists for
    /// any nonempty digit word.
    pub fn fixed_point(&self) -> QuadExt {
        assert!(self.r.is_positive(), "fixed point needs r > 0");
        // r x² + (s - p) x - q = 0, take the positive root
        let disc = {
            let t = &self.s - &self.p;
            &t * &t + BigInt::from(4) * &self.r * &self.q
        };
        QuadExt::new(
            &self.p - &self.s,
            BigInt::one(),
            BigInt::from(2) * &self.r,
            disc,
        )
    }
}

/// Convergents pₖ/qₖ of [0; w₁, w₂, …, wₙ], k = 1..n. Denominators strictly
/// increase from k ≥ 2 and every completion of the prefix lies between
/// consecutive convergents.
pub fn convergents(w: &Word) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::with_capacity(w.len());
    let (mut p0, mut q0) = (BigInt::one(), BigInt::zero()); // p_{-1}, q_{-1}
    let (mut p1, mut q1) = (BigInt::zero(), BigInt::one()); // p_0, q_0
    for &a in w.digits() {
        let p2 = BigInt::from(a) * &p1 + &p0;
        let q2 = BigInt::from(a) * &q1 + &q0;
        out.push((p2.clone(), q2.clone()));
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
    }
    out
}

/// |I(w)| = 1/(qₙ(qₙ + qₙ₋₁)): length of the cylinder of reals whose
/// continued fraction starts with w.
pub fn cylinder_size(w: &Word) -> BigRational {
    assert!(!w.is_empty());
    let (mut q0, mut q1) = (BigInt::zero(), BigInt::one());
    for &a in w.digits() {
        let q2 = BigInt::from(a) * &q1 + &q0;
        q0 = std::mem::replace(&mut q1, q2);
    }
    BigRational::new(BigInt::one(), &q1 * (&q1 + &q0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Word;
    use num_traits::ToPrimitive;

    #[test]
    fn convergents_fibonacci() {
        let w = Word::parse("11111").unwrap();
        let cs = convergents(&w);
        let expect = [(1, 1), (1, 2), (2, 3), (3, 5), (5, 8)];
        for ((p, q), (ep, eq)) in cs.iter().zip(expect) {
            assert_eq!(p.to_i64().unwrap(), ep);
            assert_eq!(q.to_i64().unwrap(), eq);
        }
    }

    #[test]
    fn convergents_of_22() {
        // convergents of [2;2] are the numerator/denominator flips of [0;2,2]
        let cs = convergents(&Word::parse("22").unwrap());
        assert_eq!(
            (cs[0].1.to_i64().unwrap(), cs[0].0.to_i64().unwrap()),
            (2, 1)
        );
        assert_eq!(
            (cs[1].1.to_i64().unwrap(), cs[1].0.to_i64().unwrap()),
            (5, 2)
        );
    }

    #[test]
    fn cylinder_sizes() {
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(cylinder_size(&Word::parse("1").unwrap()), half);
        let sixth = BigRational::new(BigInt::from(1), BigInt::from(6));
        assert_eq!(cylinder_size(&Word::parse("2").unwrap()), sixth);
    }

    #[test]
    fn fixed_point_golden() {
        // [1;1,1,...] = (1+√5)/2
        let m = Mobius::of_word(&[1]);
        let x = m.fixed_point();
        assert_eq!(x.a, BigInt::from(1));
        assert_eq!(x.d, BigInt::from(5));
        assert_eq!(x.c, BigInt::from(2));
    }

    #[test]
    fn cylinder_submultiplicative_bracket() {
        // ½·s(α)s(β) < s(αβ) < 2·s(α)s(β)
        let a = Word::parse("1213").unwrap();
        let b = Word::parse("32112").unwrap();
        let sab = cylinder_size(&a.concat(&b));
        let prod = cylinder_size(&a) * cylinder_size(&b);
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let two = BigRational::new(BigInt::from(2), BigInt::from(1));
        assert!(&half * &prod < sab && sab < &two * &prod);
    }
}
