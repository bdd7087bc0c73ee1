//! Bit-packed polynomials over the two-element field.
//!
//! Bit `i` of the packed vector is the coefficient of `t^i`. The word vector
//! never carries trailing zero words, so the zero polynomial is empty and the
//! highest set bit is the degree.

use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};

#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct F2Poly {
    words: Vec<u64>,
}

impl F2Poly {
    pub fn zero() -> Self {
        Self { words: Vec::new() }
    }

    pub fn one() -> Self {
        Self { words: vec![1] }
    }

    pub fn from_words(mut words: Vec<u64>) -> Self {
        while words.last() == Some(&0) {
            words.pop();
        }
        Self { words }
    }

    /// Polynomial with a 1 coefficient at every listed exponent (repeats cancel).
    pub fn from_exponents(exps: &[usize]) -> Self {
        let mut p = Self::zero();
        for &e in exps {
            p.flip(e);
        }
        p
    }

    /// `t^d + 1`, which equals `t^d - 1` over F₂.
    pub fn t_pow_plus_one(d: usize) -> Self {
        Self::from_exponents(&[d, 0])
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        let top = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + 63 - top.leading_zeros() as usize)
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words
            .get(i / 64)
            .is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    fn flip(&mut self, i: usize) {
        let w = i / 64;
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        self.words[w] ^= 1 << (i % 64);
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    /// Coefficient-reversal against `t^deg`: `t^deg · p(1/t)`.
    pub fn reversed(&self) -> Self {
        let Some(d) = self.degree() else {
            return Self::zero();
        };
        let exps: Vec<usize> = (0..=d).filter(|&i| self.coeff(i)).map(|i| d - i).collect();
        Self::from_exponents(&exps)
    }

    pub fn is_self_reciprocal(&self) -> bool {
        *self == self.reversed() && self.coeff(0)
    }

    /// Carry-less product.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![0u64; self.words.len() + other.words.len()];
        for (i, &a) in self.words.iter().enumerate() {
            for (j, &b) in other.words.iter().enumerate() {
                let (lo, hi) = clmul64(a, b);
                out[i + j] ^= lo;
                out[i + j + 1] ^= hi;
            }
        }
        Self::from_words(out)
    }

    pub fn divrem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let db = divisor.degree().ok_or(Error::DivisionByZero)?;
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(dr) = rem.degree() {
            if dr < db {
                break;
            }
            let shift = dr - db;
            quot.flip(shift);
            rem = rem.add(&divisor.shl(shift));
        }
        Ok((quot, rem))
    }

    /// Quotient when the division leaves no remainder.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.divrem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InexactDivision)
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.words.len().max(other.words.len());
        let words = (0..n)
            .map(|i| self.words.get(i).unwrap_or(&0) ^ other.words.get(i).unwrap_or(&0))
            .collect();
        Self::from_words(words)
    }

    fn shl(&self, s: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let (ws, bs) = (s / 64, s % 64);
        let mut out = vec![0u64; self.words.len() + ws + 1];
        for (i, &w) in self.words.iter().enumerate() {
            out[i + ws] ^= w << bs;
            if bs != 0 {
                out[i + ws + 1] ^= w >> (64 - bs);
            }
        }
        Self::from_words(out)
    }
}

/// 64×64 → 128-bit carry-less multiply, returned as (low, high) words.
fn clmul64(a: u64, b: u64) -> (u64, u64) {
    let mut lo = 0u64;
    let mut hi = 0u64;
    let mut bits = a;
    while bits != 0 {
        let i = bits.trailing_zeros();
        lo ^= b << i;
        if i != 0 {
            hi ^= b >> (64 - i);
        }
        bits &= bits - 1;
    }
    (lo, hi)
}

impl Mul for &F2Poly {
    type Output = F2Poly;
    fn mul(self, rhs: &F2Poly) -> F2Poly {
        F2Poly::mul(self, rhs)
    }
}

impl fmt::Display for F2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(d) = self.degree() else {
            return write!(f, "0");
        };
        let terms: Vec<String> = (0..=d)
            .rev()
            .filter(|&i| self.coeff(i))
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "t".to_string(),
                _ => format!("t^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl fmt::Debug for F2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F2Poly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(exps: &[usize]) -> F2Poly {
        F2Poly::from_exponents(exps)
    }

    /// Schoolbook product over bool vectors, independent of the packed path.
    fn schoolbook(a: &[usize], b: &[usize]) -> F2Poly {
        let mut coeffs = vec![false; 512];
        for &i in a {
            for &j in b {
                coeffs[i + j] ^= true;
            }
        }
        let exps: Vec<usize> = (0..512).filter(|&i| coeffs[i]).collect();
        p(&exps)
    }

    #[test]
    fn mul_examples() {
        assert_eq!(p(&[1, 0]).mul(&p(&[1, 0])), p(&[2, 0]));
        assert_eq!(p(&[2, 1, 0]).mul(&p(&[1, 0])), p(&[3, 0]));
        assert_eq!(schoolbook(&[2, 1, 0], &[1, 0]), p(&[3, 0]));
        let a = p(&[5, 3, 0]);
        assert_eq!(a.mul(&F2Poly::one()), a);
        assert!(a.mul(&F2Poly::zero()).is_zero());
    }

    #[test]
    fn mul_across_word_boundary() {
        let a = p(&[63, 70, 1]);
        let b = p(&[64, 2, 0]);
        assert_eq!(a.mul(&b), schoolbook(&[63, 70, 1], &[64, 2, 0]));
        assert_eq!(a.mul(&b).degree(), Some(134));
    }

    #[test]
    fn divrem_examples() {
        let sq = p(&[1, 0]).mul(&p(&[1, 0]));
        let (q, r) = p(&[4, 0]).divrem(&sq).unwrap();
        assert_eq!((q, r), (p(&[2, 0]), F2Poly::zero()));

        let a = p(&[3, 1]);
        assert_eq!(a.divrem(&a).unwrap(), (F2Poly::one(), F2Poly::zero()));

        let (q, r) = p(&[3, 0]).divrem(&p(&[2, 0])).unwrap();
        assert_eq!((q.clone(), r.clone()), (p(&[1]), p(&[1, 0])));
        assert_eq!(q.mul(&p(&[2, 0])).add(&r), p(&[3, 0]));
    }

    #[test]
    fn divide_by_zero_fails() {
        assert_eq!(p(&[1]).divrem(&F2Poly::zero()), Err(Error::DivisionByZero));
        assert_eq!(p(&[3, 0]).exact_div(&p(&[2, 0])), Err(Error::InexactDivision));
    }

    #[test]
    fn display_and_reciprocity() {
        let a = p(&[6, 4, 2, 0]);
        assert_eq!(a.to_string(), "t^6 + t^4 + t^2 + 1");
        assert!(a.is_self_reciprocal());
        assert!(!p(&[3, 1]).is_self_reciprocal());
        assert_eq!(F2Poly::zero().to_string(), "0");
    }

    fn arb_poly() -> impl Strategy<Value = Vec<usize>> {
        prop::collection::vec(0usize..150, 0..20)
    }

    proptest! {
        #[test]
        fn mul_matches_schoolbook(a in arb_poly(), b in arb_poly()) {
            prop_assert_eq!(p(&a).mul(&p(&b)), schoolbook(&a, &b));
        }

        #[test]
        fn divrem_inverts_mul(a in arb_poly(), b in arb_poly()) {
            let (a, b) = (p(&a), p(&b));
            prop_assume!(!b.is_zero());
            let (q, r) = a.mul(&b).divrem(&b).unwrap();
            prop_assert_eq!(q, a);
            prop_assert!(r.is_zero());
        }

        #[test]
        fn divrem_reconstructs(a in arb_poly(), b in arb_poly()) {
            let (a, b) = (p(&a), p(&b));
            prop_assume!(!b.is_zero());
            let (q, r) = a.divrem(&b).unwrap();
            prop_assert_eq!(q.mul(&b).add(&r), a);
            prop_assert!(r.degree().is_none_or(|d| d < b.degree().unwrap()));
        }
    }
}
