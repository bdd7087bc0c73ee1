//! Exact arithmetic in small finite fields `F_{p^k}` and polynomials over them.
//!
//! Elements are encoded as integers in `[0, p^k)`: the base-`p` digits are the
//! coefficients of the element as a polynomial in the generator `θ` (a root of
//! the field modulus), lowest degree first. Elements of the prime subfield are
//! therefore encoded by their own value in every extension.
//!
//! Fields up to [`TABLE_LIMIT`] elements carry discrete log/exp tables, which
//! makes multiplication and the quadratic character table lookups.

use crate::arith;
use crate::error::{Error, Result};

/// Fields are limited to `p^k < 2^31`.
pub const MAX_FIELD_ORDER: u64 = 1 << 31;

const TABLE_LIMIT: u64 = 1 << 20;

#[derive(Debug, Clone)]
struct LogTables {
    /// `exp[i] = γ^i` for a fixed primitive element γ, `0 <= i < order - 1`.
    exp: Vec<u32>,
    /// Inverse of `exp`; entry 0 is unused.
    log: Vec<u32>,
}

/// A finite field `F_{p^k}` given by a monic irreducible modulus over `F_p`.
#[derive(Debug, Clone)]
pub struct FiniteField {
    p: u32,
    k: u32,
    order: u32,
    /// Monic modulus, lowest degree first, length `k + 1`.
    modulus: Vec<u32>,
    tables: Option<LogTables>,
}

impl FiniteField {
    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Self> {
        Self::build_extension(p, 1)
    }

    /// `F_{p^k}` with modulus the first monic irreducible of degree `k` in the
    /// lexicographic order of coefficient vectors (constant term fastest).
    pub fn build_extension(p: u64, k: u32) -> Result<Self> {
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::InvalidArgument("extension degree must be >= 1".into()));
        }
        let order = (p as u128).checked_pow(k).unwrap_or(u128::MAX);
        if order >= MAX_FIELD_ORDER as u128 {
            return Err(Error::FieldTooLarge { p, k });
        }
        let modulus = first_irreducible(p as u32, k);
        let mut field = Self {
            p: p as u32,
            k,
            order: order as u32,
            modulus,
            tables: None,
        };
        if (order as u64) <= TABLE_LIMIT {
            field.tables = Some(field.build_tables());
        }
        Ok(field)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.order
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    pub fn digits(&self, a: u32) -> Vec<u32> {
        let mut a = a;
        (0..self.k)
            .map(|_| {
                let d = a % self.p;
                a /= self.p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut scale = 1;
        for _ in 0..self.k {
            let s = (a % self.p + b % self.p) % self.p;
            out += s * scale;
            scale *= self.p;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.k == 1 {
            return if a == 0 { 0 } else { self.p - a };
        }
        let digits: Vec<u32> = self
            .digits(a)
            .into_iter()
            .map(|d| if d == 0 { 0 } else { self.p - d })
            .collect();
        self.from_digits(&digits)
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        if let Some(t) = &self.tables {
            let n = self.order as u64 - 1;
            let e = (t.log[a as usize] as u64 + t.log[b as usize] as u64) % n;
            return t.exp[e as usize];
        }
        self.mul_slow(a, b)
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        let p = self.p as u64;
        let (da, db) = (self.digits(a), self.digits(b));
        let k = self.k as usize;
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for top in (k..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for (i, &m) in self.modulus[..k].iter().enumerate() {
                let idx = top - k + i;
                prod[idx] = (prod[idx] + (p - c) * m as u64) % p;
            }
        }
        let digits: Vec<u32> = prod[..k].iter().map(|&d| d as u32).collect();
        self.from_digits(&digits)
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::InvalidArgument("zero has no inverse".into()));
        }
        if let Some(t) = &self.tables {
            let n = self.order - 1;
            let l = t.log[a as usize];
            return Ok(t.exp[((n - l) % n) as usize]);
        }
        Ok(self.pow(a, self.order as u64 - 2))
    }

    /// +1 for nonzero squares, -1 for non-squares, 0 for zero, computed as
    /// `a^((p^k - 1)/2)`.
    pub fn quadratic_character(&self, a: u32) -> Result<i8> {
        if self.p == 2 {
            return Err(Error::CharacteristicTwo);
        }
        if a == 0 {
            return Ok(0);
        }
        let r = self.pow(a, (self.order as u64 - 1) / 2);
        Ok(if r == 1 { 1 } else { -1 })
    }

    /// Quadratic character through the log table when available. Odd `p` only.
    #[inline]
    pub(crate) fn chi(&self, a: u32) -> i32 {
        if a == 0 {
            return 0;
        }
        match &self.tables {
            Some(t) => 1 - 2 * (t.log[a as usize] & 1) as i32,
            None => self.quadratic_character(a).map_or(0, i32::from),
        }
    }

    /// `(exp, log)` tables for a fixed primitive element, when built.
    pub(crate) fn log_tables(&self) -> Option<(&[u32], &[u32])> {
        self.tables.as_ref().map(|t| (t.exp.as_slice(), t.log.as_slice()))
    }

    /// Smallest non-square in the canonical element order.
    pub fn first_non_residue(&self) -> Result<u32> {
        for a in 1..self.order {
            if self.quadratic_character(a)? == -1 {
                return Ok(a);
            }
        }
        unreachable!("every odd-order field has non-squares")
    }

    fn build_tables(&self) -> LogTables {
        let n = self.order as u64 - 1;
        let factors = arith::prime_factors(n.max(1));
        let gen = (1..self.order)
            .find(|&g| {
                n == 1 || factors.iter().all(|&l| self.pow_slow(g, n / l) != 1)
            })
            .expect("multiplicative group is cyclic");
        let mut exp = Vec::with_capacity(n as usize);
        let mut log = vec![0u32; self.order as usize];
        let mut x = 1u32;
        for i in 0..n as u32 {
            exp.push(x);
            log[x as usize] = i;
            x = self.mul_slow(x, gen);
        }
        LogTables { exp, log }
    }

    fn pow_slow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    /// Embedding of a subfield `F_{p^j}` (same `p`, `j | k`) into this field,
    /// as a lookup table indexed by the subfield's element encoding.
    pub fn embedding_of(&self, sub: &FiniteField) -> Result<Vec<u32>> {
        if sub.p != self.p || self.k % sub.k != 0 {
            return Err(Error::InvalidArgument(format!(
                "F_{}^{} does not embed in F_{}^{}",
                sub.p, sub.k, self.p, self.k
            )));
        }
        if sub.k == 1 {
            return Ok((0..sub.order).collect());
        }
        // The image of the subfield generator is the first root of its modulus.
        let sub_mod = FqPoly::new(sub.modulus.clone());
        let root = self
            .elements()
            .find(|&x| sub_mod.eval(self, x) == 0)
            .expect("an irreducible of degree j splits in a degree-k extension when j | k");
        let powers: Vec<u32> = (0..sub.k).map(|i| self.pow(root, i as u64)).collect();
        Ok(sub
            .elements()
            .map(|e| {
                sub.digits(e)
                    .iter()
                    .zip(&powers)
                    .fold(0, |acc, (&d, &pw)| self.add(acc, self.mul(d, pw)))
            })
            .collect())
    }
}

/// Lexicographic search for the first monic irreducible of degree `k` over `F_p`.
fn first_irreducible(p: u32, k: u32) -> Vec<u32> {
    let fp = FiniteField {
        p,
        k: 1,
        order: p,
        modulus: vec![0, 1],
        tables: None,
    };
    let total = (p as u64).pow(k);
    for idx in 0..total {
        let mut coeffs = Vec::with_capacity(k as usize + 1);
        let mut rest = idx;
        for _ in 0..k {
            coeffs.push((rest % p as u64) as u32);
            rest /= p as u64;
        }
        coeffs.push(1);
        let f = FqPoly::new(coeffs);
        if is_irreducible(&fp, &f) {
            return f.coeffs;
        }
    }
    unreachable!("irreducible polynomials of every degree exist")
}

/// Ben-Or test: `f` is irreducible iff `gcd(x^{q^i} - x, f) = 1` for `i <= deg f / 2`.
pub fn is_irreducible(fq: &FiniteField, f: &FqPoly) -> bool {
    let Some(d) = f.degree() else {
        return false;
    };
    if d == 0 {
        return false;
    }
    let x = FqPoly::x();
    let mut h = x.clone();
    for _ in 0..d / 2 {
        h = h.powmod(fq, fq.order as u64, f);
        let g = h.sub(fq, &x).gcd(fq, f);
        if g.degree() != Some(0) {
            return false;
        }
    }
    true
}

/// Dense polynomial over a [`FiniteField`], coefficients lowest degree first.
/// The zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqPoly {
    coeffs: Vec<u32>,
}

impl FqPoly {
    pub fn new(mut coeffs: Vec<u32>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self { coeffs: vec![1] }
    }

    pub fn x() -> Self {
        Self { coeffs: vec![0, 1] }
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<u32> {
        self.coeffs.last().copied()
    }

    pub fn eval(&self, fq: &FiniteField, x: u32) -> u32 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| fq.add(fq.mul(acc, x), c))
    }

    pub fn add(&self, fq: &FiniteField, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|i| {
                    fq.add(
                        *self.coeffs.get(i).unwrap_or(&0),
                        *other.coeffs.get(i).unwrap_or(&0),
                    )
                })
                .collect(),
        )
    }

    pub fn sub(&self, fq: &FiniteField, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|i| {
                    fq.sub(
                        *self.coeffs.get(i).unwrap_or(&0),
                        *other.coeffs.get(i).unwrap_or(&0),
                    )
                })
                .collect(),
        )
    }

    pub fn scale(&self, fq: &FiniteField, c: u32) -> Self {
        Self::new(self.coeffs.iter().map(|&a| fq.mul(a, c)).collect())
    }

    pub fn mul(&self, fq: &FiniteField, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = fq.add(out[i + j], fq.mul(a, b));
            }
        }
        Self::new(out)
    }

    pub fn divrem(&self, fq: &FiniteField, divisor: &Self) -> Result<(Self, Self)> {
        let db = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = fq.inv(divisor.coeffs[db])?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= db {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![0u32; rem.len() - db];
        for top in (db..rem.len()).rev() {
            let c = rem[top];
            if c == 0 {
                continue;
            }
            let factor = fq.mul(c, lead_inv);
            quot[top - db] = factor;
            for (i, &d) in divisor.coeffs.iter().enumerate() {
                let idx = top - db + i;
                rem[idx] = fq.sub(rem[idx], fq.mul(factor, d));
            }
        }
        rem.truncate(db);
        Ok((Self::new(quot), Self::new(rem)))
    }

    pub fn rem(&self, fq: &FiniteField, divisor: &Self) -> Result<Self> {
        Ok(self.divrem(fq, divisor)?.1)
    }

    pub fn monic(&self, fq: &FiniteField) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => self.scale(fq, fq.inv(l).expect("leading coefficient is nonzero")),
        }
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, fq: &FiniteField, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(fq, &b).expect("b is nonzero");
            a = b;
            b = r;
        }
        a.monic(fq)
    }

    pub fn derivative(&self, fq: &FiniteField) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| fq.mul(fq.from_int(i as i64), c))
                .collect(),
        )
    }

    /// `self^e mod m`.
    pub fn powmod(&self, fq: &FiniteField, mut e: u64, m: &Self) -> Self {
        let mut base = self.rem(fq, m).expect("modulus is nonzero");
        let mut acc = Self::one().rem(fq, m).expect("modulus is nonzero");
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(fq, &base).rem(fq, m).expect("modulus is nonzero");
            }
            base = base.mul(fq, &base).rem(fq, m).expect("modulus is nonzero");
            e >>= 1;
        }
        acc
    }
}

/// True iff `gcd(f, f')` is constant.
pub fn is_squarefree(fq: &FiniteField, f: &FqPoly) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let g = f.gcd(fq, &f.derivative(fq));
    Ok(g.degree() == Some(0))
}

/// Degrees of the irreducible factors of a squarefree polynomial, ascending,
/// by distinct-degree factorization.
pub fn factor_degree_multiset(fq: &FiniteField, f: &FqPoly) -> Result<Vec<usize>> {
    if !is_squarefree(fq, f)? {
        return Err(Error::NotSquarefree);
    }
    let mut rest = f.monic(fq);
    let mut degrees = Vec::new();
    let x = FqPoly::x();
    let mut h = x.clone();
    let mut d = 1usize;
    while let Some(deg) = rest.degree() {
        if deg == 0 {
            break;
        }
        if deg < 2 * d {
            // Whatever is left is irreducible.
            degrees.push(deg);
            break;
        }
        h = h.powmod(fq, fq.order as u64, &rest);
        let g = h.sub(fq, &x).gcd(fq, &rest);
        if let Some(gd) = g.degree().filter(|&gd| gd > 0) {
            degrees.extend(std::iter::repeat_n(d, gd / d));
            rest = rest.divrem(fq, &g)?.0;
            h = h.rem(fq, &rest)?;
        }
        d += 1;
    }
    degrees.sort_unstable();
    Ok(degrees)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn poly(c: &[u32]) -> FqPoly {
        FqPoly::new(c.to_vec())
    }

    #[test]
    fn extension_moduli() {
        assert_eq!(FiniteField::build_extension(3, 1).unwrap().modulus(), &[0, 1]);
        assert_eq!(FiniteField::build_extension(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(FiniteField::build_extension(5, 2).unwrap().modulus(), &[2, 0, 1]);
        assert!(FiniteField::build_extension(4, 1).is_err());
        assert!(matches!(
            FiniteField::build_extension(3, 20),
            Err(Error::FieldTooLarge { .. })
        ));
    }

    /// All monic polynomials of degree `d` over F_p.
    fn monics(p: u32, d: usize) -> Vec<FqPoly> {
        let total = (p as u64).pow(d as u32);
        (0..total)
            .map(|mut i| {
                let mut c: Vec<u32> = (0..d)
                    .map(|_| {
                        let v = (i % p as u64) as u32;
                        i /= p as u64;
                        v
                    })
                    .collect();
                c.push(1);
                FqPoly::new(c)
            })
            .collect()
    }

    #[test]
    fn moduli_have_no_small_factors() {
        for (p, k) in [(3u64, 2u32), (3, 3), (3, 4), (5, 3), (7, 2), (11, 3), (2, 5)] {
            let field = FiniteField::build_extension(p, k).unwrap();
            let fp = FiniteField::prime(p).unwrap();
            let m = FqPoly::new(field.modulus().to_vec());
            for d in 1..=(k as usize / 2) {
                for cand in monics(p as u32, d) {
                    let r = m.rem(&fp, &cand).unwrap();
                    assert!(!r.is_zero(), "{cand:?} divides modulus of F_{p}^{k}");
                }
            }
        }
    }

    #[test]
    fn field_axioms_small() {
        for (p, k) in [(3u64, 2u32), (5, 2), (3, 3), (7, 1)] {
            let f = FiniteField::build_extension(p, k).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                    assert_eq!(f.mul(a, 1), a);
                }
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), f.mul_slow(a, b));
                }
            }
        }
    }

    #[test]
    fn quadratic_character_examples() {
        let f3 = FiniteField::prime(3).unwrap();
        assert_eq!(f3.quadratic_character(0).unwrap(), 0);
        assert_eq!(f3.quadratic_character(2).unwrap(), -1);
        let f5 = FiniteField::prime(5).unwrap();
        assert_eq!(f5.quadratic_character(4).unwrap(), 1);
        let f2 = FiniteField::prime(2).unwrap();
        assert_eq!(f2.quadratic_character(1), Err(Error::CharacteristicTwo));
    }

    #[test]
    fn quadratic_character_properties() {
        for (p, k) in [(3u64, 1u32), (3, 2), (5, 2), (7, 2), (3, 3), (11, 1)] {
            let f = FiniteField::build_extension(p, k).unwrap();
            let q = f.order();
            let chi = |a| f.quadratic_character(a).unwrap();
            let squares: std::collections::HashSet<u32> =
                f.elements().skip(1).map(|a| f.mul(a, a)).collect();
            let plus = f.elements().skip(1).filter(|&a| chi(a) == 1).count();
            assert_eq!(plus as u32, (q - 1) / 2);
            for a in 1..q {
                assert_eq!(chi(a) == 1, squares.contains(&a));
                assert_eq!(f.chi(a), chi(a) as i32);
                for b in 1..q {
                    assert_eq!(chi(f.mul(a, b)), chi(a) * chi(b));
                }
            }
        }
    }

    #[test]
    fn squarefree_examples() {
        let f3 = FiniteField::prime(3).unwrap();
        // x^3 - x
        assert!(is_squarefree(&f3, &poly(&[0, 2, 0, 1])).unwrap());
        let f5 = FiniteField::prime(5).unwrap();
        assert!(!is_squarefree(&f5, &poly(&[0, 0, 1])).unwrap());
        // (x^2 + 1)(x + 1) = x^3 + x^2 + x + 1
        assert!(is_squarefree(&f3, &poly(&[1, 1, 1, 1])).unwrap());
        assert_eq!(is_squarefree(&f3, &FqPoly::zero()), Err(Error::ZeroPolynomial));
        // x^3 over F_3 has zero derivative
        assert!(!is_squarefree(&f3, &poly(&[0, 0, 0, 1])).unwrap());
    }

    #[test]
    fn factor_degree_examples() {
        let f3 = FiniteField::prime(3).unwrap();
        assert_eq!(factor_degree_multiset(&f3, &poly(&[0, 2, 0, 1])).unwrap(), vec![1, 1, 1]);
        assert_eq!(factor_degree_multiset(&f3, &poly(&[1, 0, 1])).unwrap(), vec![2]);
        // The F_{5^7} modulus is irreducible of degree 7 by construction.
        let f5 = FiniteField::prime(5).unwrap();
        let m = first_irreducible(5, 7);
        assert_eq!(factor_degree_multiset(&f5, &FqPoly::new(m)).unwrap(), vec![7]);
        assert_eq!(
            factor_degree_multiset(&f5, &poly(&[0, 0, 1])),
            Err(Error::NotSquarefree)
        );
    }

    /// Brute-force factorization: trial division by all monic irreducibles of
    /// increasing degree (irreducibility itself decided by trial division).
    /// Inputs are squarefree, so factors are found in ascending degree.
    fn brute_degrees(fp: &FiniteField, f: &FqPoly) -> Vec<usize> {
        let p = fp.characteristic();
        let mut rest = f.monic(fp);
        let mut out = Vec::new();
        let mut irreducibles: Vec<FqPoly> = Vec::new();
        let mut d = 1;
        while rest.degree().unwrap() > 0 {
            if 2 * d > rest.degree().unwrap() {
                // No factor of degree <= deg/2 is left, so the rest is irreducible.
                out.push(rest.degree().unwrap());
                break;
            }
            for cand in monics(p, d) {
                let irreducible = irreducibles
                    .iter()
                    .all(|small| !cand.rem(fp, small).unwrap().is_zero());
                if !irreducible {
                    continue;
                }
                irreducibles.push(cand.clone());
                while rest.degree().unwrap() >= d {
                    let (quot, r) = rest.divrem(fp, &cand).unwrap();
                    if !r.is_zero() {
                        break;
                    }
                    out.push(d);
                    rest = quot;
                }
            }
            d += 1;
        }
        out
    }

    #[test]
    fn ddf_matches_trial_division() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let fields = [FiniteField::prime(3).unwrap(), FiniteField::prime(5).unwrap()];
        let mut checked = 0;
        while checked < 1000 {
            let fp = &fields[checked % 2];
            let deg = rng.gen_range(1..=10);
            let mut c: Vec<u32> = (0..deg)
                .map(|_| rng.gen_range(0..fp.characteristic()))
                .collect();
            c.push(rng.gen_range(1..fp.characteristic()));
            let f = FqPoly::new(c);
            if !is_squarefree(fp, &f).unwrap() {
                continue;
            }
            let got = factor_degree_multiset(fp, &f).unwrap();
            assert_eq!(got.iter().sum::<usize>(), deg);
            assert_eq!(got, brute_degrees(fp, &f), "f = {f:?}");
            checked += 1;
        }
    }

    #[test]
    fn ddf_over_extension_field() {
        // x^2 - θ over F_9 is irreducible iff θ is a non-square.
        let f9 = FiniteField::build_extension(3, 2).unwrap();
        let nr = f9.first_non_residue().unwrap();
        let f = FqPoly::new(vec![f9.neg(nr), 0, 1]);
        assert_eq!(factor_degree_multiset(&f9, &f).unwrap(), vec![2]);
        let s = f9.mul(nr, nr);
        let g = FqPoly::new(vec![f9.neg(s), 0, 1]);
        assert_eq!(factor_degree_multiset(&f9, &g).unwrap(), vec![1, 1]);
    }

    #[test]
    fn embeddings_are_ring_maps() {
        let f9 = FiniteField::build_extension(3, 2).unwrap();
        let f81 = FiniteField::build_extension(3, 4).unwrap();
        let emb = f81.embedding_of(&f9).unwrap();
        for a in f9.elements() {
            for b in f9.elements() {
                assert_eq!(emb[f9.add(a, b) as usize], f81.add(emb[a as usize], emb[b as usize]));
                assert_eq!(emb[f9.mul(a, b) as usize], f81.mul(emb[a as usize], emb[b as usize]));
            }
        }
        let f27 = FiniteField::build_extension(3, 3).unwrap();
        assert!(f27.embedding_of(&f9).is_err());
    }
}
