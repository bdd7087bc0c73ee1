//! Weil polynomials of `g`-dimensional abelian varieties over `F_q`.
//!
//! An isogeny class is stored by its middle coefficients `a_1..a_g`; the rest
//! of the degree-`2g` polynomial follows from the functional equation
//!
//! ```text
//! Z(t) = t^{2g} + a_1 t^{2g-1} + ... + a_g t^g + a_{g-1} q t^{g-1} + ... + a_1 q^{g-1} t + q^g.
//! ```

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith;
use crate::error::{Error, Result};
use crate::f2poly::F2Poly;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeilPolyCoeffs {
    pub g: usize,
    pub q: u64,
    pub a: Vec<i64>,
}

impl WeilPolyCoeffs {
    pub fn new(g: usize, q: u64, a: Vec<i64>) -> Result<Self> {
        if g == 0 {
            return Err(Error::InvalidArgument("genus must be >= 1".into()));
        }
        if arith::prime_power(q).is_none() {
            return Err(Error::NotPrimePower(q));
        }
        if a.len() != g {
            return Err(Error::LengthMismatch {
                expected: g,
                got: a.len(),
            });
        }
        Ok(Self { g, q, a })
    }

    /// `c_i`, the coefficient of `t^{2g-i}`, for `0 <= i <= 2g`.
    pub fn char_coeff(&self, i: usize) -> BigInt {
        match i {
            0 => BigInt::one(),
            i if i <= self.g => BigInt::from(self.a[i - 1]),
            i => {
                let j = 2 * self.g - i;
                let a_j = if j == 0 {
                    BigInt::one()
                } else {
                    BigInt::from(self.a[j - 1])
                };
                a_j * BigInt::from(self.q).pow((i - self.g) as u32)
            }
        }
    }

    pub fn expand(&self) -> FullPoly {
        let d = 2 * self.g;
        FullPoly {
            coeffs: (0..=d).map(|k| self.char_coeff(d - k)).collect(),
        }
    }

    /// `N_n = q^n + 1 - s_n` for `n = 1..=n_max`, the power sums `s_n` of the
    /// roots coming from Newton's identities.
    pub fn point_counts(&self, n_max: usize) -> PointCounts {
        let c: Vec<BigInt> = (0..=2 * self.g).map(|i| self.char_coeff(i)).collect();
        let s = power_sums(&c, n_max);
        let q = BigInt::from(self.q);
        let counts = s
            .iter()
            .enumerate()
            .map(|(i, s_n)| q.pow(i as u32 + 1) + 1 - s_n)
            .collect();
        PointCounts { q: self.q, counts }
    }

    /// Point counts up to the default depth `2g + 2`.
    pub fn default_point_counts(&self) -> PointCounts {
        self.point_counts(2 * self.g + 2)
    }

    /// The unique class whose first `g` point counts are `counts`.
    pub fn from_point_counts(q: u64, g: usize, counts: &[BigInt]) -> Result<Self> {
        if counts.len() != g {
            return Err(Error::LengthMismatch {
                expected: g,
                got: counts.len(),
            });
        }
        let qb = BigInt::from(q);
        let s: Vec<BigInt> = counts
            .iter()
            .enumerate()
            .map(|(i, n)| qb.pow(i as u32 + 1) + 1 - n)
            .collect();
        let mut c = vec![BigInt::one()];
        for n in 1..=g {
            let mut acc = s[n - 1].clone();
            for i in 1..n {
                acc += &c[i] * &s[n - 1 - i];
            }
            let (quot, rem) = (-acc).div_rem(&BigInt::from(n));
            if !rem.is_zero() {
                return Err(Error::NonIntegralCounts(n));
            }
            c.push(quot);
        }
        let a = c[1..]
            .iter()
            .map(|v| {
                v.to_i64().ok_or_else(|| Error::GuardExceeded {
                    what: "Weil coefficient",
                    detail: v.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(g, q, a)
    }

    pub fn label(&self) -> IsogenyLabel {
        let tokens: Vec<String> = self.a.iter().map(|&v| encode_token(v)).collect();
        IsogenyLabel(format!("{}.{}.{}", self.g, self.q, tokens.join("_")))
    }

    pub fn from_label(label: &str) -> Result<Self> {
        let bad = |reason: &str| Error::MalformedLabel {
            label: label.to_string(),
            reason: reason.to_string(),
        };
        let mut fields = label.splitn(3, '.');
        let (Some(g), Some(q), Some(body)) = (fields.next(), fields.next(), fields.next()) else {
            return Err(bad("expected g.q.coefficients"));
        };
        let g: usize = parse_decimal(g).ok_or_else(|| bad("genus is not a decimal integer"))?;
        let q: u64 = parse_decimal(q).ok_or_else(|| bad("q is not a decimal integer"))?;
        let a = body
            .split('_')
            .map(|tok| decode_token(tok).map_err(|r| bad(&r)))
            .collect::<Result<Vec<_>>>()?;
        if a.len() != g {
            return Err(bad(&format!("{} coefficients for genus {g}", a.len())));
        }
        Self::new(g, q, a).map_err(|e| bad(&e.to_string()))
    }

    /// Coefficient parities; they determine `Z mod 2` when `q` is odd.
    pub fn reduce_mod2(&self) -> Result<Parities> {
        if self.q % 2 == 0 {
            return Err(Error::EvenQ(self.q));
        }
        Ok(Parities::from_fn(self.g, |i| self.a[i].rem_euclid(2) == 1))
    }
}

impl fmt::Display for WeilPolyCoeffs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

fn parse_decimal<T: FromStr>(s: &str) -> Option<T> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Power sums `s_1..s_{n_max}` of the roots of the monic polynomial whose
/// coefficient of `t^{d-i}` is `c[i]` (`d = c.len() - 1`).
pub fn power_sums(c: &[BigInt], n_max: usize) -> Vec<BigInt> {
    let d = c.len() - 1;
    let mut s: Vec<BigInt> = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut acc = if n <= d {
            &c[n] * BigInt::from(n)
        } else {
            BigInt::zero()
        };
        for i in 1..n.min(d + 1) {
            acc += &c[i] * &s[n - 1 - i];
        }
        s.push(-acc);
    }
    s
}

fn encode_token(v: i64) -> String {
    if v < 0 {
        return format!("a{}", encode_magnitude(v.unsigned_abs()));
    }
    encode_magnitude(v as u64)
}

fn encode_magnitude(mut m: u64) -> String {
    let mut digits = Vec::new();
    loop {
        digits.push(b'a' + (m % 26) as u8);
        m /= 26;
        if m == 0 {
            break;
        }
    }
    digits.reverse();
    String::from_utf8(digits).expect("ascii")
}

fn decode_token(tok: &str) -> std::result::Result<i64, String> {
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_lowercase()) {
        return Err(format!("token {tok:?} is not in [a-z]+"));
    }
    let (negative, digits) = match tok.strip_prefix('a') {
        Some(rest) if !rest.is_empty() => (true, rest),
        _ => (false, tok),
    };
    let mut m: i64 = 0;
    for b in digits.bytes() {
        m = m
            .checked_mul(26)
            .and_then(|x| x.checked_add((b - b'a') as i64))
            .ok_or_else(|| format!("token {tok:?} overflows"))?;
    }
    let v = if negative { -m } else { m };
    if encode_token(v) != tok {
        return Err(format!("token {tok:?} is not in canonical form"));
    }
    Ok(v)
}

/// Text label `g.q.c_1_..._c_g`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IsogenyLabel(String);

impl IsogenyLabel {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn decode(&self) -> Result<WeilPolyCoeffs> {
        WeilPolyCoeffs::from_label(&self.0)
    }
}

impl fmt::Display for IsogenyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for IsogenyLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        WeilPolyCoeffs::from_label(s)?;
        Ok(Self(s.to_string()))
    }
}

/// All `2g + 1` coefficients of a Weil polynomial, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullPoly {
    coeffs: Vec<BigInt>,
}

impl FullPoly {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn mod2(&self) -> F2Poly {
        let exps: Vec<usize> = (0..self.coeffs.len())
            .filter(|&i| self.coeffs[i].is_odd())
            .collect();
        F2Poly::from_exponents(&exps)
    }
}

impl fmt::Display for FullPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let m = c.abs();
            if !m.is_one() || k == 0 {
                write!(f, "{m}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `#C(F_{q^n})` for `n = 1..`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointCounts {
    pub q: u64,
    pub counts: Vec<BigInt>,
}

impl PointCounts {
    /// `N_n`, with `n` starting at 1.
    pub fn get(&self, n: usize) -> &BigInt {
        &self.counts[n - 1]
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// `s_n = q^n + 1 - N_n`.
    pub fn power_sums(&self) -> Vec<BigInt> {
        let q = BigInt::from(self.q);
        self.counts
            .iter()
            .enumerate()
            .map(|(i, n)| q.pow(i as u32 + 1) + 1 - n)
            .collect()
    }
}

/// Coefficient parities `(a_1, ..., a_g) mod 2`, bit `i` holding `a_{i+1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Parities {
    g: usize,
    bits: u64,
}

impl Parities {
    pub const MAX_GENUS: usize = 64;

    pub fn new(g: usize, bits: u64) -> Self {
        assert!((1..=Self::MAX_GENUS).contains(&g), "genus out of range");
        let mask = if g == 64 { u64::MAX } else { (1 << g) - 1 };
        Self { g, bits: bits & mask }
    }

    pub fn from_fn(g: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        Self::new(g, (0..g).fold(0, |acc, i| acc | (f(i) as u64) << i))
    }

    pub fn from_slice(bits: &[u8]) -> Result<Self> {
        if bits.is_empty() || bits.len() > Self::MAX_GENUS {
            return Err(Error::InvalidArgument(format!(
                "parity vector length {} out of range",
                bits.len()
            )));
        }
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidArgument(format!("parity entry {b} is not 0 or 1")));
        }
        Ok(Self::from_fn(bits.len(), |i| bits[i] == 1))
    }

    /// Every parity vector of length `g`, in increasing bit order.
    pub fn all(g: usize) -> impl Iterator<Item = Parities> {
        assert!(g < 64, "cannot list all parity vectors for genus {g}");
        (0..1u64 << g).map(move |b| Self::new(g, b))
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// `a_i mod 2` for `1 <= i <= g`.
    pub fn get(&self, i: usize) -> bool {
        assert!((1..=self.g).contains(&i));
        (self.bits >> (i - 1)) & 1 == 1
    }

    pub fn to_vec(&self) -> Vec<u8> {
        (1..=self.g).map(|i| self.get(i) as u8).collect()
    }

    /// `Z(t) mod 2` for odd `q`: coefficient `a_i` at both `t^{2g-i}` and `t^i`.
    pub fn to_f2poly(&self) -> F2Poly {
        let g = self.g;
        let mut exps = vec![0, 2 * g];
        for i in 1..=g {
            if self.get(i) {
                exps.push(2 * g - i);
                if i < g {
                    exps.push(i);
                }
            }
        }
        F2Poly::from_exponents(&exps)
    }

    /// Inverse of [`Parities::to_f2poly`] for self-reciprocal degree-`2g` input.
    pub fn from_f2poly(g: usize, f: &F2Poly) -> Self {
        Self::from_fn(g, |i| f.coeff(2 * g - i - 1))
    }
}

impl fmt::Display for Parities {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.to_vec().iter().map(|b| b.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl fmt::Debug for Parities {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Parities{self}")
    }
}

impl Serialize for Parities {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_vec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Parities {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let bits = Vec::<u8>::deserialize(d)?;
        Parities::from_slice(&bits).map_err(serde::de::Error::custom)
    }
}
