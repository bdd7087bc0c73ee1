//! Exact test that an integer polynomial has all of its roots real and inside
//! `[-2√q, 2√q]`.
//!
//! Roots sitting exactly on the endpoints are divided out first (the factor
//! `x^2 - 4q`, or `x ∓ 2√q` when `q` is a square). The remaining polynomial is
//! then checked with a Sturm sequence: its distinct real roots in the open
//! interval must account for all of its distinct roots. Signs at the
//! irrational endpoints are computed exactly in `Z[√q]`.
//!
//! The arithmetic runs in `i128` with overflow checks and falls back to
//! `BigInt` when an intermediate value does not fit.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, Signed, ToPrimitive};

use crate::arith;

pub trait ExactInt:
    Clone + Integer + Signed + CheckedAdd + CheckedSub + CheckedMul + From<i64>
{
}

impl<T> ExactInt for T where
    T: Clone + Integer + Signed + CheckedAdd + CheckedSub + CheckedMul + From<i64>
{
}

fn mul<T: ExactInt>(a: &T, b: &T) -> Option<T> {
    a.checked_mul(b)
}

fn add<T: ExactInt>(a: &T, b: &T) -> Option<T> {
    a.checked_add(b)
}

fn sub<T: ExactInt>(a: &T, b: &T) -> Option<T> {
    a.checked_sub(b)
}

fn trim<T: ExactInt>(p: &mut Vec<T>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Remainder after dividing by a monic polynomial, with the quotient.
fn divrem_monic<T: ExactInt>(p: &[T], m: &[T]) -> Option<(Vec<T>, Vec<T>)> {
    let dm = m.len() - 1;
    if p.len() <= dm {
        return Some((Vec::new(), p.to_vec()));
    }
    let mut rem = p.to_vec();
    let mut quot = vec![T::zero(); p.len() - dm];
    for top in (dm..rem.len()).rev() {
        let c = rem[top].clone();
        if c.is_zero() {
            continue;
        }
        for (i, mi) in m.iter().enumerate() {
            let idx = top - dm + i;
            rem[idx] = sub(&rem[idx], &mul(&c, mi)?)?;
        }
        quot[top - dm] = c;
    }
    rem.truncate(dm);
    trim(&mut rem);
    Some((quot, rem))
}

/// Divides out every factor vanishing at `±2√q`.
fn strip_endpoint_roots<T: ExactInt>(p: &[T], q: u64) -> Option<Vec<T>> {
    let factors: Vec<Vec<T>> = match arith::isqrt(q as u128) {
        r if r * r == q as u128 => {
            let two_r = T::from(2 * r as i64);
            vec![vec![-two_r.clone(), T::one()], vec![two_r, T::one()]]
        }
        _ => vec![vec![T::from(-4 * q as i64), T::zero(), T::one()]],
    };
    let mut p = p.to_vec();
    for f in &factors {
        loop {
            let (quot, rem) = divrem_monic(&p, f)?;
            if !rem.is_empty() || quot.is_empty() {
                break;
            }
            p = quot;
        }
    }
    Some(p)
}

fn content<T: ExactInt>(p: &[T]) -> T {
    p.iter().fold(T::zero(), |g, c| g.gcd(c))
}

/// `r ↦ |lc b| · r - sgn(lc b) · lc r · x^k · b` until `deg r < deg b`; the
/// result is a positive multiple of `a` modulo `b`.
fn signed_prem<T: ExactInt>(a: &[T], b: &[T]) -> Option<Vec<T>> {
    let db = b.len() - 1;
    let lb = b[db].clone();
    let (scale, sign) = (lb.abs(), lb.signum());
    let mut r = a.to_vec();
    trim(&mut r);
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let lr = mul(r.last().expect("nonempty"), &sign)?;
        for c in r.iter_mut() {
            *c = mul(c, &scale)?;
        }
        for (i, bi) in b.iter().enumerate() {
            r[k + i] = sub(&r[k + i], &mul(&lr, bi)?)?;
        }
        trim(&mut r);
        let g = content(&r);
        if !g.is_zero() && !g.is_one() {
            for c in r.iter_mut() {
                *c = c.div_floor(&g);
            }
        }
    }
    Some(r)
}

fn derivative<T: ExactInt>(p: &[T]) -> Option<Vec<T>> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| mul(c, &T::from(i as i64)))
        .collect()
}

/// Sign of `p(s · 2√q)`, `s = ±1`.
fn sign_at_endpoint<T: ExactInt>(p: &[T], q: u64, s: i64) -> Option<Ordering> {
    let r = arith::isqrt(q as u128);
    if r * r == q as u128 {
        let x = T::from(2 * s * r as i64);
        let mut v = T::zero();
        for c in p.iter().rev() {
            v = add(&mul(&v, &x)?, c)?;
        }
        return Some(v.cmp(&T::zero()));
    }
    // v = A + B√q; v·(2s√q) = 2sqB + 2sA√q.
    let two_s = T::from(2 * s);
    let two_sq = T::from(2 * s * q as i64);
    let (mut a, mut b) = (T::zero(), T::zero());
    for c in p.iter().rev() {
        let na = add(&mul(&b, &two_sq)?, c)?;
        let nb = mul(&a, &two_s)?;
        a = na;
        b = nb;
    }
    let (sa, sb) = (a.signum(), b.signum());
    if !sa.is_negative() && !sb.is_negative() {
        return Some(if sa.is_zero() && sb.is_zero() { Ordering::Equal } else { Ordering::Greater });
    }
    if !sa.is_positive() && !sb.is_positive() {
        return Some(Ordering::Less);
    }
    let a2 = mul(&a, &a)?;
    let qb2 = mul(&mul(&b, &b)?, &T::from(q as i64))?;
    Some(if sa.is_positive() { a2.cmp(&qb2) } else { qb2.cmp(&a2) })
}

fn sign_variations(signs: &[Ordering]) -> usize {
    let nonzero: Vec<&Ordering> = signs.iter().filter(|s| **s != Ordering::Equal).collect();
    nonzero.windows(2).filter(|w| w[0] != w[1]).count()
}

fn check<T: ExactInt>(p: &[T], q: u64) -> Option<bool> {
    let mut p = p.to_vec();
    trim(&mut p);
    assert!(!p.is_empty(), "zero polynomial has no well-defined root set");
    if p.last().expect("nonempty").is_negative() {
        p = p.iter().map(|c| -c.clone()).collect();
    }
    let p = strip_endpoint_roots(&p, q)?;
    let deg = p.len() - 1;
    if deg == 0 {
        return Some(true);
    }
    let mut seq = vec![p.clone(), derivative(&p)?];
    loop {
        let n = seq.len();
        let r = signed_prem(&seq[n - 2], &seq[n - 1])?;
        if r.is_empty() {
            break;
        }
        let g = content(&r);
        seq.push(r.iter().map(|c| -(c.div_floor(&g))).collect());
    }
    let gcd_degree = seq.last().expect("nonempty").len() - 1;
    let distinct = deg - gcd_degree;
    let left: Vec<Ordering> = seq
        .iter()
        .map(|f| sign_at_endpoint(f, q, -1))
        .collect::<Option<_>>()?;
    let right: Vec<Ordering> = seq
        .iter()
        .map(|f| sign_at_endpoint(f, q, 1))
        .collect::<Option<_>>()?;
    let in_interval = sign_variations(&left).checked_sub(sign_variations(&right))?;
    Some(in_interval == distinct)
}

/// True iff every complex root of `p` (coefficients lowest degree first) is
/// real and lies in `[-2√q, 2√q]`. The constant polynomial passes trivially.
pub fn roots_in_weil_interval(p: &[BigInt], q: u64) -> bool {
    let small: Option<Vec<i128>> = p.iter().map(|c| c.to_i128()).collect();
    if let Some(result) = small.and_then(|s| check(&s, q)) {
        return result;
    }
    check(p, q).expect("BigInt arithmetic cannot overflow")
}

/// Same as [`roots_in_weil_interval`] for machine-sized coefficients.
pub fn roots_in_weil_interval_i128(p: &[i128], q: u64) -> bool {
    match check(p, q) {
        Some(result) => result,
        None => {
            let big: Vec<BigInt> = p.iter().map(|&c| BigInt::from(c)).collect();
            check(&big, q).expect("BigInt arithmetic cannot overflow")
        }
    }
}
