//! Exhaustive enumeration of Weil polynomials for given `(g, q)`.
//!
//! Every Weil polynomial factors as `Z(t) = t^g h(t + q/t)` with a monic real
//! polynomial `h = x^g + b_1 x^{g-1} + ... + b_g` whose roots are real and lie
//! in `[-2√q, 2√q]`. The search fixes `b_1, b_2, ...` in turn. At depth `k` the
//! polynomial
//!
//! ```text
//! D_k(x) = sum_{j <= k} b_j binom(g - j, k - j) x^{k - j}
//! ```
//!
//! is `h^{(g-k)} / (g-k)!`, so it must itself have all roots in the interval.
//! For fixed `b_1..b_{k-1}` the admissible values of `b_k` (the constant term
//! of `D_k`) form an integer interval. It is clipped by the power-sum bound
//! `|p_k| <= g (2√q)^k` on the roots of `h`, estimated from the critical values
//! of `D_k`, and its two edges are then settled with the exact test in
//! [`crate::sturm`].
//!
//! The map between `(b_k)` and `(a_k)` is unitriangular, so walking each `b_k`
//! upwards emits the Weil polynomials in lexicographic order of `(a_1, ..., a_g)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::admissibility;
use crate::arith;
use crate::error::{Error, Result};
use crate::sturm;
use crate::weil::{Parities, WeilPolyCoeffs};

pub const MAX_ENUM_GENUS: usize = 6;
pub const MAX_ENUM_Q: u64 = 64;

/// Monic real Weil polynomial `h(x) = x^g + b_1 x^{g-1} + ... + b_g`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TracePoly {
    pub g: usize,
    pub b: Vec<i64>,
}

impl TracePoly {
    /// Coefficients lowest degree first, including the leading 1.
    pub fn coeffs(&self) -> Vec<BigInt> {
        let mut c: Vec<BigInt> = self.b.iter().rev().map(|&v| BigInt::from(v)).collect();
        c.push(BigInt::one());
        c
    }
}

/// `binom(g - j, l) q^l`, the weight of `b_j` in `a_{j + 2l}`.
fn weight(g: usize, j: usize, l: usize, q: u64) -> BigInt {
    BigInt::from(arith::binomial((g - j) as u64, l as u64)) * BigInt::from(q).pow(l as u32)
}

fn trace_coeffs(w: &WeilPolyCoeffs) -> Vec<BigInt> {
    let g = w.g;
    let mut b: Vec<BigInt> = vec![BigInt::one()];
    for k in 1..=g {
        let mut v = BigInt::from(w.a[k - 1]);
        for j in (k % 2..k).step_by(2) {
            v -= &b[j] * weight(g, j, (k - j) / 2, w.q);
        }
        b.push(v);
    }
    b
}

pub fn to_trace_poly(w: &WeilPolyCoeffs) -> Result<TracePoly> {
    let b = trace_coeffs(w)
        .iter()
        .skip(1)
        .map(|v| {
            v.to_i64().ok_or_else(|| Error::GuardExceeded {
                what: "trace polynomial coefficient",
                detail: v.to_string(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TracePoly { g: w.g, b })
}

pub fn from_trace_poly(h: &TracePoly, q: u64) -> Result<WeilPolyCoeffs> {
    let g = h.g;
    if h.b.len() != g {
        return Err(Error::LengthMismatch {
            expected: g,
            got: h.b.len(),
        });
    }
    let b = |j: usize| if j == 0 { BigInt::one() } else { BigInt::from(h.b[j - 1]) };
    let a = (1..=g)
        .map(|k| {
            let v: BigInt = (k % 2..=k)
                .step_by(2)
                .map(|j| b(j) * weight(g, j, (k - j) / 2, q))
                .sum();
            v.to_i64().ok_or_else(|| Error::GuardExceeded {
                what: "Weil coefficient",
                detail: v.to_string(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    WeilPolyCoeffs::new(g, q, a)
}

/// Every root of `Z` has absolute value `√q`; decided exactly on the trace
/// polynomial.
pub fn is_weil(w: &WeilPolyCoeffs) -> bool {
    let mut h = trace_coeffs(w);
    h.reverse();
    sturm::roots_in_weil_interval(&h, w.q)
}

/// Multiplicity of `t^2 - q` as a factor of `z` (lowest degree first).
pub fn t2_minus_q_multiplicity(z: &[BigInt], q: u64) -> usize {
    let mut z: Vec<BigInt> = z.to_vec();
    while z.last().is_some_and(Zero::is_zero) {
        z.pop();
    }
    if z.is_empty() {
        return usize::MAX;
    }
    let q = BigInt::from(q);
    let mut mult = 0;
    while z.len() >= 3 {
        // Synthetic division by t^2 - q from the top.
        let n = z.len();
        let mut quot = vec![BigInt::zero(); n - 2];
        let mut rem = z.clone();
        for top in (2..n).rev() {
            let c = rem[top].clone();
            rem[top - 2] += &c * &q;
            rem[top] = BigInt::zero();
            quot[top - 2] = c;
        }
        if !(rem[0].is_zero() && rem[1].is_zero()) {
            break;
        }
        z = quot;
        mult += 1;
    }
    mult
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HondaTate {
    Passed,
    Failed,
    /// `q` is not prime and no rule is applied.
    Unfiltered,
}

/// For prime `q`: the factor `t^2 - q` must occur with even multiplicity.
pub fn honda_tate_filter(w: &WeilPolyCoeffs) -> HondaTate {
    if !arith::is_prime(w.q) {
        return HondaTate::Unfiltered;
    }
    if t2_minus_q_multiplicity(w.expand().coeffs(), w.q) % 2 == 0 {
        HondaTate::Passed
    } else {
        HondaTate::Failed
    }
}

fn check_guard(g: usize, q: u64) -> Result<()> {
    if g == 0 || g > MAX_ENUM_GENUS {
        return Err(Error::GuardExceeded {
            what: "enumeration genus",
            detail: format!("g = {g}, supported 1..={MAX_ENUM_GENUS}"),
        });
    }
    if q > MAX_ENUM_Q {
        return Err(Error::GuardExceeded {
            what: "enumeration field size",
            detail: format!("q = {q}, supported up to {MAX_ENUM_Q}"),
        });
    }
    if arith::prime_power(q).is_none() {
        return Err(Error::NotPrimePower(q));
    }
    Ok(())
}

struct Search {
    g: usize,
    q: u64,
    end: f64,
    /// `binom[n][k]` for `n <= g`.
    binom: Vec<Vec<i128>>,
    /// `floor(g (2√q)^k)`.
    power_bound: Vec<i128>,
}

struct Node {
    /// `b[0] = 1`, then `b_1..b_g`.
    b: Vec<i64>,
    /// Power sums `p_1..p_g` of the roots of `h`.
    p: Vec<i128>,
    /// Approximate roots of `D_k`, ascending.
    roots: Vec<Vec<f64>>,
}

impl Search {
    fn new(g: usize, q: u64) -> Self {
        let binom = (0..=g)
            .map(|n| (0..=g).map(|k| arith::binomial(n as u64, k as u64) as i128).collect())
            .collect();
        let power_bound = (0..=g)
            .map(|k| {
                let sq = (g as u128).pow(2) * (4 * q as u128).pow(k as u32);
                arith::isqrt(sq) as i128
            })
            .collect();
        Self {
            g,
            q,
            end: 2.0 * (q as f64).sqrt(),
            binom,
            power_bound,
        }
    }

    fn root_node(&self) -> Node {
        let mut b = vec![0i64; self.g + 1];
        b[0] = 1;
        Node {
            b,
            p: vec![0; self.g + 1],
            roots: vec![Vec::new(); self.g + 1],
        }
    }

    /// `D_k` lowest degree first, with the current `b_k`.
    fn d_coeffs(&self, b: &[i64], k: usize) -> Vec<i128> {
        (0..=k)
            .map(|m| b[k - m] as i128 * self.binom[self.g - k + m][m])
            .collect()
    }

    fn valid(&self, node: &mut Node, k: usize, c: i64) -> bool {
        node.b[k] = c;
        sturm::roots_in_weil_interval_i128(&self.d_coeffs(&node.b, k), self.q)
    }

    /// Range of `b_k` from the power-sum bound on `p_k`.
    fn power_range(&self, node: &Node, k: usize) -> (i128, i128) {
        let s: i128 = (1..k).map(|i| node.b[i] as i128 * node.p[k - i]).sum();
        let upper = self.power_bound[k];
        let lower = if k % 2 == 0 {
            let half = node.p[k / 2];
            Integer::div_ceil(&(half * half), &(self.g as i128))
        } else {
            -upper
        };
        let k = k as i128;
        (
            Integer::div_ceil(&(-upper - s), &k),
            Integer::div_floor(&(-lower - s), &k),
        )
    }

    /// Float estimate of the admissible `b_k` interval from the critical values
    /// of `D_k - b_k` (critical points are the roots of `D_{k-1}`).
    fn critical_range(&self, node: &mut Node, k: usize) -> (f64, f64) {
        node.b[k] = 0;
        let e: Vec<f64> = self.d_coeffs(&node.b, k).iter().map(|&c| c as f64).collect();
        let eval = |x: f64| e.iter().rev().fold(0.0, |acc, &c| acc * x + c);
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for (j, &y) in node.roots[k - 1].iter().enumerate() {
            let v = eval(y);
            if (k - 2 - j) % 2 == 0 {
                hi = hi.min(-v);
            } else {
                lo = lo.max(-v);
            }
        }
        lo = lo.max(-eval(self.end));
        let left = eval(-self.end);
        if k % 2 == 0 {
            lo = lo.max(-left);
        } else {
            hi = hi.min(-left);
        }
        let scale: f64 = e
            .iter()
            .enumerate()
            .map(|(m, c)| c.abs() * self.end.powi(m as i32))
            .sum();
        let margin = 1e-9 * scale + 1e-6;
        (lo - margin, hi + margin)
    }

    /// Exact interval of admissible `b_k`, or `None` when empty.
    fn range(&self, node: &mut Node, k: usize) -> Option<(i64, i64)> {
        let (plo, phi) = self.power_range(node, k);
        let (flo, fhi) = self.critical_range(node, k);
        let clamp = |x: f64| x.clamp(plo as f64 - 1.0, phi as f64 + 1.0) as i128;
        let mut lo = plo.max(clamp(flo.ceil())) as i64;
        let mut hi = phi.min(clamp(fhi.floor())) as i64;
        while lo <= hi && !self.valid(node, k, lo) {
            lo += 1;
        }
        while hi >= lo && !self.valid(node, k, hi) {
            hi -= 1;
        }
        if lo > hi {
            return None;
        }
        while (lo as i128) > plo && self.valid(node, k, lo - 1) {
            lo -= 1;
        }
        while (hi as i128) < phi && self.valid(node, k, hi + 1) {
            hi += 1;
        }
        Some((lo, hi))
    }

    /// Fixes `b_k = c` and records `p_k` and the roots of `D_k`.
    fn descend_into(&self, node: &mut Node, k: usize, c: i64) {
        node.b[k] = c;
        let s: i128 = (1..k).map(|i| node.b[i] as i128 * node.p[k - i]).sum();
        node.p[k] = -(s + k as i128 * c as i128);
        if k == self.g {
            return;
        }
        let d: Vec<f64> = self.d_coeffs(&node.b, k).iter().map(|&v| v as f64).collect();
        let f = |x: f64| d.iter().rev().fold(0.0, |acc, &c| acc * x + c);
        let mut bounds = Vec::with_capacity(k + 1);
        bounds.push(-self.end);
        bounds.extend_from_slice(&node.roots[k - 1]);
        bounds.push(self.end);
        let roots: Vec<f64> = bounds.windows(2).map(|w| monotone_root(&f, w[0], w[1])).collect();
        node.roots[k] = roots;
    }

    fn walk(&self, node: &mut Node, k: usize, emit: &mut dyn FnMut(&[i64])) {
        let Some((lo, hi)) = self.range(node, k) else {
            return;
        };
        for c in lo..=hi {
            self.descend_into(node, k, c);
            if k == self.g {
                emit(&node.b[1..]);
            } else {
                self.walk(node, k + 1, emit);
            }
        }
    }

    fn weil_coeffs(&self, b: &[i64]) -> Vec<i64> {
        let g = self.g;
        let bj = |j: usize| if j == 0 { 1i128 } else { b[j - 1] as i128 };
        (1..=g)
            .map(|k| {
                (k % 2..=k)
                    .step_by(2)
                    .map(|j| {
                        let l = (k - j) / 2;
                        bj(j) * self.binom[g - j][l] * (self.q as i128).pow(l as u32)
                    })
                    .sum::<i128>() as i64
            })
            .collect()
    }
}

/// `D_k` is monotone between consecutive critical points, so a bracket holds
/// exactly one root; it sits on an end when the signs agree.
fn monotone_root(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let (flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return lo;
    }
    if fhi == 0.0 {
        return hi;
    }
    if flo.signum() == fhi.signum() {
        return if flo.abs() < fhi.abs() { lo } else { hi };
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == flo.signum() {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Visits every Weil polynomial, split over the values of `b_1` in parallel;
/// the per-branch outputs are concatenated in order.
fn run<T: Send>(
    g: usize,
    q: u64,
    per_leaf: impl Fn(&Search, &[i64]) -> Option<T> + Sync,
) -> Result<Vec<T>> {
    check_guard(g, q)?;
    let search = Search::new(g, q);
    let mut root = search.root_node();
    let Some((lo, hi)) = search.range(&mut root, 1) else {
        return Ok(Vec::new());
    };
    let branches: Vec<Vec<T>> = (lo..=hi)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&b1| {
            let mut node = search.root_node();
            let mut out = Vec::new();
            search.descend_into(&mut node, 1, b1);
            let mut emit = |b: &[i64]| out.extend(per_leaf(&search, b));
            if g == 1 {
                emit(&node.b[1..]);
            } else {
                search.walk(&mut node, 2, &mut emit);
            }
            out
        })
        .collect();
    Ok(branches.into_iter().flatten().collect())
}

/// Every Weil polynomial for `(g, q)`, once each, lexicographic in `a`.
pub fn enumerate(g: usize, q: u64) -> Result<Vec<WeilPolyCoeffs>> {
    run(g, q, |s, b| Some(WeilPolyCoeffs { g, q, a: s.weil_coeffs(b) }))
}

/// Trace polynomials of every Weil polynomial, in the same order as [`enumerate`].
pub fn enumerate_trace(g: usize, q: u64) -> Result<Vec<TracePoly>> {
    run(g, q, |_, b| Some(TracePoly { g, b: b.to_vec() }))
}

/// Enumeration with the Honda–Tate rule applied for prime `q` (a no-op for
/// other `q`, whose output is unfiltered).
pub fn enumerate_isogeny_classes(g: usize, q: u64) -> Result<Vec<WeilPolyCoeffs>> {
    run(g, q, |s, b| {
        let w = WeilPolyCoeffs { g, q, a: s.weil_coeffs(b) };
        (honda_tate_filter(&w) != HondaTate::Failed).then_some(w)
    })
}

pub fn count_isogeny_classes(g: usize, q: u64) -> Result<u64> {
    Ok(enumerate_isogeny_classes(g, q)?.len() as u64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassCount {
    pub parities: Parities,
    pub admissible: bool,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnumReport {
    pub g: usize,
    pub q: u64,
    pub honda_tate: bool,
    pub total: u64,
    pub admissible: u64,
    pub inadmissible: u64,
    /// Every parity class with its number of isogeny classes.
    pub histogram: Vec<ClassCount>,
}

impl EnumReport {
    pub fn inadmissible_percent(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            100.0 * self.inadmissible as f64 / self.total as f64
        }
    }
}

/// Admissible/inadmissible split of the isogeny classes over odd `q`.
pub fn proportion_report(g: usize, q: u64) -> Result<EnumReport> {
    if q % 2 == 0 {
        return Err(Error::EvenQ(q));
    }
    let classes = enumerate_isogeny_classes(g, q)?;
    let set = admissibility::admissible_set(g)?;
    let mut counts: BTreeMap<Vec<u8>, u64> = BTreeMap::new();
    for w in &classes {
        *counts.entry(w.reduce_mod2()?.to_vec()).or_insert(0) += 1;
    }
    let histogram: Vec<ClassCount> = counts
        .into_iter()
        .map(|(bits, count)| {
            let parities = Parities::from_slice(&bits).expect("valid parity vector");
            ClassCount {
                parities,
                admissible: set.classify(&parities).is_some(),
                count,
            }
        })
        .collect();
    let admissible = histogram.iter().filter(|c| c.admissible).map(|c| c.count).sum();
    let total = classes.len() as u64;
    Ok(EnumReport {
        g,
        q,
        honda_tate: arith::is_prime(q),
        total,
        admissible,
        inadmissible: total - admissible,
        histogram,
    })
}
