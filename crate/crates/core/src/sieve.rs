//! Point-count congruence sieves for hyperelliptic Jacobians.
//!
//! For a curve with degree set `{d_i}`, let `W_n = sum of d_i dividing n`. Then
//! `#C(F_{q^n}) ≡ 2(q^n + 1) - W_n (mod 2^{v_2(n) + 1})`; for odd `n` this is
//! the parity law `#C(F_{q^n}) ≡ W_n (mod 2)`. A Weil polynomial (or a whole
//! mod-2 class) is ruled out when no partition of `2g + 2` satisfies every
//! congruence in the check set.

use std::sync::atomic::{AtomicBool, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::admissibility;
use crate::arith;
use crate::error::{Error, Result};
use crate::partition::{self, Partition};
use crate::weil::{Parities, WeilPolyCoeffs};

/// Upper bound on `lifts × q residues` for [`class_ruled_out`].
pub const MAX_LIFT_COMBINATIONS: u64 = 1 << 28;

/// `#W(F_{q^n})`: the sum of the parts dividing `n`.
pub fn w_count(p: &Partition, n: u32) -> u64 {
    p.parts()
        .iter()
        .filter(|&&d| n % d == 0)
        .map(|&d| d as u64)
        .sum()
}

/// Parity of `n · #{i : d_i = n}` from the parities of `N_d`, `d | n`.
/// `counts_mod2[d - 1]` holds `N_d mod 2`.
pub fn mobius_part_parity(counts_mod2: &[bool], n: u32) -> Result<bool> {
    let mut acc = false;
    for d in arith::divisors(n as u64) {
        let parity = *counts_mod2.get(d as usize - 1).ok_or_else(|| {
            Error::InvalidArgument(format!("missing point-count parity for n = {d}"))
        })?;
        if arith::mobius(n as u64 / d) != 0 {
            acc ^= parity;
        }
    }
    Ok(acc)
}

/// `ceil(log2(2g + 2))`.
pub fn default_depth(g: usize) -> u32 {
    let n = 2 * g as u64 + 2;
    64 - (n - 1).leading_zeros()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckSet {
    g: usize,
    max_m: u32,
    include_mixed: bool,
    ns: Vec<u32>,
}

impl CheckSet {
    /// Odd `n <= 2g + 1` and `2^m` for `1 <= m <= ceil(log2(2g + 2))`.
    pub fn new(g: usize) -> Self {
        Self::with_depth(g, default_depth(g), false)
    }

    /// Depth `max_m` for the 2-power part; `include_mixed` adds every
    /// `2^a · m` with `1 <= a <= max_m` and odd `3 <= m <= 2g + 1`.
    pub fn with_depth(g: usize, max_m: u32, include_mixed: bool) -> Self {
        assert!(g >= 1 && max_m >= 1, "check set needs g >= 1 and depth >= 1");
        let top = 2 * g as u32 + 1;
        let mut ns: Vec<u32> = (1..=top).step_by(2).collect();
        for a in 1..=max_m {
            ns.push(1 << a);
            if include_mixed {
                ns.extend((3..=top).step_by(2).map(|m| m << a));
            }
        }
        ns.sort_unstable();
        ns.dedup();
        Self {
            g,
            max_m,
            include_mixed,
            ns,
        }
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn depth(&self) -> u32 {
        self.max_m
    }

    pub fn includes_mixed(&self) -> bool {
        self.include_mixed
    }

    pub fn ns(&self) -> &[u32] {
        &self.ns
    }

    pub fn max_n(&self) -> u32 {
        *self.ns.last().expect("nonempty")
    }

    /// `v_2(n) + 1`; congruences at `n` hold modulo `2^{modulus_bits(n)}`.
    pub fn modulus_bits(n: u32) -> u32 {
        n.trailing_zeros() + 1
    }
}

/// `N_n mod 2` for `n = 1..=n_max` from coefficient parities alone (`q` odd).
pub fn count_parities(parities: &Parities, n_max: usize) -> Vec<bool> {
    let g = parities.genus();
    let c: Vec<bool> = (0..=2 * g)
        .map(|i| match i {
            0 => true,
            i if i <= g => parities.get(i),
            i if i == 2 * g => true,
            i => parities.get(2 * g - i),
        })
        .collect();
    let mut s: Vec<bool> = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut acc = n <= 2 * g && n % 2 == 1 && c[n];
        for i in 1..n.min(2 * g + 1) {
            acc ^= c[i] & s[n - 1 - i];
        }
        s.push(acc);
    }
    // N_n = q^n + 1 - s_n with q^n + 1 even.
    s
}

/// Parity law at every odd `n <= 2g + 1`.
pub fn parity_consistent(parities: &Parities, p: &Partition) -> bool {
    let g = parities.genus();
    let n_par = count_parities(parities, 2 * g + 1);
    (1..=2 * g as u32 + 1)
        .step_by(2)
        .all(|n| n_par[n as usize - 1] == (w_count(p, n) % 2 == 1))
}

fn check_odd_q(w: &WeilPolyCoeffs) -> Result<()> {
    if w.q % 2 == 0 {
        return Err(Error::EvenQ(w.q));
    }
    Ok(())
}

fn residue(v: &BigInt, bits: u32) -> u64 {
    v.mod_floor(&(BigInt::from(1u8) << bits))
        .to_u64()
        .expect("residue fits")
}

fn expected_residue(q: u64, n: u32, w: u64, bits: u32) -> u64 {
    let m = BigInt::from(1u8) << bits;
    let v = (BigInt::from(q).modpow(&BigInt::from(n), &m) + 1u8) * 2u8 - BigInt::from(w);
    residue(&v, bits)
}

/// The congruence at every `n` of the check set.
pub fn two_adic_consistent(w: &WeilPolyCoeffs, p: &Partition, cs: &CheckSet) -> Result<bool> {
    check_odd_q(w)?;
    let counts = w.point_counts(cs.max_n() as usize);
    Ok(cs.ns().iter().all(|&n| {
        let bits = CheckSet::modulus_bits(n);
        residue(counts.get(n as usize), bits) == expected_residue(w.q, n, w_count(p, n), bits)
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Parity,
    TwoAdic,
}

/// The first congruence a partition violates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub partition: Partition,
    pub stage: Stage,
    pub n: u32,
    pub modulus: u64,
    pub count_residue: u64,
    pub expected_residue: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SieveVerdict {
    pub ruled_out: bool,
    pub surviving_partitions: Vec<Partition>,
    pub failure_trace: Vec<Failure>,
}

/// Evaluates every partition of `2g + 2` against `w` with the default check set.
pub fn instance_ruled_out(w: &WeilPolyCoeffs) -> Result<SieveVerdict> {
    instance_ruled_out_with(w, &CheckSet::new(w.g))
}

/// Parity congruences are checked before the higher 2-adic ones, so the trace
/// names the parity stage whenever it already fails.
pub fn instance_ruled_out_with(w: &WeilPolyCoeffs, cs: &CheckSet) -> Result<SieveVerdict> {
    check_odd_q(w)?;
    let counts = w.point_counts(cs.max_n() as usize);
    let order: Vec<u32> = cs
        .ns()
        .iter()
        .filter(|&&n| n % 2 == 1)
        .chain(cs.ns().iter().filter(|&&n| n % 2 == 0))
        .copied()
        .collect();
    let mut surviving = Vec::new();
    let mut trace = Vec::new();
    for p in partition::partitions(2 * w.g as u32 + 2) {
        let failure = order.iter().find_map(|&n| {
            let bits = CheckSet::modulus_bits(n);
            let got = residue(counts.get(n as usize), bits);
            let want = expected_residue(w.q, n, w_count(&p, n), bits);
            (got != want).then(|| Failure {
                partition: p.clone(),
                stage: if n % 2 == 1 { Stage::Parity } else { Stage::TwoAdic },
                n,
                modulus: 1 << bits,
                count_residue: got,
                expected_residue: want,
            })
        });
        match failure {
            Some(f) => trace.push(f),
            None => surviving.push(p),
        }
    }
    Ok(SieveVerdict {
        ruled_out: surviving.is_empty(),
        surviving_partitions: surviving,
        failure_trace: trace,
    })
}

/// True iff no partition of `2g + 2` passes the parity law alone.
pub fn parity_ruled_out(parities: &Parities) -> bool {
    !partition::partitions(2 * parities.genus() as u32 + 2).any(|p| parity_consistent(parities, &p))
}

/// A lifted instance that passes every congruence for some partition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftWitness {
    /// Coefficients `a_1..a_g` modulo `2^{M+1}`.
    pub lift: Vec<u64>,
    /// `q` modulo `2^{M+2}`.
    pub q_residue: u64,
    pub partition: Partition,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassVerdict {
    pub parities: Parities,
    pub depth: u32,
    pub ruled_out: bool,
    pub ruled_out_by_parity: bool,
    pub survivor: Option<LiftWitness>,
}

/// Bitset over partition indices.
type Mask = Vec<u64>;

struct ClassSearch<'a> {
    g: usize,
    lift_bits: u32,
    parities: Parities,
    partitions: &'a [Partition],
    /// Check-set entries `n` with `n <= g`, indexed by `n`.
    early: Vec<Option<usize>>,
    /// Check-set entries, each with its modulus bits.
    checks: Vec<(u32, u32)>,
    max_n: usize,
}

impl ClassSearch<'_> {
    /// Masks of partitions whose expected residue at each check equals `r`,
    /// for one residue of `q`: `table[check][r]`.
    fn residue_table(&self, q: u64) -> Vec<Vec<Mask>> {
        let words = self.partitions.len().div_ceil(64);
        self.checks
            .iter()
            .map(|&(n, bits)| {
                let mut by_residue = vec![vec![0u64; words]; 1 << bits];
                for (i, p) in self.partitions.iter().enumerate() {
                    let r = expected_residue(q, n, w_count(p, n), bits) as usize;
                    by_residue[r][i / 64] |= 1 << (i % 64);
                }
                by_residue
            })
            .collect()
    }

    /// Depth-first over the coefficient lifts for one `q` residue.
    fn search(&self, q: u64, start: &Mask, stop: &AtomicBool) -> Option<LiftWitness> {
        let table = self.residue_table(q);
        let mut c = vec![0u64; 2 * self.g + 1];
        c[0] = 1;
        let mut s = vec![0u64; self.max_n + 1];
        let mut masks = vec![start.clone(); self.g + 1];
        self.descend(1, q, &table, &mut c, &mut s, &mut masks, stop)
    }

    #[allow(clippy::too_many_arguments)]
    fn descend(
        &self,
        k: usize,
        q: u64,
        table: &[Vec<Mask>],
        c: &mut [u64],
        s: &mut [u64],
        masks: &mut [Mask],
        stop: &AtomicBool,
    ) -> Option<LiftWitness> {
        if stop.load(Ordering::Relaxed) {
            return None;
        }
        if k > self.g {
            return self.finish(q, table, c, s, &masks[self.g]);
        }
        let base = self.parities.get(k) as u64;
        for step in 0..1u64 << (self.lift_bits - 1) {
            c[k] = base + 2 * step;
            s[k] = newton_step(c, s, k, 2 * self.g);
            let (before, after) = masks.split_at_mut(k);
            let mask = &mut after[0];
            mask.copy_from_slice(&before[k - 1]);
            if let Some(ci) = self.early[k] {
                let (n, bits) = self.checks[ci];
                let r = count_residue(q, n, s[k], bits);
                and_assign(mask, &table[ci][r as usize]);
                if is_empty(mask) {
                    continue;
                }
            }
            if let Some(found) = self.descend(k + 1, q, table, c, s, masks, stop) {
                return Some(found);
            }
        }
        None
    }

    fn finish(
        &self,
        q: u64,
        table: &[Vec<Mask>],
        c: &mut [u64],
        s: &mut [u64],
        mask: &Mask,
    ) -> Option<LiftWitness> {
        let g = self.g;
        let mut qpow = 1u64;
        for i in g + 1..=2 * g {
            qpow = qpow.wrapping_mul(q);
            c[i] = c[2 * g - i].wrapping_mul(qpow);
        }
        for n in g + 1..=self.max_n {
            s[n] = newton_step(c, s, n, 2 * g);
        }
        let mut mask = mask.clone();
        for (ci, &(n, bits)) in self.checks.iter().enumerate() {
            if (n as usize) <= g {
                continue;
            }
            let r = count_residue(q, n, s[n as usize], bits);
            and_assign(&mut mask, &table[ci][r as usize]);
            if is_empty(&mask) {
                return None;
            }
        }
        let idx = mask
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
            .expect("nonempty mask");
        let lift_mask = (1u64 << self.lift_bits) - 1;
        Some(LiftWitness {
            lift: c[1..=g].iter().map(|&v| v & lift_mask).collect(),
            q_residue: q,
            partition: self.partitions[idx].clone(),
        })
    }
}

/// `s_n` modulo `2^64` from `c` and `s_1..s_{n-1}`.
#[inline]
fn newton_step(c: &[u64], s: &[u64], n: usize, d: usize) -> u64 {
    let mut acc = if n <= d {
        c[n].wrapping_mul(n as u64)
    } else {
        0
    };
    for i in 1..n.min(d + 1) {
        acc = acc.wrapping_add(c[i].wrapping_mul(s[n - i]));
    }
    acc.wrapping_neg()
}

/// `N_n = q^n + 1 - s_n` modulo `2^bits`.
#[inline]
fn count_residue(q: u64, n: u32, s_n: u64, bits: u32) -> u64 {
    let qn = q.wrapping_pow(n);
    qn.wrapping_add(1).wrapping_sub(s_n) & ((1u64 << bits) - 1)
}

fn and_assign(a: &mut [u64], b: &[u64]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x &= y;
    }
}

fn is_empty(a: &[u64]) -> bool {
    a.iter().all(|&w| w == 0)
}

/// Class-level sieve with the default depth.
pub fn class_ruled_out(parities: &Parities) -> Result<ClassVerdict> {
    class_ruled_out_with(parities, &CheckSet::new(parities.genus()))
}

/// Rules out a parity class when every coefficient lift modulo `2^{M+1}`,
/// every odd `q` modulo `2^{M+2}` and every partition fail some congruence.
/// `M` is the highest 2-adic valuation in the check set.
pub fn class_ruled_out_with(parities: &Parities, cs: &CheckSet) -> Result<ClassVerdict> {
    let g = parities.genus();
    if cs.genus() != g {
        return Err(Error::InvalidArgument("check set genus differs from the parity vector".into()));
    }
    let m = cs.ns().iter().map(|&n| n.trailing_zeros()).max().unwrap_or(0);
    let lift_bits = m + 1;
    let q_bits = m + 2;
    let lift_log = (g as u64) * m as u64;
    let q_log = (q_bits - 1) as u64;
    if lift_log + q_log > MAX_LIFT_COMBINATIONS.trailing_zeros() as u64 {
        return Err(Error::GuardExceeded {
            what: "lift combinations",
            detail: format!("2^{} > 2^28 for g = {g}, M = {m}", lift_log + q_log),
        });
    }
    let partitions: Vec<Partition> = partition::partitions(2 * g as u32 + 2).collect();
    let words = partitions.len().div_ceil(64);
    let mut start = vec![0u64; words];
    for (i, p) in partitions.iter().enumerate() {
        if parity_consistent(parities, p) {
            start[i / 64] |= 1 << (i % 64);
        }
    }
    if is_empty(&start) {
        return Ok(ClassVerdict {
            parities: *parities,
            depth: m,
            ruled_out: true,
            ruled_out_by_parity: true,
            survivor: None,
        });
    }
    let checks: Vec<(u32, u32)> = cs
        .ns()
        .iter()
        .filter(|&&n| n % 2 == 0)
        .map(|&n| (n, CheckSet::modulus_bits(n)))
        .collect();
    let mut early = vec![None; g + 1];
    for (ci, &(n, _)) in checks.iter().enumerate() {
        if (n as usize) <= g {
            early[n as usize] = Some(ci);
        }
    }
    let search = ClassSearch {
        g,
        lift_bits,
        parities: *parities,
        partitions: &partitions,
        early,
        checks,
        max_n: (cs.max_n() as usize).max(g),
    };
    let stop = AtomicBool::new(false);
    let qs: Vec<u64> = (1..1u64 << q_bits).step_by(2).collect();
    let survivor = qs
        .par_iter()
        .map(|&q| {
            let found = search.search(q, &start, &stop);
            if found.is_some() {
                stop.store(true, Ordering::Relaxed);
            }
            found
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .next();
    Ok(ClassVerdict {
        parities: *parities,
        depth: m,
        ruled_out: survivor.is_none(),
        ruled_out_by_parity: false,
        survivor,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossValidation {
    pub g: usize,
    pub depth: u32,
    pub inadmissible: Vec<Parities>,
    pub sieve_ruled_out: Vec<Parities>,
    pub symmetric_difference: Vec<Parities>,
}

impl CrossValidation {
    pub fn agrees(&self) -> bool {
        self.symmetric_difference.is_empty()
    }
}

/// Compares the inadmissible parity classes with the sieve's ruled-out classes.
pub fn cross_validate(g: usize) -> Result<CrossValidation> {
    cross_validate_with(&CheckSet::new(g))
}

pub fn cross_validate_with(cs: &CheckSet) -> Result<CrossValidation> {
    let g = cs.genus();
    let inadmissible = admissibility::inadmissible_parities(g)?;
    let verdicts = Parities::all(g)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|p| class_ruled_out_with(p, cs))
        .collect::<Result<Vec<_>>>()?;
    let sieve_ruled_out: Vec<Parities> = verdicts
        .iter()
        .filter(|v| v.ruled_out)
        .map(|v| v.parities)
        .collect();
    let symmetric_difference = Parities::all(g)
        .filter(|p| inadmissible.contains(p) != sieve_ruled_out.contains(p))
        .collect();
    Ok(CrossValidation {
        g,
        depth: cs.ns().iter().map(|n| n.trailing_zeros()).max().unwrap_or(0),
        inadmissible,
        sieve_ruled_out,
        symmetric_difference,
    })
}
