//! Censuses of hyperelliptic curves `y^2 = f(x)` over small odd-characteristic
//! fields, with direct point counts and a per-record audit of the mod-2 and
//! 2-adic laws.
//!
//! Curves are enumerated by equation: `f = c·f_0` with `f_0` monic squarefree of
//! degree `2g + 1` or `2g + 2` and `c` either 1 or the smallest non-square.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::admissibility::{self, AdmissibleSet};
use crate::arith;
use crate::error::{Error, Result};
use crate::field::{self, FiniteField, FqPoly};
use crate::partition::Partition;
use crate::sieve::{self, SieveVerdict};
use crate::weil::{IsogenyLabel, Parities, WeilPolyCoeffs};

/// Exhaustive censuses require `q^{2g+2}` at most this.
pub const EXHAUSTIVE_LIMIT: u128 = 1_000_000_000;

/// Point counts beyond `n = g` are taken only while `q^n` stays below this.
const DEEP_COUNT_LIMIT: u64 = 1 << 20;

const DEEP_COUNT_MAX_N: usize = 4;

const BLOCK: u64 = 2048;

/// `y^2 = f(x)` with `f` squarefree of degree `2g + 1` or `2g + 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperellipticCurve {
    g: usize,
    f: FqPoly,
}

impl HyperellipticCurve {
    pub fn new(fq: &FiniteField, f: FqPoly) -> Result<Self> {
        if fq.characteristic() == 2 {
            return Err(Error::CharacteristicTwo);
        }
        let deg = f.degree().ok_or(Error::ZeroPolynomial)?;
        if deg < 3 {
            return Err(Error::InvalidArgument(format!(
                "a hyperelliptic model needs degree at least 3, got {deg}"
            )));
        }
        if !field::is_squarefree(fq, &f)? {
            return Err(Error::NotSquarefree);
        }
        Ok(Self { g: (deg - 1) / 2, f })
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn f(&self) -> &FqPoly {
        &self.f
    }

    fn ramified_at_infinity(&self) -> bool {
        self.f.degree() == Some(2 * self.g + 1)
    }

    /// Irreducible factor degrees of `f`, plus a part 1 for the odd-degree model.
    pub fn degree_set(&self, fq: &FiniteField) -> Result<Partition> {
        let mut parts: Vec<u32> = field::factor_degree_multiset(fq, &self.f)?
            .into_iter()
            .map(|d| d as u32)
            .collect();
        if self.ramified_at_infinity() {
            parts.push(1);
        }
        Partition::new(parts)
    }
}

struct Extension {
    field: FiniteField,
    /// Base-field encoding to extension encoding.
    embed: Vec<u32>,
    /// One element per `q`-Frobenius orbit, with the orbit size.
    orbits: Vec<(u32, u32)>,
    logs: Option<ZechTables>,
}

const LOG_ZERO: u32 = u32::MAX;

/// Arithmetic on discrete logarithms: `zech[i] = log(1 + γ^i)`.
struct ZechTables {
    modulus: u32,
    zech: Vec<u32>,
    /// Base-field encoding to logarithm in the extension.
    embed: Vec<u32>,
    /// Logarithms of the nonzero orbit representatives, with orbit sizes.
    orbits: Vec<(u32, u32)>,
}

impl ZechTables {
    fn new(k: &FiniteField, embed: &[u32], orbits: &[(u32, u32)]) -> Option<Self> {
        let (exp, log) = k.log_tables()?;
        let to_log = |a: u32| if a == 0 { LOG_ZERO } else { log[a as usize] };
        Some(Self {
            modulus: exp.len() as u32,
            zech: exp.iter().map(|&e| to_log(k.add(e, 1))).collect(),
            embed: embed.iter().map(|&a| to_log(a)).collect(),
            orbits: orbits
                .iter()
                .filter(|&&(x, _)| x != 0)
                .map(|&(x, size)| (log[x as usize], size))
                .collect(),
        })
    }

    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        if a == LOG_ZERO {
            return b;
        }
        if b == LOG_ZERO {
            return a;
        }
        let d = if b >= a { b - a } else { b + self.modulus - a };
        match self.zech[d as usize] {
            LOG_ZERO => LOG_ZERO,
            z => self.reduce(a + z),
        }
    }

    #[inline]
    fn reduce(&self, v: u32) -> u32 {
        if v >= self.modulus {
            v - self.modulus
        } else {
            v
        }
    }

    #[inline]
    fn chi(v: u32) -> i64 {
        match v {
            LOG_ZERO => 0,
            v => 1 - 2 * (v & 1) as i64,
        }
    }

    fn character_sum(&self, coeffs: &[u32]) -> i64 {
        let logs: Vec<u32> = coeffs.iter().map(|&c| self.embed[c as usize]).collect();
        let at_zero = Self::chi(logs[0]);
        at_zero
            + self
                .orbits
                .iter()
                .map(|&(x, size)| {
                    let v = logs.iter().rev().fold(LOG_ZERO, |acc, &c| {
                        let prod = if acc == LOG_ZERO { LOG_ZERO } else { self.reduce(acc + x) };
                        self.add(prod, c)
                    });
                    Self::chi(v) * size as i64
                })
                .sum::<i64>()
    }
}

/// Direct point counting over `F_{q^n}` for `n = 1..=n_max`.
pub struct PointCounter {
    q: u64,
    exts: Vec<Extension>,
}

impl PointCounter {
    pub fn new(fq: &FiniteField, n_max: usize) -> Result<Self> {
        if fq.characteristic() == 2 {
            return Err(Error::CharacteristicTwo);
        }
        let q = fq.order() as u64;
        let exts = (1..=n_max)
            .map(|n| {
                let field = FiniteField::build_extension(
                    fq.characteristic() as u64,
                    fq.degree() * n as u32,
                )?;
                let embed = field.embedding_of(fq)?;
                let orbits = frobenius_orbits(&field, q);
                let logs = ZechTables::new(&field, &embed, &orbits);
                Ok(Extension { field, embed, orbits, logs })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { q, exts })
    }

    pub fn max_n(&self) -> usize {
        self.exts.len()
    }

    fn extension(&self, n: usize) -> Result<&Extension> {
        if n == 0 {
            return Err(Error::InvalidArgument("extension degree must be >= 1".into()));
        }
        self.exts.get(n - 1).ok_or_else(|| Error::GuardExceeded {
            what: "point-count extension degree",
            detail: format!("n = {n}, counter built for n <= {}", self.exts.len()),
        })
    }

    /// `sum_{x in F_{q^n}} χ(f(x))`, one evaluation per Frobenius orbit.
    fn character_sum(&self, f: &FqPoly, n: usize) -> Result<i64> {
        let ext = self.extension(n)?;
        if let Some(z) = &ext.logs {
            return Ok(z.character_sum(f.coeffs()));
        }
        let k = &ext.field;
        let coeffs: Vec<u32> = f.coeffs().iter().map(|&c| ext.embed[c as usize]).collect();
        Ok(ext
            .orbits
            .iter()
            .map(|&(x, size)| {
                let v = coeffs.iter().rev().fold(0, |acc, &c| k.add(k.mul(acc, x), c));
                k.chi(v) as i64 * size as i64
            })
            .sum())
    }

    fn chi(&self, c: u32, n: usize) -> Result<i64> {
        let ext = self.extension(n)?;
        Ok(ext.field.chi(ext.embed[c as usize]) as i64)
    }

    fn assemble(&self, curve: &HyperellipticCurve, n: usize, sum: i64) -> Result<u64> {
        let affine = self.q.pow(n as u32) as i64 + sum;
        let infinity = if curve.ramified_at_infinity() {
            1
        } else {
            let lead = curve.f.leading().expect("nonzero");
            1 + self.chi(lead, n)?
        };
        Ok((affine + infinity) as u64)
    }

    /// `#C(F_{q^n})` on the smooth model.
    pub fn count_points(&self, curve: &HyperellipticCurve, n: usize) -> Result<u64> {
        let sum = self.character_sum(&curve.f, n)?;
        self.assemble(curve, n, sum)
    }
}

fn frobenius_orbits(k: &FiniteField, q: u64) -> Vec<(u32, u32)> {
    let mut seen = vec![false; k.order() as usize];
    let mut orbits = Vec::new();
    for x in k.elements() {
        if seen[x as usize] {
            continue;
        }
        let mut size = 0;
        let mut y = x;
        loop {
            seen[y as usize] = true;
            size += 1;
            y = k.pow(y, q);
            if y == x {
                break;
            }
        }
        orbits.push((x, size));
    }
    orbits
}

/// `#C(F_{q^n})` for a single curve.
pub fn count_points(fq: &FiniteField, curve: &HyperellipticCurve, n: usize) -> Result<u64> {
    PointCounter::new(fq, n)?.count_points(curve, n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CensusMode {
    Exhaustive,
    Sample { count: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusRecord {
    pub id: u64,
    /// Coefficients of `f`, lowest degree first, as field element encodings.
    pub f: Vec<u32>,
    pub degree_set: Partition,
    /// `#C(F_{q^n})` for `n = 1, 2, ...`.
    pub counts: Vec<u64>,
    pub weil: WeilPolyCoeffs,
    pub label: IsogenyLabel,
}

/// Number of point counts taken per curve: at least `g`, up to 4 when the
/// extension fields stay small.
pub fn census_depth(g: usize, q: u64) -> usize {
    let mut n = g;
    while n < DEEP_COUNT_MAX_N && (q as u128).pow(n as u32 + 1) <= DEEP_COUNT_LIMIT as u128 {
        n += 1;
    }
    n
}

/// Shared state for one `(g, q)` census.
pub struct Census {
    g: usize,
    q: u64,
    fq: FiniteField,
    counter: PointCounter,
    non_residue: u32,
}

impl Census {
    pub fn new(g: usize, q: u64) -> Result<Self> {
        if g == 0 || g > Parities::MAX_GENUS {
            return Err(Error::InvalidArgument(format!("genus {g} out of range")));
        }
        let (p, k) = arith::prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if p == 2 {
            return Err(Error::CharacteristicTwo);
        }
        let fq = FiniteField::build_extension(p, k)?;
        let counter = PointCounter::new(&fq, census_depth(g, q))?;
        let non_residue = fq.first_non_residue()?;
        Ok(Self { g, q, fq, counter, non_residue })
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn field(&self) -> &FiniteField {
        &self.fq
    }

    pub fn depth(&self) -> usize {
        self.counter.max_n()
    }

    pub fn non_residue(&self) -> u32 {
        self.non_residue
    }

    fn monic(&self, deg: usize, mut idx: u128) -> FqPoly {
        let q = self.q as u128;
        let mut c: Vec<u32> = (0..deg)
            .map(|_| {
                let d = (idx % q) as u32;
                idx /= q;
                d
            })
            .collect();
        c.push(1);
        FqPoly::new(c)
    }

    /// Both twists of a monic squarefree `f_0`, with `id` left at 0.
    fn records_for(&self, f0: &FqPoly) -> Result<[CensusRecord; 2]> {
        let base = HyperellipticCurve { g: self.g, f: f0.clone() };
        let degree_set = base.degree_set(&self.fq)?;
        let sums = (1..=self.depth())
            .map(|n| self.counter.character_sum(f0, n))
            .collect::<Result<Vec<_>>>()?;
        let twist = |c: u32| -> Result<CensusRecord> {
            let curve = HyperellipticCurve { g: self.g, f: f0.scale(&self.fq, c) };
            let counts = sums
                .iter()
                .enumerate()
                .map(|(i, &s)| {
                    let n = i + 1;
                    self.counter.assemble(&curve, n, self.counter.chi(c, n)? * s)
                })
                .collect::<Result<Vec<_>>>()?;
            let first: Vec<BigInt> = counts[..self.g].iter().map(|&c| BigInt::from(c)).collect();
            let weil = WeilPolyCoeffs::from_point_counts(self.q, self.g, &first)?;
            Ok(CensusRecord {
                id: 0,
                f: curve.f.coeffs().to_vec(),
                degree_set: degree_set.clone(),
                counts,
                label: weil.label(),
                weil,
            })
        };
        Ok([twist(1)?, twist(self.non_residue)?])
    }

    fn squarefree(&self, f: &FqPoly) -> bool {
        field::is_squarefree(&self.fq, f).expect("nonzero polynomial")
    }

    /// Runs the census, handing records to `visit` in a deterministic order.
    /// Returns the number of records.
    pub fn run(&self, mode: CensusMode, mut visit: impl FnMut(CensusRecord) -> Result<()>) -> Result<u64> {
        let mut next_id = 0u64;
        let mut emit = |batch: Vec<Vec<CensusRecord>>| -> Result<()> {
            for mut r in batch.into_iter().flatten() {
                r.id = next_id;
                next_id += 1;
                visit(r)?;
            }
            Ok(())
        };
        match mode {
            CensusMode::Exhaustive => {
                let top = (self.q as u128).pow(2 * self.g as u32 + 2);
                if top > EXHAUSTIVE_LIMIT {
                    return Err(Error::GuardExceeded {
                        what: "exhaustive census size",
                        detail: format!("q^(2g+2) = {top} exceeds {EXHAUSTIVE_LIMIT}"),
                    });
                }
                for deg in [2 * self.g + 1, 2 * self.g + 2] {
                    let total = self.q.pow(deg as u32);
                    let blocks: Vec<u64> = (0..total.div_ceil(BLOCK)).collect();
                    for batch in blocks.chunks(rayon::current_num_threads() * 8) {
                        let out = batch
                            .par_iter()
                            .map(|&b| {
                                let mut recs = Vec::new();
                                for idx in b * BLOCK..((b + 1) * BLOCK).min(total) {
                                    let f0 = self.monic(deg, idx as u128);
                                    if self.squarefree(&f0) {
                                        recs.extend(self.records_for(&f0)?);
                                    }
                                }
                                Ok(recs)
                            })
                            .collect::<Result<Vec<_>>>()?;
                        emit(out)?;
                    }
                }
            }
            CensusMode::Sample { count, seed } => {
                if count == 0 {
                    return Err(Error::InvalidArgument("sample size must be positive".into()));
                }
                let q = self.q as u128;
                let odd = q
                    .checked_pow(2 * self.g as u32 + 1)
                    .and_then(|o| o.checked_mul(q + 1).map(|t| (o, t)));
                let Some((odd, total)) = odd else {
                    return Err(Error::GuardExceeded {
                        what: "census space",
                        detail: format!("q^(2g+2) overflows for g = {}, q = {}", self.g, self.q),
                    });
                };
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut remaining = count;
                while remaining > 0 {
                    let want = remaining.min(BLOCK * 8);
                    let mut draws = Vec::with_capacity(want as usize);
                    while (draws.len() as u64) < want {
                        let r = rng.gen_range(0..2 * total);
                        let (twist, idx) = ((r % 2) as usize, r / 2);
                        let f0 = if idx < odd {
                            self.monic(2 * self.g + 1, idx)
                        } else {
                            self.monic(2 * self.g + 2, idx - odd)
                        };
                        if self.squarefree(&f0) {
                            draws.push((f0, twist));
                        }
                    }
                    remaining -= want;
                    let out = draws
                        .par_iter()
                        .map(|(f0, twist)| {
                            let [plain, twisted] = self.records_for(f0)?;
                            Ok(vec![if *twist == 0 { plain } else { twisted }])
                        })
                        .collect::<Result<Vec<_>>>()?;
                    emit(out)?;
                }
            }
        }
        Ok(next_id)
    }
}

/// Collects a whole census in memory.
pub fn census(g: usize, q: u64, mode: CensusMode) -> Result<Vec<CensusRecord>> {
    let mut out = Vec::new();
    Census::new(g, q)?.run(mode, |r| {
        out.push(r);
        Ok(())
    })?;
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub record: u64,
    pub law: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionTally {
    pub partition: Partition,
    pub curves: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassTally {
    pub parities: Parities,
    pub admissible: bool,
    pub curves: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusSummary {
    pub g: usize,
    pub q: u64,
    pub records: u64,
    pub violations: u64,
    /// The first violations found, at most [`VIOLATION_LOG_LIMIT`].
    pub violation_log: Vec<Violation>,
    pub realized_partitions: Vec<PartitionTally>,
    pub realized_classes: Vec<ClassTally>,
}

pub const VIOLATION_LOG_LIMIT: usize = 20;

impl CensusSummary {
    pub fn all_classes_admissible(&self) -> bool {
        self.realized_classes.iter().all(|c| c.admissible)
    }

    pub fn realized(&self, p: &Partition) -> bool {
        self.realized_partitions.iter().any(|t| &t.partition == p)
    }
}

/// Streaming audit of census records.
pub struct CensusVerifier {
    g: usize,
    q: u64,
    set: Arc<AdmissibleSet>,
    sieve_cache: HashMap<Vec<i64>, SieveVerdict>,
    records: u64,
    violations: u64,
    log: Vec<Violation>,
    partitions: BTreeMap<Partition, u64>,
    classes: BTreeMap<Vec<u8>, (Parities, u64)>,
}

impl CensusVerifier {
    pub fn new(g: usize, q: u64) -> Result<Self> {
        if q % 2 == 0 {
            return Err(Error::EvenQ(q));
        }
        Ok(Self {
            g,
            q,
            set: admissibility::admissible_set(g)?,
            sieve_cache: HashMap::new(),
            records: 0,
            violations: 0,
            log: Vec::new(),
            partitions: BTreeMap::new(),
            classes: BTreeMap::new(),
        })
    }

    fn flag(&mut self, record: u64, law: &str) {
        self.violations += 1;
        if self.log.len() < VIOLATION_LOG_LIMIT {
            self.log.push(Violation { record, law: law.to_string() });
        }
    }

    pub fn observe(&mut self, r: &CensusRecord) -> Result<()> {
        self.records += 1;
        let (q, g, id) = (self.q, self.g, r.id);
        let w = &r.weil;
        if w.g != g || w.q != q || r.degree_set.sum() != 2 * g as u64 + 2 {
            self.flag(id, "record shape");
            return Ok(());
        }
        let laws = Laws::check(r);
        for (law, ok) in laws.0 {
            if !ok {
                self.flag(id, law);
            }
        }

        let parities = w.reduce_mod2()?;
        if self.set.classify(&parities).is_none() {
            self.flag(id, "admissible class");
        }
        if !self.sieve_cache.contains_key(&w.a) {
            self.sieve_cache.insert(w.a.clone(), sieve::instance_ruled_out(w)?);
        }
        let verdict = &self.sieve_cache[&w.a];
        if verdict.ruled_out || !verdict.surviving_partitions.contains(&r.degree_set) {
            self.flag(id, "instance sieve");
        }

        *self.partitions.entry(r.degree_set.clone()).or_insert(0) += 1;
        self.classes.entry(parities.to_vec()).or_insert((parities, 0)).1 += 1;
        Ok(())
    }

    pub fn finish(self) -> CensusSummary {
        let set = self.set;
        CensusSummary {
            g: self.g,
            q: self.q,
            records: self.records,
            violations: self.violations,
            violation_log: self.log,
            realized_partitions: self
                .partitions
                .into_iter()
                .map(|(partition, curves)| PartitionTally { partition, curves })
                .collect(),
            realized_classes: self
                .classes
                .into_values()
                .map(|(parities, curves)| ClassTally {
                    admissible: set.classify(&parities).is_some(),
                    parities,
                    curves,
                })
                .collect(),
        }
    }
}

/// The per-record laws that need no shared state.
struct Laws(Vec<(&'static str, bool)>);

impl Laws {
    fn check(r: &CensusRecord) -> Self {
        let w = &r.weil;
        let p = &r.degree_set;
        let counts = &r.counts;
        let class_ok = admissibility::class_from_partition(p)
            .map(|c| c == w.expand().mod2())
            .unwrap_or(false);
        let expected = w.point_counts(counts.len());
        let newton_ok = counts
            .iter()
            .enumerate()
            .all(|(i, &c)| expected.get(i + 1).to_u64() == Some(c));
        let parity_ok = counts
            .iter()
            .enumerate()
            .all(|(i, &c)| c % 2 == sieve::w_count(p, i as u32 + 1) % 2);
        let doubling_ok = (1..=counts.len() / 2).all(|n| counts[n - 1] % 2 == counts[2 * n - 1] % 2);
        let two_adic_ok = counts.iter().enumerate().all(|(i, &c)| {
            let n = i as u32 + 1;
            let bits = arith::v2(n as u64) + 1;
            let m = 1i128 << bits;
            let want = 2 * ((w.q as i128).pow(n) + 1) - sieve::w_count(p, n) as i128;
            (c as i128 - want).rem_euclid(m) == 0
        });
        Laws(vec![
            ("class identity", class_ok),
            ("Newton round trip", newton_ok),
            ("parity", parity_ok),
            ("n vs 2n parity", doubling_ok),
            ("2-adic", two_adic_ok),
        ])
    }
}

pub fn verify_census<'a>(
    g: usize,
    q: u64,
    records: impl IntoIterator<Item = &'a CensusRecord>,
) -> Result<CensusSummary> {
    let mut v = CensusVerifier::new(g, q)?;
    for r in records {
        v.observe(r)?;
    }
    Ok(v.finish())
}

/// Census and audit in one streaming pass.
pub fn run_and_verify(g: usize, q: u64, mode: CensusMode) -> Result<CensusSummary> {
    let mut v = CensusVerifier::new(g, q)?;
    Census::new(g, q)?.run(mode, |r| v.observe(&r))?;
    Ok(v.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[u32]) -> FqPoly {
        FqPoly::new(c.to_vec())
    }

    /// Counts points over `F_{q^n}` by checking `y^2 = f(x)` for every pair.
    fn brute_count(fq: &FiniteField, f: &FqPoly, n: usize) -> u64 {
        let k = FiniteField::build_extension(fq.characteristic() as u64, fq.degree() * n as u32).unwrap();
        let emb = k.embedding_of(fq).unwrap();
        let fe = FqPoly::new(f.coeffs().iter().map(|&c| emb[c as usize]).collect());
        let mut affine = 0u64;
        for x in k.elements() {
            let v = fe.eval(&k, x);
            affine += k.elements().filter(|&y| k.mul(y, y) == v).count() as u64;
        }
        let deg = f.degree().unwrap();
        let lead = emb[f.leading().unwrap() as usize];
        let infinity = if deg % 2 == 1 {
            1
        } else if k.elements().any(|y| k.mul(y, y) == lead) {
            2
        } else {
            0
        };
        affine + infinity
    }

    #[test]
    fn degree_set_examples() {
        let f3 = FiniteField::prime(3).unwrap();
        // x^3 - x = x^3 + 2x.
        let c = HyperellipticCurve::new(&f3, poly(&[0, 2, 0, 1])).unwrap();
        assert_eq!(c.genus(), 1);
        assert_eq!(c.degree_set(&f3).unwrap().parts(), &[1, 1, 1, 1]);
        // (x^2 + 1)(x + 1) = x^3 + x^2 + x + 1.
        let c = HyperellipticCurve::new(&f3, poly(&[1, 1, 1, 1])).unwrap();
        assert_eq!(c.degree_set(&f3).unwrap().parts(), &[1, 1, 2]);
        // x^4 + x + 2 is irreducible over F_3.
        let f = poly(&[2, 1, 0, 0, 1]);
        assert!(field::is_irreducible(&f3, &f));
        let c = HyperellipticCurve::new(&f3, f).unwrap();
        assert_eq!(c.degree_set(&f3).unwrap().parts(), &[4]);
        assert_eq!(
            HyperellipticCurve::new(&f3, poly(&[0, 0, 1, 1])),
            Err(Error::NotSquarefree)
        );
    }

    #[test]
    fn count_examples() {
        let f3 = FiniteField::prime(3).unwrap();
        let c = HyperellipticCurve::new(&f3, poly(&[0, 2, 0, 1])).unwrap();
        assert_eq!(count_points(&f3, &c, 1).unwrap(), 4);
        assert_eq!(count_points(&f3, &c, 2).unwrap(), 16);
        let f2 = FiniteField::prime(2).unwrap();
        assert!(PointCounter::new(&f2, 1).is_err());
    }

    #[test]
    fn counts_match_brute_force() {
        for (q, g) in [(3u64, 1usize), (5, 1), (3, 2), (9, 1)] {
            let ctx = Census::new(g, q).unwrap();
            let fq = ctx.field();
            let recs = census(g, q, CensusMode::Sample { count: 25, seed: 3 }).unwrap();
            for r in recs {
                let f = FqPoly::new(r.f.clone());
                for n in 1..=r.counts.len().min(2) {
                    assert_eq!(r.counts[n - 1], brute_count(fq, &f, n), "q = {q}, f = {:?}, n = {n}", r.f);
                }
            }
        }
    }

    #[test]
    fn depth_rule() {
        assert_eq!(census_depth(1, 3), 4);
        assert_eq!(census_depth(3, 11), 4);
        assert_eq!(census_depth(2, 101), 3);
        assert_eq!(census_depth(3, 2000), 3);
    }

    #[test]
    fn exhaustive_small_runs_are_clean() {
        for (g, q) in [(1usize, 3u64), (1, 5), (2, 3)] {
            let recs = census(g, q, CensusMode::Exhaustive).unwrap();
            let s = verify_census(g, q, &recs).unwrap();
            assert_eq!(s.violations, 0, "{:?}", s.violation_log);
            assert!(s.all_classes_admissible());
            assert!(recs.windows(2).all(|w| w[0].id + 1 == w[1].id));
        }
    }

    #[test]
    fn record_counts() {
        // Squarefree monic cubics and quartics over F_3: q^d - q^{d-1}.
        let recs = census(1, 3, CensusMode::Exhaustive).unwrap();
        assert_eq!(recs.len(), 2 * ((27 - 9) + (81 - 27)));
    }

    #[test]
    fn corrupted_record_is_flagged() {
        let mut recs = census(1, 3, CensusMode::Sample { count: 5, seed: 1 }).unwrap();
        recs[0].counts[1] += 2;
        let wrong = if recs[1].counts[0] % 2 == 0 { vec![1, 3] } else { vec![4] };
        recs[1].degree_set = Partition::new(wrong).unwrap();
        let s = verify_census(1, 3, &recs).unwrap();
        assert!(s.violations >= 2);
        assert!(s.violation_log.iter().any(|v| v.record == 0 && v.law == "Newton round trip"));
        assert!(s.violation_log.iter().any(|v| v.record == 1));
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = census(2, 5, CensusMode::Sample { count: 50, seed: 9 }).unwrap();
        let b = census(2, 5, CensusMode::Sample { count: 50, seed: 9 }).unwrap();
        assert_eq!(a, b);
        let c = census(2, 5, CensusMode::Sample { count: 50, seed: 10 }).unwrap();
        assert_ne!(a, c);
        assert!(census(2, 5, CensusMode::Sample { count: 0, seed: 1 }).is_err());
    }

    #[test]
    fn guards() {
        assert!(matches!(Census::new(2, 4), Err(Error::CharacteristicTwo)));
        assert!(matches!(Census::new(2, 6), Err(Error::NotPrimePower(6))));
        let err = census(4, 11, CensusMode::Exhaustive).unwrap_err();
        assert!(matches!(err, Error::GuardExceeded { .. }));
    }
}
