//! The mod-2 shape of hyperelliptic Jacobians.
//!
//! If Frobenius permutes the `2g + 2` Weierstrass points in orbits of sizes
//! `d_1, ..., d_r`, the Weil polynomial reduces mod 2 to
//! `prod (t^{d_i} - 1) / (t - 1)^2`. The polynomials arising this way are the
//! admissible classes; each one comes from exactly one partition of `2g + 2`
//! into distinct parts.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::f2poly::F2Poly;
use crate::partition::{self, Partition};
use crate::weil::Parities;

/// Largest genus for which admissible classes are enumerated.
pub const MAX_CLASS_GENUS: usize = 64;

/// Largest `p(2g + 2)` for which the full partition table is built.
const FULL_TABLE_LIMIT: u128 = 10_000_000;

/// `prod (t^{d_i} + 1) / (t + 1)^2` over F_2.
pub fn class_from_partition(p: &Partition) -> Result<F2Poly> {
    let n = p.sum();
    if n % 2 != 0 || n < 4 {
        return Err(Error::InvalidArgument(format!(
            "degree set {p} must sum to an even number >= 4"
        )));
    }
    let product = p
        .parts()
        .iter()
        .fold(F2Poly::one(), |acc, &d| acc.mul(&F2Poly::t_pow_plus_one(d as usize)));
    let square = F2Poly::from_exponents(&[2, 0]);
    product.exact_div(&square)
}

/// Merges equal parts `(d, d)` into `2d` until all parts are distinct.
pub fn canonical_distinct(p: &Partition) -> Partition {
    let mut counts = p.multiplicities();
    let mut out = Vec::new();
    while let Some((d, c)) = counts.pop_first() {
        if c % 2 == 1 {
            out.push(d);
        }
        if c >= 2 {
            *counts.entry(2 * d).or_insert(0) += c / 2;
        }
    }
    Partition::new(out).expect("merging keeps parts positive")
}

/// Admissible classes for one genus, each with its distinct-parts witness.
#[derive(Debug, Clone)]
pub struct AdmissibleSet {
    g: usize,
    witnesses: HashMap<F2Poly, Partition>,
}

impl AdmissibleSet {
    pub fn new(g: usize) -> Result<Self> {
        check_genus(g)?;
        let witnesses = partition::distinct_partitions(2 * g as u32 + 2)
            .into_iter()
            .map(|p| (class_from_partition(&p).expect("valid degree set"), p))
            .collect();
        Ok(Self { g, witnesses })
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn len(&self) -> usize {
        self.witnesses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.witnesses.is_empty()
    }

    pub fn contains(&self, class: &F2Poly) -> bool {
        self.witnesses.contains_key(class)
    }

    pub fn witness(&self, class: &F2Poly) -> Option<&Partition> {
        self.witnesses.get(class)
    }

    pub fn classes(&self) -> impl Iterator<Item = (&F2Poly, &Partition)> {
        self.witnesses.iter()
    }

    /// The distinct-parts witness when the parities are admissible.
    pub fn classify(&self, parities: &Parities) -> Option<Partition> {
        assert_eq!(parities.genus(), self.g, "parity vector has the wrong genus");
        self.witnesses.get(&parities.to_f2poly()).cloned()
    }
}

fn check_genus(g: usize) -> Result<()> {
    if g == 0 || g > MAX_CLASS_GENUS {
        return Err(Error::GuardExceeded {
            what: "genus for class enumeration",
            detail: format!("g = {g}, supported 1..={MAX_CLASS_GENUS}"),
        });
    }
    Ok(())
}

/// Shared, lazily built [`AdmissibleSet`] for genus `g`.
pub fn admissible_set(g: usize) -> Result<Arc<AdmissibleSet>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<AdmissibleSet>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(set) = cache.lock().expect("cache lock").get(&g) {
        return Ok(set.clone());
    }
    let set = Arc::new(AdmissibleSet::new(g)?);
    cache.lock().expect("cache lock").insert(g, set.clone());
    Ok(set)
}

/// `Some(witness)` iff the parity vector reduces to an admissible class; the
/// witness is the unique distinct-parts partition of that class.
pub fn is_admissible(parities: &Parities) -> Option<Partition> {
    admissible_set(parities.genus())
        .expect("parity vectors never exceed the class genus limit")
        .classify(parities)
}

/// Parity vectors of genus `g` outside every admissible class.
pub fn inadmissible_parities(g: usize) -> Result<Vec<Parities>> {
    let set = admissible_set(g)?;
    if g >= 32 {
        return Err(Error::GuardExceeded {
            what: "genus for listing parity vectors",
            detail: format!("g = {g}"),
        });
    }
    Ok(Parities::all(g).filter(|p| set.classify(p).is_none()).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassRow {
    pub parities: Parities,
    pub witness: Partition,
    /// All partitions of `2g + 2` with this class, in generation order.
    pub partitions: Vec<Partition>,
}

/// Every partition of `2g + 2` grouped by its class.
#[derive(Debug, Clone)]
pub struct ClassTable {
    g: usize,
    rows: BTreeMap<F2Poly, ClassRow>,
}

impl ClassTable {
    pub fn new(g: usize) -> Result<Self> {
        check_genus(g)?;
        let n = 2 * g as u32 + 2;
        if partition::partition_count(n) > FULL_TABLE_LIMIT {
            return Err(Error::GuardExceeded {
                what: "partition count for the full class table",
                detail: format!("p({n}) = {}", partition::partition_count(n)),
            });
        }
        let mut rows: BTreeMap<F2Poly, ClassRow> = BTreeMap::new();
        for p in partition::partitions(n) {
            let class = class_from_partition(&p)?;
            let row = rows.entry(class.clone()).or_insert_with(|| ClassRow {
                parities: Parities::from_f2poly(g, &class),
                witness: canonical_distinct(&p),
                partitions: Vec::new(),
            });
            row.partitions.push(p);
        }
        Ok(Self { g, rows })
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn get(&self, class: &F2Poly) -> Option<&ClassRow> {
        self.rows.get(class)
    }

    pub fn row_for(&self, parities: &Parities) -> Option<&ClassRow> {
        self.rows.get(&parities.to_f2poly())
    }

    /// Rows ordered by parity vector, `a_1` most significant.
    pub fn rows(&self) -> Vec<(&F2Poly, &ClassRow)> {
        let mut rows: Vec<_> = self.rows.iter().collect();
        rows.sort_by_key(|(_, r)| r.parities.to_vec());
        rows
    }
}

/// Limiting proportion `Q(2g + 2) / 2^g` of admissible isogeny classes.
pub fn limit_proportion(g: usize) -> Ratio<u128> {
    assert!((1..=MAX_CLASS_GENUS).contains(&g), "genus out of range");
    Ratio::new(partition::q_distinct(2 * g as u32 + 2), 1u128 << g)
}

/// Limiting proportion of inadmissible classes, `1 - Q(2g + 2) / 2^g`.
pub fn limit_inadmissible(g: usize) -> Ratio<u128> {
    Ratio::from_integer(1) - limit_proportion(g)
}

/// Asymptotic estimate `3^{3/4} / (12 N^{3/4}) · exp(π √(N/3))` for `Q(N)`.
pub fn q_asymptotic(n: u32) -> f64 {
    let n = n as f64;
    3f64.powf(0.75) / (12.0 * n.powf(0.75)) * (std::f64::consts::PI * (n / 3.0).sqrt()).exp()
}
