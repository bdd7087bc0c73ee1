//! Integer partitions with parts stored in ascending order.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Sorts the parts; zero parts are rejected.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::InvalidArgument(format!(
                "partition parts must be positive and nonempty: {parts:?}"
            )));
        }
        parts.sort_unstable();
        Ok(Self { parts })
    }

    fn from_sorted(parts: Vec<u32>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] <= w[1]));
        Self { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn sum(&self) -> u64 {
        self.parts.iter().map(|&d| d as u64).sum()
    }

    pub fn is_distinct(&self) -> bool {
        self.parts.windows(2).all(|w| w[0] < w[1])
    }

    pub fn multiplicity(&self, d: u32) -> usize {
        self.parts.iter().filter(|&&x| x == d).count()
    }

    /// Part sizes with their multiplicities.
    pub fn multiplicities(&self) -> BTreeMap<u32, usize> {
        let mut m = BTreeMap::new();
        for &d in &self.parts {
            *m.entry(d).or_insert(0) += 1;
        }
        m
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|d| d.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition{self}")
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Partition::new(Vec::<u32>::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// Every partition of `n` once, as ascending part lists in lexicographic order
/// (from `{1, ..., 1}` up to `{n}`).
pub fn partitions(n: u32) -> Partitions {
    assert!(n >= 1, "partitions are generated for n >= 1");
    Partitions {
        next: Some(vec![1; n as usize]),
    }
}

pub struct Partitions {
    next: Option<Vec<u32>>,
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let current = self.next.take()?;
        if current.len() >= 2 {
            let mut succ = current.clone();
            let y = succ.pop().expect("len >= 2");
            let x = succ.pop().expect("len >= 2");
            let (s, m) = (x + y, x + 1);
            for _ in 0..(s / m - 1) {
                succ.push(m);
            }
            succ.push(s - (s / m - 1) * m);
            self.next = Some(succ);
        }
        Some(Partition::from_sorted(current))
    }
}

/// Partitions of `n` into distinct parts, in the same order as [`partitions`].
pub fn distinct_partitions(n: u32) -> Vec<Partition> {
    fn rec(min: u32, rest: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition::from_sorted(cur.clone()));
            return;
        }
        for d in min..=rest {
            if d != rest && rest - d <= d {
                // The remainder would need a part larger than d that is at most rest - d.
                continue;
            }
            cur.push(d);
            rec(d + 1, rest - d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, n, &mut Vec::new(), &mut out);
    out
}

/// Partitions of `n` into odd parts.
pub fn odd_partitions(n: u32) -> Vec<Partition> {
    fn rec(min: u32, rest: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition::from_sorted(cur.clone()));
            return;
        }
        let mut d = min;
        while d <= rest {
            cur.push(d);
            rec(d, rest - d, cur, out);
            cur.pop();
            d += 2;
        }
    }
    let mut out = Vec::new();
    rec(1, n, &mut Vec::new(), &mut out);
    out
}

/// `p(n)`, the number of partitions of `n`.
pub fn partition_count(n: u32) -> u128 {
    let n = n as usize;
    let mut ways = vec![0u128; n + 1];
    ways[0] = 1;
    for part in 1..=n {
        for total in part..=n {
            ways[total] += ways[total - part];
        }
    }
    ways[n]
}

/// `Q(n)`, the number of partitions of `n` into distinct parts.
pub fn q_distinct(n: u32) -> u128 {
    let n = n as usize;
    let mut ways = vec![0u128; n + 1];
    ways[0] = 1;
    for part in 1..=n {
        for total in (part..=n).rev() {
            ways[total] += ways[total - part];
        }
    }
    ways[n]
}

/// Number of partitions of `n` into odd parts; equal to [`q_distinct`].
pub fn odd_part_count(n: u32) -> u128 {
    let n = n as usize;
    let mut ways = vec![0u128; n + 1];
    ways[0] = 1;
    for part in (1..=n).step_by(2) {
        for total in part..=n {
            ways[total] += ways[total - part];
        }
    }
    ways[n]
}
