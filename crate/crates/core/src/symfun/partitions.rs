use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

/// Largest integer whose partitions are enumerated.
pub const MAX_PARTITION_SIZE: u32 = 40;

/// Integer partition `L_1 ≥ L_2 ≥ ... ≥ L_r > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntegerPartition {
    parts: Vec<u32>,
}

impl IntegerPartition {
    /// Sorts the parts into non-increasing order; zero parts are rejected.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidParameter("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(IntegerPartition { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// `|L|`, the sum of the parts.
    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// `ℓ(L)`, the number of parts.
    pub fn length(&self) -> usize {
        self.parts.len()
    }

    /// `(k, m_k(L))` for each distinct part `k`, largest first.
    pub fn multiplicities(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((k, m)) if *k == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }
}

/// All partitions of `k` in reverse-lexicographic order.
pub fn partitions(k: u32) -> Result<Vec<IntegerPartition>> {
    if k > MAX_PARTITION_SIZE {
        return Err(Error::OutOfRange(format!(
            "partitions of {k} exceed the cap {MAX_PARTITION_SIZE}"
        )));
    }
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fill(k, k, &mut cur, &mut out);
    Ok(out)
}

fn fill(rest: u32, max_part: u32, cur: &mut Vec<u32>, out: &mut Vec<IntegerPartition>) {
    if rest == 0 {
        out.push(IntegerPartition { parts: cur.clone() });
        return;
    }
    for p in (1..=max_part.min(rest)).rev() {
        cur.push(p);
        fill(rest - p, p, cur, out);
        cur.pop();
    }
}

/// `z_L = Π_k k^{m_k} m_k!`, the centralizer order of the cycle type `L`.
pub fn z_of_partition(l: &IntegerPartition) -> BigUint {
    let mut z = BigUint::one();
    for (k, m) in l.multiplicities() {
        for i in 1..=m {
            z *= BigUint::from(k) * BigUint::from(i);
        }
    }
    z
}
