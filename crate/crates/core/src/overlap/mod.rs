//! Overlap between pairs of ordered equipartitions, exact 0-1 matrix counts,
//! McKay's estimate and the exact desk-scale second moment.

mod contingency;
mod pairs;

pub use contingency::{count_01_matrices, mckay_estimate, McKayEstimate};
pub use pairs::{
    count_overlap_matrices, enumerate_overlap_pairs, overlap_matrix_census, pairs_from_matrices, second_moment_exact,
    second_moment_exact_rational, SecondMoment, MAX_MATRIX_K, MAX_MATRIX_N, MAX_PAIRS,
};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::choose2;
use crate::graphs::Partition;

/// `r[i - 2]` is the number of part pairs meeting in exactly `i >= 2`
/// vertices. Trailing zeros are trimmed, so equal sequences compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OverlapSequence {
    r: Vec<u64>,
    n: u64,
    v: u64,
    d: u64,
    #[serde(rename = "R")]
    big_r: u64,
}

impl OverlapSequence {
    /// From `r_2, r_3, ..` on `n` vertices.
    pub fn from_counts(n: u64, mut r: Vec<u64>) -> Self {
        while r.last() == Some(&0) {
            r.pop();
        }
        let sizes = || r.iter().enumerate().map(|(j, &c)| (j as u64 + 2, c));
        let v = sizes().map(|(i, c)| i * c).sum();
        let d = sizes().map(|(i, c)| choose2(i) * c).sum();
        let big_r = r.iter().sum();
        OverlapSequence { r, n, v, d, big_r }
    }

    /// From the block sizes (entries of an overlap matrix).
    pub fn from_entries(n: u64, entries: impl IntoIterator<Item = u64>) -> Self {
        let mut r = Vec::new();
        for m in entries.into_iter().filter(|&m| m >= 2) {
            let j = (m - 2) as usize;
            if r.len() <= j {
                r.resize(j + 1, 0);
            }
            r[j] += 1;
        }
        OverlapSequence::from_counts(n, r)
    }

    /// `r_i`, zero outside the stored range.
    pub fn r(&self, i: u64) -> u64 {
        if i < 2 {
            return 0;
        }
        self.r.get((i - 2) as usize).copied().unwrap_or(0)
    }

    /// `(r_2, r_3, .., r_max)`.
    pub fn counts(&self) -> &[u64] {
        &self.r
    }
    pub fn n(&self) -> u64 {
        self.n
    }
    /// Vertices in overlap blocks.
    pub fn v(&self) -> u64 {
        self.v
    }
    /// Common forbidden pairs.
    pub fn d(&self) -> u64 {
        self.d
    }
    /// Number of overlap blocks.
    pub fn big_r(&self) -> u64 {
        self.big_r
    }
    pub fn rho(&self) -> Ratio<u64> {
        Ratio::new(self.v, self.n.max(1))
    }
    /// Largest `i` with `r_i > 0`, or 1 when there are no blocks.
    pub fn max_block(&self) -> u64 {
        self.r.len() as u64 + 1
    }
}

/// `k x k` intersection sizes of two partitions: `entries[x * k + y] = |A_x ∩ B_y|`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OverlapMatrix {
    pub k: usize,
    pub entries: Vec<u64>,
    pub row_sums: Vec<u64>,
    pub col_sums: Vec<u64>,
}

impl OverlapMatrix {
    pub fn get(&self, x: usize, y: usize) -> u64 {
        self.entries[x * self.k + y]
    }
}

fn check_pair(p1: &Partition, p2: &Partition) -> Result<()> {
    if p1.n() != p2.n() || p1.k() != p2.k() {
        return Err(Error::ShapeMismatch(format!(
            "(n, k) = ({}, {}) vs ({}, {})",
            p1.n(),
            p1.k(),
            p2.n(),
            p2.k()
        )));
    }
    Ok(())
}

pub fn overlap_matrix(p1: &Partition, p2: &Partition) -> Result<OverlapMatrix> {
    check_pair(p1, p2)?;
    let k = p1.k();
    let mut entries = vec![0u64; k * k];
    for (&x, &y) in p1.assignment().iter().zip(p2.assignment()) {
        entries[x as usize * k + y as usize] += 1;
    }
    let row_sums = (0..k).map(|x| entries[x * k..(x + 1) * k].iter().sum()).collect();
    let col_sums = (0..k).map(|y| (0..k).map(|x| entries[x * k + y]).sum()).collect();
    Ok(OverlapMatrix { k, entries, row_sums, col_sums })
}

/// Singletons (intersections of size 1) are not blocks and do not count.
pub fn overlap_sequence(p1: &Partition, p2: &Partition) -> Result<OverlapSequence> {
    let m = overlap_matrix(p1, p2)?;
    Ok(OverlapSequence::from_entries(p1.n() as u64, m.entries))
}

/// Block statistics split by the size of the containing part of `pi_1`:
/// index 1 for parts of size `a`, index 2 for smaller parts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BetaDensities {
    pub a: u64,
    pub v1: u64,
    pub v2: u64,
    pub d1: u64,
    pub d2: u64,
    /// `2 d1 / (v1 (a - 1))`; absent when `v1 = 0`.
    pub beta1: Option<Ratio<u64>>,
    /// `2 d2 / (v2 (a - 2))`; absent when `v2 = 0` or `a <= 2`.
    pub beta2: Option<Ratio<u64>>,
}

/// Edge densities of the overlap blocks. Every part of `p1` must have size
/// at most `a`.
pub fn beta_densities(p1: &Partition, p2: &Partition, a: u64) -> Result<BetaDensities> {
    let m = overlap_matrix(p1, p2)?;
    if let Some(&big) = p1.part_sizes().iter().find(|&&s| s > a) {
        return Err(Error::Precondition(format!("pi_1 has a part of size {big} > a = {a}")));
    }
    let (mut v1, mut v2, mut d1, mut d2) = (0, 0, 0, 0);
    for x in 0..m.k {
        let full = p1.part_sizes()[x] == a;
        for y in 0..m.k {
            let block = m.get(x, y);
            if block < 2 {
                continue;
            }
            if full {
                v1 += block;
                d1 += choose2(block);
            } else {
                v2 += block;
                d2 += choose2(block);
            }
        }
    }
    let beta1 = (v1 > 0 && a >= 2).then(|| Ratio::new(2 * d1, v1 * (a - 1)));
    let beta2 = (v2 > 0 && a > 2).then(|| Ratio::new(2 * d2, v2 * (a - 2)));
    Ok(BetaDensities { a, v1, v2, d1, d2, beta1, beta2 })
}
