//! Desk-scale enumeration of equipartition pairs and overlap matrices, and
//! the exact second moment of `Z_k` computed two independent ways.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Pow, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::OverlapSequence;
use crate::error::{Error, Result};
use crate::exact::factorial;
use crate::graphs::for_each_equipartition;
use crate::logvalue::LogValue;
use crate::moments::{equipartition_count, EquipartitionShape};

/// Largest number of ordered pairs `P^2` that pair enumeration will visit.
pub const MAX_PAIRS: u128 = 100_000_000;
/// Overlap-matrix enumeration is limited to `k <= 4` and `n <= 12`.
pub const MAX_MATRIX_K: u64 = 4;
pub const MAX_MATRIX_N: u64 = 12;

fn guard_pairs(shape: &EquipartitionShape) -> Result<Vec<Vec<u32>>> {
    let p = equipartition_count(shape);
    let pairs = &p * &p;
    if pairs > BigUint::from(MAX_PAIRS) {
        return Err(Error::ScaleGuard {
            what: "ordered equipartition pairs",
            requested: pairs.to_u128().unwrap_or(u128::MAX),
            limit: MAX_PAIRS,
        });
    }
    let mut all = Vec::new();
    for_each_equipartition(shape, |a| all.push(a.to_vec()));
    Ok(all)
}

fn guard_matrices(n: u64, k: u64) -> Result<()> {
    if k > MAX_MATRIX_K {
        return Err(Error::ScaleGuard { what: "overlap matrix order k", requested: k as u128, limit: MAX_MATRIX_K as u128 });
    }
    if n > MAX_MATRIX_N {
        return Err(Error::ScaleGuard { what: "overlap matrix total n", requested: n as u128, limit: MAX_MATRIX_N as u128 });
    }
    Ok(())
}

/// Adds `from` into `into`.
fn merge<K: Ord>(mut into: BTreeMap<K, u64>, from: BTreeMap<K, u64>) -> BTreeMap<K, u64> {
    for (key, c) in from {
        *into.entry(key).or_insert(0) += c;
    }
    into
}

/// `P_r`: ordered pairs of ordered `k`-equipartitions of `n` vertices,
/// grouped by overlap sequence. The work is split by first partition; the
/// result does not depend on the worker count.
pub fn enumerate_overlap_pairs(n: u64, k: u64) -> Result<BTreeMap<OverlapSequence, BigUint>> {
    let shape = EquipartitionShape::new(n, k)?;
    let all = guard_pairs(&shape)?;
    let k = k as usize;
    let grouped = all
        .par_iter()
        .map(|a1| {
            let mut local = BTreeMap::new();
            let mut entries = vec![0u64; k * k];
            for a2 in &all {
                entries.iter_mut().for_each(|e| *e = 0);
                for (&x, &y) in a1.iter().zip(a2) {
                    entries[x as usize * k + y as usize] += 1;
                }
                *local.entry(OverlapSequence::from_entries(n, entries.iter().copied())).or_insert(0u64) += 1;
            }
            local
        })
        .reduce(BTreeMap::new, merge);
    Ok(grouped.into_iter().map(|(r, c)| (r, BigUint::from(c))).collect())
}

/// `M_r` for every `r`: `k x k` matrices with the equipartition margins,
/// grouped by the sequence of their entries `>= 2`.
pub fn overlap_matrix_census(n: u64, k: u64) -> Result<BTreeMap<OverlapSequence, BigUint>> {
    guard_matrices(n, k)?;
    let shape = EquipartitionShape::new(n, k)?;
    let k = k as usize;
    let mut rows = shape.part_sizes();
    let mut cols = rows.clone();
    let mut entries = vec![0u64; k * k];
    let mut census = BTreeMap::new();

    fn place(
        cell: usize,
        k: usize,
        n: u64,
        rows: &mut [u64],
        cols: &mut [u64],
        entries: &mut [u64],
        census: &mut BTreeMap<OverlapSequence, u64>,
    ) {
        if cell == k * k {
            if cols.iter().all(|&c| c == 0) {
                *census.entry(OverlapSequence::from_entries(n, entries.iter().copied())).or_insert(0) += 1;
            }
            return;
        }
        let (x, y) = (cell / k, cell % k);
        // The last cell of a row takes whatever the row still needs.
        let range = if y == k - 1 { rows[x]..=rows[x] } else { 0..=rows[x].min(cols[y]) };
        for value in range {
            if value > cols[y] {
                continue;
            }
            rows[x] -= value;
            cols[y] -= value;
            entries[cell] = value;
            place(cell + 1, k, n, rows, cols, entries, census);
            rows[x] += value;
            cols[y] += value;
        }
        entries[cell] = 0;
    }

    place(0, k, n, &mut rows, &mut cols, &mut entries, &mut census);
    Ok(census.into_iter().map(|(r, c)| (r, BigUint::from(c))).collect())
}

/// `M_r` for one sequence; zero when no margin-respecting matrix realizes it.
pub fn count_overlap_matrices(n: u64, k: u64, r: &OverlapSequence) -> Result<BigUint> {
    if r.v() > n {
        guard_matrices(n, k)?;
        return Ok(BigUint::zero());
    }
    Ok(overlap_matrix_census(n, k)?.remove(r).unwrap_or_default())
}

/// `(n! / prod i!^{r_i}) M_r`: vertex labellings of each matrix.
pub fn pairs_from_matrices(n: u64, r: &OverlapSequence, m_r: &BigUint) -> BigUint {
    let denom: BigUint = (2..=r.max_block()).map(|i| factorial(i).pow(r.r(i) as u32)).product();
    factorial(n) / denom * m_r
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SecondMoment {
    pub n: u64,
    pub k: u64,
    pub p: f64,
    /// `sum over pairs of q^{2f - d}`.
    pub direct: LogValue,
    /// `mu_k^2 sum_r Q_r b^d` with `Q_r = P_r / P^2` from overlap matrices.
    pub grouped: LogValue,
    pub first_moment: LogValue,
    /// `E[Z_k^2] / mu_k^2`, from the direct value.
    pub ratio: LogValue,
    /// `|direct - grouped| / direct`.
    pub relative_gap: f64,
}

/// Histogram of `d` over all ordered pairs, with `d` counted as vertex pairs
/// sharing a part in both partitions.
fn common_pair_histogram(shape: &EquipartitionShape) -> Result<BTreeMap<u64, u64>> {
    let all = guard_pairs(shape)?;
    let n = shape.n() as usize;
    Ok(all
        .par_iter()
        .map(|a1| {
            let mut local = BTreeMap::new();
            for a2 in &all {
                let mut d = 0u64;
                for u in 0..n {
                    for v in u + 1..n {
                        d += (a1[u] == a1[v] && a2[u] == a2[v]) as u64;
                    }
                }
                *local.entry(d).or_insert(0) += 1;
            }
            local
        })
        .reduce(BTreeMap::new, merge))
}

/// `E[Z_k^2]` in `G(n, p)` by direct pair enumeration and by the grouped
/// overlap-matrix form.
pub fn second_moment_exact(n: u64, k: u64, p: f64) -> Result<SecondMoment> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidProbability(p));
    }
    guard_matrices(n, k)?;
    let shape = EquipartitionShape::new(n, k)?;
    let ln_q = (-p).ln_1p();
    let f = shape.forbidden_pairs();

    let direct_terms: Vec<LogValue> = common_pair_histogram(&shape)?
        .into_iter()
        .map(|(d, c)| LogValue::from_f64(c as f64) * LogValue::from_ln((2 * f - d) as f64 * ln_q))
        .collect();
    let direct = LogValue::sum_slice(&direct_terms);

    let ln_p = LogValue::from_biguint(&equipartition_count(&shape)).ln();
    let first_moment = LogValue::from_ln(ln_p + f as f64 * ln_q);
    let grouped_terms: Vec<LogValue> = overlap_matrix_census(n, k)?
        .iter()
        .map(|(r, m_r)| {
            let ln_q_r = LogValue::from_biguint(&pairs_from_matrices(n, r, m_r)).ln() - 2.0 * ln_p;
            LogValue::from_ln(ln_q_r - r.d() as f64 * ln_q)
        })
        .collect();
    let grouped = first_moment * first_moment * LogValue::sum_slice(&grouped_terms);

    let relative_gap = ((direct.ln() - grouped.ln()).exp_m1()).abs();
    Ok(SecondMoment { n, k, p, direct, grouped, first_moment, ratio: direct / (first_moment * first_moment), relative_gap })
}

/// `E[Z_k^2]` for rational `q = 1 - p`, by direct pair enumeration.
pub fn second_moment_exact_rational(n: u64, k: u64, q: &BigRational) -> Result<BigRational> {
    let shape = EquipartitionShape::new(n, k)?;
    let f = shape.forbidden_pairs();
    Ok(common_pair_histogram(&shape)?
        .into_iter()
        .map(|(d, c)| BigRational::from_integer(BigInt::from(c)) * q.clone().pow(2 * f - d))
        .sum())
}
