//! Exhaustive brute-force counterparts of the exact computations, used as
//! independent oracles. Nothing here reuses the enumerators or solvers it
//! checks.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};
use crate::graphs::Graph;

/// `2^C(n, 2)` graphs are visited, so `n` is kept small.
pub const MAX_ALL_GRAPHS_N: usize = 7;
pub const MAX_SUBSET_N: usize = 20;
pub const MAX_COLOURING_N: usize = 10;
/// Matrices with more cells than this are not enumerated.
pub const MAX_MATRIX_CELLS: usize = 20;

fn guard(what: &'static str, requested: usize, limit: usize) -> Result<()> {
    if requested > limit {
        return Err(Error::ScaleGuard { what, requested: requested as u128, limit: limit as u128 });
    }
    Ok(())
}

/// Bit index of the pair `u < v` among the `C(n, 2)` pairs.
fn pair_bit(n: usize, u: usize, v: usize) -> u32 {
    let (u, v) = if u < v { (u, v) } else { (v, u) };
    (u * (2 * n - u - 1) / 2 + (v - u - 1)) as u32
}

/// Pair mask of all pairs inside the vertex sets given as bitmasks.
fn inner_pairs(n: usize, sets: impl IntoIterator<Item = u32>) -> u32 {
    let mut mask = 0u32;
    for set in sets {
        for u in 0..n {
            for v in u + 1..n {
                if set >> u & 1 == 1 && set >> v & 1 == 1 {
                    mask |= 1 << pair_bit(n, u, v);
                }
            }
        }
    }
    mask
}

/// Every vertex-to-part map with the ordered shape, found by filtering all
/// `k^n` maps.
fn ordered_equipartition_masks(n: usize, k: usize) -> Vec<u32> {
    let big = n % k;
    let size = |j: usize| n / k + usize::from(j < big);
    let mut masks = Vec::new();
    let mut assign = vec![0usize; n];
    loop {
        let mut sizes = vec![0usize; k];
        for &j in &assign {
            sizes[j] += 1;
        }
        if (0..k).all(|j| sizes[j] == size(j)) {
            masks.push(inner_pairs(n, (0..k).map(|j| (0..n).filter(|&v| assign[v] == j).fold(0, |m, v| m | 1 << v))));
        }
        let mut i = 0;
        while i < n {
            assign[i] += 1;
            if assign[i] < k {
                break;
            }
            assign[i] = 0;
            i += 1;
        }
        if i == n {
            return masks;
        }
    }
}

/// Weighted average over all graphs of `X` and `X^2`, where `X(G)` is the
/// number of forbidden-pair masks disjoint from `G`'s edge set.
fn average_over_graphs(n: usize, masks: &[u32], p: &BigRational) -> (BigRational, BigRational) {
    let pairs = n * n.saturating_sub(1) / 2;
    let mut by_edges = vec![(0u128, 0u128); pairs + 1];
    for g in 0u32..(1u32 << pairs) {
        let x = masks.iter().filter(|&&m| m & g == 0).count() as u128;
        let slot = &mut by_edges[g.count_ones() as usize];
        slot.0 += x;
        slot.1 += x * x;
    }
    let q = BigRational::one() - p;
    let mut first = BigRational::zero();
    let mut second = BigRational::zero();
    for (m, (s1, s2)) in by_edges.into_iter().enumerate() {
        let weight = p.clone().pow(m as u32) * q.clone().pow((pairs - m) as u32);
        first += BigRational::from_integer(BigInt::from(s1)) * &weight;
        second += BigRational::from_integer(BigInt::from(s2)) * weight;
    }
    (first, second)
}

fn check_probability(p: &BigRational) -> Result<()> {
    if *p < BigRational::zero() || *p > BigRational::one() {
        return Err(Error::Precondition(format!("p = {p} outside [0, 1]")));
    }
    Ok(())
}

/// `(E[Z_k], E[Z_k^2])` in `G(n, p)`, averaging over every graph on `n`
/// vertices.
pub fn all_graphs_equipartition_moments(n: usize, k: usize, p: &BigRational) -> Result<(BigRational, BigRational)> {
    guard("all-graphs oracle vertices", n, MAX_ALL_GRAPHS_N)?;
    check_probability(p)?;
    if k == 0 || k > n {
        return Err(Error::InvalidShape { n, k });
    }
    Ok(average_over_graphs(n, &ordered_equipartition_masks(n, k), p))
}

/// Expected number of unordered families of `s` disjoint independent
/// `a`-sets, averaging over every graph.
pub fn all_graphs_precolourings(n: usize, a: usize, s: usize, p: &BigRational) -> Result<BigRational> {
    guard("all-graphs oracle vertices", n, MAX_ALL_GRAPHS_N)?;
    check_probability(p)?;
    let sets: Vec<u32> = (0u32..1 << n).filter(|m| m.count_ones() as usize == a).collect();
    let mut families = Vec::new();
    fn pick(sets: &[u32], from: usize, left: usize, used: u32, chosen: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(chosen.clone());
            return;
        }
        for i in from..sets.len() {
            if sets[i] & used == 0 {
                chosen.push(sets[i]);
                pick(sets, i + 1, left - 1, used | sets[i], chosen, out);
                chosen.pop();
            }
        }
    }
    pick(&sets, 0, s, 0, &mut Vec::new(), &mut families);
    let masks: Vec<u32> = families.into_iter().map(|f| inner_pairs(n, f)).collect();
    Ok(average_over_graphs(n, &masks, p).0)
}

/// `alpha` by checking all `2^n` vertex subsets.
pub fn brute_independence_number(g: &Graph) -> Result<usize> {
    let n = g.n();
    guard("subset oracle vertices", n, MAX_SUBSET_N)?;
    let adj: Vec<u32> = (0..n).map(|u| (0..n).filter(|&v| g.has_edge(u, v)).fold(0, |m, v| m | 1 << v)).collect();
    let mut independent = vec![false; 1 << n];
    independent[0] = true;
    let mut best = 0;
    for set in 1u32..(1 << n) {
        let low = set.trailing_zeros() as usize;
        let rest = set & (set - 1);
        independent[set as usize] = independent[rest as usize] && adj[low] & rest == 0;
        if independent[set as usize] {
            best = best.max(set.count_ones() as usize);
        }
    }
    Ok(best)
}

/// `chi` by checking every set partition (restricted growth string).
pub fn brute_chromatic_number(g: &Graph) -> Result<usize> {
    let n = g.n();
    guard("colouring oracle vertices", n, MAX_COLOURING_N)?;
    if n == 0 {
        return Ok(0);
    }
    let edges: Vec<(usize, usize)> =
        (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|&(u, v)| g.has_edge(u, v)).collect();
    let mut best = n;
    let mut rgs = vec![0usize; n];
    fn go(i: usize, blocks: usize, rgs: &mut [usize], edges: &[(usize, usize)], best: &mut usize) {
        if i == rgs.len() {
            if edges.iter().all(|&(u, v)| rgs[u] != rgs[v]) {
                *best = (*best).min(blocks);
            }
            return;
        }
        for c in 0..=blocks {
            rgs[i] = c;
            go(i + 1, blocks.max(c + 1), rgs, edges, best);
        }
    }
    go(1, 1, &mut rgs, &edges, &mut best);
    Ok(best)
}

/// `(row sums, column sums)` to number of matrices with those margins.
pub type MarginHistogram = HashMap<(Vec<u64>, Vec<u64>), u64>;

/// Counts of every `(row sums, column sums)` pair over all `2^(m n)` 0-1
/// matrices of shape `m x n`.
pub fn margin_histogram(m: usize, n: usize) -> Result<MarginHistogram> {
    guard("matrix oracle cells", m * n, MAX_MATRIX_CELLS)?;
    let mut hist = HashMap::new();
    for bits in 0u32..(1u32 << (m * n)) {
        let rows = (0..m).map(|i| (bits >> (i * n) & ((1 << n) - 1)).count_ones() as u64).collect();
        let cols = (0..n).map(|j| (0..m).filter(|&i| bits >> (i * n + j) & 1 == 1).count() as u64).collect();
        *hist.entry((rows, cols)).or_insert(0) += 1;
    }
    Ok(hist)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratio(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn pair_bits_are_a_bijection() {
        for n in 2..=7 {
            let mut seen = vec![false; n * (n - 1) / 2];
            for u in 0..n {
                for v in u + 1..n {
                    let b = pair_bit(n, u, v) as usize;
                    assert!(!seen[b]);
                    seen[b] = true;
                }
            }
        }
    }

    #[test]
    fn equipartition_masks_count() {
        assert_eq!(ordered_equipartition_masks(4, 2).len(), 6);
        assert_eq!(ordered_equipartition_masks(5, 2).len(), 10);
        assert_eq!(ordered_equipartition_masks(6, 3).len(), 90);
    }

    #[test]
    fn first_moment_at_four_two() {
        let (z, z2) = all_graphs_equipartition_moments(4, 2, &ratio(1, 2)).unwrap();
        assert_eq!(z, ratio(3, 2));
        assert_eq!(z2, ratio(9, 2));
    }

    #[test]
    fn precolourings_by_hand() {
        assert_eq!(all_graphs_precolourings(4, 2, 2, &ratio(1, 2)).unwrap(), ratio(3, 4));
        assert_eq!(all_graphs_precolourings(6, 2, 2, &ratio(1, 2)).unwrap(), ratio(45, 4));
    }

    #[test]
    fn solvers_on_known_graphs() {
        assert_eq!(brute_chromatic_number(&Graph::cycle(5)).unwrap(), 3);
        assert_eq!(brute_chromatic_number(&Graph::complete(6)).unwrap(), 6);
        assert_eq!(brute_chromatic_number(&Graph::empty(6)).unwrap(), 1);
        assert_eq!(brute_independence_number(&Graph::cycle(7)).unwrap(), 3);
        assert_eq!(brute_independence_number(&Graph::empty(9)).unwrap(), 9);
    }

    #[test]
    fn histogram_totals() {
        let h = margin_histogram(2, 3).unwrap();
        assert_eq!(h.values().sum::<u64>(), 64);
        assert_eq!(h[&(vec![1, 1], vec![1, 1, 0])], 2);
        assert!(margin_histogram(5, 5).is_err());
    }
}
