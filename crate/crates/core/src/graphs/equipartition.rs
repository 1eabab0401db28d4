//! Enumeration of ordered equipartitions and exact counting of the proper
//! ones in a given graph (a realization of `Z_k`).

use num_bigint::BigUint;

use super::Graph;
use crate::error::{Error, Result};
use crate::exact::factorial;
use crate::moments::EquipartitionShape;

/// Largest `n` accepted by [`count_proper_equipartitions`].
pub const MAX_EQUIPARTITION_N: usize = 16;

/// Calls `visit` with every ordered equipartition of `shape`, as a
/// vertex-to-part assignment, in lexicographic order of assignments.
pub fn for_each_equipartition(shape: &EquipartitionShape, mut visit: impl FnMut(&[u32])) {
    let mut remaining: Vec<u64> = shape.part_sizes();
    let mut assignment = vec![0u32; shape.n() as usize];
    fn go(v: usize, assignment: &mut [u32], remaining: &mut [u64], visit: &mut dyn FnMut(&[u32])) {
        if v == assignment.len() {
            visit(assignment);
            return;
        }
        for j in 0..remaining.len() {
            if remaining[j] > 0 {
                remaining[j] -= 1;
                assignment[v] = j as u32;
                go(v + 1, assignment, remaining, visit);
                remaining[j] += 1;
            }
        }
    }
    go(0, &mut assignment, &mut remaining, &mut visit);
}

struct Block {
    members: u32,
    room: u64,
}

struct Counter {
    neighbours: Vec<u32>,
    blocks: Vec<Block>,
    big: (u64, u64),
    small: (u64, u64),
    big_size: u64,
    small_size: u64,
}

impl Counter {
    /// Unordered partitions into labelled-size blocks, each block opened by
    /// its lowest vertex.
    fn count(&mut self, v: usize) -> u64 {
        if v == self.neighbours.len() {
            return 1;
        }
        let nb = self.neighbours[v];
        let mut total = 0;
        for i in 0..self.blocks.len() {
            if self.blocks[i].room > 0 && self.blocks[i].members & nb == 0 {
                self.blocks[i].room -= 1;
                self.blocks[i].members |= 1 << v;
                total += self.count(v + 1);
                self.blocks[i].members &= !(1 << v);
                self.blocks[i].room += 1;
            }
        }
        if self.big.0 < self.big.1 {
            self.big.0 += 1;
            total += self.open(v, self.big_size);
            self.big.0 -= 1;
        }
        if self.small.0 < self.small.1 {
            self.small.0 += 1;
            total += self.open(v, self.small_size);
            self.small.0 -= 1;
        }
        total
    }

    fn open(&mut self, v: usize, size: u64) -> u64 {
        self.blocks.push(Block { members: 1 << v, room: size - 1 });
        let c = self.count(v + 1);
        self.blocks.pop();
        c
    }
}

/// Number of ordered `k`-equipartitions of `g` whose parts are independent.
///
/// Counts unordered partitions into `k1` large and `k2` small independent
/// blocks, then multiplies by `k1! k2!` for the orderings within each size.
pub fn count_proper_equipartitions(g: &Graph, k: usize) -> Result<BigUint> {
    let n = g.n();
    if n > MAX_EQUIPARTITION_N {
        return Err(Error::ScaleGuard {
            what: "count_proper_equipartitions vertices",
            requested: n as u128,
            limit: MAX_EQUIPARTITION_N as u128,
        });
    }
    let shape = EquipartitionShape::new(n as u64, k as u64)?;
    let neighbours = (0..n).map(|v| g.neighbours(v)[0] as u32).collect();
    let mut counter = Counter {
        neighbours,
        blocks: Vec::with_capacity(k),
        big: (0, shape.k1()),
        small: (0, shape.k2()),
        big_size: shape.ceil_size(),
        small_size: shape.floor_size(),
    };
    let unordered = counter.count(0);
    Ok(BigUint::from(unordered) * factorial(shape.k1()) * factorial(shape.k2()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{sample_gnp, Partition};
    use crate::moments::equipartition_count;

    fn plain_count(g: &Graph, k: usize) -> BigUint {
        let shape = EquipartitionShape::new(g.n() as u64, k as u64).unwrap();
        let mut c = 0u64;
        for_each_equipartition(&shape, |a| {
            if g.edges().all(|(u, v)| a[u] != a[v]) {
                c += 1;
            }
        });
        BigUint::from(c)
    }

    #[test]
    fn enumeration_size_is_p() {
        for n in 1..=8u64 {
            for k in 1..=n {
                let shape = EquipartitionShape::new(n, k).unwrap();
                let mut count = 0u64;
                for_each_equipartition(&shape, |a| {
                    assert!(Partition::from_assignment(a.to_vec(), k as usize).is_ok());
                    count += 1;
                });
                assert_eq!(BigUint::from(count), equipartition_count(&shape));
            }
        }
    }

    #[test]
    fn empty_graph_gives_p() {
        for n in 1..=8usize {
            for k in 1..=n {
                let shape = EquipartitionShape::new(n as u64, k as u64).unwrap();
                assert_eq!(count_proper_equipartitions(&Graph::empty(n), k).unwrap(), equipartition_count(&shape));
            }
        }
    }

    #[test]
    fn complete_graph_gives_zero_below_n() {
        for k in 1..6 {
            assert_eq!(count_proper_equipartitions(&Graph::complete(6), k).unwrap(), BigUint::from(0u32));
        }
        assert_eq!(count_proper_equipartitions(&Graph::complete(6), 6).unwrap(), factorial(6));
    }

    #[test]
    fn path_on_four_vertices() {
        // Only {0,2 | 1,3} and {1,3 | 0,2} avoid the edges 01, 12, 23.
        assert_eq!(count_proper_equipartitions(&Graph::path(4), 2).unwrap(), BigUint::from(2u32));
    }

    #[test]
    fn matches_plain_enumeration() {
        for seed in 0..40 {
            let n = 5 + (seed as usize % 5);
            let g = sample_gnp(n, 0.3, seed).unwrap();
            for k in 1..=n {
                assert_eq!(count_proper_equipartitions(&g, k).unwrap(), plain_count(&g, k), "seed {seed} k {k}");
            }
        }
    }

    #[test]
    fn scale_guard() {
        assert!(matches!(count_proper_equipartitions(&Graph::empty(17), 4), Err(Error::ScaleGuard { .. })));
    }
}
