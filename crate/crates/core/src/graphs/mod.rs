//! Graphs on vertex set `0..n` stored as per-vertex bitsets, seeded `G(n, p)`
//! sampling and exact combinatorial solvers.

mod equipartition;
mod experiment;
mod io;
mod sample;
mod solvers;

pub use equipartition::{count_proper_equipartitions, for_each_equipartition, MAX_EQUIPARTITION_N};
pub use experiment::{
    concentration_experiment, equipartition_monte_carlo, ConcentrationStats, MonteCarloSummary, RateBand, SampleRecord,
};
pub use io::{parse_edge_list, write_edge_list};
pub use sample::sample_gnp;
pub use solvers::{
    chromatic_number, chromatic_number_with, clique_number, dsatur_colouring, independence_number,
    maximum_independent_set,
    independence_number_with, SolverLimits,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::EquipartitionShape;

pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

/// Indices of the set bits, ascending.
pub(crate) fn ones(bits: &[u64]) -> impl Iterator<Item = usize> + '_ {
    bits.iter().enumerate().flat_map(|(w, &word)| {
        let mut rest = word;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let tz = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(w * 64 + tz)
        })
    })
}

pub(crate) fn first_one(bits: &[u64]) -> Option<usize> {
    bits.iter().position(|&w| w != 0).map(|i| i * 64 + bits[i].trailing_zeros() as usize)
}

pub(crate) fn popcount(bits: &[u64]) -> usize {
    bits.iter().map(|w| w.count_ones() as usize).sum()
}

/// Simple undirected graph with a symmetric bitset adjacency.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
    edge_count: usize,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph").field("n", &self.n).field("edges", &self.edges().collect::<Vec<_>>()).finish()
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        let words = words_for(n);
        Graph { n, words, adj: vec![0; n * words], edge_count: 0 }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.insert(u, v);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            let v = (u + 1) % n;
            if u != v && !g.has_edge(u, v) {
                g.insert(u, v);
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 1..n {
            g.insert(u - 1, u);
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Adds `uv`; adding an existing edge is a no-op.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::Precondition(format!("edge ({u}, {v}) out of range for n = {}", self.n)));
        }
        if u == v {
            return Err(Error::Precondition(format!("self-loop at vertex {u}")));
        }
        if !self.has_edge(u, v) {
            self.insert(u, v);
        }
        Ok(())
    }

    fn insert(&mut self, u: usize, v: usize) {
        self.adj[u * self.words + v / 64] |= 1 << (v % 64);
        self.adj[v * self.words + u / 64] |= 1 << (u % 64);
        self.edge_count += 1;
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn neighbours(&self, u: usize) -> &[u64] {
        &self.adj[u * self.words..(u + 1) * self.words]
    }

    pub fn degree(&self, u: usize) -> usize {
        popcount(self.neighbours(u))
    }

    /// Edges `(u, v)` with `u < v`, lexicographically.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| ones(self.neighbours(u)).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    g.insert(u, v);
                }
            }
        }
        g
    }

    /// True when no edge joins two vertices of `set` (given as vertex indices).
    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter().enumerate().all(|(i, &u)| set[i + 1..].iter().all(|&v| !self.has_edge(u, v)))
    }
}

/// An ordered `k`-equipartition: parts `0..k1` have size `ceil(n/k)`, the
/// rest `floor(n/k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    assignment: Vec<u32>,
    part_sizes: Vec<u64>,
    k: usize,
}

impl Partition {
    /// `assignment[v]` is the part of vertex `v`.
    pub fn from_assignment(assignment: Vec<u32>, k: usize) -> Result<Self> {
        let n = assignment.len();
        let shape = EquipartitionShape::new(n as u64, k as u64)?;
        let mut part_sizes = vec![0u64; k];
        for &j in &assignment {
            let slot = part_sizes
                .get_mut(j as usize)
                .ok_or_else(|| Error::Precondition(format!("part index {j} out of range for k = {k}")))?;
            *slot += 1;
        }
        if part_sizes != shape.part_sizes() {
            return Err(Error::Precondition(format!(
                "part sizes {part_sizes:?} are not the ordered shape {:?}",
                shape.part_sizes()
            )));
        }
        Ok(Partition { assignment, part_sizes, k })
    }

    /// Builds from explicit parts, listed in order.
    pub fn from_parts(n: usize, parts: &[Vec<usize>]) -> Result<Self> {
        let mut assignment = vec![u32::MAX; n];
        for (j, part) in parts.iter().enumerate() {
            for &v in part {
                if v >= n || assignment[v] != u32::MAX {
                    return Err(Error::Precondition(format!("vertex {v} repeated or out of range")));
                }
                assignment[v] = j as u32;
            }
        }
        if assignment.contains(&u32::MAX) {
            return Err(Error::Precondition("parts do not cover every vertex".into()));
        }
        Partition::from_assignment(assignment, parts.len())
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn assignment(&self) -> &[u32] {
        &self.assignment
    }
    pub fn part_sizes(&self) -> &[u64] {
        &self.part_sizes
    }
    pub fn shape(&self) -> EquipartitionShape {
        EquipartitionShape::new(self.n() as u64, self.k as u64).expect("validated on construction")
    }

    pub fn parts(&self) -> Vec<Vec<usize>> {
        let mut parts = vec![Vec::new(); self.k];
        for (v, &j) in self.assignment.iter().enumerate() {
            parts[j as usize].push(v);
        }
        parts
    }

    /// True when every part is independent in `g`.
    pub fn is_proper(&self, g: &Graph) -> bool {
        g.edges().all(|(u, v)| self.assignment[u] != self.assignment[v])
    }
}
