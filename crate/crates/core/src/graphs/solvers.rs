//! Exact `alpha` and `chi`. Both refuse inputs above configurable limits
//! rather than falling back to heuristics.

use serde::{Deserialize, Serialize};

use super::{first_one, ones, popcount, Graph};
use crate::error::{Error, Result};

/// Colour masks are `u128`, so no limit may exceed this.
const MAX_COLOURS: usize = 128;

/// Size limits for the exact solvers. [`SolverLimits::from_env`] reads
/// `CHROMRATE_MAX_ALPHA_N`, `CHROMRATE_MAX_CHI_N` and
/// `CHROMRATE_CHI_NODE_LIMIT` over the defaults.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverLimits {
    pub max_alpha_n: usize,
    pub max_chi_n: usize,
    /// Backtracking nodes allowed per `chi` call before giving up with bounds.
    pub chi_node_limit: u64,
}

impl Default for SolverLimits {
    fn default() -> Self {
        SolverLimits { max_alpha_n: 250, max_chi_n: 80, chi_node_limit: 50_000_000 }
    }
}

impl SolverLimits {
    pub fn from_env() -> Result<Self> {
        fn read<T: std::str::FromStr>(key: &str, default: T) -> Result<T> {
            match std::env::var(key) {
                Ok(s) => s.trim().parse().map_err(|_| Error::Precondition(format!("{key} = `{s}` is not a valid limit"))),
                Err(_) => Ok(default),
            }
        }
        let d = SolverLimits::default();
        let limits = SolverLimits {
            max_alpha_n: read("CHROMRATE_MAX_ALPHA_N", d.max_alpha_n)?,
            max_chi_n: read("CHROMRATE_MAX_CHI_N", d.max_chi_n)?,
            chi_node_limit: read("CHROMRATE_CHI_NODE_LIMIT", d.chi_node_limit)?,
        };
        if limits.max_chi_n > MAX_COLOURS {
            return Err(Error::Precondition(format!("CHROMRATE_MAX_CHI_N may not exceed {MAX_COLOURS}")));
        }
        Ok(limits)
    }
}

/// Branch and bound for a maximum clique; greedy colouring of the candidate
/// set bounds each branch.
struct CliqueSearch<'a> {
    g: &'a Graph,
    current: Vec<usize>,
    best: Vec<usize>,
}

impl CliqueSearch<'_> {
    fn run(g: &Graph) -> Vec<usize> {
        let mut s = CliqueSearch { g, current: Vec::new(), best: Vec::new() };
        let mut all = vec![0u64; super::words_for(g.n())];
        for v in 0..g.n() {
            all[v / 64] |= 1 << (v % 64);
        }
        if g.n() > 0 {
            s.expand(all);
        }
        s.best
    }

    /// Vertices of `cand` in colour-class order with the running colour count.
    fn colour_sort(&self, cand: &[u64]) -> (Vec<usize>, Vec<usize>) {
        let mut order = Vec::with_capacity(popcount(cand));
        let mut bounds = Vec::with_capacity(order.capacity());
        let mut uncoloured = cand.to_vec();
        let mut colour = 0;
        while uncoloured.iter().any(|&w| w != 0) {
            colour += 1;
            let mut q = uncoloured.clone();
            while let Some(v) = first_one(&q) {
                uncoloured[v / 64] &= !(1 << (v % 64));
                for (qw, nw) in q.iter_mut().zip(self.g.neighbours(v)) {
                    *qw &= !nw;
                }
                q[v / 64] &= !(1 << (v % 64));
                order.push(v);
                bounds.push(colour);
            }
        }
        (order, bounds)
    }

    fn expand(&mut self, mut cand: Vec<u64>) {
        let (order, bounds) = self.colour_sort(&cand);
        for i in (0..order.len()).rev() {
            if self.current.len() + bounds[i] <= self.best.len() {
                return;
            }
            let v = order[i];
            self.current.push(v);
            let next: Vec<u64> = cand.iter().zip(self.g.neighbours(v)).map(|(c, nb)| c & nb).collect();
            if next.iter().all(|&w| w == 0) {
                if self.current.len() > self.best.len() {
                    self.best = self.current.clone();
                }
            } else {
                self.expand(next);
            }
            self.current.pop();
            cand[v / 64] &= !(1 << (v % 64));
        }
    }
}

pub fn clique_number(g: &Graph) -> usize {
    CliqueSearch::run(g).len()
}

pub fn independence_number(g: &Graph) -> Result<usize> {
    independence_number_with(g, &SolverLimits::default())
}

pub fn independence_number_with(g: &Graph, limits: &SolverLimits) -> Result<usize> {
    Ok(maximum_independent_set(g, limits)?.len())
}

/// A maximum independent set, as ascending vertex indices.
pub fn maximum_independent_set(g: &Graph, limits: &SolverLimits) -> Result<Vec<usize>> {
    if g.n() > limits.max_alpha_n {
        return Err(Error::SolverLimit { solver: "independence_number", n: g.n(), limit: limits.max_alpha_n });
    }
    let mut set = CliqueSearch::run(&g.complement());
    set.sort_unstable();
    Ok(set)
}

/// Greedy DSATUR colouring; `result[v]` is the colour of `v`.
pub fn dsatur_colouring(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut colour = vec![usize::MAX; n];
    let mut forbidden: Vec<Vec<bool>> = vec![vec![false; n + 1]; n];
    let mut saturation = vec![0usize; n];
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| colour[v] == usize::MAX)
            .max_by_key(|&v| (saturation[v], g.degree(v), std::cmp::Reverse(v)))
            .expect("an uncoloured vertex remains");
        let c = (0..=n).find(|&c| !forbidden[v][c]).expect("n + 1 colours suffice");
        colour[v] = c;
        for w in ones(g.neighbours(v)) {
            if !forbidden[w][c] {
                forbidden[w][c] = true;
                saturation[w] += 1;
            }
        }
    }
    colour
}

/// Backtracking `k`-colourability test in DSATUR order. A new colour is only
/// ever the next unused index, which removes colour-permutation symmetry.
struct Colouring<'a> {
    g: &'a Graph,
    k: usize,
    colour: Vec<usize>,
    saturation: Vec<u128>,
    counts: Vec<u16>,
    used: usize,
    nodes: u64,
    node_limit: u64,
}

impl Colouring<'_> {
    fn assign(&mut self, v: usize, c: usize) {
        self.colour[v] = c;
        for w in ones(self.g.neighbours(v)) {
            let slot = &mut self.counts[w * self.k + c];
            *slot += 1;
            if *slot == 1 {
                self.saturation[w] |= 1 << c;
            }
        }
    }

    fn unassign(&mut self, v: usize, c: usize) {
        self.colour[v] = usize::MAX;
        for w in ones(self.g.neighbours(v)) {
            let slot = &mut self.counts[w * self.k + c];
            *slot -= 1;
            if *slot == 0 {
                self.saturation[w] &= !(1 << c);
            }
        }
    }

    /// `None` when the node budget runs out.
    fn search(&mut self, coloured: usize) -> Option<bool> {
        let n = self.g.n();
        if coloured == n {
            return Some(true);
        }
        self.nodes += 1;
        if self.nodes > self.node_limit {
            return None;
        }
        let v = (0..n)
            .filter(|&v| self.colour[v] == usize::MAX)
            .max_by_key(|&v| (self.saturation[v].count_ones(), self.g.degree(v), std::cmp::Reverse(v)))
            .expect("an uncoloured vertex remains");
        let used_mask = if self.used == MAX_COLOURS { u128::MAX } else { (1u128 << self.used) - 1 };
        let mut allowed = used_mask & !self.saturation[v];
        while allowed != 0 {
            let c = allowed.trailing_zeros() as usize;
            allowed &= allowed - 1;
            self.assign(v, c);
            let r = self.search(coloured + 1);
            self.unassign(v, c);
            if r != Some(false) {
                return r;
            }
        }
        if self.used < self.k {
            let c = self.used;
            self.used += 1;
            self.assign(v, c);
            let r = self.search(coloured + 1);
            self.unassign(v, c);
            self.used -= 1;
            if r != Some(false) {
                return r;
            }
        }
        Some(false)
    }
}

pub fn chromatic_number(g: &Graph) -> Result<usize> {
    chromatic_number_with(g, &SolverLimits::default())
}

/// Exact `chi`: starts from `max(omega, ceil(n / alpha))` and tests each `k`
/// below the DSATUR upper bound. A spent node budget yields
/// [`Error::SearchBudget`] carrying the bounds established so far.
pub fn chromatic_number_with(g: &Graph, limits: &SolverLimits) -> Result<usize> {
    let n = g.n();
    if n > limits.max_chi_n.min(MAX_COLOURS) {
        return Err(Error::SolverLimit { solver: "chromatic_number", n, limit: limits.max_chi_n.min(MAX_COLOURS) });
    }
    if n == 0 {
        return Ok(0);
    }
    let upper = dsatur_colouring(g).into_iter().max().expect("n > 0") + 1;
    let alpha = independence_number_with(g, &SolverLimits { max_alpha_n: n, ..*limits })?;
    let lower = clique_number(g).max(n.div_ceil(alpha));
    let mut nodes = 0u64;
    for k in lower..upper {
        let mut search = Colouring {
            g,
            k,
            colour: vec![usize::MAX; n],
            saturation: vec![0; n],
            counts: vec![0; n * k],
            used: 0,
            nodes,
            node_limit: limits.chi_node_limit,
        };
        let outcome = search.search(0);
        nodes = search.nodes;
        match outcome {
            Some(true) => return Ok(k),
            Some(false) => {}
            None => return Err(Error::SearchBudget { lower: k, upper }),
        }
    }
    Ok(upper)
}
