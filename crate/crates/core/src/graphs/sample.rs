use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Graph;
use crate::error::{Error, Result};

/// Samples `G(n, p)` from `ChaCha8Rng::seed_from_u64(seed)`.
///
/// One `u64` is drawn per pair, pairs visited as `(0,1), (0,2), .., (1,2), ..`;
/// the pair is an edge iff its top 53 bits, read as a fraction of `2^53`,
/// fall below `p`. The stream layout is part of the reproducibility contract.
pub fn sample_gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            let x = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
            if x < p {
                g.add_edge(u, v).expect("u < v < n");
            }
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extremes() {
        assert_eq!(sample_gnp(30, 0.0, 7).unwrap().edge_count(), 0);
        assert_eq!(sample_gnp(30, 1.0, 7).unwrap().edge_count(), 435);
        assert!(sample_gnp(3, 1.5, 0).is_err());
        assert!(sample_gnp(3, f64::NAN, 0).is_err());
    }

    #[test]
    fn deterministic_per_seed() {
        let a = sample_gnp(50, 0.3, 11).unwrap();
        assert_eq!(a, sample_gnp(50, 0.3, 11).unwrap());
        assert_ne!(a, sample_gnp(50, 0.3, 12).unwrap());
    }

    #[test]
    fn edge_count_within_four_sigma() {
        let n = 10_000usize;
        let pairs = (n * (n - 1) / 2) as f64;
        let g = sample_gnp(n, 0.5, 2024).unwrap();
        let sigma = pairs.sqrt() / 2.0;
        assert!((g.edge_count() as f64 - pairs / 2.0).abs() < 4.0 * sigma);
    }
}
