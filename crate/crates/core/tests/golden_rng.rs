//! Frozen `G(n, p)` samples. Set `CHROMRATE_BLESS=1` to regenerate.

use std::path::PathBuf;

use chromrate_core::graphs::{parse_edge_list, sample_gnp, write_edge_list};

const CASES: [(usize, f64, u64); 4] = [(12, 0.5, 0), (12, 0.5, 1), (20, 0.3, 42), (30, 0.9, 7)];

fn fixture(n: usize, p: f64, seed: u64) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("tests/fixtures/gnp_n{n}_p{p}_seed{seed}.txt"))
}

#[test]
fn samples_match_fixtures() {
    let bless = std::env::var_os("CHROMRATE_BLESS").is_some();
    for (n, p, seed) in CASES {
        let g = sample_gnp(n, p, seed).unwrap();
        let path = fixture(n, p, seed);
        if bless {
            let header = format!("# G(n = {n}, p = {p}), ChaCha8Rng seed {seed}\n");
            std::fs::write(&path, header + &write_edge_list(&g)).unwrap();
        }
        let stored = parse_edge_list(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(g, stored, "{}", path.display());
    }
}

#[test]
fn chacha8_stream_head() {
    use rand::{RngCore, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
    let head: Vec<u64> = (0..4).map(|_| rng.next_u64()).collect();
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/chacha8_seed0.txt");
    if std::env::var_os("CHROMRATE_BLESS").is_some() {
        let body: String = head.iter().map(|x| format!("{x}\n")).collect();
        std::fs::write(&path, body).unwrap();
    }
    let stored: Vec<u64> =
        std::fs::read_to_string(&path).unwrap().lines().map(|l| l.trim().parse().unwrap()).collect();
    assert_eq!(head, stored);
}
