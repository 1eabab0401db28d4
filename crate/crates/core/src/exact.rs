//! Exact factorials and binomials, plus their logarithms.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::One;

use crate::logvalue::ln_biguint;

/// Below this size `ln n!` comes from the exact integer; above it from the
/// Stirling series, whose truncation error (< 1/(1680 n^7)) is far below
/// double-precision resolution.
const EXACT_LN_FACTORIAL_BELOW: usize = 256;

/// Exact binomials are used for `ln C(n, k)` up to this `n` when `k` is not small.
const EXACT_LN_BINOMIAL_UP_TO: u64 = 4096;

pub fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// Falling factorial `n (n-1) ... (n-k+1)`.
pub fn falling(n: u64, k: u64) -> BigUint {
    assert!(k <= n);
    ((n - k + 1)..=n).fold(BigUint::one(), |acc, i| acc * i)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn choose2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

fn ln_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut acc = BigUint::one();
        let mut out = Vec::with_capacity(EXACT_LN_FACTORIAL_BELOW);
        out.push(0.0);
        for i in 1..EXACT_LN_FACTORIAL_BELOW as u64 {
            acc *= i;
            out.push(ln_biguint(&acc));
        }
        out
    })
}

pub fn ln_factorial(n: u64) -> f64 {
    if (n as usize) < EXACT_LN_FACTORIAL_BELOW {
        return ln_factorial_table()[n as usize];
    }
    let x = n as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0));
    (x + 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + series
}

pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    if k <= 64 {
        return (0..k).map(|i| ((n - i) as f64 / (i + 1) as f64).ln()).sum();
    }
    if n <= EXACT_LN_BINOMIAL_UP_TO {
        return ln_biguint(&binomial(n, k));
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}
