//! First-moment calculus for ordered `k`-equipartitions, and the
//! independent-set / precolouring expectations behind the lower bound.
//!
//! An ordered `k`-equipartition of `n` vertices has `k1 = n mod k` parts of
//! size `ceil(n/k)` followed by `k2 = k - k1` parts of size `floor(n/k)`.
//! There are `P = n! / (ceil!^k1 floor!^k2)` of them, each with
//! `f = k1 C(ceil, 2) + k2 C(floor, 2)` forbidden pairs, so the expected
//! number of proper ones is `mu_k = P q^f`.

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Ratio};
use num_traits::{One, Pow};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{binomial, choose2, factorial, ln_binomial, ln_factorial};
use crate::logvalue::LogValue;
use crate::theory::{self, ModelParams};

/// `ln P` is taken from the exact integer up to this many vertices.
const EXACT_COUNT_MAX_N: u64 = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EquipartitionShape {
    n: u64,
    k: u64,
    ceil_size: u64,
    floor_size: u64,
    k1: u64,
    k2: u64,
    f: u64,
}

impl EquipartitionShape {
    pub fn new(n: u64, k: u64) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::InvalidShape { n: n as usize, k: k as usize });
        }
        let floor_size = n / k;
        let k1 = n % k;
        let ceil_size = if k1 == 0 { floor_size } else { floor_size + 1 };
        let k2 = k - k1;
        let f = k1 * choose2(ceil_size) + k2 * choose2(floor_size);
        Ok(EquipartitionShape { n, k, ceil_size, floor_size, k1, k2, f })
    }

    pub fn n(&self) -> u64 {
        self.n
    }
    pub fn k(&self) -> u64 {
        self.k
    }
    pub fn ceil_size(&self) -> u64 {
        self.ceil_size
    }
    pub fn floor_size(&self) -> u64 {
        self.floor_size
    }
    /// Number of parts of size `ceil(n/k)`; zero when `k` divides `n`.
    pub fn k1(&self) -> u64 {
        self.k1
    }
    pub fn k2(&self) -> u64 {
        self.k2
    }
    /// Forbidden pairs: vertex pairs sharing a part.
    pub fn forbidden_pairs(&self) -> u64 {
        self.f
    }
    /// `delta = n/k - floor(n/k) = k1 / k`.
    pub fn delta_frac(&self) -> Ratio<u64> {
        Ratio::new(self.k1, self.k)
    }

    /// Part sizes in ordered convention: large parts first.
    pub fn part_sizes(&self) -> Vec<u64> {
        let mut sizes = vec![self.ceil_size; self.k1 as usize];
        sizes.extend(std::iter::repeat_n(self.floor_size, self.k2 as usize));
        sizes
    }
}

pub fn equipartition_count(shape: &EquipartitionShape) -> BigUint {
    let denom = factorial(shape.ceil_size).pow(shape.k1 as u32) * factorial(shape.floor_size).pow(shape.k2 as u32);
    factorial(shape.n) / denom
}

pub fn ln_equipartition_count(shape: &EquipartitionShape) -> LogValue {
    if shape.n <= EXACT_COUNT_MAX_N {
        return LogValue::from_biguint(&equipartition_count(shape));
    }
    LogValue::from_ln(
        ln_factorial(shape.n)
            - shape.k1 as f64 * ln_factorial(shape.ceil_size)
            - shape.k2 as f64 * ln_factorial(shape.floor_size),
    )
}

/// `mu_k = P q^f` in log domain.
pub fn first_moment(shape: &EquipartitionShape, params: &ModelParams) -> LogValue {
    first_moment_ln_q(shape, params.ln_q())
}

/// `mu_k` from the edge probability alone. Unlike [`ModelParams`], this
/// places no requirement on the scale of `n`.
pub fn first_moment_for_p(shape: &EquipartitionShape, p: f64) -> Result<LogValue> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidProbability(p));
    }
    Ok(first_moment_ln_q(shape, (-p).ln_1p()))
}

fn first_moment_ln_q(shape: &EquipartitionShape, ln_q: f64) -> LogValue {
    ln_equipartition_count(shape) * LogValue::from_ln(shape.f as f64 * ln_q)
}

/// `mu_k` as an exact rational for rational `q`.
pub fn first_moment_exact(shape: &EquipartitionShape, q: &BigRational) -> BigRational {
    BigRational::from_integer(BigInt::from(equipartition_count(shape))) * q.clone().pow(shape.f)
}

/// The first-moment crossing with its certificate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FirstMomentThreshold {
    pub k: u64,
    /// `mu_{k-1} < 1`.
    pub mu_below: LogValue,
    /// `mu_k >= 1`.
    pub mu_at: LogValue,
    /// `n / k`, to compare against `gamma`.
    pub rate: f64,
}

/// Scans `k` from `ceil(n / (gamma + 1))` to the nearest `k` with
/// `mu_{k-1} < 1 <= mu_k`. Monotonicity of `mu_k` in `k` is not assumed; the
/// crossing is certified by both neighbours.
pub fn first_moment_threshold(params: &ModelParams) -> Result<FirstMomentThreshold> {
    let n = params.n();
    let mu = |k: u64| first_moment(&EquipartitionShape::new(n, k).expect("1 <= k <= n"), params);
    let g = theory::gamma(params);
    let start = if g + 1.0 > 0.0 { (n as f64 / (g + 1.0)).ceil() as u64 } else { 1 };
    let mut k = start.clamp(1, n);

    if mu(k) >= LogValue::ONE {
        while k > 1 && mu(k - 1) >= LogValue::ONE {
            k -= 1;
        }
        if k == 1 {
            return Err(Error::NoCrossing(n));
        }
    } else {
        while mu(k) < LogValue::ONE {
            k += 1;
            if k > n {
                return Err(Error::NoCrossing(n));
            }
        }
        if k == 1 {
            return Err(Error::NoCrossing(n));
        }
    }
    Ok(FirstMomentThreshold { k, mu_below: mu(k - 1), mu_at: mu(k), rate: n as f64 / k as f64 })
}

/// Expected number of independent `s`-sets: `C(n, s) q^{C(s, 2)}`.
pub fn expected_independent_sets(params: &ModelParams, s: u64) -> Result<LogValue> {
    let n = params.n();
    if s == 0 || s > n {
        return Err(Error::Precondition(format!("need 1 <= s <= n, got s = {s}, n = {n}")));
    }
    Ok(LogValue::from_ln(ln_binomial(n, s) + choose2(s) as f64 * params.ln_q()))
}

pub fn expected_independent_sets_exact(n: u64, s: u64, q: &BigRational) -> BigRational {
    BigRational::from_integer(BigInt::from(binomial(n, s))) * q.clone().pow(choose2(s))
}

fn check_precolouring(n: u64, a: u64, s: u64) -> Result<()> {
    if a < 2 || s < 1 || a.checked_mul(s).is_none_or(|as_| as_ > n) {
        return Err(Error::Precondition(format!(
            "need a >= 2, s >= 1 and a*s <= n; got a = {a}, s = {s}, n = {n}"
        )));
    }
    Ok(())
}

/// Expected number of unordered collections of `s` disjoint independent
/// `a`-sets: `n! q^{s C(a,2)} / (s! a!^s (n - a s)!)`.
pub fn expected_precolourings(params: &ModelParams, a: u64, s: u64) -> Result<LogValue> {
    let n = params.n();
    check_precolouring(n, a, s)?;
    let ln_count = if n <= EXACT_COUNT_MAX_N {
        LogValue::from_biguint(&precolouring_count(n, a, s)).ln()
    } else {
        ln_factorial(n) - ln_factorial(s) - s as f64 * ln_factorial(a) - ln_factorial(n - a * s)
    };
    Ok(LogValue::from_ln(ln_count + (s * choose2(a)) as f64 * params.ln_q()))
}

pub fn expected_precolourings_exact(n: u64, a: u64, s: u64, q: &BigRational) -> Result<BigRational> {
    check_precolouring(n, a, s)?;
    Ok(BigRational::from_integer(BigInt::from(precolouring_count(n, a, s))) * q.clone().pow(s * choose2(a)))
}

/// `n! / (s! a!^s (n - a s)!)`: unordered families of `s` disjoint `a`-sets.
fn precolouring_count(n: u64, a: u64, s: u64) -> BigUint {
    factorial(n) / (factorial(s) * factorial(a).pow(s as u32) * factorial(n - a * s))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundPipeline {
    pub a: u64,
    pub s: u64,
    pub x0: f64,
    pub expected_precolourings: LogValue,
}

/// `s = ceil((Delta - x0 + eps/2) n / (2 log_b n))`, the number of disjoint
/// independent `a`-sets any colouring with rate above `gamma - x0 + eps`
/// must contain, together with `E[#precolourings]` for that `(a, s)`.
///
/// Only meaningful for `p > 1 - 1/e^2` and `eps <= x0`; otherwise the plain
/// first-moment bound is the right tool and this returns
/// [`Error::NotApplicable`].
pub fn lower_bound_s(params: &ModelParams, eps: f64) -> Result<LowerBoundPipeline> {
    if !params.is_dense_regime() {
        return Err(Error::NotApplicable(format!("p = {} <= 1 - 1/e^2", params.p())));
    }
    let g = theory::gamma(params);
    let delta = theory::fractional_delta(g);
    let (x0, _) = theory::solve_x0(params);
    if !(eps > 0.0 && eps <= x0) {
        return Err(Error::NotApplicable(format!("need 0 < eps <= x0 = {x0}, got eps = {eps}")));
    }
    let a = theory::large_class_size(g);
    if a < 2 {
        return Err(Error::NotApplicable(format!("class size a = {a} < 2")));
    }
    let a = a as u64;
    let n = params.n();
    let s = ((delta - x0 + eps / 2.0) * n as f64 / (2.0 * params.log_b(n as f64))).ceil() as u64;
    let s = s.max(1);
    if a * s > n {
        return Err(Error::NotApplicable(format!("a*s = {} exceeds n = {n}", a * s)));
    }
    Ok(LowerBoundPipeline { a, s, x0, expected_precolourings: expected_precolourings(params, a, s)? })
}

/// `k = ceil(n / (gamma - x0 - theta))`, the colour count of the upper bound.
pub fn upper_k(params: &ModelParams, theta: f64) -> Result<u64> {
    let g = theory::gamma(params);
    let (x0, _) = theory::solve_x0(params);
    let rate = g - x0 - theta;
    if !(rate > 0.0) {
        return Err(Error::Precondition(format!("gamma - x0 - theta = {rate} is not positive")));
    }
    Ok(((params.n() as f64 / rate).ceil() as u64).clamp(1, params.n()))
}

/// `l = floor(n / (gamma - x0 + eps))`, the colour count of the lower bound.
pub fn lower_l(params: &ModelParams, eps: f64) -> Result<u64> {
    let g = theory::gamma(params);
    let (x0, _) = theory::solve_x0(params);
    let rate = g - x0 + eps;
    if !(rate > 0.0) {
        return Err(Error::Precondition(format!("gamma - x0 + eps = {rate} is not positive")));
    }
    Ok((params.n() as f64 / rate).floor() as u64)
}

/// `(ln mu_k - ln k1! - ln k2!)/n - (theta/2) ln b`.
///
/// `mu_k / (k1! k2!)` grows like `b^{theta n / 2} e^{o(n)}` at the upper-bound
/// `k`, so this margin should be bounded below by a vanishing sequence.
pub fn expectation_growth_margin(shape: &EquipartitionShape, params: &ModelParams, theta: f64) -> Result<f64> {
    if shape.n() != params.n() {
        return Err(Error::Precondition(format!(
            "shape has n = {}, params have n = {}",
            shape.n(),
            params.n()
        )));
    }
    let ln_mu = first_moment(shape, params).ln();
    let ln_orderings = ln_factorial(shape.k1) + ln_factorial(shape.k2);
    Ok((ln_mu - ln_orderings) / shape.n() as f64 - theta / 2.0 * params.ln_b())
}

/// `1/2` as a rational, the `q` of `G(n, 1/2)`.
pub fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn ratio(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    #[test]
    fn shape_bookkeeping() {
        for n in 1..=40u64 {
            for k in 1..=n {
                let s = EquipartitionShape::new(n, k).unwrap();
                assert_eq!(s.k1() * s.ceil_size() + s.k2() * s.floor_size(), n);
                assert_eq!(s.k1() + s.k2(), k);
                assert_eq!(s.k1(), n % k);
                assert_eq!(s.part_sizes().iter().sum::<u64>(), n);
            }
        }
        assert!(EquipartitionShape::new(4, 0).is_err());
        assert!(EquipartitionShape::new(4, 5).is_err());
    }

    #[test]
    fn forbidden_pairs_closed_form() {
        // f = n(n/k - 1)/2 + delta(1 - delta) k / 2
        for n in 2..=60u64 {
            for k in 1..=n {
                let s = EquipartitionShape::new(n, k).unwrap();
                let nk = n as f64 / k as f64;
                let delta = nk - nk.floor();
                let closed = n as f64 * (nk - 1.0) / 2.0 + delta * (1.0 - delta) * k as f64 / 2.0;
                assert!((closed - s.forbidden_pairs() as f64).abs() < 1e-9, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn counts_for_small_shapes() {
        let c = |n, k| equipartition_count(&EquipartitionShape::new(n, k).unwrap());
        assert_eq!(c(4, 2), BigUint::from(6u32));
        assert_eq!(c(3, 2), BigUint::from(3u32));
        for n in 1..=8u64 {
            assert_eq!(c(n, n), factorial(n));
        }
    }

    #[test]
    fn first_moment_examples() {
        let half = half();
        let s42 = EquipartitionShape::new(4, 2).unwrap();
        assert_eq!(first_moment_exact(&s42, &half), ratio(3, 2));
        let s63 = EquipartitionShape::new(6, 3).unwrap();
        assert_eq!(first_moment_exact(&s63, &half), ratio(45, 4));

        let params = ModelParams::new(4, 0.5).unwrap();
        assert!((first_moment(&s42, &params).value() - 1.5).abs() < 1e-14);

        assert!((first_moment_for_p(&s42, 0.5).unwrap().value() - 1.5).abs() < 1e-14);
        assert!(first_moment_for_p(&s42, 1.0).is_err());

        // q -> 1 drives mu_k to P.
        let sparse = ModelParams::new(4, 1e-12).unwrap();
        assert!((first_moment(&s42, &sparse).value() - 6.0).abs() < 1e-9);
    }

    #[test]
    fn large_n_log_route_matches_exact_route() {
        let shape = EquipartitionShape::new(2500, 300).unwrap();
        let exact = LogValue::from_biguint(&equipartition_count(&shape)).ln();
        let approx = ln_factorial(2500) - shape.k1() as f64 * ln_factorial(shape.ceil_size())
            - shape.k2() as f64 * ln_factorial(shape.floor_size());
        assert!((exact - approx).abs() < 1e-9 * exact);
        assert!((ln_equipartition_count(&shape).ln() - exact).abs() < 1e-9 * exact);
    }

    #[test]
    fn independent_set_examples() {
        let params = ModelParams::new(5, 0.5).unwrap();
        assert!((expected_independent_sets(&params, 1).unwrap().value() - 5.0).abs() < 1e-12);
        assert!((expected_independent_sets(&params, 3).unwrap().value() - 1.25).abs() < 1e-12);
        let all = expected_independent_sets(&params, 5).unwrap().ln();
        assert!((all - 10.0 * 0.5f64.ln()).abs() < 1e-12);
        assert_eq!(expected_independent_sets_exact(5, 3, &half()), ratio(5, 4));
        assert!(expected_independent_sets(&params, 0).is_err());
        assert!(expected_independent_sets(&params, 6).is_err());
    }

    #[test]
    fn precolouring_examples() {
        let half = half();
        assert_eq!(expected_precolourings_exact(4, 2, 2, &half).unwrap(), ratio(3, 4));
        assert_eq!(expected_precolourings_exact(6, 2, 2, &half).unwrap(), ratio(45, 4));
        let params = ModelParams::new(6, 0.5).unwrap();
        assert!((expected_precolourings(&params, 2, 2).unwrap().value() - 11.25).abs() < 1e-12);
        assert!(expected_precolourings(&params, 1, 2).is_err());
        assert!(expected_precolourings(&params, 4, 2).is_err());
        assert!(expected_precolourings(&params, 2, 0).is_err());
    }

    #[test]
    fn single_class_precolouring_is_independent_set_expectation() {
        for (n, p) in [(50u64, 0.5), (3000, 0.9), (100_000, 0.3)] {
            let params = ModelParams::new(n, p).unwrap();
            for a in [2u64, 5, 13] {
                let x = expected_precolourings(&params, a, 1).unwrap().ln();
                let y = expected_independent_sets(&params, a).unwrap().ln();
                assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0), "n={n} a={a}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn threshold_has_certificate() {
        for (n, p) in [(100u64, 0.5), (1000, 0.5), (10_000, 0.9), (5000, 0.2)] {
            let params = ModelParams::new(n, p).unwrap();
            let t = first_moment_threshold(&params).unwrap();
            assert!(t.mu_below < LogValue::ONE && t.mu_at >= LogValue::ONE);
        }
    }

    #[test]
    fn threshold_at_100_matches_exact_rational_scan() {
        // Independent scan with exact rationals: smallest k with P >= 2^f.
        let exact_k = (1..=100u64)
            .find(|&k| {
                let shape = EquipartitionShape::new(100, k).unwrap();
                first_moment_exact(&shape, &half()) >= BigRational::one()
            })
            .unwrap();
        let params = ModelParams::new(100, 0.5).unwrap();
        let t = first_moment_threshold(&params).unwrap();
        assert_eq!(t.k, exact_k);
        assert_eq!(t.k, 13);
    }

    #[test]
    fn threshold_rate_trends_towards_gamma() {
        let mut gaps = Vec::new();
        for n in [1_000u64, 10_000, 100_000, 1_000_000] {
            let params = ModelParams::new(n, 0.5).unwrap();
            let t = first_moment_threshold(&params).unwrap();
            gaps.push((t.rate - theory::gamma(&params)).abs());
        }
        assert!(gaps.last().unwrap() < gaps.first().unwrap(), "{gaps:?}");
    }

    #[test]
    fn lower_bound_preconditions() {
        let sparse = ModelParams::new(1_000_000, 0.5).unwrap();
        assert!(matches!(lower_bound_s(&sparse, 0.01), Err(Error::NotApplicable(_))));
        let dense = ModelParams::new(1_000_000, 0.95).unwrap();
        let (x0, _) = theory::solve_x0(&dense);
        assert!(matches!(lower_bound_s(&dense, x0 + 0.01), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn lower_bound_at_full_delta_is_minimal_wedge() {
        // Find a dense n with x0 = Delta so that s = ceil((eps/2) n / (2 log_b n)).
        for n in (1000u64..200_000).step_by(997) {
            let params = ModelParams::new(n, 0.99).unwrap();
            let (x0, case) = theory::solve_x0(&params);
            if case != theory::RootCase::FullDelta || x0 < 1e-3 {
                continue;
            }
            let eps = 1e-4;
            let lb = lower_bound_s(&params, eps).unwrap();
            let wedge = ((eps / 2.0) * n as f64 / (2.0 * params.log_b(n as f64))).ceil() as u64;
            assert_eq!(lb.s, wedge.max(1));
            assert!(lb.a * lb.s <= n);
            return;
        }
        panic!("no FullDelta point found");
    }

    #[test]
    fn growth_margin_definitional_at_zero_theta() {
        let params = ModelParams::new(10_000, 0.5).unwrap();
        let k = upper_k(&params, 0.0).unwrap();
        let shape = EquipartitionShape::new(10_000, k).unwrap();
        let m = expectation_growth_margin(&shape, &params, 0.0).unwrap();
        let direct = (first_moment(&shape, &params).ln() - ln_factorial(shape.k1()) - ln_factorial(shape.k2()))
            / 10_000.0;
        assert!((m - direct).abs() < 1e-15);
        let other = ModelParams::new(9_999, 0.5).unwrap();
        assert!(expectation_growth_margin(&shape, &other, 0.0).is_err());
    }

    #[test]
    fn exact_first_moment_is_dyadic_at_half() {
        let shape = EquipartitionShape::new(12, 4).unwrap();
        let mu = first_moment_exact(&shape, &half());
        assert_eq!(mu.denom().to_u64().unwrap().count_ones(), 1);
    }
}
