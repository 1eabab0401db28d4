//! Closed-form quantities for the chromatic number of `G(n, p)` with constant `p`.
//!
//! With `q = 1 - p` and `b = 1/q`, the average colour-class size scale is
//!
//! ```text
//! gamma = 2 log_b n - 2 log_b log_b n - 2 log_b 2
//! ```
//!
//! and the colouring rate `n / chi(G)` concentrates at `gamma - x0`, where `x0`
//! is the smallest non-negative `x` with `phi(x) <= 0` for the convex function
//!
//! ```text
//! phi(x) = (1 - Delta + x) log_b(1 - Delta + x) + (1 - Delta)(Delta - x) / 2,
//! ```
//!
//! `Delta` being the fractional part of `gamma`. All interval endpoints in a
//! [`TheoryReport`] are asymptotic predictions: the `o(1)` corrections are not
//! quantified and no finite-`n` error bar is attached.

mod lemmas;
pub mod precise;

pub use lemmas::{verify_lemma_constants, LemmaConstants, LemmaId, LemmaSweep, LemmaTally, LemmaViolation};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `p` above which `x0` may be positive: `1 - 1/e^2`, i.e. `ln b > 2`.
pub const DENSE_THRESHOLD_P: f64 = 1.0 - 0.135_335_283_236_612_7;

const BISECTION_MAX_ITER: usize = 200;
const BISECTION_TOL: f64 = 1e-12;
/// Slack on the `1 - Delta >= 2 / ln b` test for the `FullDelta` case.
const CASE_TOL: f64 = 1e-12;

/// The pair `(n, p)` with cached `q`, `b` and `ln b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    n: u64,
    p: f64,
    q: f64,
    b: f64,
    ln_b: f64,
}

impl ModelParams {
    /// Fails unless `0 < p < 1` and `log_b n > 1`.
    pub fn new(n: u64, p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidProbability(p));
        }
        let q = 1.0 - p;
        let ln_b = -(-p).ln_1p();
        let params = ModelParams { n, p, q, b: 1.0 / q, ln_b };
        let log_b_n = params.log_b(n as f64);
        if !(log_b_n > 1.0) {
            return Err(Error::DegenerateScale { n, log_b_n });
        }
        Ok(params)
    }

    pub fn n(&self) -> u64 {
        self.n
    }
    pub fn p(&self) -> f64 {
        self.p
    }
    pub fn q(&self) -> f64 {
        self.q
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn ln_b(&self) -> f64 {
        self.ln_b
    }
    /// `ln q = -ln b`.
    pub fn ln_q(&self) -> f64 {
        -self.ln_b
    }

    pub fn log_b(&self, x: f64) -> f64 {
        x.ln() / self.ln_b
    }

    /// True when `p > 1 - 1/e^2`, the regime where `x0` can be positive.
    pub fn is_dense_regime(&self) -> bool {
        self.ln_b > 2.0
    }
}

pub fn gamma(params: &ModelParams) -> f64 {
    let ln_n = (params.n as f64).ln();
    let log_b_n = ln_n / params.ln_b;
    2.0 * (ln_n - log_b_n.ln() - std::f64::consts::LN_2) / params.ln_b
}

/// `Delta = gamma - floor(gamma)`.
pub fn fractional_delta(gamma: f64) -> f64 {
    gamma - gamma.floor()
}

/// `alpha0 = gamma + 2 / ln b + 1`, the centre of the independence-number law.
pub fn alpha0(params: &ModelParams) -> f64 {
    gamma(params) + 2.0 / params.ln_b + 1.0
}

/// `a = floor(gamma) + 1`, the size of the large colour classes.
pub fn large_class_size(gamma: f64) -> i64 {
    gamma.floor() as i64 + 1
}

/// Where `x0` sits relative to `[0, Delta]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RootCase {
    ZeroRoot,
    InteriorRoot,
    FullDelta,
}

/// `phi` for a fixed `(Delta, ln b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiCurve {
    delta: f64,
    ln_b: f64,
}

impl PhiCurve {
    pub fn new(delta: f64, ln_b: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&delta) {
            return Err(Error::Precondition(format!("Delta = {delta} outside [0, 1)")));
        }
        if !(ln_b > 0.0) {
            return Err(Error::Precondition(format!("ln b = {ln_b} must be positive")));
        }
        Ok(PhiCurve { delta, ln_b })
    }

    pub fn for_params(params: &ModelParams) -> Self {
        PhiCurve { delta: fractional_delta(gamma(params)), ln_b: params.ln_b }
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn ln_b(&self) -> f64 {
        self.ln_b
    }

    /// `phi(x)`; the domain is `1 - Delta + x > 0`.
    pub fn value(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        Ok(self.value_unchecked(x))
    }

    /// `phi'(x) = log_b(1 - Delta + x) + 1/ln b - (1 - Delta)/2`.
    pub fn derivative(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        Ok(((x - self.delta).ln_1p() + 1.0) / self.ln_b - (1.0 - self.delta) / 2.0)
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        if 1.0 - self.delta + x <= 0.0 {
            return Err(Error::Precondition(format!(
                "phi undefined at x = {x}: 1 - Delta + x <= 0"
            )));
        }
        Ok(())
    }

    // ln_1p(x - Delta) keeps full relative accuracy when x is close to Delta.
    pub(crate) fn value_unchecked(&self, x: f64) -> f64 {
        let base = 1.0 - self.delta + x;
        base * (x - self.delta).ln_1p() / self.ln_b + (1.0 - self.delta) * (self.delta - x) / 2.0
    }

    /// The smallest non-negative solution of `phi(x) <= 0`, with its case.
    pub fn root(&self) -> (f64, RootCase) {
        let delta = self.delta;
        if delta == 0.0 {
            return (0.0, RootCase::ZeroRoot);
        }
        // phi(0) = (1 - Delta) [ln(1 - Delta) / ln b + Delta / 2]; the factored
        // form avoids cancelling the two O(Delta) terms against each other.
        let phi0_sign = (-delta).ln_1p() / self.ln_b + delta / 2.0;
        if phi0_sign <= 0.0 {
            return (0.0, RootCase::ZeroRoot);
        }
        if 1.0 - delta >= 2.0 / self.ln_b - CASE_TOL {
            return (delta, RootCase::FullDelta);
        }
        // phi(0) > 0 and phi'(Delta) > 0, so phi has its minimum inside (0, Delta)
        // with a negative value there; bisect on [0, argmin].
        let argmin = ((self.ln_b * (1.0 - delta) / 2.0 - 1.0).exp() - 1.0 + delta).clamp(0.0, delta);
        if self.value_unchecked(argmin) >= 0.0 {
            // Rounding has flattened the dip; by convexity phi > 0 left of argmin.
            return (argmin, RootCase::InteriorRoot);
        }
        let (mut lo, mut hi) = (0.0f64, argmin);
        for _ in 0..BISECTION_MAX_ITER {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.value_unchecked(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= BISECTION_TOL * 1e-3 {
                break;
            }
        }
        (hi, RootCase::InteriorRoot)
    }
}

/// `phi(x)` for the `Delta` and `b` of `params`, with `delta` supplied explicitly.
pub fn phi(x: f64, delta: f64, params: &ModelParams) -> Result<f64> {
    PhiCurve::new(delta, params.ln_b)?.value(x)
}

pub fn phi_prime(x: f64, delta: f64, params: &ModelParams) -> Result<f64> {
    PhiCurve::new(delta, params.ln_b)?.derivative(x)
}

pub fn solve_x0(params: &ModelParams) -> (f64, RootCase) {
    PhiCurve::for_params(params).root()
}

/// Every closed-form quantity for one `(n, p, eps)`.
///
/// Serialises to exactly the fields `n, p, q, b, gamma, delta, x0, case,
/// alpha0, a, rate_lo, rate_hi, chi_lo, chi_hi`. The `chi` endpoints are
/// `null` when the matching rate endpoint is not positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoryReport {
    pub n: u64,
    pub p: f64,
    pub q: f64,
    pub b: f64,
    pub gamma: f64,
    pub delta: f64,
    pub x0: f64,
    pub case: RootCase,
    pub alpha0: f64,
    pub a: i64,
    pub rate_lo: f64,
    pub rate_hi: f64,
    pub chi_lo: Option<f64>,
    pub chi_hi: Option<f64>,
}

/// The simpler interval obtained by replacing `x0` with its worst case:
/// `x0 = 0` when `p <= 1 - 1/e^2`, otherwise `0 <= x0 <= 1 - 2/ln b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorollaryInterval {
    pub rate_lo: f64,
    pub rate_hi: f64,
}

pub fn theory_report(params: &ModelParams, eps: f64) -> Result<TheoryReport> {
    if !(eps > 0.0) {
        return Err(Error::Precondition(format!("eps = {eps} must be positive")));
    }
    let g = gamma(params);
    let delta = fractional_delta(g);
    let (x0, case) = PhiCurve { delta, ln_b: params.ln_b }.root();
    let centre = g - x0;
    let (rate_lo, rate_hi) = (centre - eps, centre + eps);
    let n = params.n as f64;
    let chi = |rate: f64| (rate > 0.0).then(|| n / rate);
    Ok(TheoryReport {
        n: params.n,
        p: params.p,
        q: params.q,
        b: params.b,
        gamma: g,
        delta,
        x0,
        case,
        alpha0: g + 2.0 / params.ln_b + 1.0,
        a: large_class_size(g),
        rate_lo,
        rate_hi,
        chi_lo: chi(rate_hi),
        chi_hi: chi(rate_lo),
    })
}

pub fn corollary_interval(params: &ModelParams) -> CorollaryInterval {
    let g = gamma(params);
    if params.is_dense_regime() {
        CorollaryInterval { rate_lo: g - 1.0 + 2.0 / params.ln_b, rate_hi: g }
    } else {
        CorollaryInterval { rate_lo: g, rate_hi: g }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn gamma_at_1024_half_matches_precise_evaluation() {
        let params = ModelParams::new(1024, 0.5).unwrap();
        let oracle = precise::gamma(1024, 0.5);
        assert!(close(gamma(&params), oracle, 1e-12), "{} vs {oracle}", gamma(&params));
        // 20 - 2 log2(10) - 2
        assert!(close(oracle, 11.356_143_810_225_275, 1e-12));
    }

    #[test]
    fn gamma_at_b_squared_collapses() {
        for (n, p) in [(4u64, 0.5), (9, 2.0 / 3.0), (16, 0.75), (100, 0.9)] {
            let params = ModelParams::new(n, p).unwrap();
            // log_b n = 2 and log_b log_b n = log_b 2.
            let expected = 4.0 - 4.0 * params.log_b(2.0);
            assert!(close(gamma(&params), expected, 1e-12), "n={n} p={p}");
        }
    }

    #[test]
    fn degenerate_scale_is_rejected() {
        assert!(matches!(ModelParams::new(2, 0.5), Err(Error::DegenerateScale { .. })));
        assert!(matches!(ModelParams::new(1, 0.5), Err(Error::DegenerateScale { .. })));
        assert!(matches!(ModelParams::new(100, 0.0), Err(Error::InvalidProbability(_))));
        assert!(matches!(ModelParams::new(100, 1.0), Err(Error::InvalidProbability(_))));
    }

    #[test]
    fn b_times_q_is_one() {
        for p in [1e-9, 0.1, 0.5, 0.9, 0.999] {
            let params = ModelParams::new(1_000_000, p).unwrap();
            assert!(close(params.b() * params.q(), 1.0, 1e-15));
            assert!(close(params.ln_b(), params.b().ln(), 1e-12 * params.ln_b().max(1.0)));
        }
    }

    #[test]
    fn phi_examples() {
        let params = ModelParams::new(1000, 0.9).unwrap();
        assert_eq!(phi(0.0, 0.0, &params).unwrap(), 0.0);
        for delta in [0.0, 0.3, 0.99] {
            assert!(phi(delta, delta, &params).unwrap().abs() < 1e-15);
        }
        let got = phi(0.0, 0.5, &params).unwrap();
        let oracle = precise::phi(0.0, 0.5, 0.9);
        assert!(close(got, oracle, 1e-15), "{got} vs {oracle}");
        assert!(close(oracle, 0.5 * 0.5f64.ln() / 10f64.ln() + 0.125, 1e-15));
        assert!(phi(-1.0, 0.5, &params).is_err());
    }

    #[test]
    fn phi_prime_matches_central_difference() {
        let curve = PhiCurve::new(0.6, 3.0).unwrap();
        for x in [0.05, 0.3, 0.55] {
            let h = 1e-6;
            let fd = (curve.value(x + h).unwrap() - curve.value(x - h).unwrap()) / (2.0 * h);
            assert!(close(curve.derivative(x).unwrap(), fd, 1e-8));
        }
    }

    #[test]
    fn zero_delta_gives_zero_root() {
        assert_eq!(PhiCurve::new(0.0, 5.0).unwrap().root(), (0.0, RootCase::ZeroRoot));
    }

    #[test]
    fn three_cases_are_reachable() {
        // ln b = 10: 2/ln b = 0.2
        assert_eq!(PhiCurve::new(0.5, 10.0).unwrap().root(), (0.5, RootCase::FullDelta));
        let (x0, case) = PhiCurve::new(0.9, 10.0).unwrap().root();
        assert_eq!(case, RootCase::InteriorRoot);
        assert!(x0 > 0.0 && x0 < 0.9);
        assert_eq!(PhiCurve::new(0.5, 1.0).unwrap().root().1, RootCase::ZeroRoot);
    }

    #[test]
    fn report_identities() {
        let params = ModelParams::new(1_000_000, 0.5).unwrap();
        let report = theory_report(&params, 0.05).unwrap();
        assert_eq!(report.case, RootCase::ZeroRoot);
        assert_eq!(report.x0, 0.0);
        assert!(close((report.rate_lo + report.rate_hi) / 2.0, report.gamma, 1e-12));
        assert!(close(report.alpha0 - report.gamma, 1.0 + 2.0 / params.ln_b(), 1e-12));
        assert_eq!(report.a, report.gamma.floor() as i64 + 1);

        let dense = ModelParams::new(1_000_000, 0.95).unwrap();
        let report = theory_report(&dense, 0.01).unwrap();
        let g = report.gamma;
        assert!(report.chi_lo.unwrap() >= 1e6 / (g + 0.01) - 1e-9);
        let cor = corollary_interval(&dense);
        assert!(cor.rate_lo <= report.rate_hi && report.rate_lo <= cor.rate_hi);
        assert!(theory_report(&params, 0.0).is_err());
    }

    #[test]
    fn gamma_increases_along_a_grid() {
        for p in [0.1, 0.5, 0.9] {
            let b = 1.0 / (1.0 - p);
            let start = (b * std::f64::consts::E.powi(2)).ceil() as u64 + 1;
            let mut last = f64::NEG_INFINITY;
            let mut n = start.max(3);
            while n < 1_000_000_000 {
                let g = gamma(&ModelParams::new(n, p).unwrap());
                assert!(g > last, "gamma not increasing at n={n}, p={p}");
                last = g;
                n = n * 3 / 2 + 1;
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn phi_vanishes_at_delta(delta in 0.0f64..1.0, ln_b in 1e-3f64..14.0) {
            let curve = PhiCurve::new(delta, ln_b).unwrap();
            prop_assert!(curve.value(delta).unwrap().abs() <= 1e-12);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn phi_is_convex(delta in 0.0f64..0.999, ln_b in 1e-2f64..14.0) {
            let curve = PhiCurve::new(delta, ln_b).unwrap();
            let h = 1e-4;
            for i in 1..1000 {
                let x = h + (delta - 2.0 * h).max(0.0) * i as f64 / 1000.0;
                let second = (curve.value(x + h).unwrap() - 2.0 * curve.value(x).unwrap()
                    + curve.value(x - h).unwrap()) / (h * h);
                prop_assert!(second >= -1e-9, "x={x} second={second}");
            }
        }

        #[test]
        fn root_is_minimal(delta in 0.0f64..1.0, ln_b in 1e-2f64..14.0) {
            let curve = PhiCurve::new(delta, ln_b).unwrap();
            let (x0, case) = curve.root();
            prop_assert!((0.0..=delta).contains(&x0));
            prop_assert!(curve.value(x0).unwrap() <= 1e-10);
            if x0 > 0.0 {
                prop_assert!(curve.value(0.99 * x0).unwrap() > 0.0);
                prop_assert!(curve.value(x0 * (1.0 - 1e-6)).unwrap() > -1e-8);
            }
            let full = 1.0 - delta >= 2.0 / ln_b - 1e-12;
            if case == RootCase::FullDelta {
                prop_assert!(full);
            } else if case == RootCase::InteriorRoot {
                prop_assert!(!full);
            }
            prop_assert_eq!(case == RootCase::ZeroRoot, x0 == 0.0);
        }

        #[test]
        fn sparse_regime_has_zero_root(p in 1e-6f64..DENSE_THRESHOLD_P, log_n in 3.0f64..20.0) {
            let n = 10f64.powf(log_n) as u64;
            if let Ok(params) = ModelParams::new(n, p) {
                prop_assert_eq!(solve_x0(&params).0, 0.0);
            }
        }

        #[test]
        fn dense_regime_root_is_bounded(p in DENSE_THRESHOLD_P..0.999_999, log_n in 3.0f64..20.0) {
            let n = 10f64.powf(log_n) as u64;
            let params = ModelParams::new(n, p).unwrap();
            let (x0, _) = solve_x0(&params);
            prop_assert!(x0 >= 0.0 && x0 <= 1.0 - 2.0 / params.ln_b() + 1e-12);
        }
    }
}
