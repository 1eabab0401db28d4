//! Explicit constants for the four technical estimates on `phi`, and a grid
//! sweep that checks each estimate wherever its hypothesis holds.
//!
//! `c1 = eps'^2 / (2 ln b)` is not stated verbatim anywhere; it is what the
//! strong-convexity argument (`phi'' >= 1/ln b` on `[0, Delta]`) yields.

use serde::{Deserialize, Serialize};

use super::{PhiCurve, RootCase};
use crate::error::{Error, Result};

/// Slack for floating-point rounding at the boundary of each estimate.
const CHECK_TOL: f64 = 1e-12;
/// Largest `b` in the sweep.
const MAX_B: f64 = 1e6;
const MAX_REPORTED_VIOLATIONS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaConstants {
    eps: f64,
    eps_prime: f64,
}

impl LemmaConstants {
    pub fn new(eps: f64, eps_prime: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::Precondition(format!("eps = {eps} must lie in (0, 1)")));
        }
        if !(eps_prime > 0.0) {
            return Err(Error::Precondition(format!("eps' = {eps_prime} must be positive")));
        }
        Ok(LemmaConstants { eps, eps_prime })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }
    pub fn eps_prime(&self) -> f64 {
        self.eps_prime
    }

    pub fn c1(&self, ln_b: f64) -> f64 {
        self.eps_prime * self.eps_prime / (2.0 * ln_b)
    }

    /// `-(1 - eps) ln(1 - eps) / eps`, in `(0, 1)`.
    pub fn c2(&self) -> f64 {
        -(1.0 - self.eps) * (-self.eps).ln_1p() / self.eps
    }

    pub fn c3(&self, ln_b: f64) -> f64 {
        (self.eps * self.eps).min(self.eps_prime * self.eps_prime) / (4.0 * ln_b)
    }

    pub fn c4(&self, ln_b: f64) -> f64 {
        self.c3(ln_b).min(self.eps / 2.0)
    }
}

/// The four estimates, named by what they bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LemmaId {
    /// `phi(x0 - eps') >= c1` when `p > 1 - 1/e^2` and `x0 > eps'`.
    RootMargin,
    /// `1 - Delta <= 2 c2 / ln b` when `x0 <= Delta - eps`.
    GapWidth,
    /// `phi(Delta - y) <= -c3` when `eps' <= y <= Delta - x0 - eps`.
    PhiDip,
    /// `(1-y) log_b(1-y) + Delta(1-y)/2 - (x0+eps)/2 <= -c4` when
    /// `eps' <= Delta - x0 - eps <= y <= 1`.
    TailDeficit,
}

impl LemmaId {
    pub const ALL: [LemmaId; 4] = [LemmaId::RootMargin, LemmaId::GapWidth, LemmaId::PhiDip, LemmaId::TailDeficit];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaTally {
    pub lemma: LemmaId,
    pub points: usize,
    pub checked: usize,
    pub skipped: usize,
    pub violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaViolation {
    pub lemma: LemmaId,
    pub delta: f64,
    pub b: f64,
    pub y: Option<f64>,
    /// Left-hand side of the estimate at the witness.
    pub value: f64,
    /// The constant it was compared against.
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaSweep {
    pub eps: f64,
    pub eps_prime: f64,
    pub grid_size: usize,
    pub tallies: Vec<LemmaTally>,
    /// The first few witnesses; `tallies` carries the full counts.
    pub violations: Vec<LemmaViolation>,
}

impl LemmaSweep {
    pub fn total_violations(&self) -> usize {
        self.tallies.iter().map(|t| t.violations).sum()
    }

    pub fn passed(&self) -> bool {
        self.total_violations() == 0
    }
}

struct Sweeper {
    consts: LemmaConstants,
    tallies: Vec<LemmaTally>,
    violations: Vec<LemmaViolation>,
}

struct Point {
    curve: PhiCurve,
    x0: f64,
    case: RootCase,
}

impl Sweeper {
    fn tally(&mut self, lemma: LemmaId) -> &mut LemmaTally {
        let idx = LemmaId::ALL.iter().position(|&l| l == lemma).expect("known lemma");
        &mut self.tallies[idx]
    }

    fn skip(&mut self, lemma: LemmaId) {
        let t = self.tally(lemma);
        t.points += 1;
        t.skipped += 1;
    }

    /// Records one checked point; `ok` says whether the estimate held.
    fn record(&mut self, lemma: LemmaId, pt: &Point, y: Option<f64>, value: f64, bound: f64, ok: bool) {
        let t = self.tally(lemma);
        t.points += 1;
        t.checked += 1;
        if !ok {
            t.violations += 1;
            if self.violations.len() < MAX_REPORTED_VIOLATIONS {
                self.violations.push(LemmaViolation {
                    lemma,
                    delta: pt.curve.delta(),
                    b: pt.curve.ln_b().exp(),
                    y,
                    value,
                    bound,
                });
            }
        }
    }

    fn root_margin(&mut self, pt: &Point) {
        let ln_b = pt.curve.ln_b();
        let eps_p = self.consts.eps_prime;
        if !(ln_b > 2.0 && pt.x0 > eps_p) {
            return self.skip(LemmaId::RootMargin);
        }
        let value = pt.curve.value_unchecked(pt.x0 - eps_p);
        let bound = self.consts.c1(ln_b);
        self.record(LemmaId::RootMargin, pt, None, value, bound, value >= bound - CHECK_TOL);
    }

    fn gap_width(&mut self, pt: &Point) {
        let ln_b = pt.curve.ln_b();
        let delta = pt.curve.delta();
        if !(pt.x0 <= delta - self.consts.eps) {
            return self.skip(LemmaId::GapWidth);
        }
        let value = 1.0 - delta;
        let bound = 2.0 * self.consts.c2() / ln_b;
        self.record(LemmaId::GapWidth, pt, None, value, bound, value <= bound + CHECK_TOL);
    }

    fn phi_dip(&mut self, pt: &Point, y_steps: usize) {
        let delta = pt.curve.delta();
        let (lo, hi) = (self.consts.eps_prime, delta - pt.x0 - self.consts.eps);
        if !(lo <= hi) {
            for _ in 0..y_steps {
                self.skip(LemmaId::PhiDip);
            }
            return;
        }
        let bound = -self.consts.c3(pt.curve.ln_b());
        for y in linspace(lo, hi, y_steps) {
            let value = pt.curve.value_unchecked(delta - y);
            self.record(LemmaId::PhiDip, pt, Some(y), value, bound, value <= bound + CHECK_TOL);
        }
    }

    fn tail_deficit(&mut self, pt: &Point, y_steps: usize) {
        let delta = pt.curve.delta();
        let ln_b = pt.curve.ln_b();
        let eps = self.consts.eps;
        let start = delta - pt.x0 - eps;
        if !(self.consts.eps_prime <= start && start <= 1.0) {
            for _ in 0..y_steps {
                self.skip(LemmaId::TailDeficit);
            }
            return;
        }
        let bound = -self.consts.c4(ln_b);
        for y in linspace(start, 1.0, y_steps) {
            let rest = 1.0 - y;
            let entropy = if rest > 0.0 { rest * rest.ln() / ln_b } else { 0.0 };
            let value = entropy + delta / 2.0 * rest - (pt.x0 + eps) / 2.0;
            self.record(LemmaId::TailDeficit, pt, Some(y), value, bound, value <= bound + CHECK_TOL);
        }
    }
}

fn linspace(lo: f64, hi: f64, steps: usize) -> impl Iterator<Item = f64> {
    let last = steps.saturating_sub(1).max(1) as f64;
    (0..steps).map(move |i| if i + 1 == steps { hi } else { lo + (hi - lo) * i as f64 / last })
}

/// `(Delta, ln b)` grid: `Delta` uniform on `[0, 1)`, `ln b` uniform on `(0, ln 10^6]`.
fn grid_points(side: usize) -> impl Iterator<Item = Point> {
    let max_ln_b = MAX_B.ln();
    (0..side).flat_map(move |i| {
        let delta = i as f64 / side as f64;
        (1..=side).map(move |j| {
            let curve = PhiCurve { delta, ln_b: max_ln_b * j as f64 / side as f64 };
            let (x0, case) = curve.root();
            Point { curve, x0, case }
        })
    })
}

/// Sweeps each estimate over at least `grid_size` points. Violations are
/// collected, never raised.
pub fn verify_lemma_constants(consts: &LemmaConstants, grid_size: usize) -> Result<LemmaSweep> {
    if grid_size < 100 {
        return Err(Error::Precondition(format!("grid_size = {grid_size} must be at least 100")));
    }
    let mut sweeper = Sweeper {
        consts: *consts,
        tallies: LemmaId::ALL
            .iter()
            .map(|&lemma| LemmaTally { lemma, points: 0, checked: 0, skipped: 0, violations: 0 })
            .collect(),
        violations: Vec::new(),
    };

    let side2 = (grid_size as f64).sqrt().ceil() as usize;
    for pt in grid_points(side2) {
        sweeper.root_margin(&pt);
        sweeper.gap_width(&pt);
    }

    let side3 = (grid_size as f64).cbrt().ceil() as usize;
    for pt in grid_points(side3) {
        debug_assert!(pt.case != RootCase::ZeroRoot || pt.x0 == 0.0);
        sweeper.phi_dip(&pt, side3);
        sweeper.tail_deficit(&pt, side3);
    }

    Ok(LemmaSweep {
        eps: consts.eps,
        eps_prime: consts.eps_prime,
        grid_size,
        tallies: sweeper.tallies,
        violations: sweeper.violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_are_positive() {
        let c = LemmaConstants::new(0.1, 0.05).unwrap();
        for ln_b in [0.01, 1.0, 2.0, 13.8] {
            assert!(c.c1(ln_b) > 0.0 && c.c3(ln_b) > 0.0 && c.c4(ln_b) > 0.0);
        }
        assert!(c.c2() > 0.0 && c.c2() < 1.0);
        assert!(LemmaConstants::new(1.0, 0.1).is_err());
        assert!(LemmaConstants::new(0.1, 0.0).is_err());
    }

    #[test]
    fn c2_in_unit_interval_across_eps() {
        for i in 1..1000 {
            let c = LemmaConstants::new(i as f64 / 1000.0, 0.1).unwrap();
            assert!(c.c2() > 0.0 && c.c2() < 1.0);
        }
    }

    #[test]
    fn dip_at_upper_end_of_range() {
        // y = Delta - x0 - eps gives phi(x0 + eps) <= -c3.
        let c = LemmaConstants::new(0.1, 0.1).unwrap();
        for (delta, ln_b) in [(0.8, 1.5), (0.95, 4.0), (0.7, 9.0)] {
            let curve = PhiCurve::new(delta, ln_b).unwrap();
            let (x0, _) = curve.root();
            if delta - x0 - 0.1 >= 0.1 {
                assert!(curve.value(x0 + 0.1).unwrap() <= -c.c3(ln_b));
            }
        }
    }

    #[test]
    fn zero_root_skips_root_margin() {
        let c = LemmaConstants::new(0.1, 0.1).unwrap();
        let curve = PhiCurve::new(0.5, 1.0).unwrap();
        let (x0, case) = curve.root();
        assert_eq!(case, RootCase::ZeroRoot);
        let mut s = Sweeper {
            consts: c,
            tallies: LemmaId::ALL
                .iter()
                .map(|&lemma| LemmaTally { lemma, points: 0, checked: 0, skipped: 0, violations: 0 })
                .collect(),
            violations: vec![],
        };
        s.root_margin(&Point { curve, x0, case });
        assert_eq!(s.tallies[0].skipped, 1);
        assert_eq!(s.tallies[0].checked, 0);
    }

    #[test]
    fn small_sweep_is_clean() {
        let c = LemmaConstants::new(0.1, 0.1).unwrap();
        let sweep = verify_lemma_constants(&c, 400).unwrap();
        assert!(sweep.passed(), "{:?}", sweep.violations);
        for t in &sweep.tallies {
            assert!(t.points >= 400);
            assert!(t.checked > 0, "{:?} never exercised", t.lemma);
        }
        assert!(verify_lemma_constants(&c, 99).is_err());
    }
}
