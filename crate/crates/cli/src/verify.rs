//! Verification suites. Each suite is a list of checks against independent
//! oracles; failures are collected, never short-circuited.

use std::collections::BTreeMap;

use chromrate_core::graphs::{
    chromatic_number, concentration_experiment, equipartition_monte_carlo, independence_number, sample_gnp,
    SolverLimits,
};
use chromrate_core::moments::{
    expected_precolourings_exact, first_moment_exact, first_moment_threshold, half, EquipartitionShape,
};
use chromrate_core::overlap::{
    count_01_matrices, enumerate_overlap_pairs, mckay_estimate, overlap_matrix_census, pairs_from_matrices,
    second_moment_exact, second_moment_exact_rational,
};
use chromrate_core::theory::{self, phi, LemmaConstants, RootCase, DENSE_THRESHOLD_P};
use chromrate_core::{moments, oracle, LogValue, ModelParams};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::CliError;

pub const SUITES: [&str; 8] =
    ["x0", "lemmas", "first-moment", "relationpm", "mckay", "second-moment", "solvers", "concentration"];

const MAX_LISTED_FAILURES: usize = 20;

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub checks: u64,
    pub failures: Vec<String>,
    pub details: Value,
}

struct Check {
    name: String,
    checks: u64,
    failures: Vec<String>,
    failed: u64,
    details: Value,
}

impl Check {
    fn new(name: &str) -> Self {
        Check { name: name.into(), checks: 0, failures: Vec::new(), failed: 0, details: json!({}) }
    }

    fn expect(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < MAX_LISTED_FAILURES {
                self.failures.push(describe());
            }
        }
    }

    fn error(&mut self, e: impl std::fmt::Display) {
        self.expect(false, || e.to_string());
    }

    fn finish(self) -> CheckReport {
        let mut failures = self.failures;
        if self.failed as usize > failures.len() {
            failures.push(format!("... {} failures in total", self.failed));
        }
        CheckReport { name: self.name, passed: self.failed == 0, checks: self.checks, failures, details: self.details }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub passed: bool,
    pub checks: Vec<CheckReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

/// Runs `cfg.suite` (default `all`).
pub fn run_verify(cfg: &RunConfig) -> Result<VerifyReport, CliError> {
    let names: Vec<&str> = match cfg.suite.as_deref() {
        None | Some("all") => SUITES.to_vec(),
        Some(name) if SUITES.contains(&name) => vec![name],
        Some(other) => {
            return Err(CliError::Usage(format!("unknown suite `{other}`; available: all, {}", SUITES.join(", "))))
        }
    };
    let suites: Vec<SuiteReport> = names.into_iter().map(|name| run_suite(name, cfg)).collect();
    Ok(VerifyReport { passed: suites.iter().all(|s| s.passed), suites })
}

/// Suite overrides: `--grid` for x0 and lemmas; `--n`, `--k`, `--p`,
/// `--samples` and `--seed` where the suite samples or enumerates.
pub fn run_suite(name: &str, cfg: &RunConfig) -> SuiteReport {
    let checks = match name {
        "x0" => vec![check_x0_law(cfg.grid.unwrap_or(X0_DEFAULT_GRID))],
        "lemmas" => vec![check_lemma_constants(cfg.grid.unwrap_or(LEMMA_DEFAULT_GRID))],
        "first-moment" => vec![
            check_exact_first_moment(&[4, 5, 6]),
            check_first_moment_monte_carlo(
                cfg.n.unwrap_or(12) as usize,
                cfg.k.unwrap_or(4) as usize,
                cfg.p.unwrap_or(0.5),
                cfg.samples.unwrap_or(100_000),
                cfg.seed,
            ),
            check_precolourings(),
            check_threshold_certificate(),
        ],
        "relationpm" => {
            let cases = match (cfg.n, cfg.k) {
                (Some(n), Some(k)) => vec![(n, k)],
                _ => RELATION_CASES.to_vec(),
            };
            vec![check_pair_identity(&cases)]
        }
        "mckay" => vec![check_contingency_exhaustive(4, 3), check_permutation_counts(8), check_mckay_trend(&[10, 20, 40, 80])],
        "second-moment" => vec![check_second_moment_paths(6, 3, 0.5), check_second_moment_all_graphs(&[(4, 2), (5, 2)])],
        "solvers" => vec![check_chromatic_solver(200, 9, cfg.seed), check_independence_solver(200, 16, cfg.seed)],
        "concentration" => vec![check_alpha_window(
            cfg.n.unwrap_or(200) as usize,
            cfg.p.unwrap_or(0.5),
            cfg.samples.unwrap_or(50),
            cfg.seed,
            0.9,
        )],
        other => {
            let mut c = Check::new("unknown suite");
            c.error(format!("no suite named `{other}`"));
            vec![c.finish()]
        }
    };
    SuiteReport { name: name.into(), passed: checks.iter().all(|c| c.passed), checks }
}

/// 200 values of `p` per regime times 20 values of `n`.
pub const X0_DEFAULT_GRID: usize = 4000;
pub const LEMMA_DEFAULT_GRID: usize = 10_000;
pub const RELATION_CASES: [(u64, u64); 4] = [(4, 2), (5, 2), (6, 2), (6, 3)];

/// `x0 = 0` for `p <= 1 - 1/e^2`; otherwise `0 <= x0 <= 1 - 2/ln b`,
/// `phi(x0) <= 1e-10` and `phi(0.99 x0) > 0` when `x0 > 1e-6`. `grid`
/// points per regime: 20 values of `n` log-spaced on `[1e3, 1e9]`.
pub fn check_x0_law(grid: usize) -> CheckReport {
    let mut c = Check::new("x0 law");
    let n_count = 20usize;
    let p_count = grid.div_ceil(n_count).max(1);
    let ns: Vec<u64> = (0..n_count).map(|i| 10f64.powf(3.0 + 6.0 * i as f64 / (n_count - 1) as f64).round() as u64).collect();
    let (mut sparse, mut dense, mut interior, mut full) = (0u64, 0u64, 0u64, 0u64);
    for j in 0..p_count {
        let frac = (j + 1) as f64 / p_count as f64;
        let p_sparse = DENSE_THRESHOLD_P * frac;
        let p_dense = DENSE_THRESHOLD_P + (0.999 - DENSE_THRESHOLD_P) * frac;
        for &n in &ns {
            match ModelParams::new(n, p_sparse) {
                Ok(params) => {
                    let (x0, _) = theory::solve_x0(&params);
                    sparse += 1;
                    c.expect(x0 == 0.0, || format!("sparse n={n} p={p_sparse}: x0 = {x0:e}"));
                }
                Err(e) => c.error(format!("n={n} p={p_sparse}: {e}")),
            }
            let params = match ModelParams::new(n, p_dense) {
                Ok(params) => params,
                Err(e) => {
                    c.error(format!("n={n} p={p_dense}: {e}"));
                    continue;
                }
            };
            dense += 1;
            let (x0, case) = theory::solve_x0(&params);
            match case {
                RootCase::InteriorRoot => interior += 1,
                RootCase::FullDelta => full += 1,
                RootCase::ZeroRoot => {}
            }
            let delta = theory::fractional_delta(theory::gamma(&params));
            let bound = 1.0 - 2.0 / params.ln_b() + 1e-12;
            c.expect((0.0..=bound).contains(&x0), || format!("dense n={n} p={p_dense}: x0 = {x0} outside [0, {bound}]"));
            let at_root = phi(x0, delta, &params).unwrap_or(f64::NAN);
            c.expect(at_root <= 1e-10, || format!("dense n={n} p={p_dense}: phi(x0) = {at_root:e}"));
            if x0 > 1e-6 {
                let inside = phi(0.99 * x0, delta, &params).unwrap_or(f64::NAN);
                c.expect(inside > 0.0, || format!("dense n={n} p={p_dense}: phi(0.99 x0) = {inside:e}"));
            }
        }
    }
    c.details = json!({
        "n_values": ns,
        "p_values_per_regime": p_count,
        "sparse_points": sparse,
        "dense_points": dense,
        "dense_interior_roots": interior,
        "dense_full_delta": full,
    });
    c.finish()
}

/// The four estimates with their explicit constants, for every
/// `(eps, eps')` in `{0.05, 0.1, 0.2}^2`, over `grid` points each.
pub fn check_lemma_constants(grid: usize) -> CheckReport {
    let mut c = Check::new("lemma constants");
    let mut sweeps = Vec::new();
    for eps in [0.05, 0.1, 0.2] {
        for eps_prime in [0.05, 0.1, 0.2] {
            let consts = LemmaConstants::new(eps, eps_prime).expect("valid constants");
            match theory::verify_lemma_constants(&consts, grid) {
                Ok(sweep) => {
                    for t in &sweep.tallies {
                        c.expect(t.violations == 0, || {
                            format!("{:?} eps={eps} eps'={eps_prime}: {} violations", t.lemma, t.violations)
                        });
                        c.expect(t.points >= grid, || format!("{:?}: only {} points", t.lemma, t.points));
                    }
                    sweeps.push(sweep);
                }
                Err(e) => c.error(e),
            }
        }
    }
    c.details = json!({ "sweeps": sweeps });
    c.finish()
}

/// Averages `Z_k` over all `2^C(n,2)` graphs at `p = 1/2` and demands exact
/// rational equality with `mu_k`.
pub fn check_exact_first_moment(ns: &[u64]) -> CheckReport {
    let mut c = Check::new("first moment, all graphs");
    let mut cases = Vec::new();
    for &n in ns {
        for k in 1..=n {
            let shape = EquipartitionShape::new(n, k).expect("1 <= k <= n");
            let mu = first_moment_exact(&shape, &half());
            match oracle::all_graphs_equipartition_moments(n as usize, k as usize, &half()) {
                Ok((avg, _)) => {
                    c.expect(avg == mu, || format!("n={n} k={k}: average {avg} vs mu {mu}"));
                    cases.push(json!({ "n": n, "k": k, "mu": mu.to_string() }));
                }
                Err(e) => c.error(e),
            }
        }
    }
    c.details = json!({ "cases": cases });
    c.finish()
}

/// Sample mean of `Z_k` within four standard errors of `mu_k`.
pub fn check_first_moment_monte_carlo(n: usize, k: usize, p: f64, samples: usize, seed: u64) -> CheckReport {
    let mut c = Check::new("first moment, Monte Carlo");
    match equipartition_monte_carlo(n, k, p, samples, seed) {
        Ok(mc) => {
            c.expect(mc.z_score.abs() <= 4.0, || format!("mean {} vs mu {}: z = {}", mc.mean, mc.mu, mc.z_score));
            c.details = serde_json::to_value(mc).expect("plain data");
        }
        Err(e) => c.error(e),
    }
    c.finish()
}

/// `E[#precolourings]` as exact rationals against all-graphs averages.
pub fn check_precolourings() -> CheckReport {
    let mut c = Check::new("precolouring expectation");
    let expected = [((4u64, 2u64, 2u64), (3, 4)), ((6, 2, 2), (45, 4))];
    let mut cases = Vec::new();
    for ((n, a, s), (num, den)) in expected {
        let hand = BigRational::new(BigInt::from(num), BigInt::from(den));
        match (expected_precolourings_exact(n, a, s, &half()), oracle::all_graphs_precolourings(n as usize, a as usize, s as usize, &half())) {
            (Ok(formula), Ok(brute)) => {
                c.expect(formula == hand, || format!("({n},{a},{s}): formula {formula} vs {hand}"));
                c.expect(brute == hand, || format!("({n},{a},{s}): all graphs {brute} vs {hand}"));
                cases.push(json!({ "n": n, "a": a, "s": s, "value": formula.to_string() }));
            }
            (Err(e), _) | (_, Err(e)) => c.error(e),
        }
    }
    c.details = json!({ "cases": cases });
    c.finish()
}

/// `k*` at `(100, 1/2)` against an exact rational scan over all `k`.
pub fn check_threshold_certificate() -> CheckReport {
    let mut c = Check::new("first-moment threshold");
    let exact = (1..=100u64).find(|&k| {
        first_moment_exact(&EquipartitionShape::new(100, k).expect("k <= n"), &half()) >= BigRational::one()
    });
    match (ModelParams::new(100, 0.5).and_then(|p| first_moment_threshold(&p)), exact) {
        (Ok(t), Some(k)) => {
            c.expect(t.k == k, || format!("scan k* = {}, exact scan {k}", t.k));
            c.expect(t.mu_below < LogValue::ONE && t.mu_at >= LogValue::ONE, || "certificate fails".into());
            c.details = json!({ "n": 100, "p": 0.5, "k_star": t.k });
        }
        (Err(e), _) => c.error(e),
        (_, None) => c.error("exact scan found no crossing"),
    }
    c.finish()
}

/// `P_r = (n! / prod i!^{r_i}) M_r` with `P_r` from pair enumeration and
/// `M_r` from matrix enumeration, plus `sum_r P_r = P^2`.
pub fn check_pair_identity(cases: &[(u64, u64)]) -> CheckReport {
    let mut c = Check::new("pair counts from overlap matrices");
    let mut details = Vec::new();
    for &(n, k) in cases {
        let (pairs, census) = match (enumerate_overlap_pairs(n, k), overlap_matrix_census(n, k)) {
            (Ok(p), Ok(m)) => (p, m),
            (Err(e), _) | (_, Err(e)) => {
                c.error(format!("(n={n}, k={k}): {e}"));
                continue;
            }
        };
        let p = moments::equipartition_count(&EquipartitionShape::new(n, k).expect("guarded"));
        let total: BigUint = pairs.values().sum();
        c.expect(total == &p * &p, || format!("(n={n}, k={k}): sum P_r = {total}, P^2 = {}", &p * &p));
        c.expect(census.keys().eq(pairs.keys()), || format!("(n={n}, k={k}): sequence sets differ"));
        let mut rows = Vec::new();
        for (r, p_r) in &pairs {
            let m_r = census.get(r).cloned().unwrap_or_default();
            let rebuilt = pairs_from_matrices(n, r, &m_r);
            let ok = &rebuilt == p_r;
            c.expect(ok, || format!("(n={n}, k={k}) r={:?}: P_r = {p_r}, rebuilt {rebuilt}", r.counts()));
            rows.push(json!({ "r": r.counts(), "P_r": p_r.to_string(), "M_r": m_r.to_string(), "pass": ok }));
        }
        details.push(json!({ "n": n, "k": k, "P": p.to_string(), "sequences": rows }));
    }
    c.details = json!({ "cases": details });
    c.finish()
}

/// DP count against exhaustive enumeration for every margin pair on
/// `m x n` grids with `m, n <= side` and margins `<= max_margin`.
pub fn check_contingency_exhaustive(side: usize, max_margin: u64) -> CheckReport {
    let mut c = Check::new("0-1 matrix counts, exhaustive");
    fn margins(len: usize, max: u64) -> Vec<Vec<u64>> {
        (0..len).fold(vec![vec![]], |acc, _| {
            acc.into_iter().flat_map(|m| (0..=max).map(move |x| [m.clone(), vec![x]].concat())).collect()
        })
    }
    for m in 1..=side {
        for n in 1..=side {
            let hist = match oracle::margin_histogram(m, n) {
                Ok(h) => h,
                Err(e) => {
                    c.error(e);
                    continue;
                }
            };
            for rows in margins(m, max_margin.min(n as u64)) {
                for cols in margins(n, max_margin.min(m as u64)) {
                    let expected = hist.get(&(rows.clone(), cols.clone())).copied().unwrap_or(0);
                    let got = count_01_matrices(&rows, &cols);
                    c.expect(got == BigUint::from(expected), || format!("{rows:?} x {cols:?}: {got} vs {expected}"));
                }
            }
        }
    }
    c.details = json!({ "side": side, "max_margin": max_margin, "cases": c.checks });
    c.finish()
}

/// All-ones margins on `m x m` count the `m!` permutation matrices.
pub fn check_permutation_counts(max_m: u64) -> CheckReport {
    let mut c = Check::new("permutation matrices");
    let mut fact = BigUint::one();
    for m in 1..=max_m {
        fact *= m;
        let ones = vec![1u64; m as usize];
        let got = count_01_matrices(&ones, &ones);
        c.expect(got == fact, || format!("m={m}: {got} vs {fact}"));
    }
    c.finish()
}

/// `|ln(exact / McKay)|` along `k x k`, all margins 3, must decrease; the
/// formal flag must match the hypothesis `1 <= 9 < 3k/6`.
pub fn check_mckay_trend(ks: &[usize]) -> CheckReport {
    let mut c = Check::new("McKay estimate trend");
    let mut rows = Vec::new();
    let mut last = f64::INFINITY;
    for &k in ks {
        let threes = vec![3u64; k];
        let exact = LogValue::from_biguint(&count_01_matrices(&threes, &threes));
        match mckay_estimate(&threes, &threes) {
            Ok(est) => {
                let gap = (exact.ln() - est.estimate.ln()).abs();
                c.expect(gap < last, || format!("k={k}: gap {gap} did not decrease from {last}"));
                let hypothesis = 9.0 < 3.0 * k as f64 / 6.0;
                c.expect(est.formal != hypothesis, || format!("k={k}: formal flag {}", est.formal));
                last = gap;
                rows.push(json!({
                    "k": k,
                    "ln_exact": exact.ln(),
                    "ln_estimate": est.estimate.ln(),
                    "abs_log_ratio": gap,
                    "error_scale": est.error_scale,
                    "formal": est.formal,
                }));
            }
            Err(e) => c.error(e),
        }
    }
    c.details = json!({ "family": rows });
    c.finish()
}

/// Direct and grouped second moments agree to 12 significant digits.
pub fn check_second_moment_paths(n: u64, k: u64, p: f64) -> CheckReport {
    let mut c = Check::new("second moment, two paths");
    match second_moment_exact(n, k, p) {
        Ok(sm) => {
            c.expect(sm.relative_gap <= 5e-13, || format!("relative gap {:e}", sm.relative_gap));
            c.expect(sm.ratio.ln() >= -1e-12, || format!("ratio {} < 1", sm.ratio.value()));
            c.details = json!({
                "n": n, "k": k, "p": p,
                "direct": sm.direct.value(),
                "grouped": sm.grouped.value(),
                "relative_gap": sm.relative_gap,
                "ratio": sm.ratio.value(),
            });
        }
        Err(e) => c.error(e),
    }
    c.finish()
}

/// Exact `E[Z_k^2]` at `p = 1/2` against the all-graphs average of `Z_k^2`.
pub fn check_second_moment_all_graphs(cases: &[(u64, u64)]) -> CheckReport {
    let mut c = Check::new("second moment, all graphs");
    let mut rows = Vec::new();
    for &(n, k) in cases {
        match (second_moment_exact_rational(n, k, &half()), oracle::all_graphs_equipartition_moments(n as usize, k as usize, &half())) {
            (Ok(exact), Ok((_, brute))) => {
                c.expect(exact == brute, || format!("(n={n}, k={k}): {exact} vs {brute}"));
                rows.push(json!({ "n": n, "k": k, "second_moment": exact.to_string() }));
            }
            (Err(e), _) | (_, Err(e)) => c.error(e),
        }
    }
    c.details = json!({ "cases": rows });
    c.finish()
}

fn solver_graph(i: u64, max_n: usize, seed: u64) -> chromrate_core::graphs::Graph {
    let n = 1 + (i as usize % max_n);
    let p = [0.2, 0.5, 0.8][(i % 3) as usize];
    sample_gnp(n, p, seed.wrapping_add(i)).expect("p in [0, 1]")
}

pub fn check_chromatic_solver(graphs: u64, max_n: usize, seed: u64) -> CheckReport {
    let mut c = Check::new("chromatic number vs exhaustive");
    for i in 0..graphs {
        let g = solver_graph(i, max_n, seed);
        match (chromatic_number(&g), oracle::brute_chromatic_number(&g)) {
            (Ok(a), Ok(b)) => c.expect(a == b, || format!("graph {i}: solver {a}, oracle {b}")),
            (Err(e), _) | (_, Err(e)) => c.error(e),
        }
    }
    c.finish()
}

pub fn check_independence_solver(graphs: u64, max_n: usize, seed: u64) -> CheckReport {
    let mut c = Check::new("independence number vs exhaustive");
    for i in 0..graphs {
        let g = solver_graph(i, max_n, seed.wrapping_add(1 << 32));
        match (independence_number(&g), oracle::brute_independence_number(&g)) {
            (Ok(a), Ok(b)) => c.expect(a == b, || format!("graph {i}: solver {a}, oracle {b}")),
            (Err(e), _) | (_, Err(e)) => c.error(e),
        }
    }
    c.finish()
}

/// At least `min_fraction` of samples have `alpha` within one of
/// `floor(alpha0)`. The window and threshold are finite-n calibrations.
pub fn check_alpha_window(n: usize, p: f64, samples: usize, seed: u64, min_fraction: f64) -> CheckReport {
    let mut c = Check::new("alpha concentration window");
    let limits = SolverLimits::from_env().unwrap_or_default();
    match concentration_experiment(n, p, samples, seed, 0.05, &SolverLimits { max_chi_n: 0, ..limits }) {
        Ok(stats) => {
            c.expect(stats.failures == 0, || format!("{} samples refused", stats.failures));
            c.expect(stats.window_fraction >= min_fraction, || {
                format!("window fraction {} < {min_fraction}", stats.window_fraction)
            });
            let histogram: BTreeMap<String, usize> =
                stats.alpha_histogram.iter().map(|(a, c)| (a.to_string(), *c)).collect();
            c.details = json!({
                "n": n, "p": p, "samples": samples, "seed": seed,
                "alpha0": stats.alpha0,
                "window": [stats.alpha_window.0, stats.alpha_window.1],
                "window_fraction": stats.window_fraction,
                "histogram": histogram,
            });
        }
        Err(e) => c.error(e),
    }
    c.finish()
}
