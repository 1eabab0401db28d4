//! Seeded `G(n, p)` experiments comparing `alpha` and `chi` against the
//! asymptotic predictions.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use num_traits::ToPrimitive;

use super::{chromatic_number_with, count_proper_equipartitions, independence_number_with, sample_gnp, SolverLimits};
use crate::error::{Error, Result};
use crate::moments::{first_moment_exact, EquipartitionShape};
use crate::theory::{self, ModelParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub index: usize,
    /// `seed + index`, wrapping.
    pub seed: u64,
    pub edges: usize,
    pub alpha: Option<usize>,
    pub chi: Option<usize>,
    /// `n / chi`.
    pub rate: Option<f64>,
    /// Solver refusal for this sample, if any.
    pub error: Option<String>,
}

/// `[gamma - x0 - eps, gamma - x0 + eps]`, the colouring-rate prediction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateBand {
    pub predicted: f64,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationStats {
    pub n: usize,
    pub p: f64,
    pub samples: usize,
    pub seed: u64,
    pub eps: f64,
    pub alpha0: f64,
    /// `floor(alpha0) - 1 ..= floor(alpha0) + 1`.
    pub alpha_window: (i64, i64),
    pub alpha_histogram: BTreeMap<usize, usize>,
    pub alpha_mean: Option<f64>,
    pub alpha_std: Option<f64>,
    /// Share of all samples whose `alpha` lies in the window.
    pub window_fraction: f64,
    pub chi_histogram: BTreeMap<usize, usize>,
    pub chi_mean: Option<f64>,
    pub chi_std: Option<f64>,
    pub rate_mean: Option<f64>,
    pub rate_band: RateBand,
    /// Share of solved samples whose rate lies in the band.
    pub rate_in_band_fraction: Option<f64>,
    pub failures: usize,
    pub records: Vec<SampleRecord>,
}

fn mean_std(xs: &[f64]) -> (Option<f64>, Option<f64>) {
    if xs.is_empty() {
        return (None, None);
    }
    let m = xs.iter().sum::<f64>() / xs.len() as f64;
    if xs.len() < 2 {
        return (Some(m), None);
    }
    let var = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64;
    (Some(m), Some(var.sqrt()))
}

/// Samples `G(n, p)` with seeds `seed, seed + 1, ..` in parallel and solves
/// `alpha` for each, plus `chi` when `n` is within the chromatic limit.
/// Solver refusals are recorded per sample. Standard deviations use the
/// `samples - 1` denominator.
pub fn concentration_experiment(
    n: usize,
    p: f64,
    samples: usize,
    seed: u64,
    eps: f64,
    limits: &SolverLimits,
) -> Result<ConcentrationStats> {
    let params = ModelParams::new(n as u64, p)?;
    let g = theory::gamma(&params);
    let (x0, _) = theory::solve_x0(&params);
    let alpha0 = theory::alpha0(&params);
    let centre = alpha0.floor() as i64;
    let alpha_window = (centre - 1, centre + 1);
    let want_chi = n <= limits.max_chi_n;

    let records: Vec<SampleRecord> = (0..samples)
        .into_par_iter()
        .map(|index| {
            let seed = seed.wrapping_add(index as u64);
            let graph = sample_gnp(n, p, seed).expect("p validated by ModelParams");
            let mut rec =
                SampleRecord { index, seed, edges: graph.edge_count(), alpha: None, chi: None, rate: None, error: None };
            match independence_number_with(&graph, limits) {
                Ok(a) => rec.alpha = Some(a),
                Err(e) => rec.error = Some(e.to_string()),
            }
            if want_chi {
                match chromatic_number_with(&graph, limits) {
                    Ok(c) => {
                        rec.chi = Some(c);
                        rec.rate = Some(n as f64 / c as f64);
                    }
                    Err(e) => rec.error = Some(e.to_string()),
                }
            }
            rec
        })
        .collect();

    let alphas: Vec<usize> = records.iter().filter_map(|r| r.alpha).collect();
    let chis: Vec<usize> = records.iter().filter_map(|r| r.chi).collect();
    let rates: Vec<f64> = records.iter().filter_map(|r| r.rate).collect();
    let histogram = |xs: &[usize]| {
        let mut h = BTreeMap::new();
        for &x in xs {
            *h.entry(x).or_insert(0) += 1;
        }
        h
    };
    let as_f64 = |xs: &[usize]| xs.iter().map(|&x| x as f64).collect::<Vec<_>>();
    let (alpha_mean, alpha_std) = mean_std(&as_f64(&alphas));
    let (chi_mean, chi_std) = mean_std(&as_f64(&chis));
    let in_window = alphas.iter().filter(|&&a| (alpha_window.0..=alpha_window.1).contains(&(a as i64))).count();
    let predicted = g - x0;
    let rate_band = RateBand { predicted, lo: predicted - eps, hi: predicted + eps };
    let rate_in_band_fraction = (!rates.is_empty())
        .then(|| rates.iter().filter(|&&r| r >= rate_band.lo && r <= rate_band.hi).count() as f64 / rates.len() as f64);

    Ok(ConcentrationStats {
        n,
        p,
        samples,
        seed,
        eps,
        alpha0,
        alpha_window,
        alpha_histogram: histogram(&alphas),
        alpha_mean,
        alpha_std,
        window_fraction: if samples == 0 { 0.0 } else { in_window as f64 / samples as f64 },
        chi_histogram: histogram(&chis),
        chi_mean,
        chi_std,
        rate_mean: mean_std(&rates).0,
        rate_band,
        rate_in_band_fraction,
        failures: records.iter().filter(|r| r.error.is_some()).count(),
        records,
    })
}

/// Sample mean of `Z_k` over seeded `G(n, p)` against the exact `mu_k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloSummary {
    pub n: usize,
    pub k: usize,
    pub p: f64,
    pub samples: usize,
    pub seed: u64,
    pub mean: f64,
    pub std_err: f64,
    pub mu: f64,
    /// `(mean - mu) / std_err`.
    pub z_score: f64,
}

/// Estimates `E[Z_k]` from `samples` graphs with seeds `seed, seed + 1, ..`.
pub fn equipartition_monte_carlo(n: usize, k: usize, p: f64, samples: usize, seed: u64) -> Result<MonteCarloSummary> {
    if samples < 2 {
        return Err(Error::Precondition(format!("need at least 2 samples, got {samples}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    let shape = EquipartitionShape::new(n as u64, k as u64)?;
    let counts: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let g = sample_gnp(n, p, seed.wrapping_add(i as u64))?;
            Ok(count_proper_equipartitions(&g, k)?.to_f64().expect("finite count"))
        })
        .collect::<Result<_>>()?;
    let (mean, std) = mean_std(&counts);
    let (mean, std) = (mean.expect("samples > 0"), std.expect("samples > 1"));
    let std_err = std / (samples as f64).sqrt();
    let q = num_rational::BigRational::from_float(1.0 - p).expect("finite p");
    let mu = first_moment_exact(&shape, &q).to_f64().expect("finite moment");
    Ok(MonteCarloSummary { n, k, p, samples, seed, mean, std_err, mu, z_score: (mean - mu) / std_err })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi_times_alpha_covers_n() {
        let stats = concentration_experiment(40, 0.5, 12, 5, 0.5, &SolverLimits::default()).unwrap();
        assert_eq!(stats.failures, 0);
        for r in &stats.records {
            assert!(r.chi.unwrap() * r.alpha.unwrap() >= 40);
            assert_eq!(r.seed, 5 + r.index as u64);
        }
        assert_eq!(stats.alpha_histogram.values().sum::<usize>(), 12);
    }

    #[test]
    fn chi_skipped_above_limit() {
        let limits = SolverLimits { max_chi_n: 20, ..SolverLimits::default() };
        let stats = concentration_experiment(30, 0.5, 3, 0, 0.5, &limits).unwrap();
        assert!(stats.records.iter().all(|r| r.chi.is_none() && r.alpha.is_some()));
        assert!(stats.chi_mean.is_none() && stats.rate_in_band_fraction.is_none());
    }

    #[test]
    fn monte_carlo_tracks_mu() {
        let mc = equipartition_monte_carlo(8, 2, 0.5, 4000, 1).unwrap();
        assert!((mc.mu - 70.0 / 4096.0).abs() < 1e-15);
        assert!(mc.z_score.abs() < 4.0, "{mc:?}");
        assert!(equipartition_monte_carlo(8, 2, 0.5, 1, 1).is_err());
    }

    #[test]
    fn deterministic() {
        let a = concentration_experiment(30, 0.5, 8, 9, 0.5, &SolverLimits::default()).unwrap();
        let b = concentration_experiment(30, 0.5, 8, 9, 0.5, &SolverLimits::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn refusals_are_recorded() {
        let limits = SolverLimits { max_alpha_n: 10, max_chi_n: 5, chi_node_limit: 10 };
        let stats = concentration_experiment(20, 0.5, 4, 0, 0.5, &limits).unwrap();
        assert_eq!(stats.failures, 4);
        assert_eq!(stats.window_fraction, 0.0);
    }
}
