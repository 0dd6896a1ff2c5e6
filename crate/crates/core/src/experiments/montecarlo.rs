use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gram::{d_infinity, GramMatrix};
use crate::lasso::{lambda0_bound, lambda_tilde};
use crate::rng::Gaussian;

use super::generators::{gaussian_rows, normalize_columns, symmetric_sqrt};

/// Empirical tail frequencies against a probability bound, one entry per `t`.
#[derive(Debug, Clone, Serialize)]
pub struct MonteCarloResult {
    pub experiment: String,
    pub reps: usize,
    pub n: usize,
    pub p: usize,
    pub t_values: Vec<f64>,
    /// The threshold compared against at each `t` (`λ̃(t)` or `λ₀(t)`).
    pub thresholds: Vec<f64>,
    /// Fraction of repetitions in which the threshold was exceeded.
    pub empirical_tail: Vec<f64>,
    /// `2e^{−t}`, capped at 1.
    pub bound: Vec<f64>,
    /// `√(b(1 − b)/reps)`.
    pub sigma: Vec<f64>,
    /// `empirical ≤ bound + 3σ + 1/reps`.
    pub pass: Vec<bool>,
}

impl MonteCarloResult {
    fn assemble(experiment: &str, n: usize, p: usize, t_list: &[f64], thresholds: Vec<f64>, counts: Vec<usize>, reps: usize) -> Self {
        let r = reps as f64;
        let empirical_tail: Vec<f64> = counts.iter().map(|&c| c as f64 / r).collect();
        let bound: Vec<f64> = t_list.iter().map(|&t| (2.0 * (-t).exp()).min(1.0)).collect();
        let sigma: Vec<f64> = bound.iter().map(|&b| (b * (1.0 - b) / r).sqrt()).collect();
        let pass = (0..t_list.len())
            .map(|k| empirical_tail[k] <= bound[k] + 3.0 * sigma[k] + 1.0 / r)
            .collect();
        Self {
            experiment: experiment.into(),
            reps,
            n,
            p,
            t_values: t_list.to_vec(),
            thresholds,
            empirical_tail,
            bound,
            sigma,
            pass,
        }
    }

    /// Empirical coverage `1 − tail`.
    pub fn coverage(&self) -> Vec<f64> {
        self.empirical_tail.iter().map(|v| 1.0 - v).collect()
    }

    /// One CSV row per `t`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,threshold,empirical_tail,bound,sigma,pass\n");
        for k in 0..self.t_values.len() {
            out.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}\n",
                self.t_values[k], self.thresholds[k], self.empirical_tail[k], self.bound[k], self.sigma[k], self.pass[k]
            ));
        }
        out
    }
}

fn check_args(reps: usize, t_list: &[f64]) -> Result<()> {
    if reps < 100 {
        return Err(Error::InvalidParameter(format!("reps = {reps} must be at least 100")));
    }
    if t_list.is_empty() || t_list.iter().any(|&t| !(t > 0.0)) {
        return Err(Error::InvalidParameter("t values must be positive".into()));
    }
    Ok(())
}

/// Per-threshold exceedance counts of a statistic computed once per
/// repetition. Repetition `r` draws from stream `r`, so the result does not
/// depend on the number of threads. `strict` counts `v > th` instead of `v ≥ th`.
fn count_exceedances(
    reps: usize,
    thresholds: &[f64],
    strict: bool,
    stat: impl Fn(u64) -> f64 + Sync + Send,
) -> Vec<usize> {
    let stats: Vec<f64> = (0..reps as u64).into_par_iter().map(&stat).collect();
    thresholds
        .iter()
        .map(|&th| {
            stats
                .iter()
                .filter(|&&v| if strict { v > th } else { v >= th })
                .count()
        })
        .collect()
}

/// Frequency of `d∞(Σ̂, Σ) ≥ λ̃(t)` for Gaussian designs with covariance
/// `population`.
pub fn concentration_experiment(
    n: usize,
    population: &GramMatrix<f64>,
    reps: usize,
    t_list: &[f64],
    seed: u64,
) -> Result<MonteCarloResult> {
    check_args(reps, t_list)?;
    let p = population.dim();
    let root = symmetric_sqrt(population);
    let thresholds: Vec<f64> = t_list.iter().map(|&t| lambda_tilde(t, n, p)).collect();
    let counts = count_exceedances(reps, &thresholds, false, |r| {
        let x = gaussian_rows(n, &root, seed, r);
        d_infinity(&GramMatrix::from_design(&x), population).unwrap()
    });
    Ok(MonteCarloResult::assemble("concentration", n, p, t_list, thresholds, counts, reps))
}

/// Frequency of `2 max_j |(ψ_j, ε)_n| > λ₀(t)` with standard normal errors
/// and an identity-population design normalized to `σ̂_jj = 1`.
///
/// With `zero_noise` the errors are identically 0.
pub fn noise_bound_experiment(
    n: usize,
    p: usize,
    reps: usize,
    t_list: &[f64],
    seed: u64,
    zero_noise: bool,
) -> Result<MonteCarloResult> {
    check_args(reps, t_list)?;
    let thresholds: Vec<f64> = t_list.iter().map(|&t| lambda0_bound(t, n, p)).collect();
    let root = GramMatrix::<f64>::identity(p).into_matrix();
    let counts = count_exceedances(reps, &thresholds, true, |r| {
        let mut x = gaussian_rows(n, &root, seed, 2 * r);
        normalize_columns(&mut x);
        let mut g = Gaussian::new(seed, 2 * r + 1);
        let eps: Vec<f64> = (0..n).map(|_| if zero_noise { 0.0 } else { g.sample() }).collect();
        let xe = x.t_matvec(&eps);
        2.0 * xe.iter().fold(0.0f64, |a, v| a.max(v.abs())) / n as f64
    });
    Ok(MonteCarloResult::assemble("noise_bound", n, p, t_list, thresholds, counts, reps))
}
