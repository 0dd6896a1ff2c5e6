use serde::Serialize;

use crate::cone::SignVector;
use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::gram::GramMatrix;
use crate::linalg::solve;
use crate::scalar::{dot, norm1, sign, Scalar};
use crate::solvers::coordinate_descent_lasso;

/// A Lasso solution together with its KKT certificate.
#[derive(Debug, Clone, Serialize)]
pub struct LassoSolution<T> {
    pub beta_star: Vec<T>,
    /// Subgradient of `‖·‖₁` implied by the stationarity equation.
    pub tau_star: SignVector<T>,
    /// `S* = {j : β*_j ≠ 0}`.
    pub active_set: Vec<usize>,
    pub objective: T,
    pub kkt_residual: T,
    pub lambda: T,
    pub sweeps: usize,
}

/// `Σβ⁰`, the correlation vector of the noiseless problem.
pub fn correlation_of<T: Scalar>(gram: &GramMatrix<T>, beta0: &[T]) -> Vec<T> {
    gram.matvec(beta0)
}

/// KKT residual and implied subgradient for `βᵀΣβ − 2cᵀβ + λ‖β‖₁`.
///
/// With `g = 2(Σβ − c)` the residual is `max_j |g_j + λ sign(β_j)|` over
/// `β_j ≠ 0` and `max(0, |g_j| − λ)` elsewhere. `τ_j = sign(β_j)` on the
/// support and `−g_j/λ` clipped to `[−1, 1]` off it.
pub fn kkt_residual<T: Scalar>(gram: &GramMatrix<T>, corr: &[T], lambda: T, beta: &[T]) -> (T, SignVector<T>) {
    let sb = gram.matvec(beta);
    let mut worst = T::zero();
    let mut tau = Vec::with_capacity(beta.len());
    for j in 0..beta.len() {
        let g = T::two() * (sb[j] - corr[j]);
        if beta[j] != T::zero() {
            let sg = sign(beta[j]);
            worst = worst.max((g + lambda * sg).abs());
            tau.push(sg);
        } else {
            worst = worst.max((g.abs() - lambda).max(T::zero()));
            let t = if lambda > T::zero() { -g / lambda } else { T::zero() };
            tau.push(t.max(-T::one()).min(T::one()));
        }
    }
    (worst, SignVector(tau))
}

/// `βᵀΣβ − 2cᵀβ + λ‖β‖₁ + offset`.
fn objective<T: Scalar>(gram: &GramMatrix<T>, corr: &[T], lambda: T, beta: &[T], offset: T) -> T {
    gram.quad(beta) - T::two() * dot(corr, beta) + lambda * norm1(beta) + offset
}

/// Solve the stationarity equations on the current active set with the
/// current signs. Accepted only if the signs are kept.
fn polish<T: Scalar>(gram: &GramMatrix<T>, corr: &[T], lambda: T, beta: &[T]) -> Option<Vec<T>> {
    let active: Vec<usize> = (0..beta.len()).filter(|&j| beta[j] != T::zero()).collect();
    if active.is_empty() {
        return None;
    }
    let a = gram.principal(&active);
    let rhs: Vec<T> = active
        .iter()
        .map(|&j| corr[j] - lambda * T::half() * sign(beta[j]))
        .collect();
    let x = solve(&a, &rhs)?;
    if active.iter().zip(&x).any(|(&j, &v)| sign(v) != sign(beta[j])) {
        return None;
    }
    let mut out = vec![T::zero(); beta.len()];
    for (&j, v) in active.iter().zip(x) {
        out[j] = v;
    }
    Some(out)
}

/// Minimize `βᵀΣβ − 2cᵀβ + λ‖β‖₁` by coordinate descent, finishing with
/// a Newton step on the active set when that lowers the KKT residual.
///
/// `offset` is added to the reported objective (`β⁰ᵀΣβ⁰` for the
/// noiseless problem).
pub fn solve_with_correlation<T: Scalar>(
    gram: &GramMatrix<T>,
    corr: &[T],
    lambda: T,
    offset: T,
    config: &SolverConfig,
) -> Result<LassoSolution<T>> {
    if !(lambda >= T::zero()) {
        return Err(Error::InvalidParameter(format!("lambda = {lambda} must be >= 0")));
    }
    let tol = T::of(config.tol);
    let mut beta: Option<Vec<T>> = None;
    let mut sweeps = 0;
    let mut last_err = None;
    for _ in 0..4 {
        let start = beta.as_deref();
        let current = match coordinate_descent_lasso(gram, corr, lambda, start, config) {
            Ok(out) => {
                sweeps += out.sweeps;
                out.beta
            }
            Err(Error::MaxItersExceeded { iterations, residual, best }) => {
                sweeps += iterations;
                last_err = Some(Error::MaxItersExceeded {
                    iterations: sweeps,
                    residual,
                    best: best.clone(),
                });
                best.into_iter().map(T::of).collect()
            }
            Err(e) => return Err(e),
        };
        let (r, _) = kkt_residual(gram, corr, lambda, &current);
        let mut best = (r, current);
        if let Some(pol) = polish(gram, corr, lambda, &best.1) {
            let (rp, _) = kkt_residual(gram, corr, lambda, &pol);
            if rp < best.0 {
                best = (rp, pol);
            }
        }
        beta = Some(best.1);
        if best.0 <= tol {
            break;
        }
    }
    let beta = beta.unwrap();
    let (residual, tau) = kkt_residual(gram, corr, lambda, &beta);
    if residual > tol {
        return Err(last_err.unwrap_or(Error::MaxItersExceeded {
            iterations: sweeps,
            residual: residual.as_f64(),
            best: beta.iter().map(|v| v.as_f64()).collect(),
        }));
    }
    let active_set = (0..beta.len()).filter(|&j| beta[j] != T::zero()).collect();
    Ok(LassoSolution {
        objective: objective(gram, corr, lambda, &beta, offset),
        beta_star: beta,
        tau_star: tau,
        active_set,
        kkt_residual: residual,
        lambda,
        sweeps,
    })
}

/// `β* = argmin ‖f_β − f⁰‖² + λ‖β‖₁` with `f⁰ = f_{β⁰}`.
pub fn solve_noiseless<T: Scalar>(
    gram: &GramMatrix<T>,
    beta0: &[T],
    lambda: T,
    config: &SolverConfig,
) -> Result<LassoSolution<T>> {
    if beta0.len() != gram.dim() {
        return Err(Error::DimensionMismatch {
            expected: gram.dim(),
            got: beta0.len(),
        });
    }
    if !(lambda > T::zero()) {
        return Err(Error::InvalidParameter(format!("lambda = {lambda} must be > 0")));
    }
    let corr = correlation_of(gram, beta0);
    solve_with_correlation(gram, &corr, lambda, gram.quad(beta0), config)
}
