use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::gram::GramMatrix;
use crate::scalar::{soft_threshold, Scalar};

#[derive(Debug, Clone)]
pub struct CdOutcome<T> {
    pub beta: Vec<T>,
    pub sweeps: usize,
    pub residual: T,
}

/// KKT residual of `βᵀΣβ − 2cᵀβ + λ‖β‖₁` given `Σβ`.
///
/// With `g = 2(Σβ − c)`: `|g_j + λ sign(β_j)|` on the support and
/// `max(0, |g_j| − λ)` off it.
pub fn kkt_residual_gradient<T: Scalar>(sigma_beta: &[T], corr: &[T], lambda: T, beta: &[T]) -> T {
    let mut worst = T::zero();
    for j in 0..beta.len() {
        let g = T::two() * (sigma_beta[j] - corr[j]);
        let r = if beta[j] > T::zero() {
            (g + lambda).abs()
        } else if beta[j] < T::zero() {
            (g - lambda).abs()
        } else {
            (g.abs() - lambda).max(T::zero())
        };
        worst = worst.max(r);
    }
    worst
}

/// Cyclic coordinate descent on `βᵀΣβ − 2cᵀβ + λ‖β‖₁`.
///
/// Each coordinate update is `β_j ← S(c_j − Σ_{k≠j} σ_jk β_k, λ/2) / σ_jj`.
/// Stops when the KKT residual is at most `config.tol`.
pub fn coordinate_descent_lasso<T: Scalar>(
    gram: &GramMatrix<T>,
    corr: &[T],
    lambda: T,
    start: Option<&[T]>,
    config: &SolverConfig,
) -> Result<CdOutcome<T>> {
    let p = gram.dim();
    if corr.len() != p {
        return Err(Error::DimensionMismatch {
            expected: p,
            got: corr.len(),
        });
    }
    if !(lambda >= T::zero()) {
        return Err(Error::InvalidParameter(format!("lambda = {lambda} must be >= 0")));
    }
    if let Some(j) = (0..p).find(|&j| !(gram.get(j, j) > T::zero())) {
        return Err(Error::ZeroDiagonal(j));
    }
    let tol = T::of(config.tol);
    let mut beta = start.map_or_else(|| vec![T::zero(); p], |s| s.to_vec());
    let mut sb = gram.matvec(&beta);
    let half = lambda * T::half();
    let mut residual = kkt_residual_gradient(&sb, corr, lambda, &beta);
    for sweep in 0..config.max_iters {
        if residual <= tol {
            return Ok(CdOutcome {
                beta,
                sweeps: sweep,
                residual,
            });
        }
        for j in 0..p {
            let d = gram.get(j, j);
            let old = beta[j];
            let r = corr[j] - (sb[j] - d * old);
            let new = soft_threshold(r, half) / d;
            if new != old {
                let delta = new - old;
                let row = gram.matrix().row(j);
                for (k, s) in sb.iter_mut().enumerate() {
                    *s += row[k] * delta;
                }
                beta[j] = new;
            }
        }
        if sweep % 64 == 63 {
            sb = gram.matvec(&beta);
        }
        residual = kkt_residual_gradient(&sb, corr, lambda, &beta);
    }
    sb = gram.matvec(&beta);
    residual = kkt_residual_gradient(&sb, corr, lambda, &beta);
    if residual <= tol {
        return Ok(CdOutcome {
            beta,
            sweeps: config.max_iters,
            residual,
        });
    }
    Err(Error::MaxItersExceeded {
        iterations: config.max_iters,
        residual: residual.as_f64(),
        best: beta.iter().map(|v| v.as_f64()).collect(),
    })
}
