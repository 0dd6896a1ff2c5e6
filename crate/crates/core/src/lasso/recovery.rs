use serde::Serialize;

use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::gram::GramMatrix;
use crate::linalg::{symmetric_eigen, Matrix};
use crate::scalar::{norm1, Scalar};
use crate::solvers::{simplex_lp, LpProblem, LpStatus};

/// Result of `min{‖β‖₁ : ‖f_β − f⁰‖ = 0}`.
#[derive(Debug, Clone, Serialize)]
pub struct BasisPursuit<T> {
    pub beta_lp: Vec<T>,
    pub value: T,
    /// `‖β⁰‖₁`, an upper bound on `value` since `β⁰` is feasible.
    pub truth_l1: T,
    pub recovered: bool,
    /// Number of eigenvalues of `Σ` above the rank threshold.
    pub rank: usize,
    pub iterations: usize,
}

/// Relative eigenvalue threshold for the range of `Σ`.
pub const RANK_REL_TOL: f64 = 1e-10;
/// Sup-norm tolerance for declaring exact recovery.
pub const RECOVERY_TOL: f64 = 1e-6;

/// Basis pursuit on the population: `‖f_β − f⁰‖ = 0` is `Vᵀ(β − β⁰) = 0`
/// for the eigenvectors `V` of `Σ` with nonzero eigenvalue. The LP is solved
/// over `β = β⁺ − β⁻` by the simplex method.
pub fn basis_pursuit_recover<T: Scalar>(
    gram: &GramMatrix<T>,
    beta0: &[T],
    config: &SolverConfig,
) -> Result<BasisPursuit<T>> {
    let p = gram.dim();
    if beta0.len() != p {
        return Err(Error::DimensionMismatch {
            expected: p,
            got: beta0.len(),
        });
    }
    let eig = symmetric_eigen(gram.matrix());
    let cut = T::of(RANK_REL_TOL) * eig.max().max(T::zero());
    let range: Vec<usize> = (0..p).filter(|&k| eig.values[k] > cut).collect();
    let m = range.len();
    let a = Matrix::from_fn(m, 2 * p, |i, j| {
        let v = eig.vectors.get(j % p, range[i]);
        if j < p { v } else { -v }
    });
    let b: Vec<T> = range
        .iter()
        .map(|&k| (0..p).map(|j| eig.vectors.get(j, k) * beta0[j]).sum())
        .collect();
    let lp = LpProblem {
        c: vec![T::one(); 2 * p],
        a,
        b,
    };
    let sol = simplex_lp(&lp, config)?;
    match sol.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => return Err(Error::Infeasible),
        LpStatus::Unbounded => return Err(Error::Unbounded),
    }
    let beta_lp: Vec<T> = (0..p).map(|j| sol.x[j] - sol.x[p + j]).collect();
    let recovered = beta_lp
        .iter()
        .zip(beta0)
        .all(|(&x, &y)| (x - y).abs() <= T::of(RECOVERY_TOL));
    Ok(BasisPursuit {
        value: norm1(&beta_lp),
        truth_l1: norm1(beta0),
        beta_lp,
        recovered,
        rank: m,
        iterations: sol.iterations,
    })
}
