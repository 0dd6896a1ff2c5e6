use serde::Serialize;

use crate::bounded::BoundedValue;
use crate::cone::{cone_membership, ConeSpec, ConeVariant, IndexSet};
use crate::config::SolverConfig;
use crate::constants::irrepresentable_uniform;
use crate::error::{Error, Result};
use crate::estimators::certified_lower_compat;
use crate::gram::GramMatrix;
use crate::linalg::Matrix;
use crate::scalar::{norm_inf, Scalar};

use super::solution::{solve_with_correlation, LassoSolution};

/// Observations `Y = Xβ⁰ + ε` with an `n × p` design.
#[derive(Debug, Clone)]
pub struct NoisyProblem<T> {
    pub x: Matrix<T>,
    pub y: Vec<T>,
    pub beta0: Option<Vec<T>>,
    pub epsilon: Option<Vec<T>>,
}

impl<T: Scalar> NoisyProblem<T> {
    pub fn new(x: Matrix<T>, y: Vec<T>, beta0: Option<Vec<T>>, epsilon: Option<Vec<T>>) -> Result<Self> {
        let (n, p) = (x.nrows(), x.ncols());
        if y.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: y.len() });
        }
        if let Some(b) = &beta0 {
            if b.len() != p {
                return Err(Error::DimensionMismatch { expected: p, got: b.len() });
            }
        }
        if let Some(e) = &epsilon {
            if e.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: e.len() });
            }
        }
        Ok(Self { x, y, beta0, epsilon })
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    /// `Σ̂ = XᵀX/n`.
    pub fn gram(&self) -> GramMatrix<T> {
        GramMatrix::from_design(&self.x)
    }

    /// `XᵀY/n`.
    pub fn correlation(&self) -> Vec<T> {
        let n = T::of_usize(self.n());
        self.x.t_matvec(&self.y).into_iter().map(|v| v / n).collect()
    }

    /// `λ₀ = 2 max_j |(ψ_j, ε)_n|`, when `ε` is known.
    pub fn lambda0(&self) -> Option<T> {
        let e = self.epsilon.as_ref()?;
        let n = T::of_usize(self.n());
        Some(T::two() * norm_inf(&self.x.t_matvec(e)) / n)
    }
}

pub fn lambda0_of_data<T: Scalar>(noisy: &NoisyProblem<T>) -> Result<T> {
    noisy.lambda0().ok_or(Error::MissingNoise)
}

/// `λ₀(t) = 2√((2t + 2 log p)/n)`: with standard normal errors and
/// `σ̂_jj = 1`, `P(λ₀ ≤ λ₀(t)) ≥ 1 − 2e^{−t}`.
pub fn lambda0_bound(t: f64, n: usize, p: usize) -> f64 {
    2.0 * ((2.0 * t + 2.0 * (p as f64).ln()) / n as f64).sqrt()
}

/// `λ̃(t) = √((4t + 8 log p)/n) + (4t + 8 log p)/n`: for Gaussian rows,
/// `P(d∞(Σ̂, Σ) ≥ λ̃(t)) ≤ 2e^{−t}`.
pub fn lambda_tilde(t: f64, n: usize, p: usize) -> f64 {
    let a = (4.0 * t + 8.0 * (p as f64).ln()) / n as f64;
    a.sqrt() + a
}

/// Verdict for the noisy oracle inequality.
#[derive(Debug, Clone, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct NoisyVerdict<T> {
    pub lambda: T,
    pub lambda0: T,
    /// `λ > λ₀`. When false the remaining checks are not applicable.
    pub premise: bool,
    /// `L = (λ + λ₀)/(λ − λ₀)`.
    pub l: Option<T>,
    /// `‖f̂ − f⁰‖²_n + (λ − λ₀)‖β̂_{Sᶜ}‖₁`, which equals the left-hand side
    /// `‖f̂ − f⁰‖²_n + 2λ₀/(L−1)‖β̂_{Sᶜ}‖₁`.
    pub lhs: Option<T>,
    /// `4λ²s/φ²_compatible(Σ̂,L,S)`, equal to `4(L+1)²λ₀²s/((L−1)²φ²)`.
    pub rhs: Option<T>,
    pub holds: Option<bool>,
    /// `β̂ − β⁰ ∈ ℛ(L,S)`.
    pub in_cone: Option<bool>,
    /// Certified lower bound on `φ²_compatible(Σ̂,L,S)`.
    pub phi_lower: Option<BoundedValue<T>>,
    /// Uniform `(Σ̂,L,S,s)`-irrepresentable condition, and if it holds,
    /// whether `Ŝ ⊆ S`.
    pub selection_premise: Option<bool>,
    pub selection_holds: Option<bool>,
}

/// Solve the noisy Lasso on `Σ̂` with correlation `XᵀY/n` and check the
/// noisy oracle inequality. Premise violations (`λ ≤ λ₀`) are reported, not
/// raised.
pub fn solve_noisy<T: Scalar>(
    noisy: &NoisyProblem<T>,
    support: &IndexSet,
    lambda: T,
    config: &SolverConfig,
) -> Result<(LassoSolution<T>, NoisyVerdict<T>)> {
    let gram = noisy.gram();
    let corr = noisy.correlation();
    let n = T::of_usize(noisy.n());
    let yy: T = noisy.y.iter().map(|&v| v * v).sum::<T>() / n;
    let sol = solve_with_correlation(&gram, &corr, lambda, yy, config)?;
    let lambda0 = noisy.lambda0().unwrap_or(T::zero());
    let mut verdict = NoisyVerdict {
        lambda,
        lambda0,
        premise: noisy.epsilon.is_some() && lambda > lambda0,
        l: None,
        lhs: None,
        rhs: None,
        holds: None,
        in_cone: None,
        phi_lower: None,
        selection_premise: None,
        selection_holds: None,
    };
    if !verdict.premise {
        return Ok((sol, verdict));
    }
    let p = gram.dim();
    let l = (lambda + lambda0) / (lambda - lambda0);
    verdict.l = Some(l);
    let cone = ConeSpec::new(support.clone(), l, support.len(), p)?;
    let phi = certified_lower_compat(&gram, &cone, &config.caps, &[]).bound;
    let rhs = if phi.lower > T::zero() {
        T::of(4.0) * lambda * lambda * T::of_usize(support.len()) / phi.lower
    } else {
        T::infinity()
    };
    verdict.rhs = Some(rhs);
    verdict.phi_lower = Some(phi);
    if let Some(b0) = &noisy.beta0 {
        let diff: Vec<T> = (0..p).map(|j| sol.beta_star[j] - b0[j]).collect();
        let tail: T = support.complement(p).iter().map(|&j| sol.beta_star[j].abs()).sum();
        let lhs = gram.quad(&diff).max(T::zero()) + (lambda - lambda0) * tail;
        let l1: T = diff.iter().map(|v| v.abs()).sum();
        let slack = sol.kkt_residual * l1 * T::of(4.0) + T::epsilon() * T::of(64.0) * (lhs + T::one());
        verdict.lhs = Some(lhs);
        verdict.holds = Some(lhs <= rhs + slack);
        let head: T = support.as_slice().iter().map(|&j| diff[j].abs()).sum();
        verdict.in_cone = Some(
            diff.iter().all(|&x| x == T::zero())
                || cone_membership(&diff, &cone, None, ConeVariant::Standard)?
                || tail <= l * head + slack,
        );
    }
    if let Ok(irr) = irrepresentable_uniform(&gram, &cone, &config.caps) {
        let premise = irr.estimate < T::one() / l;
        verdict.selection_premise = Some(premise);
        if premise {
            verdict.selection_holds = Some(sol.active_set.iter().all(|&j| support.contains(j)));
        }
    }
    Ok((sol, verdict))
}

/// Verdict for replacing `Σ̂` by an approximation `Σ` in the noisy KKT
/// conditions.
#[derive(Debug, Clone, Serialize)]
pub struct ApproximationVerdict<T> {
    pub d_inf: T,
    pub lambda_tilde: T,
    /// `d∞(Σ̂, Σ) ≤ λ̃`.
    pub distance_premise: bool,
    /// `(L+1)√(λ̃s) / (φ_compatible(Σ,L,S) − (L+1)√(λ̃s)) < 1` with the
    /// certified lower bound on `φ`.
    pub phi_premise: bool,
    /// `‖(Σ̂ − Σ)(β̂ − β⁰)‖∞`.
    pub lhs: T,
    /// `2λ₀/(L−1) = λ − λ₀`.
    pub rhs: T,
    pub holds: Option<bool>,
}

/// `phi_lower` bounds `φ²_compatible(Σ,L,S)` from below (squared).
pub fn approximation_verdict<T: Scalar>(
    noisy: &NoisyProblem<T>,
    population: &GramMatrix<T>,
    solution: &LassoSolution<T>,
    support: &IndexSet,
    lambda_tilde: T,
    phi_lower: &BoundedValue<T>,
) -> Result<ApproximationVerdict<T>> {
    let hat = noisy.gram();
    let p = hat.dim();
    let b0 = noisy.beta0.as_ref().ok_or_else(|| Error::InvalidParameter("beta0 is required".into()))?;
    let lambda0 = lambda0_of_data(noisy)?;
    let lambda = solution.lambda;
    let d_inf = crate::gram::d_infinity(&hat, population)?;
    let l = (lambda + lambda0) / (lambda - lambda0);
    let shift = (l + T::one()) * (lambda_tilde * T::of_usize(support.len())).sqrt();
    let phi = phi_lower.lower.max(T::zero()).sqrt();
    let phi_premise = lambda > lambda0 && phi > shift && shift / (phi - shift) < T::one();
    let diff: Vec<T> = (0..p).map(|j| solution.beta_star[j] - b0[j]).collect();
    let delta = hat.matrix().sub(population.matrix());
    let lhs = norm_inf(&delta.matvec(&diff));
    let rhs = lambda - lambda0;
    let distance_premise = d_inf <= lambda_tilde;
    Ok(ApproximationVerdict {
        d_inf,
        lambda_tilde,
        distance_premise,
        phi_premise,
        lhs,
        rhs,
        holds: (distance_premise && phi_premise).then_some(lhs < rhs),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda0_bound_value() {
        let v = lambda0_bound(2.0, 400, 100);
        assert!((v - 0.363_47).abs() < 1e-5, "{v}");
    }

    #[test]
    fn single_row() {
        let x: Matrix<f64> = Matrix::from_rows(&[vec![1.0, -3.0, 0.5]]);
        let np = NoisyProblem::new(x, vec![0.7], None, Some(vec![0.7])).unwrap();
        assert!((lambda0_of_data(&np).unwrap() - 2.0 * 0.7 * 3.0).abs() < 1e-15);
    }
}
