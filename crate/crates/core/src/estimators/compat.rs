use serde::Serialize;

use crate::bounded::{rounding_margin, BoundedValue};
use crate::config::SolverConfig;
use crate::constants::SINGULAR_REL_TOL;
use crate::cone::ConeSpec;
use crate::error::{Error, Result};
use crate::gram::{Block, GramMatrix};
use crate::linalg::{symmetric_eigen, Matrix};
use crate::scalar::{dot, norm1, norm_inf, Scalar};
use crate::solvers::{project_l1_ball, projected_gradient_qp};

/// Result of the compatibility computation with its minimizer.
#[derive(Debug, Clone, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct CompatOutcome<T> {
    /// `φ²_compatible(L,S)`.
    pub value: BoundedValue<T>,
    /// A feasible `β` with `‖β_S‖₁ = 1` attaining `value.estimate`.
    pub beta: Vec<T>,
    /// Sign patterns solved as a QP.
    pub solved: usize,
    /// Sign patterns discarded by the a priori lower bound.
    pub pruned: usize,
}

/// Per sign pattern: the reduced problem over the tail `u = β_{Sᶜ}`.
///
/// Minimizing `βᵀΣβ` over `β_S` subject to `τᵀβ_S = 1` leaves
/// `g(u) = uᵀHu + (1 + wᵀu)²/κ` with `A = Σ₁₁⁻¹`, `H = Σ₂₂ − Σ₂₁AΣ₁₂`,
/// `w = Σ₂₁Aτ` and `κ = τᵀAτ`.
struct Reduced<T> {
    a: Matrix<T>,
    w_mat: Matrix<T>,
    h: Matrix<T>,
    b12: Matrix<T>,
}

struct SignResult<T> {
    lower: T,
    upper: T,
    beta_s: Vec<T>,
    u: Vec<T>,
}

impl<T: Scalar> Reduced<T> {
    fn solve(&self, tau: &[T], l: T, config: &SolverConfig) -> SignResult<T> {
        let m = self.h.nrows();
        let a_tau = self.a.matvec(tau);
        let kappa = dot(tau, &a_tau);
        let w = self.w_mat.matvec(tau);
        let winf = norm_inf(&w);
        let cheap = (T::one() - l * winf).max(T::zero()).powi(2) / kappa;
        let tol = T::of(config.tol);

        let u = if m == 0 || l == T::zero() || T::two() * l * winf / kappa <= tol {
            vec![T::zero(); m]
        } else {
            let q = Matrix::from_fn(m, m, |i, j| self.h.get(i, j) + w[i] * w[j] / kappa);
            let c: Vec<T> = w.iter().map(|&x| T::two() * x / kappa).collect();
            let proj = |v: &[T]| project_l1_ball(v, l);
            match projected_gradient_qp(&q, &c, &proj, &vec![T::zero(); m], config) {
                Ok(sol) => sol.x,
                Err(Error::MaxItersExceeded { best, .. }) => best.into_iter().map(T::of).collect(),
                Err(_) => vec![T::zero(); m],
            }
        };
        let wu = dot(&w, &u);
        let hu = self.h.matvec(&u);
        let g = dot(&u, &hu) + (T::one() + wu).powi(2) / kappa;
        // Frank–Wolfe gap over the ℓ1 ball certifies the convex minimum.
        let grad: Vec<T> = (0..m)
            .map(|i| T::two() * hu[i] + T::two() * (T::one() + wu) * w[i] / kappa)
            .collect();
        let fw = g - dot(&grad, &u) - l * norm_inf(&grad);
        let lower = cheap.max(fw);

        // β_S = A(μτ − Σ₁₂u) with μ = (1 + τᵀAΣ₁₂u)/κ.
        let bu = self.b12.matvec(&u);
        let abu = self.a.matvec(&bu);
        let mu = (T::one() + dot(tau, &abu)) / kappa;
        let beta_s: Vec<T> = (0..tau.len()).map(|i| mu * a_tau[i] - abu[i]).collect();
        SignResult {
            lower,
            upper: g,
            beta_s,
            u,
        }
    }
}

fn assemble<T: Scalar>(p: usize, support: &[usize], tail: &[usize], head: &[T], u: &[T]) -> Vec<T> {
    let mut beta = vec![T::zero(); p];
    for (&j, &v) in support.iter().zip(head) {
        beta[j] = v;
    }
    for (&j, &v) in tail.iter().zip(u) {
        beta[j] = v;
    }
    let n1 = norm1(head);
    if n1 > T::zero() {
        for b in &mut beta {
            *b /= n1;
        }
    }
    beta
}

/// `s βᵀΣβ / ‖β_S‖₁²`.
pub fn compat_ratio<T: Scalar>(gram: &GramMatrix<T>, support: &[usize], beta: &[T]) -> T {
    let h: T = support.iter().map(|&j| beta[j].abs()).sum();
    T::of_usize(support.len()) * gram.quad(beta) / (h * h)
}

/// `φ²_compatible(L,S)` by enumerating sign patterns on `S`.
///
/// For each `τ` the convex problem `min{βᵀΣβ : τᵀβ_S = 1, ‖β_{Sᶜ}‖₁ ≤ L}`
/// is reduced to the tail and solved by projected gradient. The upper
/// endpoint is the value of a feasible point; the lower endpoint combines
/// the Frank–Wolfe duality gap of every solved pattern with the a priori
/// bound `max(0, 1 − L‖w‖∞)²/κ`, which also prunes patterns that cannot
/// beat the incumbent. `τ` and `−τ` give the same problem, so only half of
/// the patterns are visited.
pub fn compatibility_detailed<T: Scalar>(
    gram: &GramMatrix<T>,
    cone: &ConeSpec<T>,
    config: &SolverConfig,
) -> Result<CompatOutcome<T>> {
    let p = gram.dim();
    cone.validate(p)?;
    let s = cone.s();
    let needed = if s >= 127 { u128::MAX } else { 1u128 << s };
    if needed > config.caps.signs {
        return Err(Error::CapExceeded {
            needed,
            cap: config.caps.signs,
        });
    }
    let support = cone.support.as_slice();
    let tail = cone.support.complement(p);
    let m11 = gram.principal(support);
    let eig = symmetric_eigen(&m11);
    let (lmin, lmax) = (eig.min(), eig.max());
    if !(lmin > T::of(SINGULAR_REL_TOL) * lmax.max(T::zero())) {
        // A null vector of Σ₁₁(S) with zero tail lies in the cone.
        let v = eig.vector(0);
        let beta = assemble(p, support, &tail, &v, &[]);
        return Ok(CompatOutcome {
            value: BoundedValue::exact(T::zero()).with_provenance("singular Sigma_11(S)"),
            beta,
            solved: 0,
            pruned: 0,
        });
    }
    let a = eig.reconstruct_with(|x| T::one() / x).symmetrize();
    let b12 = gram.block(Block::B12, support);
    let w_mat = b12.transpose().matmul(&a);
    let h = gram
        .principal(&tail)
        .sub(&w_mat.matmul(&b12))
        .symmetrize();
    let red = Reduced { a, w_mat, h, b12 };

    let half = 1u64 << (s - 1);
    let tau_of = |code: u64| -> Vec<T> {
        (0..s)
            .map(|i| if i + 1 < s && code >> i & 1 == 1 { -T::one() } else { T::one() })
            .collect()
    };
    // Visit patterns in order of their a priori bound so that the incumbent
    // gets small early and most patterns are pruned.
    let mut order: Vec<(T, u64)> = (0..half)
        .map(|code| {
            let tau = tau_of(code);
            let a_tau = red.a.matvec(&tau);
            let kappa = dot(&tau, &a_tau);
            let winf = norm_inf(&red.w_mat.matvec(&tau));
            ((T::one() - cone.l * winf).max(T::zero()).powi(2) / kappa, code)
        })
        .collect();
    order.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap().then(x.1.cmp(&y.1)));

    let st = T::of_usize(s);
    let mut best_upper = T::infinity();
    let mut best_beta = Vec::new();
    let mut lower = T::infinity();
    let (mut solved, mut pruned) = (0usize, 0usize);
    for (cheap, code) in order {
        if st * cheap >= best_upper {
            // The order is by `cheap`, so every remaining pattern is pruned too.
            lower = lower.min(cheap);
            pruned = half as usize - solved;
            break;
        }
        let tau = tau_of(code);
        let r = red.solve(&tau, cone.l, config);
        solved += 1;
        lower = lower.min(r.lower);
        let beta = assemble(p, support, &tail, &r.beta_s, &r.u);
        let ratio = compat_ratio(gram, support, &beta).min(st * r.upper);
        if ratio < best_upper {
            best_upper = ratio;
            best_beta = beta;
        }
    }
    let lower = st * lower;
    let cond = lmax / lmin;
    let margin = rounding_margin(best_upper.max(gram.scale()), p) * cond;
    let lo = (lower - margin).max(T::zero());
    let hi = best_upper + margin;
    let est = best_upper.max(lo).min(hi);
    Ok(CompatOutcome {
        value: BoundedValue::interval(lo, est, hi).with_provenance(format!(
            "sign enumeration: {solved} solved, {pruned} pruned; lower from duality gap"
        )),
        beta: best_beta,
        solved,
        pruned,
    })
}

pub fn compatibility_constant<T: Scalar>(
    gram: &GramMatrix<T>,
    cone: &ConeSpec<T>,
    config: &SolverConfig,
) -> Result<BoundedValue<T>> {
    Ok(compatibility_detailed(gram, cone, config)?.value)
}
