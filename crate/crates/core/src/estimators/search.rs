//! Multi-start local search over the restriction cones.
//!
//! The objectives are ratios of quadratic forms in which the set
//! `𝒩(β) = S ∪ {N − s largest |β_j|, j ∉ S}` enters. Every point visited is
//! feasible, so the best value found is a valid one-sided bound.

use rayon::prelude::*;

use crate::cone::{top_set, ConeSpec, ConeVariant};
use crate::config::SolverConfig;
use crate::gram::GramMatrix;
use crate::rng::Gaussian;
use crate::scalar::{dot, norm1, norm2, Scalar};
use crate::solvers::project_l1_ball;

/// What the search optimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Goal {
    /// Minimize `βᵀΣβ / ‖β_𝒩‖₂²`.
    RestrictedEigenvalue,
    /// Maximize `|β_𝒩ᵀ Σ β_{𝒩ᶜ}| / β_𝒩ᵀ Σ β_𝒩`.
    RestrictedRegression,
}

pub struct ConeSearch<'a, T> {
    pub gram: &'a GramMatrix<T>,
    pub cone: &'a ConeSpec<T>,
    pub variant: ConeVariant,
    pub goal: Goal,
    tail: Vec<usize>,
}

/// Best point of a search.
#[derive(Debug, Clone)]
pub struct SearchResult<T> {
    /// Objective value in its natural orientation (ratio, not negated).
    pub value: T,
    pub beta: Vec<T>,
}

const CHUNK: usize = 1024;
const DESCENT_ITERS: usize = 400;

impl<'a, T: Scalar> ConeSearch<'a, T> {
    pub fn new(gram: &'a GramMatrix<T>, cone: &'a ConeSpec<T>, variant: ConeVariant, goal: Goal) -> Self {
        Self {
            gram,
            cone,
            variant,
            goal,
            tail: cone.support.complement(gram.dim()),
        }
    }

    fn radius(&self) -> T {
        match self.variant {
            ConeVariant::Standard => self.cone.l,
            ConeVariant::Adaptive => T::of_usize(self.cone.s()).sqrt() * self.cone.l,
        }
    }

    /// Scale so the head has unit norm (ℓ1 or ℓ2 by variant) and project the
    /// tail onto the ℓ1 ball of the matching radius. `false` if the head is 0.
    pub fn retract(&self, beta: &mut [T]) -> bool {
        let head: Vec<T> = self.cone.support.as_slice().iter().map(|&j| beta[j]).collect();
        let h = match self.variant {
            ConeVariant::Standard => norm1(&head),
            ConeVariant::Adaptive => norm2(&head),
        };
        if !(h > T::zero()) || !h.is_finite() {
            return false;
        }
        for b in beta.iter_mut() {
            *b /= h;
        }
        let tail: Vec<T> = self.tail.iter().map(|&j| beta[j]).collect();
        let proj = project_l1_ball(&tail, self.radius());
        for (&j, v) in self.tail.iter().zip(proj) {
            beta[j] = v;
        }
        true
    }

    fn mask(&self, beta: &[T]) -> Vec<bool> {
        let mut m = vec![false; beta.len()];
        for j in top_set(beta, &self.cone.support, self.cone.n) {
            m[j] = true;
        }
        m
    }

    /// Ratio in natural orientation.
    pub fn value(&self, beta: &[T]) -> T {
        self.eval(beta, false).0
    }

    /// Loss to minimize (ratio, or minus the regression ratio) and its
    /// gradient with `𝒩` held fixed.
    fn eval(&self, beta: &[T], want_grad: bool) -> (T, Vec<T>) {
        let mask = self.mask(beta);
        let p = beta.len();
        let inside: Vec<T> = (0..p).map(|j| if mask[j] { beta[j] } else { T::zero() }).collect();
        match self.goal {
            Goal::RestrictedEigenvalue => {
                let sb = self.gram.matvec(beta);
                let num = dot(beta, &sb);
                let den = dot(&inside, &inside);
                let r = num / den;
                let grad = if want_grad {
                    (0..p).map(|j| T::two() * (sb[j] - r * inside[j]) / den).collect()
                } else {
                    Vec::new()
                };
                (r, grad)
            }
            Goal::RestrictedRegression => {
                let outside: Vec<T> = (0..p).map(|j| beta[j] - inside[j]).collect();
                let si = self.gram.matvec(&inside);
                let so = self.gram.matvec(&outside);
                let num = dot(&outside, &si);
                let den = dot(&inside, &si);
                if !(den > T::zero()) {
                    return (T::zero(), vec![T::zero(); if want_grad { p } else { 0 }]);
                }
                let r = num.abs() / den;
                let grad = if want_grad {
                    let sg = if num < T::zero() { -T::one() } else { T::one() };
                    (0..p)
                        .map(|j| {
                            let dn = if mask[j] { so[j] } else { si[j] };
                            let dd = if mask[j] { T::two() * si[j] } else { T::zero() };
                            -(sg * dn / den - r * dd / den)
                        })
                        .collect()
                } else {
                    Vec::new()
                };
                (-r, grad)
            }
        }
    }

    fn natural(&self, loss: T) -> T {
        match self.goal {
            Goal::RestrictedEigenvalue => loss,
            Goal::RestrictedRegression => -loss,
        }
    }

    /// Gradient descent on the loss with retraction and adaptive steps.
    pub fn descend(&self, start: &[T]) -> Option<SearchResult<T>> {
        let mut beta = start.to_vec();
        if !self.retract(&mut beta) {
            return None;
        }
        let (mut f, mut g) = self.eval(&beta, true);
        let mut eta = T::of(0.1) / self.gram.scale();
        for _ in 0..DESCENT_ITERS {
            let mut accepted = false;
            for _ in 0..40 {
                let mut cand: Vec<T> = beta.iter().zip(&g).map(|(&b, &d)| b - eta * d).collect();
                if self.retract(&mut cand) {
                    let (fc, gc) = self.eval(&cand, true);
                    if fc < f {
                        let gain = f - fc;
                        beta = cand;
                        f = fc;
                        g = gc;
                        eta = eta * T::of(1.5);
                        accepted = gain > T::epsilon() * T::of(4.0) * (f.abs() + T::one());
                        break;
                    }
                }
                eta = eta * T::half();
            }
            if !accepted {
                break;
            }
        }
        Some(SearchResult {
            value: self.natural(f),
            beta,
        })
    }

    /// A random point of the cone: Gaussian head, tail that is zero, dense
    /// or sparse, scaled to a random fraction of the admissible radius.
    fn sample(&self, rng: &mut Gaussian) -> Vec<T> {
        let p = self.gram.dim();
        let mut beta = vec![T::zero(); p];
        for &j in self.cone.support.as_slice() {
            beta[j] = T::of(rng.sample());
        }
        let m = self.tail.len();
        if m > 0 {
            let mode = rng.index(4);
            let k = match mode {
                0 => 0,
                1 => m,
                _ => 1 + rng.index(m.min(self.cone.n - self.cone.s() + 1)),
            };
            let mut chosen: Vec<usize> = Vec::with_capacity(k);
            while chosen.len() < k {
                let j = self.tail[rng.index(m)];
                if !chosen.contains(&j) {
                    chosen.push(j);
                }
            }
            for &j in &chosen {
                beta[j] = T::of(rng.sample());
            }
            // Normalize the head first so the radius is meaningful.
            let head: Vec<T> = self.cone.support.as_slice().iter().map(|&j| beta[j]).collect();
            let h = match self.variant {
                ConeVariant::Standard => norm1(&head),
                ConeVariant::Adaptive => norm2(&head),
            };
            let t1: T = chosen.iter().map(|&j| beta[j].abs()).sum();
            if t1 > T::zero() && h > T::zero() {
                let frac = if rng.uniform() < 0.5 { 1.0 } else { rng.uniform() };
                let scale = T::of(frac) * self.radius() * h / t1;
                for &j in &chosen {
                    beta[j] *= scale;
                }
            }
        }
        beta
    }

    fn better(&self, a: T, b: T) -> bool {
        match self.goal {
            Goal::RestrictedEigenvalue => a < b,
            Goal::RestrictedRegression => a > b,
        }
    }

    /// Random sampling followed by local descent from the given candidates
    /// and the best samples.
    pub fn run(&self, candidates: &[Vec<T>], config: &SolverConfig) -> Option<SearchResult<T>> {
        let chunks = config.samples.div_ceil(CHUNK);
        let seed = config.seed;
        let sampled: Vec<Option<SearchResult<T>>> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = Gaussian::new(seed, c as u64);
                let count = CHUNK.min(config.samples - c * CHUNK);
                let mut best: Option<SearchResult<T>> = None;
                for _ in 0..count {
                    let mut beta = self.sample(&mut rng);
                    if !self.retract(&mut beta) {
                        continue;
                    }
                    let v = self.value(&beta);
                    if v.is_finite() && best.as_ref().is_none_or(|b| self.better(v, b.value)) {
                        best = Some(SearchResult { value: v, beta });
                    }
                }
                best
            })
            .collect();
        let mut samples: Vec<SearchResult<T>> = sampled.into_iter().flatten().collect();
        samples.sort_by(|a, b| {
            let o = a.value.partial_cmp(&b.value).unwrap();
            match self.goal {
                Goal::RestrictedEigenvalue => o,
                Goal::RestrictedRegression => o.reverse(),
            }
        });
        let mut starts: Vec<Vec<T>> = candidates.to_vec();
        starts.extend(samples.iter().take(config.restarts.max(1)).map(|r| r.beta.clone()));
        let descended: Vec<Option<SearchResult<T>>> =
            starts.par_iter().map(|s| self.descend(s)).collect();
        let mut best: Option<SearchResult<T>> = samples.into_iter().next();
        for r in descended.into_iter().flatten() {
            if r.value.is_finite() && best.as_ref().is_none_or(|b| self.better(r.value, b.value)) {
                best = Some(r);
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::{cone_membership, IndexSet};

    #[test]
    fn retracted_points_are_in_the_cone() {
        let g = GramMatrix::<f64>::identity(7);
        let cone = ConeSpec::new(IndexSet::new(vec![1, 4], 7).unwrap(), 0.7, 4, 7).unwrap();
        for variant in [ConeVariant::Standard, ConeVariant::Adaptive] {
            let s = ConeSearch::new(&g, &cone, variant, Goal::RestrictedEigenvalue);
            let mut rng = Gaussian::new(3, 0);
            for _ in 0..200 {
                let mut b = s.sample(&mut rng);
                if s.retract(&mut b) {
                    let nset = top_set(&b, &cone.support, cone.n);
                    assert!(cone_membership(&b, &cone, Some(&nset), variant).unwrap());
                }
            }
        }
    }
}
