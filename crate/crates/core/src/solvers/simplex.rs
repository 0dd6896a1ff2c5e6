use serde::Serialize;

use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// `min cᵀx` subject to `Ax = b`, `x ≥ 0`.
#[derive(Debug, Clone)]
pub struct LpProblem<T> {
    pub c: Vec<T>,
    pub a: Matrix<T>,
    pub b: Vec<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpSolution<T> {
    pub status: LpStatus,
    pub x: Vec<T>,
    pub value: T,
    /// Equality multipliers `y` with `c − Aᵀy ≥ 0` at an optimum.
    pub duals: Vec<T>,
    pub iterations: usize,
}

const PIVOT_TOL: f64 = 1e-10;

struct Tableau<T> {
    m: usize,
    width: usize,
    rows: Vec<Vec<T>>,
    cost: Vec<T>,
    basis: Vec<usize>,
}

impl<T: Scalar> Tableau<T> {
    fn pivot(&mut self, r: usize, col: usize) {
        let piv = self.rows[r][col];
        for v in self.rows[r].iter_mut() {
            *v /= piv;
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[col];
            if f != T::zero() {
                for (v, &pv) in row.iter_mut().zip(&prow) {
                    *v -= f * pv;
                }
                row[col] = T::zero();
            }
        }
        let f = self.cost[col];
        if f != T::zero() {
            for (v, &pv) in self.cost.iter_mut().zip(&prow) {
                *v -= f * pv;
            }
            self.cost[col] = T::zero();
        }
        self.basis[r] = col;
    }

    /// Bland's rule iterations over the eligible columns `0..eligible`.
    fn run(&mut self, eligible: usize, iters: &mut usize, max_iters: usize) -> Result<bool> {
        let tol = T::of(PIVOT_TOL);
        let rhs = self.width - 1;
        loop {
            let Some(col) = (0..eligible).find(|&j| self.cost[j] < -tol) else {
                return Ok(true);
            };
            let mut best: Option<(T, usize)> = None;
            for r in 0..self.m {
                let a = self.rows[r][col];
                if a > tol {
                    let ratio = self.rows[r][rhs] / a;
                    let better = match best {
                        None => true,
                        Some((br, bi)) => {
                            ratio < br || (ratio == br && self.basis[r] < self.basis[bi])
                        }
                    };
                    if better {
                        best = Some((ratio, r));
                    }
                }
            }
            let Some((_, r)) = best else {
                return Ok(false);
            };
            *iters += 1;
            if *iters > max_iters {
                return Err(Error::IterationLimit);
            }
            self.pivot(r, col);
        }
    }
}

/// Two-phase dense tableau simplex with Bland's anti-cycling rule.
pub fn simplex_lp<T: Scalar>(problem: &LpProblem<T>, config: &SolverConfig) -> Result<LpSolution<T>> {
    let m = problem.a.nrows();
    let n = problem.a.ncols();
    if problem.c.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: problem.c.len(),
        });
    }
    if problem.b.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: problem.b.len(),
        });
    }
    let width = n + m + 1;
    let flips: Vec<T> = problem
        .b
        .iter()
        .map(|&b| if b < T::zero() { -T::one() } else { T::one() })
        .collect();
    let rows: Vec<Vec<T>> = (0..m)
        .map(|i| {
            let mut row = vec![T::zero(); width];
            for j in 0..n {
                row[j] = problem.a.get(i, j) * flips[i];
            }
            row[n + i] = T::one();
            row[width - 1] = problem.b[i] * flips[i];
            row
        })
        .collect();
    let mut cost = vec![T::zero(); width];
    for row in &rows {
        for j in 0..n {
            cost[j] -= row[j];
        }
        cost[width - 1] -= row[width - 1];
    }
    let mut tab = Tableau {
        m,
        width,
        rows,
        cost,
        basis: (n..n + m).collect(),
    };
    let mut iters = 0;
    tab.run(n, &mut iters, config.max_iters)?;

    let bscale = problem.b.iter().fold(T::one(), |a, &b| a.max(b.abs()));
    let phase1 = -tab.cost[width - 1];
    if phase1 > T::of(1e-9) * bscale {
        return Ok(LpSolution {
            status: LpStatus::Infeasible,
            x: vec![T::zero(); n],
            value: T::nan(),
            duals: vec![T::zero(); m],
            iterations: iters,
        });
    }
    // Drive artificial variables out of the basis where possible; rows where
    // this fails are linearly dependent and stay with a zero artificial.
    for r in 0..m {
        if tab.basis[r] >= n {
            let best = (0..n)
                .filter(|&j| tab.rows[r][j].abs() > T::of(PIVOT_TOL))
                .max_by(|&a, &b| {
                    tab.rows[r][a]
                        .abs()
                        .partial_cmp(&tab.rows[r][b].abs())
                        .unwrap()
                });
            if let Some(j) = best {
                tab.pivot(r, j);
            }
        }
    }

    let mut cost = vec![T::zero(); width];
    cost[..n].copy_from_slice(&problem.c);
    for r in 0..m {
        let cb = if tab.basis[r] < n {
            problem.c[tab.basis[r]]
        } else {
            T::zero()
        };
        if cb != T::zero() {
            for (v, &a) in cost.iter_mut().zip(&tab.rows[r]) {
                *v -= cb * a;
            }
        }
    }
    for r in 0..m {
        cost[tab.basis[r]] = T::zero();
    }
    tab.cost = cost;
    let bounded = tab.run(n, &mut iters, config.max_iters)?;

    let mut x = vec![T::zero(); n];
    for r in 0..m {
        if tab.basis[r] < n {
            x[tab.basis[r]] = tab.rows[r][width - 1].max(T::zero());
        }
    }
    let duals: Vec<T> = (0..m).map(|i| -tab.cost[n + i] * flips[i]).collect();
    if !bounded {
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            x,
            value: T::neg_infinity(),
            duals,
            iterations: iters,
        });
    }
    let value = crate::scalar::dot(&problem.c, &x);
    Ok(LpSolution {
        status: LpStatus::Optimal,
        x,
        value,
        duals,
        iterations: iters,
    })
}
