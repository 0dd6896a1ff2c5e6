use crate::config::{SolverConfig, StepRule};
use crate::error::{Error, Result};
use crate::linalg::{power_iteration, Matrix};
use crate::scalar::{dot, Scalar};

#[derive(Debug, Clone)]
pub struct QpSolution<T> {
    pub x: Vec<T>,
    pub value: T,
    /// `‖x − P(x − ∇f(x)/Lip)‖∞` at the returned point.
    pub residual: T,
    pub iterations: usize,
    /// Step constant used at the end.
    pub lipschitz: T,
}

fn objective<T: Scalar>(q: &Matrix<T>, c: &[T], x: &[T]) -> (T, Vec<T>) {
    let qx = q.matvec(x);
    let val = dot(x, &qx) + dot(c, x);
    let grad = qx.iter().zip(c).map(|(&a, &b)| T::two() * a + b).collect();
    (val, grad)
}

fn step<T: Scalar>(
    x: &[T],
    grad: &[T],
    lip: T,
    project: &dyn Fn(&[T]) -> Vec<T>,
) -> Vec<T> {
    let y: Vec<T> = x.iter().zip(grad).map(|(&a, &g)| a - g / lip).collect();
    project(&y)
}

fn sup_diff<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |m, (&x, &y)| m.max((x - y).abs()))
}

/// Minimize `xᵀQx + cᵀx` over a closed convex set given by its projection.
///
/// Accelerated projected gradient in its monotone form: the returned iterate
/// sequence never increases the objective. The step `1/Lip` starts from
/// `Lip = 2λ_max(Q)` (power iteration) and doubles whenever the quadratic
/// upper model fails, so an underestimated `λ_max` is harmless.
pub fn projected_gradient_qp<T: Scalar>(
    q: &Matrix<T>,
    c: &[T],
    project: &dyn Fn(&[T]) -> Vec<T>,
    x0: &[T],
    config: &SolverConfig,
) -> Result<QpSolution<T>> {
    let n = c.len();
    assert_eq!(q.nrows(), n);
    assert_eq!(x0.len(), n);
    let tol = T::of(config.tol);
    let lam = power_iteration(q, 50).max(T::zero());
    let mut lip = match config.step_rule {
        StepRule::FixedInverseLipschitz => T::two() * lam * T::of(1.01),
        StepRule::Backtracking => T::two() * lam * T::of(0.25),
    }
    .max(T::of(1e-12));

    let mut x = project(x0);
    let (mut fx, mut gx) = objective(q, c, &x);
    let mut y = x.clone();
    let mut t = T::one();
    let mut residual = sup_diff(&x, &step(&x, &gx, lip, project));

    for it in 0..config.max_iters {
        if residual <= tol {
            return Ok(QpSolution {
                x,
                value: fx,
                residual,
                iterations: it,
                lipschitz: lip,
            });
        }
        let (fy, gy) = objective(q, c, &y);
        let mut z;
        let mut fz;
        loop {
            z = step(&y, &gy, lip, project);
            fz = objective(q, c, &z).0;
            let d: Vec<T> = z.iter().zip(&y).map(|(&a, &b)| a - b).collect();
            let model = fy + dot(&gy, &d) + lip * T::half() * dot(&d, &d);
            if fz <= model + T::epsilon() * T::of(16.0) * (fy.abs() + T::one()) {
                break;
            }
            lip = lip * T::two();
        }
        let t_next = (T::one() + (T::one() + T::of(4.0) * t * t).sqrt()) * T::half();
        let x_prev = x.clone();
        // Differences below rounding level count as ties, so the iteration
        // cannot stall on a plateau of equal objective values.
        let slack = T::epsilon() * T::of(8.0) * (fx.abs() + T::one());
        if fz <= fx + slack {
            x = z.clone();
            fx = fx.min(fz);
            // Momentum step from the new iterate.
            y = (0..n)
                .map(|i| x[i] + (t - T::one()) / t_next * (x[i] - x_prev[i]))
                .collect();
        } else {
            // Restart the momentum when the accelerated point is worse.
            y = x.clone();
            t = T::one();
            let (_, g) = objective(q, c, &x);
            gx = g;
            residual = sup_diff(&x, &step(&x, &gx, lip, project));
            continue;
        }
        t = t_next;
        gx = objective(q, c, &x).1;
        residual = sup_diff(&x, &step(&x, &gx, lip, project));
    }
    if residual <= tol {
        return Ok(QpSolution {
            x,
            value: fx,
            residual,
            iterations: config.max_iters,
            lipschitz: lip,
        });
    }
    Err(Error::MaxItersExceeded {
        iterations: config.max_iters,
        residual: residual.as_f64(),
        best: x.iter().map(|v| v.as_f64()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::project_l1_ball;

    #[test]
    fn unconstrained_identity() {
        let q = Matrix::<f64>::identity(3);
        let beta0 = [1.0, -2.0, 0.5];
        let c: Vec<f64> = beta0.iter().map(|b| -2.0 * b).collect();
        let proj = |v: &[f64]| project_l1_ball(v, 1e6);
        let sol = projected_gradient_qp(&q, &c, &proj, &[0.0; 3], &SolverConfig::default()).unwrap();
        for (a, b) in sol.x.iter().zip(&beta0) {
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn hyperplane_constraint_matches_lagrange() {
        // min x1² + 2x2² s.t. x1 + x2 = 1  ⇒  x = (2/3, 1/3).
        let q = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 2.0]]);
        let proj = |v: &[f64]| {
            let shift = (v[0] + v[1] - 1.0) / 2.0;
            vec![v[0] - shift, v[1] - shift]
        };
        let sol = projected_gradient_qp(&q, &[0.0, 0.0], &proj, &[0.0, 0.0], &SolverConfig::default())
            .unwrap();
        assert!((sol.x[0] - 2.0 / 3.0).abs() < 1e-8);
        assert!((sol.x[1] - 1.0 / 3.0).abs() < 1e-8);
        assert!((sol.value - 2.0 / 3.0).abs() < 1e-8);
    }
}
