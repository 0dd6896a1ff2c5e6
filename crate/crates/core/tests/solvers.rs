use itertools::Itertools;
use lasso_audit::rng::Gaussian;
use lasso_audit::solvers::{
    coordinate_descent_lasso, project_l1_ball, projected_gradient_qp, simplex_lp, LpProblem, LpStatus,
};
use lasso_audit::experiments::{random_psd, toeplitz_geometric};
use lasso_audit::{Error, GramMatrix, Matrix, SolverConfig};
use proptest::prelude::*;

/// Projection onto `{‖x‖₁ ≤ r}` by trying every support size `k` and
/// keeping the threshold that is consistent with it.
fn l1_oracle(v: &[f64], r: f64) -> Vec<f64> {
    if v.iter().map(|x| x.abs()).sum::<f64>() <= r {
        return v.to_vec();
    }
    let mut u: Vec<f64> = v.iter().map(|x| x.abs()).collect();
    u.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let n = u.len();
    for k in 1..=n {
        let sum: f64 = u[..k].iter().sum();
        let theta = (sum - r) / k as f64;
        if theta >= 0.0 && u[k - 1] > theta && (k == n || u[k] <= theta) {
            return v.iter().map(|&x| x.signum() * (x.abs() - theta).max(0.0)).collect();
        }
    }
    unreachable!("no consistent threshold")
}

fn sup(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

#[test]
fn l1_projection_examples() {
    assert_eq!(project_l1_ball(&[0.2, -0.3], 1.0), vec![0.2, -0.3]);
    let out = project_l1_ball(&[3.0, 0.0], 1.0);
    assert!(sup(&out, &[1.0, 0.0]) < 1e-15, "{out:?}");
    let out = project_l1_ball(&[1.0, -1.0], 1.0);
    assert!(sup(&out, &[0.5, -0.5]) < 1e-15, "{out:?}");
}

#[test]
fn l1_projection_matches_threshold_search() {
    let mut g = Gaussian::new(11, 0);
    for _ in 0..500 {
        let n = 1 + g.index(12);
        let v: Vec<f64> = (0..n).map(|_| 3.0 * g.sample()).collect();
        let r = 0.1 + 4.0 * g.uniform();
        let got = project_l1_ball(&v, r);
        let want = l1_oracle(&v, r);
        assert!(sup(&got, &want) < 1e-12, "{v:?} r={r}: {got:?} vs {want:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn l1_projection_is_feasible_and_idempotent(
        v in prop::collection::vec(-10.0f64..10.0, 1..15),
        r in 0.01f64..10.0,
    ) {
        let x = project_l1_ball(&v, r);
        let l1: f64 = x.iter().map(|a| a.abs()).sum();
        prop_assert!(l1 <= r + 1e-12);
        let again = project_l1_ball(&x, r);
        prop_assert!(sup(&x, &again) < 1e-12);
        // Signs are kept and magnitudes only shrink.
        for (a, b) in x.iter().zip(&v) {
            prop_assert!(a.abs() <= b.abs() + 1e-15);
            prop_assert!(*a == 0.0 || a.signum() == b.signum());
        }
    }
}

#[test]
fn qp_unconstrained_minimum_inside_a_large_ball() {
    let beta0 = [1.0, -0.5, 0.25, 2.0];
    let q = Matrix::identity(4);
    let c: Vec<f64> = beta0.iter().map(|b| -2.0 * b).collect();
    let proj = |v: &[f64]| project_l1_ball(v, 1e6);
    let sol = projected_gradient_qp(&q, &c, &proj, &[0.0; 4], &SolverConfig::default()).unwrap();
    assert!(sup(&sol.x, &beta0) < 1e-8, "{:?}", sol.x);
    let norm2: f64 = beta0.iter().map(|b| b * b).sum();
    assert!((sol.value + norm2).abs() < 1e-12);
}

#[test]
fn qp_on_a_line_matches_lagrange_solution() {
    // min xᵀQx + cᵀx subject to aᵀx = b.
    let (q11, q12, q22) = (2.0, 0.5, 1.0);
    let c = [-1.0, 0.3];
    let a = [1.0, 2.0];
    let b = 1.0;
    // (2Q)⁻¹ by hand.
    let det = 4.0 * (q11 * q22 - q12 * q12);
    let inv = [[2.0 * q22 / det, -2.0 * q12 / det], [-2.0 * q12 / det, 2.0 * q11 / det]];
    let apply = |v: [f64; 2]| [inv[0][0] * v[0] + inv[0][1] * v[1], inv[1][0] * v[0] + inv[1][1] * v[1]];
    let ic = apply(c);
    let ia = apply(a);
    let mu = -(b + a[0] * ic[0] + a[1] * ic[1]) / (a[0] * ia[0] + a[1] * ia[1]);
    let want = [-(ic[0] + mu * ia[0]), -(ic[1] + mu * ia[1])];

    let qm = Matrix::from_rows(&[vec![q11, q12], vec![q12, q22]]);
    let na = a[0] * a[0] + a[1] * a[1];
    let proj = move |v: &[f64]| {
        let r = (a[0] * v[0] + a[1] * v[1] - b) / na;
        vec![v[0] - r * a[0], v[1] - r * a[1]]
    };
    let sol = projected_gradient_qp(&qm, &c, &proj, &[5.0, -3.0], &SolverConfig::default()).unwrap();
    assert!(sup(&sol.x, &want) < 1e-8, "{:?} vs {want:?}", sol.x);
}

fn qp_value(q: &Matrix<f64>, c: &[f64], x: &[f64]) -> f64 {
    q.quad(x) + c.iter().zip(x).map(|(a, b)| a * b).sum::<f64>()
}

#[test]
fn qp_objective_does_not_increase() {
    let gram = random_psd(8, Some(5), 3).unwrap();
    let q = gram.matrix().clone();
    let mut g = Gaussian::new(2, 0);
    let c: Vec<f64> = (0..8).map(|_| g.sample()).collect();
    let proj = |v: &[f64]| project_l1_ball(v, 2.0);
    let x0 = vec![0.0; 8];
    let mut last = qp_value(&q, &c, &x0);
    for k in 1..60 {
        let config = SolverConfig {
            max_iters: k,
            tol: 0.0,
            ..SolverConfig::default()
        };
        let x = match projected_gradient_qp(&q, &c, &proj, &x0, &config) {
            Ok(s) => s.x,
            Err(Error::MaxItersExceeded { best, .. }) => best,
            Err(e) => panic!("{e}"),
        };
        let v = qp_value(&q, &c, &x);
        assert!(v <= last + 1e-12 * (1.0 + last.abs()), "iteration {k}: {v} > {last}");
        last = v;
    }
}

fn lasso_objective(gram: &GramMatrix<f64>, corr: &[f64], lambda: f64, beta: &[f64]) -> f64 {
    gram.quad(beta) - 2.0 * corr.iter().zip(beta).map(|(a, b)| a * b).sum::<f64>()
        + lambda * beta.iter().map(|b| b.abs()).sum::<f64>()
}

#[test]
fn coordinate_descent_examples() {
    let id = GramMatrix::<f64>::identity(3);
    let beta0 = [1.0, 0.2, 0.0];
    let config = SolverConfig::default();
    let out = coordinate_descent_lasso(&id, &beta0, 0.5, None, &config).unwrap();
    assert!(sup(&out.beta, &[0.75, 0.0, 0.0]) < 1e-12, "{:?}", out.beta);

    // λ_min(Σ) ≥ 0.25, so a KKT residual of 1e-9 pins β to about 1e-9.
    let gram = toeplitz_geometric(6, 0.6).unwrap();
    let b0 = [0.5, -1.0, 0.0, 0.0, 2.0, 0.0];
    let corr = gram.matvec(&b0);
    let out = coordinate_descent_lasso(&gram, &corr, 0.0, None, &config).unwrap();
    assert!(sup(&out.beta, &b0) < 1e-8, "{:?}", out.beta);

    let lmax = 2.0 * corr.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let out = coordinate_descent_lasso(&gram, &corr, lmax, None, &config).unwrap();
    assert!(out.beta.iter().all(|&v| v == 0.0), "{:?}", out.beta);
}

#[test]
fn coordinate_descent_objective_is_monotone() {
    let gram = random_psd(10, Some(6), 4).unwrap();
    let mut g = Gaussian::new(4, 1);
    let corr: Vec<f64> = (0..10).map(|_| g.sample()).collect();
    let lambda = 0.3;
    let mut last = 0.0f64;
    for k in 1..40 {
        let config = SolverConfig {
            max_iters: k,
            tol: 0.0,
            ..SolverConfig::default()
        };
        let beta = match coordinate_descent_lasso(&gram, &corr, lambda, None, &config) {
            Ok(o) => o.beta,
            Err(Error::MaxItersExceeded { best, .. }) => best,
            Err(e) => panic!("{e}"),
        };
        let v = lasso_objective(&gram, &corr, lambda, &beta);
        assert!(v <= last + 1e-12 * (1.0 + last.abs()), "sweep {k}: {v} > {last}");
        last = v;
    }
}

#[test]
fn simplex_examples() {
    let config = SolverConfig::default();
    let lp: LpProblem<f64> = LpProblem {
        c: vec![1.0, 1.0],
        a: Matrix::from_rows(&[vec![1.0, 1.0]]),
        b: vec![1.0],
    };
    let sol = simplex_lp(&lp, &config).unwrap();
    assert_eq!(sol.status, LpStatus::Optimal);
    assert!((sol.value - 1.0).abs() < 1e-12);

    let lp: LpProblem<f64> = LpProblem {
        c: vec![1.0, 0.0],
        a: Matrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]),
        b: vec![1.0, 2.0],
    };
    assert_eq!(simplex_lp(&lp, &config).unwrap().status, LpStatus::Infeasible);

    let lp: LpProblem<f64> = LpProblem {
        c: vec![0.0, -1.0],
        a: Matrix::from_rows(&[vec![1.0, -1.0]]),
        b: vec![1.0],
    };
    assert_eq!(simplex_lp(&lp, &config).unwrap().status, LpStatus::Unbounded);
}

/// Minimum of `cᵀx` over all basic feasible solutions, by trying every basis.
fn vertex_minimum(lp: &LpProblem<f64>) -> Option<f64> {
    let (m, n) = (lp.a.nrows(), lp.a.ncols());
    let mut best: Option<f64> = None;
    for cols in (0..n).combinations(m) {
        let sub = lp.a.select(&(0..m).collect::<Vec<_>>(), &cols);
        let Some(xb) = gauss(&sub, &lp.b) else { continue };
        if xb.iter().any(|&v| v < -1e-10) {
            continue;
        }
        let v: f64 = cols.iter().zip(&xb).map(|(&j, &x)| lp.c[j] * x).sum();
        best = Some(best.map_or(v, |b: f64| b.min(v)));
    }
    best
}

/// Gaussian elimination with partial pivoting; `None` when singular.
fn gauss(a: &Matrix<f64>, b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = (0..n).map(|i| {
        let mut r = a.row(i).to_vec();
        r.push(b[i]);
        r
    }).collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| m[x][col].abs().partial_cmp(&m[y][col].abs()).unwrap())?;
        if m[piv][col].abs() < 1e-9 {
            return None;
        }
        m.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = m[r][col] / m[col][col];
                for k in col..=n {
                    m[r][k] -= f * m[col][k];
                }
            }
        }
    }
    Some((0..n).map(|i| m[i][n] / m[i][i]).collect())
}

fn random_lp(g: &mut Gaussian) -> LpProblem<f64> {
    let m = 1 + g.index(3);
    let n = m + 1 + g.index(4);
    // The first row bounds the feasible set; the others are random.
    let a = Matrix::from_fn(m, n, |i, _| if i == 0 { 1.0 } else { g.sample() });
    let x: Vec<f64> = (0..n).map(|_| g.uniform()).collect();
    let b = a.matvec(&x);
    let c = (0..n).map(|_| g.sample()).collect();
    LpProblem { c, a, b }
}

#[test]
fn simplex_matches_vertex_enumeration() {
    let mut g = Gaussian::new(21, 0);
    let config = SolverConfig::default();
    for _ in 0..300 {
        let lp = random_lp(&mut g);
        let sol = simplex_lp(&lp, &config).unwrap();
        let want = vertex_minimum(&lp).expect("feasible by construction");
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.value - want).abs() < 1e-9 * (1.0 + want.abs()), "{} vs {want}", sol.value);
        let ax = lp.a.matvec(&sol.x);
        assert!(sup(&ax, &lp.b) < 1e-9);
        assert!(sol.x.iter().all(|&v| v >= 0.0));
    }
}

#[test]
fn simplex_complementary_slackness() {
    let mut g = Gaussian::new(22, 0);
    let config = SolverConfig::default();
    for _ in 0..300 {
        let lp = random_lp(&mut g);
        let sol = simplex_lp(&lp, &config).unwrap();
        let aty = lp.a.t_matvec(&sol.duals);
        for j in 0..lp.c.len() {
            let reduced = lp.c[j] - aty[j];
            assert!(reduced >= -1e-9, "dual infeasible at {j}: {reduced}");
            assert!((sol.x[j] * reduced).abs() <= 1e-9, "slackness at {j}");
        }
        let by: f64 = lp.b.iter().zip(&sol.duals).map(|(a, b)| a * b).sum();
        assert!((by - sol.value).abs() < 1e-9 * (1.0 + by.abs()));
    }
}
