#![allow(dead_code)]

use lasso_audit::implications::{EdgeStatus, ImplicationVerdict, Relation, EDGE_TOL};
use lasso_audit::rng::Gaussian;

/// Recompute `holds` and `certified` of every part from the endpoints and
/// panic on any disagreement.
pub fn audit_directions(v: &[ImplicationVerdict<f64>]) {
    for verdict in v {
        for c in &verdict.parts {
            let (small, big) = match c.relation {
                Relation::Le => (&c.lhs, &c.rhs),
                Relation::Ge => (&c.rhs, &c.lhs),
            };
            let m = [small.lower, small.upper, big.lower, big.upper]
                .iter()
                .filter(|x| x.is_finite())
                .fold(1.0f64, |a, x| a.max(x.abs()));
            let tol = EDGE_TOL * m;
            assert_eq!(c.holds, small.lower <= big.upper + tol, "{} {}", verdict.edge_id, c.name);
            assert_eq!(c.certified, small.upper <= big.lower + tol, "{} {}", verdict.edge_id, c.name);
            assert!(c.bound_direction_note.contains("certified: upper("));
        }
        assert_eq!(verdict.holds, verdict.status == EdgeStatus::Holds);
    }
}

/// `k` distinct indices below `p`, sorted.
pub fn random_subset(g: &mut Gaussian, p: usize, k: usize) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..p).collect();
    for i in 0..k {
        let j = i + g.index(p - i);
        pool.swap(i, j);
    }
    let mut out = pool[..k].to_vec();
    out.sort_unstable();
    out
}

/// `β⁰` on `support` with random signs and magnitudes in `[lo, lo + 1)`.
pub fn random_beta(g: &mut Gaussian, p: usize, support: &[usize], lo: f64) -> Vec<f64> {
    let mut b = vec![0.0; p];
    for &j in support {
        let sign = if g.uniform() < 0.5 { -1.0 } else { 1.0 };
        b[j] = sign * (lo + g.uniform());
    }
    b
}
