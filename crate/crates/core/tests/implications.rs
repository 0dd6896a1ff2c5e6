use lasso_audit::experiments::{equicorrelation, example_irr, random_psd, toeplitz_geometric};
use lasso_audit::implications::{
    check_all, check_edge, perturbation_transfer, EdgeInputs, EdgeStatus, ImplicationVerdict,
    TransferTarget, EDGE_IDS, EDGE_TOL,
};
use lasso_audit::{BoundedValue, ConeSpec, Error, GramMatrix, IndexSet, Matrix, PerturbationPair, SolverConfig};
use proptest::prelude::*;

mod common;
use common::audit_directions;

fn cone(s: usize, l: f64, n: usize, p: usize) -> ConeSpec<f64> {
    ConeSpec::new(IndexSet::first(s), l, n, p).unwrap()
}

fn failed(v: &[ImplicationVerdict<f64>]) -> Vec<String> {
    v.iter()
        .filter(|x| x.status == EdgeStatus::Failed)
        .map(|x| format!("{}: {:?}", x.edge_id, x.parts))
        .collect()
}

/// Recompute `holds` and `certified` of every part from its endpoints.
#[test]
fn identity_all_edges_hold() {
    let g = GramMatrix::<f64>::identity(8);
    let v = check_all(&g, &cone(2, 1.0, 2, 8), &SolverConfig::reduced()).unwrap();
    assert_eq!(v.len(), 11);
    for x in &v {
        assert_eq!(x.status, EdgeStatus::Holds, "{x:?}");
        assert!(x.certified, "{x:?}");
        // Several edges are equalities `0 = 0` or `1 = 1` on the identity.
        assert!(x.slack >= -EDGE_TOL, "{x:?}");
    }
    let ids: Vec<&str> = v.iter().map(|x| x.edge_id.as_str()).collect();
    assert_eq!(ids, EDGE_IDS);
    audit_directions(&v);
}

#[test]
fn irrepresentable_example_e4_equality() {
    // ρ√s = 0.3·2 = 0.6 < 1.
    let g = example_irr::<f64>(9, 4, 0.3, None, None).unwrap();
    let c = cone(4, 1.0, 4, 9);
    let inputs = EdgeInputs::compute(&g, &c, &SolverConfig::reduced(), &["irr_s", "theta_ad_s"]).unwrap();
    let v = check_edge("E4", &g, &c, &inputs, &SolverConfig::reduced()).unwrap();
    assert_eq!(v.status, EdgeStatus::Holds);
    assert!((v.lhs_value - 0.6).abs() < 1e-9, "{v:?}");
    assert!(v.slack.abs() < 1e-6, "{v:?}");
}

#[test]
fn irrepresentable_failure_skips_e8() {
    // ρ√s = 0.7·2 = 1.4 > 1.
    let g = example_irr::<f64>(8, 4, 0.7, None, None).unwrap();
    let v = check_all(&g, &cone(4, 1.0, 4, 8), &SolverConfig::reduced()).unwrap();
    let e8 = &v[7];
    assert_eq!(e8.edge_id, "E8");
    assert_eq!(e8.status, EdgeStatus::Skipped);
    assert!(e8.skip_reason.as_ref().unwrap().contains("premise"));
    assert!(failed(&v).is_empty(), "{:?}", failed(&v));
}

#[test]
fn missing_input_is_reported() {
    let g = GramMatrix::<f64>::identity(4);
    let c = cone(2, 1.0, 2, 4);
    let err = check_edge("E4", &g, &c, &EdgeInputs::new(), &SolverConfig::reduced()).unwrap_err();
    assert!(matches!(err, Error::MissingInput { ref edge, .. } if edge == "E4"), "{err}");
    let err = check_edge("E12", &g, &c, &EdgeInputs::new(), &SolverConfig::reduced()).unwrap_err();
    assert!(matches!(err, Error::UnknownEdge(_)));
}

#[test]
fn structured_matrices_have_no_failures() {
    let cases: Vec<GramMatrix<f64>> = vec![
        equicorrelation(7, 0.4).unwrap(),
        toeplitz_geometric(7, 0.5).unwrap(),
        random_psd(7, Some(5), 3).unwrap(),
    ];
    for g in cases {
        for (s, l, n) in [(2, 1.0, 2), (2, 2.0, 4), (3, 1.0, 3)] {
            let v = check_all(&g, &cone(s, l, n, 7), &SolverConfig::reduced()).unwrap();
            assert!(failed(&v).is_empty(), "{:?}", failed(&v));
            audit_directions(&v);
        }
    }
}

#[test]
fn verdicts_do_not_depend_on_thread_count() {
    let g = random_psd::<f64>(6, None, 11).unwrap();
    let c = cone(2, 1.0, 2, 6);
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| serde_json::to_string(&check_all(&g, &c, &SolverConfig::reduced()).unwrap()).unwrap())
    };
    assert_eq!(run(1), run(3));
}

#[test]
fn transfer_unchanged_at_zero_distance() {
    let g = GramMatrix::<f64>::identity(6);
    let pair = PerturbationPair::new(g.clone(), g).unwrap();
    let phi0 = BoundedValue::certified_lower(0.8, 0.8);
    let t = perturbation_transfer(&pair, &cone(2, 1.0, 2, 6), &phi0, TransferTarget::Compat);
    assert_eq!(t.lower, 0.8);
}

#[test]
fn transfer_identity_example() {
    let p = 8;
    let s0 = GramMatrix::<f64>::identity(p);
    let s1 = GramMatrix::new(Matrix::from_fn(p, p, |i, j| if i == j { 1.0001 } else { 0.0001 })).unwrap();
    let pair = PerturbationPair::new(s0, s1).unwrap();
    assert!((pair.d_inf - 1e-4).abs() < 1e-15);
    let phi0 = BoundedValue::exact(1.0);
    let t = perturbation_transfer(&pair, &cone(4, 1.0, 4, p), &phi0, TransferTarget::Re);
    assert!(t.lower >= 0.96 - 1e-12, "{t:?}");
    assert!((t.lower - 0.96).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transfer_is_monotone_in_distance(d1 in 0.0f64..0.1, d2 in 0.0f64..0.1, phi in 0.0f64..2.0, l in 0.0f64..3.0) {
        let (lo, hi) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
        let c = cone(3, l, 3, 6);
        let mk = |d: f64| {
            let g = GramMatrix::<f64>::identity(6);
            PerturbationPair { sigma0: g.clone(), sigma1: g, d_inf: d }
        };
        let phi0 = BoundedValue::certified_lower(phi, phi);
        let a = perturbation_transfer(&mk(lo), &c, &phi0, TransferTarget::Compat).lower;
        let b = perturbation_transfer(&mk(hi), &c, &phi0, TransferTarget::Compat).lower;
        prop_assert!(b <= a);
        prop_assert!(b >= 0.0);
    }
}
