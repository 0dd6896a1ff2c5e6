use lasso_audit::cone::{chunk_tail, cone_membership, supersets, top_set};
use lasso_audit::experiments::{equicorrelation, random_psd};
use lasso_audit::gram::{d_infinity, Block};
use lasso_audit::rng::Gaussian;
use lasso_audit::{BoundedValue, ConeSpec, ConeVariant, Error, GramMatrix, IndexSet, Matrix};
use proptest::prelude::*;

fn cone(s: &[usize], l: f64, n: usize, p: usize) -> ConeSpec<f64> {
    ConeSpec::new(IndexSet::new(s.to_vec(), p).unwrap(), l, n, p).unwrap()
}

fn random_symmetric(p: usize, seed: u64) -> Matrix<f64> {
    let mut g = Gaussian::new(seed, 0);
    let mut m = Matrix::zeros(p, p);
    for i in 0..p {
        for j in i..p {
            let v = g.sample();
            m.set(i, j, v);
            m.set(j, i, v);
        }
    }
    m
}

#[test]
fn blocks_of_identity_and_equicorrelation() {
    let id = GramMatrix::<f64>::identity(4);
    assert_eq!(id.block(Block::B11, &[0, 1]), Matrix::identity(2));
    let eq = equicorrelation::<f64>(4, 0.5).unwrap();
    let b21 = eq.block(Block::B21, &[0]);
    assert_eq!((b21.nrows(), b21.ncols()), (3, 1));
    assert!((0..3).all(|i| b21.get(i, 0) == 0.5));
}

#[test]
fn block_21_is_transpose_of_12() {
    let m = random_symmetric(6, 1);
    let g = GramMatrix::new_unchecked(m.clone());
    let nset = [1, 3];
    let rest = [0, 2, 4, 5];
    let b21 = g.block(Block::B21, &nset);
    let b12 = g.block(Block::B12, &nset);
    for (i, &r) in rest.iter().enumerate() {
        for (k, &c) in nset.iter().enumerate() {
            assert_eq!(b21.get(i, k), m.get(r, c));
            assert_eq!(b12.get(k, i), m.get(c, r));
        }
    }
}

#[test]
fn min_eigen_examples() {
    let id = GramMatrix::<f64>::identity(5);
    assert!((id.min_eigen_11(&[0, 2, 4]) - 1.0).abs() < 1e-12);
    let eq = equicorrelation::<f64>(6, 0.5).unwrap();
    assert!((eq.min_eigen_11(&[1, 2, 5]) - 0.5).abs() < 1e-10);
    let two: GramMatrix<f64> = GramMatrix::new(Matrix::from_rows(&[vec![1.0, 0.9], vec![0.9, 1.0]])).unwrap();
    assert!((two.min_eigen_11(&[0, 1]) - 0.1).abs() < 1e-10);
}

#[test]
fn cone_membership_examples() {
    let c = cone(&[0, 1], 1.0, 2, 6);
    let on_support = [1.0, -2.0, 0.0, 0.0, 0.0, 0.0];
    for l in [0.0, 1.0, 5.0] {
        for v in [ConeVariant::Standard, ConeVariant::Adaptive] {
            assert!(cone_membership(&on_support, &c.with_l(l), None, v).unwrap());
        }
    }
    let outside = [1.0, 1.0, 2.5, 0.0, 0.0, 0.0];
    assert!(!cone_membership(&outside, &c, None, ConeVariant::Standard).unwrap());
    // β_S = 0 is excluded.
    let zero_head = [0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
    assert!(!cone_membership(&zero_head, &c, None, ConeVariant::Standard).unwrap());
}

#[test]
fn cone_membership_with_nset() {
    let c = cone(&[0], 2.0, 2, 4);
    let beta = [1.0, 0.5, 0.7, 0.0];
    // 𝒩 = {0,1}: ‖β_{𝒩ᶜ}‖∞ = 0.7 > 0.5.
    assert!(!cone_membership(&beta, &c, Some(&[0, 1]), ConeVariant::Standard).unwrap());
    assert!(cone_membership(&beta, &c, Some(&[0, 2]), ConeVariant::Standard).unwrap());
    // 𝒩 = S drops the sup-norm constraint.
    assert!(cone_membership(&[1.0, 0.5, 0.0, 0.0], &c, Some(&[0]), ConeVariant::Standard).unwrap());
}

#[test]
fn cone_membership_matches_direct_inequalities() {
    let c = cone(&[1, 4], 1.5, 3, 7);
    for k in 0..10 {
        let mut g = Gaussian::new(11, k);
        let beta: Vec<f64> = (0..7).map(|_| g.sample()).collect();
        let head = beta[1].abs() + beta[4].abs();
        let head2 = (beta[1].powi(2) + beta[4].powi(2)).sqrt();
        let tail: f64 = [0, 2, 3, 5, 6].iter().map(|&j| beta[j].abs()).sum();
        let plain = tail <= 1.5 * head;
        let adaptive = tail <= 2f64.sqrt() * 1.5 * head2;
        assert_eq!(cone_membership(&beta, &c, None, ConeVariant::Standard).unwrap(), plain);
        assert_eq!(cone_membership(&beta, &c, None, ConeVariant::Adaptive).unwrap(), adaptive);
    }
}

#[test]
fn chunking_example() {
    // S = {0,1}, β_{Sᶜ} = (4,1,3,2,0.5,0.1) on coordinates 2..8.
    let beta = [9.0, 9.0, 4.0, 1.0, 3.0, 2.0, 0.5, 0.1];
    let c = cone(&[0, 1], 1.0, 2, 8);
    let parts = chunk_tail(&beta, &c).unwrap();
    assert_eq!(parts.chunks, vec![vec![2, 4], vec![5, 3], vec![6, 7]]);
    assert_eq!(parts.leading_set(&c.support), vec![0, 1, 2, 4]);
}

#[test]
fn chunking_short_last_chunk_and_ties() {
    let beta = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
    let c = cone(&[0, 6], 1.0, 2, 7);
    let parts = chunk_tail(&beta, &c).unwrap();
    assert_eq!(parts.chunks, vec![vec![1, 2], vec![3, 4], vec![5]]);
}

#[test]
fn top_set_uses_largest_tail_coordinates() {
    let beta = [0.1, 5.0, -7.0, 0.2, 7.0];
    let support = IndexSet::new(vec![0], 5).unwrap();
    // Tie between |−7| and |7| goes to the smaller index.
    assert_eq!(top_set(&beta, &support, 2), vec![0, 2]);
    assert_eq!(top_set(&beta, &support, 3), vec![0, 2, 4]);
    assert_eq!(top_set(&beta, &support, 1), vec![0]);
}

#[test]
fn d_infinity_examples() {
    let g = random_psd::<f64>(5, None, 3).unwrap();
    assert_eq!(d_infinity(&g, &g).unwrap(), 0.0);
    let mut m = Matrix::identity(4);
    m.set(1, 2, 0.03);
    m.set(2, 1, 0.03);
    let moved = GramMatrix::new(m).unwrap();
    assert_eq!(d_infinity(&GramMatrix::identity(4), &moved).unwrap(), 0.03);
    let a = random_psd::<f64>(6, None, 4).unwrap();
    let b = random_psd::<f64>(6, None, 5).unwrap();
    let mut scan = 0.0f64;
    for j in 0..6 {
        for k in 0..6 {
            scan = scan.max((a.get(j, k) - b.get(j, k)).abs());
        }
    }
    assert_eq!(d_infinity(&a, &b).unwrap(), scan);
    assert!(matches!(
        d_infinity(&a, &GramMatrix::identity(3)),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn superset_enumeration_examples() {
    let s = IndexSet::new(vec![2], 6).unwrap();
    assert_eq!(supersets(&s, 6, 1, 10).unwrap().collect::<Vec<_>>(), vec![vec![2]]);
    let all: Vec<_> = supersets(&s, 6, 3, 1000).unwrap().collect();
    assert_eq!(all.len(), 10);
    assert!(all.iter().all(|n| n.contains(&2) && n.len() == 3));
    let s2 = IndexSet::new(vec![0, 1], 10).unwrap();
    match supersets(&s2, 10, 4, 10) {
        Err(Error::CapExceeded { needed, cap }) => assert_eq!((needed, cap), (28, 10)),
        other => panic!("expected CapExceeded, got {:?}", other.map(|_| ())),
    };
}

#[test]
fn gram_validation() {
    let asym = Matrix::from_rows(&[vec![1.0, 0.2], vec![0.1, 1.0]]);
    assert!(matches!(GramMatrix::new(asym), Err(Error::NotSymmetric(_))));
    // Rank-deficient input is accepted.
    let x: Matrix<f64> = Matrix::from_rows(&[vec![1.0, 2.0, 3.0]]);
    let g = GramMatrix::from_design(&x);
    assert!(GramMatrix::new(g.matrix().clone()).is_ok());
}

#[test]
fn index_set_validation() {
    let empty = IndexSet::new(vec![], 3).unwrap();
    assert!(matches!(ConeSpec::new(empty, 1.0, 0, 3), Err(Error::EmptySupport)));
    assert!(matches!(IndexSet::new(vec![0, 0], 3), Err(Error::DuplicateIndex(0))));
    assert!(matches!(IndexSet::new(vec![3], 3), Err(Error::IndexOutOfRange { index: 3, p: 3 })));
    assert_eq!(IndexSet::new(vec![2, 0], 3).unwrap().as_slice(), &[0, 2]);
    assert!(ConeSpec::new(IndexSet::first(2), 1.0, 1, 4).is_err());
    assert!(ConeSpec::new(IndexSet::first(2), -1.0, 2, 4).is_err());
}

fn char_poly_min(m: &Matrix<f64>) -> f64 {
    match m.nrows() {
        2 => {
            let (a, b, d) = (m.get(0, 0), m.get(0, 1), m.get(1, 1));
            (a + d) / 2.0 - (((a - d) / 2.0).powi(2) + b * b).sqrt()
        }
        3 => {
            // Trigonometric solution of the symmetric cubic.
            let q = (m.get(0, 0) + m.get(1, 1) + m.get(2, 2)) / 3.0;
            let p1 = m.get(0, 1).powi(2) + m.get(0, 2).powi(2) + m.get(1, 2).powi(2);
            let p2 = (m.get(0, 0) - q).powi(2) + (m.get(1, 1) - q).powi(2) + (m.get(2, 2) - q).powi(2) + 2.0 * p1;
            let p = (p2 / 6.0).sqrt();
            if p == 0.0 {
                return q;
            }
            let b = Matrix::from_fn(3, 3, |i, j| (m.get(i, j) - if i == j { q } else { 0.0 }) / p);
            let det = b.get(0, 0) * (b.get(1, 1) * b.get(2, 2) - b.get(1, 2) * b.get(2, 1))
                - b.get(0, 1) * (b.get(1, 0) * b.get(2, 2) - b.get(1, 2) * b.get(2, 0))
                + b.get(0, 2) * (b.get(1, 0) * b.get(2, 1) - b.get(1, 1) * b.get(2, 0));
            let phi = (det / 2.0).clamp(-1.0, 1.0).acos() / 3.0;
            q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos()
        }
        _ => unreachable!(),
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn leading_set_tail_bound(
        tail in prop::collection::vec(-10.0f64..10.0, 4..12),
        head in prop::collection::vec(-10.0f64..10.0, 1..4),
    ) {
        let s = head.len();
        let p = s + tail.len();
        let beta: Vec<f64> = head.iter().chain(&tail).copied().collect();
        let c = cone(&(0..s).collect::<Vec<_>>(), 1.0, s, p);
        let nset = chunk_tail(&beta, &c).unwrap().leading_set(&c.support);
        let rest: Vec<f64> = (0..p).filter(|j| !nset.contains(j)).map(|j| beta[j].abs()).collect();
        let l1: f64 = tail.iter().map(|v| v.abs()).sum();
        let sf = s as f64;
        let r1: f64 = rest.iter().sum();
        let r2: f64 = rest.iter().map(|v| v * v).sum::<f64>().sqrt();
        // r = 1 (q = ∞): no gain; r = 2 (q = 2): a factor 1/√s.
        prop_assert!(r1 <= l1 * (1.0 + 1e-12));
        prop_assert!(r2 <= l1 / sf.sqrt() * (1.0 + 1e-12) + 1e-12);
    }
}

proptest! {
    #[test]
    fn block_11_is_principal_submatrix(seed in 0u64..1000, mask in 1u32..64) {
        let m = random_symmetric(6, seed);
        let g = GramMatrix::new_unchecked(m.clone());
        let set: Vec<usize> = (0..6).filter(|j| mask >> j & 1 == 1).collect();
        let b = g.block(Block::B11, &set);
        for (i, &r) in set.iter().enumerate() {
            for (k, &c) in set.iter().enumerate() {
                prop_assert_eq!(b.get(i, k), m.get(r, c));
            }
        }
    }

    #[test]
    fn min_eigen_matches_characteristic_polynomial(seed in 0u64..5000, three in any::<bool>()) {
        let n = if three { 3 } else { 2 };
        let m = random_symmetric(n, seed);
        let g = GramMatrix::new_unchecked(m.clone());
        let all: Vec<usize> = (0..n).collect();
        prop_assert!((g.min_eigen_11(&all) - char_poly_min(&m)).abs() < 1e-9);
    }

    #[test]
    fn superset_count_is_binomial(p in 2usize..10, s in 1usize..4, extra in 0usize..4) {
        prop_assume!(s < p);
        let n = (s + extra).min(p);
        let support = IndexSet::first(s);
        let sets: Vec<Vec<usize>> = supersets(&support, p, n, u128::MAX).unwrap().collect();
        let distinct: std::collections::BTreeSet<_> = sets.iter().cloned().collect();
        prop_assert_eq!(sets.len(), binomial(p - s, n - s));
        prop_assert_eq!(distinct.len(), sets.len());
        prop_assert!(sets.iter().all(|x| support.is_subset_of(x) && x.len() == n));
    }

    #[test]
    fn chunks_partition_the_tail(beta in prop::collection::vec(-5.0f64..5.0, 3..14), s in 1usize..3) {
        let p = beta.len();
        let c = cone(&(0..s).collect::<Vec<_>>(), 1.0, s, p);
        let parts = chunk_tail(&beta, &c).unwrap();
        let mut seen: Vec<usize> = parts.chunks.iter().flatten().copied().collect();
        seen.sort_unstable();
        prop_assert_eq!(seen, (s..p).collect::<Vec<_>>());
        for (k, chunk) in parts.chunks.iter().enumerate() {
            if k + 1 < parts.chunks.len() {
                prop_assert_eq!(chunk.len(), s);
            }
            if k > 0 {
                let floor = parts.chunks[k - 1].iter().map(|&j| beta[j].abs()).fold(f64::INFINITY, f64::min);
                prop_assert!(chunk.iter().all(|&j| beta[j].abs() <= floor));
            }
        }
    }

    #[test]
    fn bounded_value_ordering(a in -1e3f64..1e3, b in -1e3f64..1e3, c in -1e3f64..1e3) {
        let mut v = [a, b, c];
        v.sort_by(f64::total_cmp);
        let bv = BoundedValue::interval(v[0], v[1], v[2]);
        prop_assert!(bv.is_ordered(1e-9));
        prop_assert!(BoundedValue::exact(a).is_ordered(0.0));
    }

    #[test]
    fn gram_psd_spot_check(seed in 0u64..200, p in 2usize..8) {
        let g = random_psd::<f64>(p, Some(p + 1), seed).unwrap();
        let mut rng = Gaussian::new(seed, 9);
        for _ in 0..50 {
            let v: Vec<f64> = (0..p).map(|_| rng.sample()).collect();
            prop_assert!(g.quad(&v) >= -1e-9);
        }
        prop_assert!(GramMatrix::new(g.matrix().clone()).is_ok());
    }
}
