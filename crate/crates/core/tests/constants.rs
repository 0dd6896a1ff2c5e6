use itertools::Itertools;
use lasso_audit::constants::{
    alpha_constant, alpha_rip_bound, block_norm_2q, coherence, irrepresentable_matrix, irrepresentable_signed,
    irrepresentable_uniform, max_row_l1, restricted_isometry, restricted_orthogonality, rip_constant, theta_uniform,
    uniform_eigenvalue, weak_rip_constant, AlphaParts, CoherenceKind, NormMode, NormQ, SignedPart, PART3_TOL,
};
use lasso_audit::estimators::restricted_regression;
use lasso_audit::experiments::{block_diag, equicorrelation, example_irr, random_psd};
use lasso_audit::gram::Block;
use lasso_audit::{Caps, ConeSpec, ConeVariant, Error, GramMatrix, IndexSet, Matrix, SolverConfig};
use proptest::prelude::*;

fn cone(s: &[usize], l: f64, n: usize, p: usize) -> ConeSpec<f64> {
    ConeSpec::new(IndexSet::new(s.to_vec(), p).unwrap(), l, n, p).unwrap()
}

fn caps() -> Caps {
    Caps::default()
}

/// Rescale a PSD matrix to unit diagonal.
fn correlation(g: &GramMatrix<f64>) -> GramMatrix<f64> {
    let p = g.dim();
    let d: Vec<f64> = (0..p).map(|j| g.get(j, j).sqrt()).collect();
    GramMatrix::new_unchecked(Matrix::from_fn(p, p, |i, j| g.get(i, j) / (d[i] * d[j])))
}

/// Largest singular value by power iteration on `BᵀB`.
fn sigma_max(b: &Matrix<f64>) -> f64 {
    let n = b.ncols();
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut sigma = 0.0;
    for _ in 0..5000 {
        let w = b.t_matvec(&b.matvec(&v));
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        v = w.iter().map(|x| x / norm).collect();
        sigma = norm.sqrt();
    }
    sigma
}

fn cross_block(g: &GramMatrix<f64>, rows: &[usize], cols: &[usize]) -> Matrix<f64> {
    Matrix::from_fn(rows.len(), cols.len(), |i, k| g.get(rows[i], cols[k]))
}

/// θ(S,N) by enumerating every 𝒩 ⊇ S with |𝒩| ≤ N and ℳ ⊆ 𝒩ᶜ with |ℳ| ≤ s.
fn theta_oracle(g: &GramMatrix<f64>, support: &[usize], n: usize) -> f64 {
    let p = g.dim();
    let s = support.len();
    let rest: Vec<usize> = (0..p).filter(|j| !support.contains(j)).collect();
    let mut best = 0.0f64;
    for size in s..=n {
        for extra in rest.iter().copied().combinations(size - s) {
            let nset: Vec<usize> = support.iter().copied().chain(extra).collect();
            let outside: Vec<usize> = (0..p).filter(|j| !nset.contains(j)).collect();
            for m in 1..=s.min(outside.len()) {
                for mset in outside.iter().copied().combinations(m) {
                    best = best.max(sigma_max(&cross_block(g, &nset, &mset)));
                }
            }
        }
    }
    best
}

#[test]
fn uniform_eigenvalue_examples() {
    let id = GramMatrix::<f64>::identity(7);
    for n in [2, 3, 5] {
        let v = uniform_eigenvalue(&id, &cone(&[1, 4], 1.0, n, 7), &caps()).unwrap();
        assert!((v.estimate - 1.0).abs() < 1e-12);
    }
    let eq = equicorrelation::<f64>(8, 0.5).unwrap();
    for n in [2, 4, 6] {
        let v = uniform_eigenvalue(&eq, &cone(&[0, 3], 1.0, n, 8), &caps()).unwrap();
        assert!((v.estimate - 0.5).abs() < 1e-10);
    }
    let g = random_psd::<f64>(6, None, 21).unwrap();
    let support = [1, 4];
    let brute = [0, 2, 3, 5]
        .iter()
        .map(|&j| {
            let mut set = vec![1, 4, j];
            set.sort_unstable();
            g.min_eigen_11(&set)
        })
        .fold(f64::INFINITY, f64::min);
    let v = uniform_eigenvalue(&g, &cone(&support, 1.0, 3, 6), &caps()).unwrap();
    assert!((v.estimate - brute).abs() < 1e-12);
}

#[test]
fn restricted_isometry_examples() {
    assert!(restricted_isometry(&GramMatrix::<f64>::identity(6), 3, &caps()).unwrap().estimate.abs() < 1e-12);
    let eq = equicorrelation::<f64>(6, 0.4).unwrap();
    assert!((restricted_isometry(&eq, 2, &caps()).unwrap().estimate - 0.4).abs() < 1e-10);
    let eq = equicorrelation::<f64>(8, 0.3).unwrap();
    assert!((restricted_isometry(&eq, 5, &caps()).unwrap().estimate - 1.2).abs() < 1e-10);
}

#[test]
fn restricted_orthogonality_examples() {
    let id = GramMatrix::<f64>::identity(6);
    assert_eq!(restricted_orthogonality(&id, &cone(&[0], 1.0, 2, 6), &caps()).unwrap().estimate, 0.0);
    // S and N inside the first block, blocks decoupled.
    let bd = block_diag::<f64>(&[3, 3], 0.4).unwrap();
    let c = cone(&[0], 1.0, 3, 6);
    let v = restricted_orthogonality(&bd, &c, &caps()).unwrap().estimate;
    assert!(v > 0.0, "ℳ may still meet the first block when N < 3: {v}");
    let g = random_psd::<f64>(6, None, 22).unwrap();
    let c = cone(&[2], 1.0, 2, 6);
    let v = restricted_orthogonality(&g, &c, &caps()).unwrap().estimate;
    assert!((v - theta_oracle(&g, &[2], 2)).abs() < 1e-9);
}

#[test]
fn decoupled_blocks_have_zero_orthogonality() {
    let bd = block_diag::<f64>(&[3, 3], 0.4).unwrap();
    // 𝒩 must be the whole first block when N = 3 and S ⊆ block: no cross term.
    let v = restricted_orthogonality(&bd, &cone(&[0, 1, 2], 1.0, 3, 6), &caps()).unwrap();
    assert!(v.estimate.abs() < 1e-12);
}

#[test]
fn theta_uniform_examples() {
    assert_eq!(theta_uniform(&GramMatrix::<f64>::identity(5), 1, 2, &caps()).unwrap().estimate, 0.0);
    let g = random_psd::<f64>(5, None, 23).unwrap();
    let brute = (0..5).map(|j| theta_oracle(&g, &[j], 2)).fold(0.0f64, f64::max);
    let v = theta_uniform(&g, 1, 2, &caps()).unwrap().estimate;
    assert!((v - brute).abs() < 1e-9, "{v} vs {brute}");
    let eq = equicorrelation::<f64>(5, 0.2).unwrap();
    assert!((theta_uniform(&eq, 1, 1, &caps()).unwrap().estimate - 0.2).abs() < 1e-12);
}

#[test]
fn rip_constant_examples() {
    assert_eq!(rip_constant(&GramMatrix::<f64>::identity(6), 2, &caps()).unwrap().estimate, 0.0);
    // Equicorrelation ρ = 0.05: δ₂ = ρ, θ_{2,2} = 2ρ (2×2 block of ρ), θ_{2,4} = ρ√8.
    let rho: f64 = 0.05;
    let eq = equicorrelation::<f64>(8, rho).unwrap();
    let expected = rho * 8f64.sqrt() / (1.0 - rho - 2.0 * rho);
    let v = rip_constant(&eq, 2, &caps()).unwrap().estimate;
    assert!((v - expected).abs() < 1e-9, "{v} vs {expected}");
    let recomputed = theta_uniform(&eq, 2, 4, &caps()).unwrap().estimate
        / (1.0 - restricted_isometry(&eq, 2, &caps()).unwrap().estimate - theta_uniform(&eq, 2, 2, &caps()).unwrap().estimate);
    assert!((v - recomputed).abs() < 1e-12);
    let strong = equicorrelation::<f64>(8, 0.5).unwrap();
    assert!(matches!(rip_constant(&strong, 2, &caps()), Err(Error::DenominatorNonPositive(_))));
}

#[test]
fn weak_rip_examples() {
    assert_eq!(weak_rip_constant(&GramMatrix::<f64>::identity(6), &cone(&[0], 1.0, 2, 6), &caps()).unwrap().estimate, 0.0);
    let bd = block_diag::<f64>(&[2, 2, 2], 0.6).unwrap();
    assert!(weak_rip_constant(&bd, &cone(&[0, 1], 1.0, 2, 6), &caps()).unwrap().estimate.abs() < 1e-12);
    let g = random_psd::<f64>(7, None, 24).unwrap();
    let c = cone(&[1, 5], 1.0, 4, 7);
    let ratio = restricted_orthogonality(&g, &c, &caps()).unwrap().estimate / uniform_eigenvalue(&g, &c, &caps()).unwrap().estimate;
    assert!((weak_rip_constant(&g, &c, &caps()).unwrap().estimate - ratio).abs() < 1e-12);
}

#[test]
fn irrepresentable_uniform_examples() {
    let id = GramMatrix::<f64>::identity(6);
    assert_eq!(irrepresentable_uniform(&id, &cone(&[0, 1], 1.0, 2, 6), &caps()).unwrap().estimate, 0.0);
    let ex = example_irr::<f64>(12, 4, 0.6, None, None).unwrap();
    let v = irrepresentable_uniform(&ex, &cone(&[0, 1, 2, 3], 1.0, 4, 12), &caps()).unwrap().estimate;
    assert!((v - 1.2).abs() < 1e-10);
    let eq = equicorrelation::<f64>(10, 0.5).unwrap();
    let v = irrepresentable_uniform(&eq, &cone(&[0, 1, 2], 1.0, 3, 10), &caps()).unwrap().estimate;
    assert!((v - 0.75).abs() < 1e-10);
}

#[test]
fn singular_blocks_are_reported() {
    let m = Matrix::from_rows(&[vec![1.0, 1.0, 0.0], vec![1.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]);
    let g = GramMatrix::new(m).unwrap();
    assert!(matches!(
        irrepresentable_uniform(&g, &cone(&[0, 1], 1.0, 2, 3), &caps()),
        Err(Error::AllSubmatricesSingular)
    ));
}

#[test]
fn signed_irrepresentable_examples() {
    let id = GramMatrix::<f64>::identity(6);
    let c = cone(&[0, 2], 1.0, 2, 6);
    let part2 = irrepresentable_signed(&id, &c, SignedPart::Part2, &caps()).unwrap();
    assert!(part2.holds);
    assert_eq!(part2.nset, Some(vec![0, 2]));
    assert!(irrepresentable_signed(&id, &c, SignedPart::Part3, &caps()).unwrap().holds);

    // ρ√s = 1.2 > 1 fails at N = s; adding the coordinate carrying b₂ repairs it.
    let ex = example_irr::<f64>(8, 4, 0.6, None, None).unwrap();
    let support = [0, 1, 2, 3];
    assert!(!irrepresentable_signed(&ex, &cone(&support, 1.0, 4, 8), SignedPart::Part2, &caps()).unwrap().holds);
    let wider = irrepresentable_signed(&ex, &cone(&support, 1.0, 5, 8), SignedPart::Part2, &caps()).unwrap();
    assert!(wider.holds);
    assert_eq!(wider.nset, Some(vec![0, 1, 2, 3, 4]));
}

fn sign_vectors(k: usize) -> impl Iterator<Item = Vec<f64>> {
    (0..1u32 << k).map(move |code| (0..k).map(|i| if code >> i & 1 == 1 { -1.0 } else { 1.0 }).collect())
}

fn sup_norm(w: &Matrix<f64>, tau: &[f64]) -> f64 {
    w.matvec(tau).iter().fold(0.0f64, |a, v| a.max(v.abs()))
}

fn nsets(support: &[usize], p: usize, n: usize) -> Vec<Vec<usize>> {
    let rest: Vec<usize> = (0..p).filter(|j| !support.contains(j)).collect();
    (support.len()..=n)
        .flat_map(|size| {
            rest.iter().copied().combinations(size - support.len()).map(|extra| {
                let mut set: Vec<usize> = support.iter().copied().chain(extra).collect();
                set.sort_unstable();
                set
            })
        })
        .collect()
}

#[test]
fn signed_irrepresentable_matches_exhaustive_enumeration() {
    for seed in 0..8u64 {
        let g = random_psd::<f64>(6, Some(9), 300 + seed).unwrap();
        let support = [0, 3];
        for (n, l) in [(2, 1.0), (3, 1.0), (3, 0.5), (4, 2.0)] {
            let c = cone(&support, l, n, 6);
            // Part 2: some 𝒩 works for every τ_𝒩.
            let part2 = nsets(&support, 6, n).iter().any(|set| {
                let w = irrepresentable_matrix(&g, set).unwrap();
                sign_vectors(set.len()).all(|tau| sup_norm(&w, &tau) < 1.0 / l)
            });
            let got = irrepresentable_signed(&g, &c, SignedPart::Part2, &caps()).unwrap();
            assert_eq!(got.holds, part2, "seed {seed} n {n} l {l}");
            // Part 3: every τ_S has some 𝒩 and extension.
            let part3 = sign_vectors(2).all(|ts| {
                nsets(&support, 6, n).iter().any(|set| {
                    let w = irrepresentable_matrix(&g, set).unwrap();
                    sign_vectors(set.len()).any(|tau| {
                        let matches = support.iter().enumerate().all(|(i, j)| {
                            tau[set.binary_search(j).unwrap()] == ts[i]
                        });
                        matches && sup_norm(&w, &tau) <= 1.0 + PART3_TOL
                    })
                })
            });
            let got = irrepresentable_signed(&g, &c, SignedPart::Part3, &caps()).unwrap();
            assert_eq!(got.holds, part3, "seed {seed} n {n}");
        }
    }
}

#[test]
fn coherence_examples() {
    let id = GramMatrix::<f64>::identity(6);
    let c = cone(&[0, 1], 1.0, 2, 6);
    for kind in [CoherenceKind::Mutual, CoherenceKind::Cumulative] {
        assert_eq!(coherence(&id, &c, kind, &caps()).unwrap().estimate, 0.0);
    }
    let (s, rho) = (4, 0.6);
    let ex = example_irr::<f64>(10, s, rho, None, None).unwrap();
    let mutual = coherence(&ex, &cone(&[0, 1, 2, 3], 1.0, 4, 10), CoherenceKind::Mutual, &caps()).unwrap();
    assert!((mutual.estimate - rho * (s as f64).sqrt()).abs() < 1e-12);

    let g = random_psd::<f64>(7, None, 25).unwrap();
    let support = [1, 2, 6];
    let c = cone(&support, 1.0, 3, 7);
    let lambda2 = uniform_eigenvalue(&g, &c, &caps()).unwrap().estimate;
    let mut max = 0.0f64;
    let mut sq = 0.0;
    for &k in &support {
        let mut col = 0.0;
        for j in (0..7).filter(|j| !support.contains(j)) {
            max = max.max(g.get(j, k).abs());
            col += g.get(j, k).abs();
        }
        sq += col * col;
    }
    let m = coherence(&g, &c, CoherenceKind::Mutual, &caps()).unwrap().estimate;
    let cu = coherence(&g, &c, CoherenceKind::Cumulative, &caps()).unwrap().estimate;
    assert!((m - 3.0 * max / lambda2).abs() < 1e-12);
    assert!((cu - 3f64.sqrt() * sq.sqrt() / lambda2).abs() < 1e-12);
}

#[test]
fn block_norm_examples() {
    let id = GramMatrix::<f64>::identity(5);
    for q in [NormQ::One, NormQ::Two, NormQ::Inf] {
        assert_eq!(block_norm_2q(&id, &[0, 2], q, NormMode::Exact, &caps()).unwrap().estimate, 0.0);
    }
    let (a, b): (f64, f64) = (0.3, -0.4);
    let m = Matrix::from_rows(&[vec![1.0, a, b], vec![a, 1.0, 0.0], vec![b, 0.0, 1.0]]);
    let g = GramMatrix::new(m).unwrap();
    // 𝒩 = {1, 2}: Σ₁₂(𝒩) is the 2×1 block (a, b)ᵀ.
    let v = block_norm_2q(&g, &[1, 2], NormQ::Inf, NormMode::Exact, &caps()).unwrap();
    assert!((v.estimate - 0.5).abs() < 1e-12);
}

#[test]
fn alpha_examples() {
    let id = GramMatrix::<f64>::identity(6);
    let a = alpha_constant(&id, &cone(&[0, 1], 1.0, 2, 6), 1.0, &caps()).unwrap();
    assert_eq!(a.estimate, 0.0);
    let d = 2f64.sqrt() - 1.0;
    assert!(alpha_rip_bound(d, 1.0 / 16.0, 1.0 / 16.0).unwrap() <= 0.96);

    let g = random_psd::<f64>(6, Some(12), 26).unwrap();
    let support = IndexSet::new(vec![0, 4], 6).unwrap();
    let c = ConeSpec::new(support.clone(), 1.0, 2, 6).unwrap();
    let parts = AlphaParts::compute(&g, &support, &caps()).unwrap();
    let theta = restricted_orthogonality(&g, &c, &caps()).unwrap().estimate;
    let delta = restricted_isometry(&g, 2, &caps()).unwrap().estimate;
    let lambda = uniform_eigenvalue(&g, &c, &caps()).unwrap().estimate.sqrt();
    let phi = 0.4;
    let direct = (2f64.sqrt() * theta + ((1.0 + delta) * theta).sqrt()) / (phi * lambda);
    let a = alpha_constant(&g, &c, phi, &caps()).unwrap();
    assert!((a.estimate - direct).abs() < 1e-12);
    assert_eq!(parts.evaluate(phi).unwrap(), a.estimate);
    assert!(matches!(alpha_constant(&g, &c, 0.0, &caps()), Err(Error::DenominatorNonPositive(_))));
}

#[test]
fn rip_bound_denominator_guard() {
    assert!(alpha_rip_bound(0.5, 0.3, 0.3).is_err());
    assert!(alpha_rip_bound(1.5, -1.0, -1.0).is_err());
}

fn gram_strategy(p: std::ops::Range<usize>) -> impl Strategy<Value = GramMatrix<f64>> {
    (p, 0u64..10_000).prop_map(|(p, seed)| random_psd::<f64>(p, Some(p + 2), seed).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn monotone_in_n(g in gram_strategy(4..8), s in 1usize..3) {
        let p = g.dim();
        let support: Vec<usize> = (0..s).collect();
        let sizes = [s, s + 1, (2 * s).min(p)];
        let mut last = (f64::INFINITY, -1.0f64, -1.0f64);
        for &n in &sizes {
            let c = cone(&support, 1.0, n, p);
            let l2 = uniform_eigenvalue(&g, &c, &caps()).unwrap().estimate;
            let delta = restricted_isometry(&g, n, &caps()).unwrap().estimate;
            let theta = restricted_orthogonality(&g, &c, &caps()).unwrap().estimate;
            prop_assert!(l2 <= last.0 + 1e-12);
            prop_assert!(delta >= last.1 - 1e-12);
            prop_assert!(theta >= last.2 - 1e-12);
            last = (l2, delta, theta);
        }
    }

    #[test]
    fn isometry_brackets_uniform_eigenvalue(g in gram_strategy(3..8), n_extra in 0usize..3) {
        let g = correlation(&g);
        let p = g.dim();
        let n = (1 + n_extra).min(p);
        let c = cone(&[0], 1.0, n, p);
        let l2 = uniform_eigenvalue(&g, &c, &caps()).unwrap().estimate;
        let delta = restricted_isometry(&g, n, &caps()).unwrap().estimate;
        prop_assert!(1.0 - delta <= l2 + 1e-12);
        prop_assert!(l2 <= 1.0 + delta + 1e-12);
    }

    #[test]
    fn uniform_irrepresentable_is_attained_at_a_vertex(g in gram_strategy(4..8), s in 1usize..4) {
        let p = g.dim();
        prop_assume!(s < p);
        let support: Vec<usize> = (0..s).collect();
        let w = irrepresentable_matrix(&g, &support).unwrap();
        let vertex = sign_vectors(s).map(|tau| sup_norm(&w, &tau)).fold(0.0f64, f64::max);
        prop_assert!((vertex - max_row_l1(&w)).abs() < 1e-10 * (1.0 + vertex));
        let irr = irrepresentable_uniform(&g, &cone(&support, 1.0, s, p), &caps()).unwrap().estimate;
        prop_assert!(irr <= vertex + 1e-10 * (1.0 + vertex));
    }

    #[test]
    fn coherence_chain(g in gram_strategy(4..7), s in 1usize..3) {
        let p = g.dim();
        let support: Vec<usize> = (0..s).collect();
        let c = cone(&support, 1.0, s, p);
        let l2 = uniform_eigenvalue(&g, &c, &caps()).unwrap().estimate;
        let mutual = coherence(&g, &c, CoherenceKind::Mutual, &caps()).unwrap().estimate;
        let b21 = g.block(Block::B21, &support);
        let row = (0..b21.nrows())
            .map(|j| b21.row(j).iter().map(|v| v * v).sum::<f64>().sqrt())
            .fold(0.0f64, f64::max);
        // ‖row‖₂ ≤ √s max|σ_jk|, so √s‖Σ₂₁‖₂,∞/Λ² sits below the mutual constant.
        let q_inf = (s as f64).sqrt() * row / l2;
        prop_assert!(mutual >= q_inf - 1e-12);
        let adaptive = restricted_regression(&g, &c, ConeVariant::Adaptive, &SolverConfig::reduced()).unwrap();
        prop_assert!(q_inf >= adaptive.lower - 1e-9, "{} < {}", q_inf, adaptive.lower);
    }

    #[test]
    fn block_norms_increase_as_q_decreases(g in gram_strategy(4..9), k in 1usize..4) {
        let p = g.dim();
        let nset: Vec<usize> = (0..k.min(p - 1)).collect();
        let get = |q, mode| block_norm_2q(&g, &nset, q, mode, &caps()).unwrap().estimate;
        let inf = get(NormQ::Inf, NormMode::Exact);
        let two = get(NormQ::Two, NormMode::Exact);
        let one = get(NormQ::One, NormMode::Exact);
        prop_assert!(inf <= two + 1e-12 && two <= one + 1e-12);
        for q in [NormQ::One, NormQ::Two, NormQ::Inf] {
            prop_assert!(get(q, NormMode::PaperBound) >= get(q, NormMode::Exact) - 1e-12);
        }
    }
}
