use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gram::GramMatrix;
use crate::lasso::NoisyProblem;
use crate::linalg::{symmetric_eigen, Matrix};
use crate::rng::Gaussian;
use crate::scalar::Scalar;

/// Description of a test matrix or a simulated regression problem.
///
/// Reads from JSON as `{"kind": "equicorrelation", "p": 4, "rho": 0.5}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    Identity {
        p: usize,
    },
    /// `(1 − ρ)I + ριιᵀ`.
    Equicorrelation {
        p: usize,
        rho: f64,
    },
    /// `σ_jk = ρ^{|j−k|}`.
    ToeplitzGeometric {
        p: usize,
        rho: f64,
    },
    /// Block diagonal with equicorrelated blocks of the given sizes.
    BlockDiag {
        blocks: Vec<usize>,
        rho: f64,
    },
    /// `Σ₁₁ = I_s`, `Σ₂₁ = ρ b₂b₁ᵀ`, `Σ₂₂ = I`. Defaults: `b₁ = ι/√s`,
    /// `b₂ = e₁`.
    ExampleIrr {
        p: usize,
        s: usize,
        rho: f64,
        #[serde(default)]
        b1: Option<Vec<f64>>,
        #[serde(default)]
        b2: Option<Vec<f64>>,
    },
    /// `diag(diag(B, I_{s−2}), I_{p−s})` with `B = [[1, ρ], [ρ, 1]]`.
    ExampleCompat {
        p: usize,
        s: usize,
        rho: f64,
    },
    /// `AAᵀ/rank` for a `p × rank` Gaussian `A` (`rank = p` by default).
    RandomPsd {
        p: usize,
        #[serde(default)]
        rank: Option<usize>,
        seed: u64,
    },
    /// `n` Gaussian rows with covariance given by `population`, optional
    /// columns rescaled to `σ̂_jj = 1`, and `Y = Xβ⁰ + σε` when `beta0` is
    /// given.
    GaussianDesign {
        n: usize,
        population: Box<GeneratorSpec>,
        seed: u64,
        #[serde(default)]
        beta0: Option<Vec<f64>>,
        #[serde(default)]
        noise_sd: Option<f64>,
        #[serde(default)]
        normalize: bool,
    },
}

/// Output of [`generate`].
#[derive(Debug, Clone)]
pub enum Generated<T> {
    Gram(GramMatrix<T>),
    Design(NoisyProblem<T>),
}

impl<T: Scalar> Generated<T> {
    /// The Gram matrix, or `Σ̂` of a design.
    pub fn gram(&self) -> GramMatrix<T> {
        match self {
            Generated::Gram(g) => g.clone(),
            Generated::Design(d) => d.gram(),
        }
    }
}

fn check_rho(rho: f64, open_top: bool) -> Result<()> {
    let ok = rho >= 0.0 && if open_top { rho < 1.0 } else { rho <= 1.0 };
    if ok && rho.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("rho = {rho} outside [0, 1)")))
    }
}

fn check_p(p: usize) -> Result<()> {
    if p == 0 {
        return Err(Error::InvalidParameter("p must be positive".into()));
    }
    Ok(())
}

fn unit(v: &[f64], name: &str) -> Result<()> {
    let n: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (n - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!("{name} must have unit norm, got {n}")));
    }
    Ok(())
}

fn wrap<T: Scalar>(m: Matrix<f64>) -> Result<GramMatrix<T>> {
    GramMatrix::new(m.convert())
}

pub fn equicorrelation<T: Scalar>(p: usize, rho: f64) -> Result<GramMatrix<T>> {
    check_p(p)?;
    check_rho(rho, true)?;
    wrap(Matrix::from_fn(p, p, |i, j| if i == j { 1.0 } else { rho }))
}

pub fn toeplitz_geometric<T: Scalar>(p: usize, rho: f64) -> Result<GramMatrix<T>> {
    check_p(p)?;
    check_rho(rho, true)?;
    wrap(Matrix::from_fn(p, p, |i, j| rho.powi(i.abs_diff(j) as i32)))
}

pub fn block_diag<T: Scalar>(blocks: &[usize], rho: f64) -> Result<GramMatrix<T>> {
    check_rho(rho, true)?;
    if blocks.is_empty() || blocks.contains(&0) {
        return Err(Error::InvalidParameter("block sizes must be positive".into()));
    }
    let p: usize = blocks.iter().sum();
    let mut label = Vec::with_capacity(p);
    for (b, &size) in blocks.iter().enumerate() {
        label.extend(std::iter::repeat_n(b, size));
    }
    wrap(Matrix::from_fn(p, p, |i, j| {
        if i == j {
            1.0
        } else if label[i] == label[j] {
            rho
        } else {
            0.0
        }
    }))
}

pub fn example_irr<T: Scalar>(
    p: usize,
    s: usize,
    rho: f64,
    b1: Option<&[f64]>,
    b2: Option<&[f64]>,
) -> Result<GramMatrix<T>> {
    check_rho(rho, true)?;
    if s == 0 || s >= p {
        return Err(Error::InvalidParameter(format!("need 0 < s < p, got s = {s}, p = {p}")));
    }
    let b1: Vec<f64> = match b1 {
        Some(v) => v.to_vec(),
        None => vec![1.0 / (s as f64).sqrt(); s],
    };
    let b2: Vec<f64> = match b2 {
        Some(v) => v.to_vec(),
        None => {
            let mut e = vec![0.0; p - s];
            e[0] = 1.0;
            e
        }
    };
    if b1.len() != s || b2.len() != p - s {
        return Err(Error::InvalidParameter("b1 must have length s and b2 length p - s".into()));
    }
    unit(&b1, "b1")?;
    unit(&b2, "b2")?;
    let mut m = Matrix::identity(p);
    for (i, &u) in b2.iter().enumerate() {
        for (k, &v) in b1.iter().enumerate() {
            m.set(s + i, k, rho * u * v);
            m.set(k, s + i, rho * u * v);
        }
    }
    wrap(m)
}

pub fn example_compat<T: Scalar>(p: usize, s: usize, rho: f64) -> Result<GramMatrix<T>> {
    check_rho(rho, true)?;
    if s < 2 || s > p {
        return Err(Error::InvalidParameter(format!("need 2 <= s <= p, got s = {s}, p = {p}")));
    }
    let mut m = Matrix::identity(p);
    m.set(0, 1, rho);
    m.set(1, 0, rho);
    wrap(m)
}

/// `AAᵀ/rank` with standard normal `A` (`p × rank`) drawn from stream 0.
pub fn random_psd<T: Scalar>(p: usize, rank: Option<usize>, seed: u64) -> Result<GramMatrix<T>> {
    check_p(p)?;
    let r = rank.unwrap_or(p);
    if r == 0 {
        return Err(Error::InvalidParameter("rank must be positive".into()));
    }
    let mut g = Gaussian::new(seed, 0);
    let mut a = vec![0.0; p * r];
    g.fill(&mut a);
    let m = Matrix::from_fn(p, p, |i, j| {
        (0..r).map(|k| a[i * r + k] * a[j * r + k]).sum::<f64>() / r as f64
    });
    Ok(GramMatrix::new_unchecked(m.symmetrize().convert()))
}

/// Symmetric square root `V diag(√max(λ, 0)) Vᵀ`.
pub fn symmetric_sqrt<T: Scalar>(gram: &GramMatrix<T>) -> Matrix<T> {
    symmetric_eigen(gram.matrix())
        .reconstruct_with(|x| x.max(T::zero()).sqrt())
        .symmetrize()
}

/// `n` rows `x_i = Rz_i` with `z_i` standard normal and `R` the symmetric
/// square root of `population`, using stream `stream` of `seed`.
pub fn gaussian_rows<T: Scalar>(n: usize, root: &Matrix<T>, seed: u64, stream: u64) -> Matrix<T> {
    let p = root.nrows();
    let mut g = Gaussian::new(seed, stream);
    let mut z = vec![0.0; p];
    let mut x = Matrix::zeros(n, p);
    for i in 0..n {
        g.fill(&mut z);
        let zt: Vec<T> = z.iter().map(|&v| T::of(v)).collect();
        let row = root.matvec(&zt);
        for (j, v) in row.into_iter().enumerate() {
            x.set(i, j, v);
        }
    }
    x
}

/// Gaussian design with covariance `population` and its Gram matrix
/// `Σ̂ = XᵀX/n`.
pub fn sample_gaussian_design<T: Scalar>(
    n: usize,
    population: &GramMatrix<T>,
    seed: u64,
) -> (Matrix<T>, GramMatrix<T>) {
    let x = gaussian_rows(n, &symmetric_sqrt(population), seed, 0);
    let g = GramMatrix::from_design(&x);
    (x, g)
}

/// Rescale columns to `‖X_j‖²/n = 1`. Zero columns are left alone.
pub fn normalize_columns<T: Scalar>(x: &mut Matrix<T>) {
    let n = T::of_usize(x.nrows());
    for j in 0..x.ncols() {
        let ss: T = (0..x.nrows()).map(|i| x.get(i, j).powi(2)).sum();
        if ss > T::zero() {
            let c = (n / ss).sqrt();
            for i in 0..x.nrows() {
                let v = x.get(i, j) * c;
                x.set(i, j, v);
            }
        }
    }
}

/// Build the matrix or problem described by `spec`.
pub fn generate<T: Scalar>(spec: &GeneratorSpec) -> Result<Generated<T>> {
    use GeneratorSpec as G;
    let gram = match spec {
        G::Identity { p } => {
            check_p(*p)?;
            GramMatrix::identity(*p)
        }
        G::Equicorrelation { p, rho } => equicorrelation(*p, *rho)?,
        G::ToeplitzGeometric { p, rho } => toeplitz_geometric(*p, *rho)?,
        G::BlockDiag { blocks, rho } => block_diag(blocks, *rho)?,
        G::ExampleIrr { p, s, rho, b1, b2 } => example_irr(*p, *s, *rho, b1.as_deref(), b2.as_deref())?,
        G::ExampleCompat { p, s, rho } => example_compat(*p, *s, *rho)?,
        G::RandomPsd { p, rank, seed } => random_psd(*p, *rank, *seed)?,
        G::GaussianDesign {
            n,
            population,
            seed,
            beta0,
            noise_sd,
            normalize,
        } => {
            if *n == 0 {
                return Err(Error::InvalidParameter("n must be positive".into()));
            }
            let pop: GramMatrix<T> = match generate(population)? {
                Generated::Gram(g) => g,
                Generated::Design(_) => {
                    return Err(Error::InvalidParameter("population must be a matrix".into()))
                }
            };
            let p = pop.dim();
            let mut x = gaussian_rows(*n, &symmetric_sqrt(&pop), *seed, 0);
            if *normalize {
                normalize_columns(&mut x);
            }
            let b0: Option<Vec<T>> = match beta0 {
                Some(b) if b.len() != p => {
                    return Err(Error::DimensionMismatch { expected: p, got: b.len() })
                }
                Some(b) => Some(b.iter().map(|&v| T::of(v)).collect()),
                None => None,
            };
            let sd = noise_sd.unwrap_or(1.0);
            if !(sd >= 0.0) {
                return Err(Error::InvalidParameter(format!("noise_sd = {sd} must be >= 0")));
            }
            let mut g = Gaussian::new(*seed, 1);
            let eps: Vec<T> = (0..*n).map(|_| T::of(sd * g.sample())).collect();
            let signal = match &b0 {
                Some(b) => x.matvec(b),
                None => vec![T::zero(); *n],
            };
            let y = signal.iter().zip(&eps).map(|(&a, &e)| a + e).collect();
            return Ok(Generated::Design(NoisyProblem::new(x, y, b0, Some(eps))?));
        }
    };
    Ok(Generated::Gram(gram))
}
