//! Gram matrices and their block structure.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg::{min_eigenvalue, Matrix};
use crate::scalar::Scalar;

/// Symmetric positive semidefinite `p × p` matrix `Σ = (σ_jk)`.
#[derive(Debug, Clone)]
pub struct GramMatrix<T> {
    m: Matrix<T>,
}

/// Block of `Σ` relative to an index set `𝒩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Block {
    /// `Σ₁₁(𝒩)`: rows and columns in `𝒩`.
    B11,
    /// `Σ₁₂(𝒩)`: rows in `𝒩`, columns in `𝒩ᶜ`.
    B12,
    /// `Σ₂₁(𝒩)`: rows in `𝒩ᶜ`, columns in `𝒩`.
    B21,
    /// `Σ₂₂(𝒩)`: rows and columns in `𝒩ᶜ`.
    B22,
}

const PSD_PROBES: usize = 1000;

impl<T: Scalar> GramMatrix<T> {
    /// Validate and wrap a matrix.
    ///
    /// Symmetry is checked to `1e-12` (relative to the largest entry when that
    /// exceeds one) and positive semidefiniteness is spot-checked on the unit
    /// vectors plus a fixed set of random probes.
    pub fn new(m: Matrix<T>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        let scale = m.max_abs().max(T::one());
        let asym = m.max_asymmetry();
        if asym > T::of(1e-12) * scale {
            return Err(Error::NotSymmetric(asym.as_f64()));
        }
        let p = m.nrows();
        for j in 0..p {
            let d = m.get(j, j);
            if d < T::zero() || d.is_nan() {
                return Err(Error::NegativeDiagonal {
                    index: j,
                    value: d.as_f64(),
                });
            }
        }
        let m = m.symmetrize();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_9a11);
        let tol = T::of(1e-9) * scale;
        let mut v = vec![T::zero(); p];
        for _ in 0..PSD_PROBES.min(50 * p.max(1)) {
            for x in v.iter_mut() {
                *x = T::of(rng.random::<f64>() * 2.0 - 1.0);
            }
            let nv: T = v.iter().map(|&x| x * x).sum();
            let q = m.quad(&v);
            if q < -tol * nv {
                return Err(Error::NotPsd(q.as_f64()));
            }
        }
        Ok(Self { m })
    }

    /// Wrap without validation. The caller guarantees symmetry and PSD.
    pub fn new_unchecked(m: Matrix<T>) -> Self {
        Self { m }
    }

    /// `XᵀX / n` for an `n × p` design.
    pub fn from_design(x: &Matrix<T>) -> Self {
        let n = T::of_usize(x.nrows());
        let p = x.ncols();
        let mut g = Matrix::zeros(p, p);
        for i in 0..x.nrows() {
            let r = x.row(i);
            for j in 0..p {
                let rj = r[j];
                if rj == T::zero() {
                    continue;
                }
                for k in j..p {
                    let v = g.get(j, k) + rj * r[k];
                    g.set(j, k, v);
                }
            }
        }
        for j in 0..p {
            for k in j..p {
                let v = g.get(j, k) / n;
                g.set(j, k, v);
                g.set(k, j, v);
            }
        }
        Self { m: g }
    }

    pub fn identity(p: usize) -> Self {
        Self {
            m: Matrix::identity(p),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.m
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.m
    }

    #[inline]
    pub fn get(&self, j: usize, k: usize) -> T {
        self.m.get(j, k)
    }

    /// Largest absolute entry, at least one. Used to scale tolerances.
    pub fn scale(&self) -> T {
        self.m.max_abs().max(T::one())
    }

    /// `‖f_β‖² = βᵀΣβ`.
    pub fn quad(&self, beta: &[T]) -> T {
        self.m.quad(beta)
    }

    pub fn matvec(&self, beta: &[T]) -> Vec<T> {
        self.m.matvec(beta)
    }

    /// `(f_a, f_b) = aᵀΣb`.
    pub fn inner(&self, a: &[T], b: &[T]) -> T {
        crate::scalar::dot(a, &self.m.matvec(b))
    }

    /// Extract a block relative to `nset` (rows and columns in ascending index order).
    pub fn block(&self, block: Block, nset: &[usize]) -> Matrix<T> {
        let comp = complement(self.dim(), nset);
        match block {
            Block::B11 => self.m.select(nset, nset),
            Block::B12 => self.m.select(nset, &comp),
            Block::B21 => self.m.select(&comp, nset),
            Block::B22 => self.m.select(&comp, &comp),
        }
    }

    pub fn principal(&self, set: &[usize]) -> Matrix<T> {
        self.m.select(set, set)
    }

    /// `λ_min(Σ₁₁(𝒩))`.
    pub fn min_eigen_11(&self, nset: &[usize]) -> T {
        min_eigenvalue(&self.principal(nset))
    }

    pub fn min_eigen(&self) -> T {
        min_eigenvalue(&self.m)
    }

    /// Simultaneous permutation of rows and columns: entry `(i, j)` of the
    /// result is `σ_{perm[i], perm[j]}`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self {
            m: self.m.select(perm, perm),
        }
    }

    pub fn convert<U: Scalar>(&self) -> GramMatrix<U> {
        GramMatrix { m: self.m.convert() }
    }

    /// Short content hash (dimension plus the `f64` bit patterns).
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.dim() as u64).to_le_bytes());
        for x in self.m.as_slice() {
            h.update(x.as_f64().to_bits().to_le_bytes());
        }
        h.finalize()[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Sorted complement of `set` in `{0, …, p-1}`. `set` must be sorted.
pub fn complement(p: usize, set: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(p.saturating_sub(set.len()));
    let mut it = set.iter().peekable();
    for j in 0..p {
        if it.peek() == Some(&&j) {
            it.next();
        } else {
            out.push(j);
        }
    }
    out
}

/// Entrywise sup-norm distance `max_{j,k} |σ¹_jk − σ⁰_jk|`.
pub fn d_infinity<T: Scalar>(a: &GramMatrix<T>, b: &GramMatrix<T>) -> Result<T> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    Ok(a.m.sub(&b.m).max_abs())
}

/// Two Gram matrices of equal dimension and their sup-norm distance.
#[derive(Debug, Clone)]
pub struct PerturbationPair<T> {
    pub sigma0: GramMatrix<T>,
    pub sigma1: GramMatrix<T>,
    pub d_inf: T,
}

impl<T: Scalar> PerturbationPair<T> {
    pub fn new(sigma0: GramMatrix<T>, sigma1: GramMatrix<T>) -> Result<Self> {
        let d_inf = d_infinity(&sigma0, &sigma1)?;
        Ok(Self {
            sigma0,
            sigma1,
            d_inf,
        })
    }
}
