//! Small dense linear algebra: row-major matrices, a cyclic Jacobi
//! eigensolver and a pivoted Gaussian elimination.

use crate::scalar::{dot, Scalar};

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(rows * cols, data.len(), "matrix data length mismatch");
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![T::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::new(rows, cols, data)
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::new(r, c, rows.concat())
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self::new(self.rows, self.cols, self.data.iter().map(|&x| f(x)).collect())
    }

    pub fn convert<U: Scalar>(&self) -> Matrix<U> {
        Matrix::new(
            self.rows,
            self.cols,
            self.data.iter().map(|x| U::of(x.as_f64())).collect(),
        )
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == T::zero() {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(self.cols, x.len(), "matvec dimension mismatch");
        (0..self.rows).map(|i| dot(self.row(i), x)).collect()
    }

    /// `selfᵀ x`.
    pub fn t_matvec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(self.rows, x.len(), "t_matvec dimension mismatch");
        let mut out = vec![T::zero(); self.cols];
        for (i, &xi) in x.iter().enumerate() {
            if xi == T::zero() {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o += a * xi;
            }
        }
        out
    }

    /// Submatrix with the given rows and columns, in the order given.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]))
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, x| m.max(x.abs()))
    }

    pub fn frobenius(&self) -> T {
        dot(&self.data, &self.data).sqrt()
    }

    pub fn max_asymmetry(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// Quadratic form `xᵀ A x`.
    pub fn quad(&self, x: &[T]) -> T {
        dot(x, &self.matvec(x))
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::new(
            self.rows,
            self.cols,
            self.data.iter().zip(&other.data).map(|(&a, &b)| a - b).collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::new(
            self.rows,
            self.cols,
            self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect(),
        )
    }

    pub fn scale(&self, c: T) -> Self {
        self.map(|x| x * c)
    }

    /// `(A + Aᵀ)/2`.
    pub fn symmetrize(&self) -> Self {
        assert!(self.is_square());
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self.get(i, j) + self.get(j, i)) * T::half()
        })
    }
}

/// Eigen-decomposition of a symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen<T> {
    /// Eigenvalues in ascending order.
    pub values: Vec<T>,
    /// Orthonormal eigenvectors stored as columns, matching `values`.
    pub vectors: Matrix<T>,
}

impl<T: Scalar> SymmetricEigen<T> {
    pub fn min(&self) -> T {
        self.values.first().copied().unwrap_or_else(T::infinity)
    }

    pub fn max(&self) -> T {
        self.values.last().copied().unwrap_or_else(T::neg_infinity)
    }

    pub fn vector(&self, k: usize) -> Vec<T> {
        self.vectors.column(k)
    }

    /// `V f(D) Vᵀ`.
    pub fn reconstruct_with(&self, f: impl Fn(T) -> T) -> Matrix<T> {
        let n = self.values.len();
        let fv: Vec<T> = self.values.iter().map(|&v| f(v)).collect();
        Matrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| self.vectors.get(i, k) * fv[k] * self.vectors.get(j, k))
                .sum()
        })
    }
}

/// Cyclic Jacobi eigensolver for a symmetric matrix.
///
/// Only the upper triangle is trusted; the input is symmetrized first.
pub fn symmetric_eigen<T: Scalar>(a: &Matrix<T>) -> SymmetricEigen<T> {
    assert!(a.is_square(), "eigen of non-square matrix");
    let n = a.nrows();
    let mut m = a.symmetrize();
    let mut v = Matrix::identity(n);
    let eps = T::epsilon();

    for _sweep in 0..100 {
        let mut off = T::zero();
        let mut diag = T::zero();
        for i in 0..n {
            diag += m.get(i, i) * m.get(i, i);
            for j in (i + 1)..n {
                off += m.get(i, j) * m.get(i, j);
            }
        }
        if off == T::zero() || off <= eps * eps * diag * T::of(1e-4) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m.get(p, q);
                if apq == T::zero() {
                    continue;
                }
                let app = m.get(p, p);
                let aqq = m.get(q, q);
                // Skip rotations that cannot change the diagonal in working precision.
                if apq.abs() <= eps * T::of(1e-3) * (app.abs() + aqq.abs()) {
                    m.set(p, q, T::zero());
                    m.set(q, p, T::zero());
                    continue;
                }
                let theta = (aqq - app) / (T::two() * apq);
                let t = {
                    let r = T::one() / (theta.abs() + (theta * theta + T::one()).sqrt());
                    if theta < T::zero() {
                        -r
                    } else {
                        r
                    }
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = m.get(k, p);
                    let akq = m.get(k, q);
                    m.set(k, p, c * akp - s * akq);
                    m.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = m.get(p, k);
                    let aqk = m.get(q, k);
                    m.set(p, k, c * apk - s * aqk);
                    m.set(q, k, s * apk + c * aqk);
                }
                m.set(p, q, T::zero());
                m.set(q, p, T::zero());
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m.get(i, i).partial_cmp(&m.get(j, j)).unwrap());
    let values = order.iter().map(|&i| m.get(i, i)).collect();
    let vectors = Matrix::from_fn(n, n, |i, k| v.get(i, order[k]));
    SymmetricEigen { values, vectors }
}

pub fn min_eigenvalue<T: Scalar>(a: &Matrix<T>) -> T {
    if a.nrows() == 0 {
        return T::infinity();
    }
    symmetric_eigen(a).min()
}

pub fn max_eigenvalue<T: Scalar>(a: &Matrix<T>) -> T {
    if a.nrows() == 0 {
        return T::zero();
    }
    symmetric_eigen(a).max()
}

/// Largest singular value; zero for an empty matrix.
pub fn sigma_max<T: Scalar>(b: &Matrix<T>) -> T {
    if b.nrows() == 0 || b.ncols() == 0 {
        return T::zero();
    }
    let g = if b.nrows() <= b.ncols() {
        b.matmul(&b.transpose())
    } else {
        b.transpose().matmul(b)
    };
    max_eigenvalue(&g).max(T::zero()).sqrt()
}

/// Inverse of a symmetric positive definite matrix.
///
/// Returns `None` when `λ_min ≤ rel_tol · λ_max`.
pub fn spd_inverse<T: Scalar>(a: &Matrix<T>, rel_tol: T) -> Option<Matrix<T>> {
    if a.nrows() == 0 {
        return Some(Matrix::zeros(0, 0));
    }
    let eig = symmetric_eigen(a);
    let top = eig.max();
    if !(top > T::zero()) || eig.min() <= rel_tol * top {
        return None;
    }
    Some(eig.reconstruct_with(|v| T::one() / v))
}

/// Solve `A x = b` by Gaussian elimination with partial pivoting.
pub fn solve<T: Scalar>(a: &Matrix<T>, b: &[T]) -> Option<Vec<T>> {
    assert!(a.is_square());
    let n = a.nrows();
    let mut m = a.clone();
    let mut x = b.to_vec();
    let scale = m.max_abs().max(T::min_positive_value());
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m.get(i, col).abs().partial_cmp(&m.get(j, col).abs()).unwrap())?;
        if m.get(piv, col).abs() <= T::epsilon() * scale * T::of_usize(n.max(1)) {
            return None;
        }
        if piv != col {
            for k in 0..n {
                let t = m.get(col, k);
                m.set(col, k, m.get(piv, k));
                m.set(piv, k, t);
            }
            x.swap(col, piv);
        }
        let d = m.get(col, col);
        for r in (col + 1)..n {
            let f = m.get(r, col) / d;
            if f == T::zero() {
                continue;
            }
            for k in col..n {
                let v = m.get(r, k) - f * m.get(col, k);
                m.set(r, k, v);
            }
            x[r] = x[r] - f * x[col];
        }
    }
    for col in (0..n).rev() {
        let mut acc = x[col];
        for k in (col + 1)..n {
            acc -= m.get(col, k) * x[k];
        }
        x[col] = acc / m.get(col, col);
    }
    Some(x)
}

/// Largest eigenvalue of a PSD matrix by power iteration from the all-ones vector.
pub fn power_iteration<T: Scalar>(a: &Matrix<T>, iters: usize) -> T {
    let n = a.nrows();
    if n == 0 {
        return T::zero();
    }
    let mut x: Vec<T> = (0..n).map(|i| T::one() + T::of(0.01) * T::of_usize(i % 7)).collect();
    let mut est = T::zero();
    for _ in 0..iters {
        let y = a.matvec(&x);
        let ny = dot(&y, &y).sqrt();
        if ny == T::zero() {
            return T::zero();
        }
        est = dot(&x, &y) / dot(&x, &x);
        x = y.into_iter().map(|v| v / ny).collect();
    }
    est.max(dot(&x, &a.matvec(&x)) / dot(&x, &x))
}
