//! Dense row-major `f64` matrices, cyclic Jacobi eigendecomposition,
//! Householder QR, and majorization.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const EIG_MAX_SWEEPS: usize = 100;
pub const EIG_MAX_DIM: usize = 512;
const EIG_CONVERGENCE: f64 = 1e-14;
const QR_RANK_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::eye(n, n)
    }

    /// `rows x cols` matrix with ones on the leading diagonal.
    pub fn eye(rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows.min(cols) {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(x) = data.iter().find(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite matrix entry {x}")));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::from_row_major(r, c, rows.into_iter().flatten().collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn rows_vec(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(<[f64]>::to_vec).collect()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// Matrix product; panics on inner-dimension mismatch.
    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul {:?} x {:?}", self.shape(), rhs.shape());
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for (l, &a) in row.iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                let src = &rhs.data[l * rhs.cols..(l + 1) * rhs.cols];
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d += a * b;
                }
            }
        }
        out
    }

    /// `selfᵀ · rhs` without forming the transpose.
    pub fn tr_matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.rows, rhs.rows, "tr_matmul {:?} x {:?}", self.shape(), rhs.shape());
        let mut out = Self::zeros(self.cols, rhs.cols);
        for l in 0..self.rows {
            let a_row = &self.data[l * self.cols..(l + 1) * self.cols];
            let b_row = &rhs.data[l * rhs.cols..(l + 1) * rhs.cols];
            for (i, &a) in a_row.iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, &b) in dst.iter_mut().zip(b_row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * factor).collect(),
        }
    }

    /// Scales column `j` by `factors[j]`, i.e. `self · diag(factors)`.
    pub fn scale_columns(&self, factors: &[f64]) -> Self {
        assert_eq!(factors.len(), self.cols);
        let mut out = self.clone();
        for row in out.data.chunks_mut(self.cols.max(1)) {
            for (x, f) in row.iter_mut().zip(factors) {
                *x *= f;
            }
        }
        out
    }

    /// Frobenius inner product `tr(selfᵀ · rhs)`.
    pub fn dot(&self, rhs: &Self) -> f64 {
        assert_eq!(self.shape(), rhs.shape());
        self.data.iter().zip(&rhs.data).map(|(a, b)| a * b).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, x| acc.max(x.abs()))
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// `(self + selfᵀ) / 2`; panics unless square.
    pub fn symmetric_part(&self) -> SymmetricMatrix {
        SymmetricMatrix::symmetrized(self)
    }

    /// Largest `|x_ij|` over `i != j`.
    pub fn max_off_diagonal(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j {
                    worst = worst.max(self[(i, j)].abs());
                }
            }
        }
        worst
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &Matrix {
    type Output = Matrix;

    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape());
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;

    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape());
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        self.matmul(rhs)
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows_vec().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(deserializer)?;
        Matrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// Square matrix with `x_ij == x_ji` bit-for-bit.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricMatrix(Matrix);

impl SymmetricMatrix {
    pub fn zeros(n: usize) -> Self {
        Self(Matrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Self(Matrix::identity(n))
    }

    /// Accepts `m` only if it is square and exactly symmetric.
    pub fn new(m: Matrix) -> Result<Self> {
        if m.rows != m.cols {
            return Err(Error::Dimension(format!("{}x{} matrix is not square", m.rows, m.cols)));
        }
        for i in 0..m.rows {
            for j in i + 1..m.cols {
                if m[(i, j)] != m[(j, i)] {
                    return Err(Error::InvalidArgument(format!(
                        "matrix is not symmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Self(m))
    }

    /// `(m + mᵀ) / 2`, mirrored so the result is exactly symmetric.
    pub fn symmetrized(m: &Matrix) -> Self {
        assert_eq!(m.rows, m.cols, "symmetrized needs a square matrix");
        let mut s = Matrix::zeros(m.rows, m.cols);
        for i in 0..m.rows {
            s[(i, i)] = m[(i, i)];
            for j in i + 1..m.cols {
                let v = (m[(i, j)] + m[(j, i)]) / 2.0;
                s[(i, j)] = v;
                s[(j, i)] = v;
            }
        }
        Self(s)
    }

    pub fn n(&self) -> usize {
        self.0.rows
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.0[(i, j)] = value;
        self.0[(j, i)] = value;
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    /// `W · x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n());
        self.0
            .data
            .chunks(self.n().max(1))
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `xᵀ · W · x`.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        self.apply(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }
}

impl Serialize for SymmetricMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SymmetricMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let m = Matrix::deserialize(deserializer)?;
        SymmetricMatrix::new(m).map_err(serde::de::Error::custom)
    }
}

/// Orthonormal eigenvectors (as columns) and eigenvalues sorted descending.
#[derive(Clone, Debug)]
pub struct SymmetricEigen {
    pub vectors: Matrix,
    pub values: Vec<f64>,
}

/// Cyclic Jacobi eigendecomposition.
///
/// Sweeps run until the off-diagonal Frobenius mass is at most
/// `1e-14 · ‖S‖_F`, for at most [`EIG_MAX_SWEEPS`] sweeps. The result is
/// rejected if `‖QᵀQ − I‖_F > tol` or `‖Q Λ Qᵀ − S‖_F > tol · (1 + ‖S‖_F)`.
pub fn sym_eig(s: &SymmetricMatrix, tol: f64) -> Result<SymmetricEigen> {
    let n = s.n();
    if n > EIG_MAX_DIM {
        return Err(Error::Capacity {
            what: "symmetric eigensolver",
            got: n,
            limit: EIG_MAX_DIM,
        });
    }
    let norm = s.as_matrix().frobenius_norm();
    let threshold = EIG_CONVERGENCE * norm;
    let mut a = s.as_matrix().data.clone();
    let mut v = Matrix::identity(n).data;
    let at = |i: usize, j: usize| i * n + j;

    let off_mass = |a: &[f64]| -> f64 {
        let mut sum = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    sum += a[at(i, j)] * a[at(i, j)];
                }
            }
        }
        sum.sqrt()
    };

    let mut converged = false;
    for _ in 0..EIG_MAX_SWEEPS {
        if off_mass(&a) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[at(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[at(q, q)] - a[at(p, p)]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[at(k, p)], a[at(k, q)]);
                    a[at(k, p)] = c * akp - sn * akq;
                    a[at(k, q)] = sn * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[at(p, k)], a[at(q, k)]);
                    a[at(p, k)] = c * apk - sn * aqk;
                    a[at(q, k)] = sn * apk + c * aqk;
                }
                a[at(p, q)] = 0.0;
                a[at(q, p)] = 0.0;
                for k in 0..n {
                    let (vkp, vkq) = (v[at(k, p)], v[at(k, q)]);
                    v[at(k, p)] = c * vkp - sn * vkq;
                    v[at(k, q)] = sn * vkp + c * vkq;
                }
            }
        }
    }
    if !converged && off_mass(&a) > threshold {
        return Err(Error::Numerical {
            message: format!("Jacobi eigensolver did not converge in {EIG_MAX_SWEEPS} sweeps"),
            residual: off_mass(&a),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[at(j, j)].total_cmp(&a[at(i, i)]));
    let values: Vec<f64> = order.iter().map(|&i| a[at(i, i)]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for k in 0..n {
            vectors[(k, dst)] = v[at(k, src)];
        }
    }

    let orth = orthogonality_residual(&vectors);
    if orth > tol {
        return Err(Error::Numerical {
            message: "eigenvector matrix is not orthogonal".into(),
            residual: orth,
        });
    }
    let recon = (&vectors.scale_columns(&values).matmul(&vectors.transpose()) - s.as_matrix()).frobenius_norm();
    if recon > tol * (1.0 + norm) {
        return Err(Error::Numerical {
            message: "eigendecomposition does not reconstruct the input".into(),
            residual: recon,
        });
    }
    Ok(SymmetricEigen { vectors, values })
}

/// `‖QᵀQ − I‖_F`.
pub fn orthogonality_residual(q: &Matrix) -> f64 {
    (&q.tr_matmul(q) - &Matrix::identity(q.cols())).frobenius_norm()
}

/// Householder QR of an `n x k` matrix (`k <= n`), returning the thin factors
/// `Q` (`n x k`) and `R` (`k x k`) with `R_ii >= 0`.
pub fn qr_decompose(m: &Matrix) -> Result<(Matrix, Matrix)> {
    let (n, k) = m.shape();
    if k > n {
        return Err(Error::Dimension(format!("QR needs k <= n, got {n}x{k}")));
    }
    let mut a = m.clone();
    let mut reflectors: Vec<Vec<f64>> = Vec::with_capacity(k);
    for j in 0..k {
        let norm = (j..n).map(|i| a[(i, j)] * a[(i, j)]).sum::<f64>().sqrt();
        if norm < QR_RANK_TOL {
            return Err(Error::RankDeficient { column: j + 1, value: norm });
        }
        let x0 = a[(j, j)];
        let alpha = if x0 >= 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (j..n).map(|i| a[(i, j)]).collect();
        v[0] -= alpha;
        let vnorm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= vnorm);
        for col in j..k {
            let proj: f64 = (j..n).map(|i| v[i - j] * a[(i, col)]).sum();
            for i in j..n {
                a[(i, col)] -= 2.0 * v[i - j] * proj;
            }
        }
        reflectors.push(v);
    }
    let mut q = Matrix::eye(n, k);
    for (j, v) in reflectors.iter().enumerate().rev() {
        for col in 0..k {
            let proj: f64 = (j..n).map(|i| v[i - j] * q[(i, col)]).sum();
            if proj != 0.0 {
                for i in j..n {
                    q[(i, col)] -= 2.0 * v[i - j] * proj;
                }
            }
        }
    }
    let mut r = Matrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            r[(i, j)] = a[(i, j)];
        }
    }
    for i in 0..k {
        if r[(i, i)].abs() < QR_RANK_TOL {
            return Err(Error::RankDeficient {
                column: i + 1,
                value: r[(i, i)].abs(),
            });
        }
        if r[(i, i)] < 0.0 {
            for row in 0..n {
                q[(row, i)] = -q[(row, i)];
            }
            for col in i..k {
                r[(i, col)] = -r[(i, col)];
            }
        }
    }
    Ok((q, r))
}

/// Orthonormal basis of the column span of `m`, sign-normalized so that the
/// triangular factor has a nonnegative diagonal.
pub fn qr_orthonormalize(m: &Matrix) -> Result<Matrix> {
    qr_decompose(m).map(|(q, _)| q)
}

/// `(x_11, …, x_dd)` with `d = min(rows, cols)`.
pub fn diag_vector(x: &Matrix) -> Vec<f64> {
    (0..x.rows().min(x.cols())).map(|i| x[(i, i)]).collect()
}

/// Whether `x` is majorized by `c`: equal totals within `tol`, and each sorted
/// (descending) prefix sum of `x` at most that of `c` plus `tol`. Vectors of
/// different lengths are never comparable and yield `false`.
pub fn majorization_check(x: &[f64], c: &[f64], tol: f64) -> bool {
    if x.len() != c.len() {
        return false;
    }
    let sorted = |v: &[f64]| {
        let mut v = v.to_vec();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    };
    let (xs, cs) = (sorted(x), sorted(c));
    let (mut px, mut pc) = (0.0, 0.0);
    for (a, b) in xs.iter().zip(&cs) {
        px += a;
        pc += b;
        if px > pc + tol {
            return false;
        }
    }
    (px - pc).abs() <= tol
}
