//! Dense double-precision vectors and matrices, sized for desk-scale
//! embedding work (k in the tens). Row-major storage.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Vector {
    data: Vec<f64>,
}

impl Vector {
    /// Build a vector, rejecting NaN/Inf entries.
    pub fn new(data: Vec<f64>) -> Result<Self> {
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("non-finite vector entry".into()));
        }
        Ok(Vector { data })
    }

    pub fn zeros(dim: usize) -> Self {
        Vector {
            data: vec![0.0; dim],
        }
    }

    pub(crate) fn from_raw(data: Vec<f64>) -> Self {
        debug_assert!(data.iter().all(|x| x.is_finite()));
        Vector { data }
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, i: usize) -> f64 {
        self.data[i]
    }

    #[cfg_attr(not(test), allow(dead_code))]
    pub(crate) fn set(&mut self, i: usize, v: f64) {
        self.data[i] = v;
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector::from_raw(
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn add(&self, other: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector::from_raw(
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn scale(&self, s: f64) -> Vector {
        Vector::from_raw(self.data.iter().map(|a| a * s).collect())
    }

    /// self += s * other
    pub fn add_scaled(&mut self, other: &Vector, s: f64) {
        debug_assert_eq!(self.dim(), other.dim());
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    pub fn l2_distance(&self, other: &Vector) -> f64 {
        self.sub(other).norm()
    }

    pub fn mean(vectors: &[Vector]) -> Vector {
        assert!(!vectors.is_empty());
        let mut acc = Vector::zeros(vectors[0].dim());
        for v in vectors {
            acc.add_scaled(v, 1.0);
        }
        acc.scale(1.0 / vectors.len() as f64)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "matrix data length {} != {}x{}",
                data.len(),
                rows,
                cols
            )));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("non-finite matrix entry".into()));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// A * x
    pub fn matvec(&self, x: &Vector) -> Vector {
        debug_assert_eq!(self.cols, x.dim());
        let mut out = vec![0.0; self.rows];
        for r in 0..self.rows {
            let row = self.row(r);
            let mut acc = 0.0;
            for (a, b) in row.iter().zip(x.as_slice()) {
                acc += a * b;
            }
            out[r] = acc;
        }
        Vector::from_raw(out)
    }

    /// Aᵀ * x
    pub fn transpose_matvec(&self, x: &Vector) -> Vector {
        debug_assert_eq!(self.rows, x.dim());
        let mut out = vec![0.0; self.cols];
        for r in 0..self.rows {
            let xr = x.get(r);
            for (c, a) in self.row(r).iter().enumerate() {
                out[c] += a * xr;
            }
        }
        Vector::from_raw(out)
    }

    /// A * B
    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0.0 {
                    continue;
                }
                for c in 0..other.cols {
                    out.data[r * other.cols + c] += a * other.get(k, c);
                }
            }
        }
        out
    }

    /// Aᵀ * A
    pub fn gram(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.cols);
        for r in 0..self.rows {
            let row = self.row(r);
            for i in 0..self.cols {
                let ri = row[i];
                if ri == 0.0 {
                    continue;
                }
                for j in 0..self.cols {
                    out.data[i * self.cols + j] += ri * row[j];
                }
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// self += s * other
    pub fn add_scaled(&mut self, other: &Matrix, s: f64) {
        debug_assert_eq!(self.rows, other.rows);
        debug_assert_eq!(self.cols, other.cols);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    /// self += s * u vᵀ
    pub fn add_outer(&mut self, u: &Vector, v: &Vector, s: f64) {
        debug_assert_eq!(self.rows, u.dim());
        debug_assert_eq!(self.cols, v.dim());
        for r in 0..self.rows {
            let ur = s * u.get(r);
            if ur == 0.0 {
                continue;
            }
            let row = &mut self.data[r * self.cols..(r + 1) * self.cols];
            for (a, b) in row.iter_mut().zip(v.as_slice()) {
                *a += ur * b;
            }
        }
    }

    pub fn scale_in_place(&mut self, s: f64) {
        for a in &mut self.data {
            *a *= s;
        }
    }

    /// Smallest singular value, via Jacobi eigenvalues of AᵀA.
    pub fn min_singular_value(&self) -> f64 {
        let eigs = jacobi_eigenvalues(self.gram());
        eigs.into_iter()
            .fold(f64::INFINITY, f64::min)
            .max(0.0)
            .sqrt()
    }

    pub fn max_singular_value(&self) -> f64 {
        let eigs = jacobi_eigenvalues(self.gram());
        eigs.into_iter()
            .fold(0.0f64, f64::max)
            .max(0.0)
            .sqrt()
    }
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
fn jacobi_eigenvalues(mut s: Matrix) -> Vec<f64> {
    assert_eq!(s.rows, s.cols);
    let n = s.rows;
    if n == 1 {
        return vec![s.get(0, 0)];
    }
    let tol = 1e-14 * s.frobenius_norm().max(1.0);
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += s.get(p, q).abs();
            }
        }
        if off < tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let spq = s.get(p, q);
                if spq.abs() < tol / (n * n) as f64 {
                    continue;
                }
                let spp = s.get(p, p);
                let sqq = s.get(q, q);
                // rotation angle: tan(2φ) = 2 s_pq / (s_pp - s_qq)
                let phi = 0.5 * (2.0 * spq).atan2(spp - sqq);
                let (c, si) = (phi.cos(), phi.sin());
                for k in 0..n {
                    let skp = s.get(k, p);
                    let skq = s.get(k, q);
                    s.set(k, p, c * skp + si * skq);
                    s.set(k, q, -si * skp + c * skq);
                }
                for k in 0..n {
                    let spk = s.get(p, k);
                    let sqk = s.get(q, k);
                    s.set(p, k, c * spk + si * sqk);
                    s.set(q, k, -si * spk + c * sqk);
                }
            }
        }
    }
    (0..n).map(|i| s.get(i, i)).collect()
}
