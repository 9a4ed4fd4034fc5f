//! The learnable square transform applied to every input embedding, plus
//! its on-disk text format.
//!
//! Format: line 1 is the dimension `k`, followed by `k` rows of `k`
//! space-separated floats printed with 17 significant digits so that
//! save → load round-trips bit-exactly.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};

#[derive(Clone, Debug, PartialEq)]
pub struct TransformMatrix {
    matrix: Matrix,
}

impl TransformMatrix {
    /// Fresh transforms are exactly the identity.
    pub fn identity(dim: usize) -> Self {
        TransformMatrix {
            matrix: Matrix::identity(dim),
        }
    }

    pub fn from_matrix(matrix: Matrix) -> Result<Self> {
        if matrix.rows() != matrix.cols() {
            return Err(Error::DimMismatch {
                expected: matrix.rows(),
                actual: matrix.cols(),
                context: "transform matrix must be square",
            });
        }
        Ok(TransformMatrix { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn matrix_mut(&mut self) -> &mut Matrix {
        &mut self.matrix
    }

    /// M · x
    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        if x.dim() != self.dim() {
            return Err(Error::DimMismatch {
                expected: self.dim(),
                actual: x.dim(),
                context: "apply_transform input",
            });
        }
        Ok(self.matrix.matvec(x))
    }

    /// ‖I − MᵀM‖_F; zero iff M is orthogonal.
    pub fn ortho_residual(&self) -> f64 {
        ortho_residual(&self.matrix)
    }

    /// I − MᵀM
    pub fn ortho_defect(&self) -> Matrix {
        ortho_defect(&self.matrix)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse_text(&text, &path.display().to_string())
    }

    pub fn to_text(&self) -> String {
        let k = self.dim();
        let mut out = String::new();
        out.push_str(&format!("{}\n", k));
        for r in 0..k {
            let row: Vec<String> = self
                .matrix
                .row(r)
                .iter()
                .map(|x| format!("{:.16e}", x))
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parse the matrix text format. `file` is only used in diagnostics.
    pub fn parse_text(text: &str, file: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::parse(file, 1, "empty matrix file"))?;
        let k: usize = header
            .trim()
            .parse()
            .map_err(|_| Error::parse(file, 1, format!("bad dimension header {:?}", header)))?;
        if k == 0 {
            return Err(Error::parse(file, 1, "dimension must be positive"));
        }
        // Header is untrusted; cap the preallocation.
        let mut data = Vec::with_capacity(k.saturating_mul(k).min(1 << 16));
        let mut rows_read = 0usize;
        for (idx, line) in lines {
            let lineno = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            if rows_read == k {
                return Err(Error::parse(
                    file,
                    lineno,
                    format!("expected {} rows, found extra data", k),
                ));
            }
            let entries: Vec<&str> = line.split_whitespace().collect();
            if entries.len() != k {
                return Err(Error::parse(
                    file,
                    lineno,
                    format!("expected {} entries per row, got {}", k, entries.len()),
                ));
            }
            for e in entries {
                let v: f64 = e
                    .parse()
                    .map_err(|_| Error::parse(file, lineno, format!("non-numeric entry {:?}", e)))?;
                if !v.is_finite() {
                    return Err(Error::parse(file, lineno, format!("non-finite entry {:?}", e)));
                }
                data.push(v);
            }
            rows_read += 1;
        }
        if rows_read != k {
            return Err(Error::parse(
                file,
                rows_read + 1,
                format!("expected {} rows, got {}", k, rows_read),
            ));
        }
        let matrix = Matrix::new(k, k, data)
            .map_err(|e| Error::parse(file, 1, e.to_string()))?;
        Ok(TransformMatrix { matrix })
    }
}

pub fn ortho_defect(m: &Matrix) -> Matrix {
    assert_eq!(m.rows(), m.cols());
    let mut defect = Matrix::identity(m.rows());
    defect.add_scaled(&m.gram(), -1.0);
    defect
}

pub fn ortho_residual(m: &Matrix) -> f64 {
    ortho_defect(m).frobenius_norm()
}
