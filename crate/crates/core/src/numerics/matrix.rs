use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Symmetric 3×3 matrix stored as its upper triangle.
///
/// Entry order is `(0,0) (0,1) (0,2) (1,1) (1,2) (2,2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymMatrix3 {
    upper: [f64; 6],
}

#[inline]
fn slot(i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    match (i, j) {
        (0, 0) => 0,
        (0, 1) => 1,
        (0, 2) => 2,
        (1, 1) => 3,
        (1, 2) => 4,
        (2, 2) => 5,
        _ => panic!("index ({i}, {j}) out of range for a 3x3 matrix"),
    }
}

impl SymMatrix3 {
    pub fn new(a00: f64, a01: f64, a02: f64, a11: f64, a12: f64, a22: f64) -> Self {
        Self {
            upper: [a00, a01, a02, a11, a12, a22],
        }
    }

    pub fn identity() -> Self {
        Self::diagonal([1.0, 1.0, 1.0])
    }

    pub fn diagonal(d: [f64; 3]) -> Self {
        Self::new(d[0], 0.0, 0.0, d[1], 0.0, d[2])
    }

    /// Symmetrizes an arbitrary square matrix as `(A + Aᵀ) / 2`.
    pub fn from_full(a: [[f64; 3]; 3]) -> Self {
        let s = |i: usize, j: usize| 0.5 * (a[i][j] + a[j][i]);
        Self::new(s(0, 0), s(0, 1), s(0, 2), s(1, 1), s(1, 2), s(2, 2))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.upper[slot(i, j)]
    }

    pub fn to_full(&self) -> [[f64; 3]; 3] {
        let mut out = [[0.0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.get(i, j);
            }
        }
        out
    }

    pub fn diag(&self) -> [f64; 3] {
        [self.get(0, 0), self.get(1, 1), self.get(2, 2)]
    }

    pub fn scaled(&self, k: f64) -> Self {
        let mut upper = self.upper;
        upper.iter_mut().for_each(|v| *v *= k);
        Self { upper }
    }

    /// Lower-triangular Cholesky factor `L` with `L Lᵀ = self`.
    pub fn cholesky(&self) -> Result<[[f64; 3]; 3]> {
        let mut l = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..=i {
                let mut sum = self.get(i, j);
                for k in 0..j {
                    sum -= l[i][k] * l[j][k];
                }
                if i == j {
                    if !(sum > 0.0) || !sum.is_finite() {
                        return Err(Error::NotPositiveDefinite);
                    }
                    l[i][i] = sum.sqrt();
                } else {
                    l[i][j] = sum / l[j][j];
                }
            }
        }
        Ok(l)
    }

    pub fn is_positive_definite(&self) -> bool {
        self.cholesky().is_ok()
    }

    /// Inverse of a symmetric positive-definite matrix through its Cholesky factor.
    pub fn invert_spd(&self) -> Result<Self> {
        let l = self.cholesky()?;
        // L⁻¹ by forward substitution, then A⁻¹ = L⁻ᵀ L⁻¹.
        let mut linv = [[0.0; 3]; 3];
        for col in 0..3 {
            for i in col..3 {
                let mut sum = if i == col { 1.0 } else { 0.0 };
                for k in col..i {
                    sum -= l[i][k] * linv[k][col];
                }
                linv[i][col] = sum / l[i][i];
            }
        }
        let mut inv = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in i..3 {
                let v: f64 = (j..3).map(|k| linv[k][i] * linv[k][j]).sum();
                inv[i][j] = v;
                inv[j][i] = v;
            }
        }
        Ok(Self::from_full(inv))
    }
}

/// Plain 3×3 product, used for residual checks.
pub fn mat_mul(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}
