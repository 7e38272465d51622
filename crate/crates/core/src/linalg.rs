//! Dense 2×2 linear algebra.

use core::ops::Mul;

/// A 2×2 real matrix stored row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[f64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[1.0, 0.0], [0.0, 1.0]]);

    pub fn new(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Mat2([[a11, a12], [a21, a22]])
    }

    pub fn diag(d1: f64, d2: f64) -> Self {
        Mat2([[d1, 0.0], [0.0, d2]])
    }

    /// Counter-clockwise rotation by `theta` radians.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = (libm::sin(theta), libm::cos(theta));
        Mat2([[c, -s], [s, c]])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[i][j]
    }

    pub fn row(&self, i: usize) -> [f64; 2] {
        self.0[i]
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Mat2([[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
    }

    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d == 0.0 || !d.is_finite() {
            return None;
        }
        let m = &self.0;
        Some(Mat2([
            [m[1][1] / d, -m[0][1] / d],
            [-m[1][0] / d, m[0][0] / d],
        ]))
    }

    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }

    pub fn scale_rows(&self, s: [f64; 2]) -> Self {
        let m = &self.0;
        Mat2([
            [m[0][0] * s[0], m[0][1] * s[0]],
            [m[1][0] * s[1], m[1][1] * s[1]],
        ])
    }

    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.0[i][j] - other.0[i][j]).abs());
            }
        }
        worst
    }

    /// Eigendecomposition of a symmetric matrix (the upper triangle is used).
    pub fn symmetric_eigen(&self) -> SymEigen {
        let a = self.0[0][0];
        let b = self.0[0][1];
        let d = self.0[1][1];
        if b == 0.0 {
            return SymEigen {
                values: [a, d],
                vectors: Mat2::IDENTITY,
            };
        }
        // Jacobi rotation that zeroes the off-diagonal entry.
        let tau = (d - a) / (2.0 * b);
        let t = tau.signum() / (tau.abs() + libm::sqrt(1.0 + tau * tau));
        let c = 1.0 / libm::sqrt(1.0 + t * t);
        let s = t * c;
        SymEigen {
            values: [a - t * b, d + t * b],
            vectors: Mat2([[c, s], [-s, c]]),
        }
    }

    /// `M^(-1/2)` for a symmetric positive-definite matrix.
    pub fn inverse_sqrt_spd(&self) -> Option<Self> {
        let eig = self.symmetric_eigen();
        if eig.values.iter().any(|&v| v <= 0.0 || !v.is_finite()) {
            return None;
        }
        let e = eig.vectors;
        let inv = Mat2::diag(
            1.0 / libm::sqrt(eig.values[0]),
            1.0 / libm::sqrt(eig.values[1]),
        );
        Some(e * inv * e.transpose())
    }
}

/// Eigenpairs of a symmetric 2×2 matrix; eigenvectors are the columns of `vectors`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymEigen {
    pub values: [f64; 2],
    pub vectors: Mat2,
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: Mat2) -> Mat2 {
        let a = &self.0;
        let b = &rhs.0;
        let mut out = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(out)
    }
}
