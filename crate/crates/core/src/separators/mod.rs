//! Estimation of 2×2 unmixing matrices.
//!
//! Both estimators whiten the data first and then search for an orthonormal
//! rotation: [`fastica`] maximizes non-Gaussianity through a fixed-point
//! iteration on a contrast function, [`sobi`] jointly diagonalizes
//! time-lagged covariance matrices.

mod fastica;
mod sobi;

pub use fastica::{fastica, Contrast, IcaOptions};
pub use sobi::{joint_diagonalize, sobi, JointDiagonalization, DEFAULT_SOBI_LAGS};

use alloc::vec::Vec;

use crate::linalg::Mat2;
use crate::statistics::WhiteningModel;

/// Whitening followed by a rotation; `combined = rotation · whitening.matrix`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnmixingModel {
    pub whitening: WhiteningModel,
    pub rotation: Mat2,
    pub combined: Mat2,
}

impl UnmixingModel {
    pub fn new(whitening: WhiteningModel, rotation: Mat2) -> Self {
        UnmixingModel {
            whitening,
            rotation,
            combined: rotation * whitening.matrix,
        }
    }

    /// Same unmixing matrix, centred on a different mean.
    pub fn with_mean(mut self, mean: [f64; 2]) -> Self {
        self.whitening.mean = mean;
        self
    }

    /// `combined · (x - mean)`, sample-wise. The data need not be the data the
    /// model was fitted on.
    pub fn apply(&self, x: [&[f64]; 2]) -> [Vec<f64>; 2] {
        let [a, b] = x;
        let m = self.whitening.mean;
        let mut out = [Vec::with_capacity(a.len()), Vec::with_capacity(a.len())];
        for (&u, &v) in a.iter().zip(b) {
            let y = self.combined.apply([u - m[0], v - m[1]]);
            out[0].push(y[0]);
            out[1].push(y[1]);
        }
        out
    }
}

/// An estimated model and how the estimator got there.
#[derive(Debug, Clone, PartialEq)]
pub struct FittedUnmixing {
    pub model: UnmixingModel,
    pub converged: bool,
    pub iterations: usize,
    /// Set by SOBI when the lagged covariances carry no usable spectral
    /// diversity; always false for FastICA.
    pub ill_conditioned: bool,
}
