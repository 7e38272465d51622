//! Sampled signals, mixing matrices and the instantaneous mixing model `x = A s`.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::Mat2;

/// Sample rate every separation entry point expects.
pub const PIPELINE_RATE_HZ: u32 = 8000;

/// A uniformly sampled real-valued sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<f64>,
    sample_rate_hz: u32,
}

impl Signal {
    /// Builds a signal, rejecting empty or non-finite data and a zero rate.
    pub fn new(samples: Vec<f64>, sample_rate_hz: u32) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Dimension(
                "signal must hold at least one sample".into(),
            ));
        }
        if sample_rate_hz == 0 {
            return Err(Error::Parameter("sample rate must be positive".into()));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::Parameter(format!("sample {i} is not finite")));
        }
        Ok(Signal {
            samples,
            sample_rate_hz,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn sample_rate_hz(&self) -> u32 {
        self.sample_rate_hz
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Keeps the first `len` samples.
    pub fn truncated(&self, len: usize) -> Result<Signal> {
        if len == 0 || len > self.samples.len() {
            return Err(Error::Dimension(format!(
                "cannot truncate {} samples to {len}",
                self.samples.len()
            )));
        }
        Ok(Signal {
            samples: self.samples[..len].to_vec(),
            sample_rate_hz: self.sample_rate_hz,
        })
    }

    pub fn scaled(&self, gain: f64) -> Signal {
        Signal {
            samples: self.samples.iter().map(|v| v * gain).collect(),
            sample_rate_hz: self.sample_rate_hz,
        }
    }

    pub fn peak(&self) -> f64 {
        self.samples.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// An invertible 2×2 instantaneous mixing matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixingMatrix(Mat2);

impl MixingMatrix {
    pub const MIN_ABS_DET: f64 = 1e-12;

    pub fn new(entries: [[f64; 2]; 2]) -> Result<Self> {
        if entries.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Parameter(
                "mixing matrix entries must be finite".into(),
            ));
        }
        let m = Mat2(entries);
        if m.det().abs() <= Self::MIN_ABS_DET {
            return Err(Error::SingularData(format!(
                "mixing matrix determinant {} is not invertible",
                m.det()
            )));
        }
        Ok(MixingMatrix(m))
    }

    /// The matrix used for the two-speaker experiments: `[[2, 1], [1, 1]]`.
    pub fn experiment() -> Self {
        MixingMatrix(Mat2::new(2.0, 1.0, 1.0, 1.0))
    }

    pub fn matrix(&self) -> Mat2 {
        self.0
    }

    pub fn entries(&self) -> [[f64; 2]; 2] {
        self.0 .0
    }

    pub fn inverse(&self) -> Mat2 {
        // invertibility is checked at construction
        self.0.inverse().expect("mixing matrix is invertible")
    }
}

impl Default for MixingMatrix {
    fn default() -> Self {
        Self::experiment()
    }
}

/// Forms `x_i(t) = Σ_j a[i][j] · s_j(t)`.
pub fn mix(sources: [&Signal; 2], a: &MixingMatrix) -> Result<[Signal; 2]> {
    let [s1, s2] = sources;
    if s1.len() != s2.len() {
        return Err(Error::Dimension(format!(
            "source lengths differ: {} vs {}",
            s1.len(),
            s2.len()
        )));
    }
    if s1.sample_rate_hz() != s2.sample_rate_hz() {
        return Err(Error::Dimension(format!(
            "source rates differ: {} vs {}",
            s1.sample_rate_hz(),
            s2.sample_rate_hz()
        )));
    }
    let [x1, x2] = apply_matrix(&a.matrix(), [s1.samples(), s2.samples()]);
    let rate = s1.sample_rate_hz();
    Ok([
        Signal {
            samples: x1,
            sample_rate_hz: rate,
        },
        Signal {
            samples: x2,
            sample_rate_hz: rate,
        },
    ])
}

/// Sample-wise `m · [a(t), b(t)]ᵀ`.
pub fn apply_matrix(m: &Mat2, channels: [&[f64]; 2]) -> [Vec<f64>; 2] {
    let [a, b] = channels;
    let mut out = [Vec::with_capacity(a.len()), Vec::with_capacity(a.len())];
    for (&u, &v) in a.iter().zip(b) {
        let y = m.apply([u, v]);
        out[0].push(y[0]);
        out[1].push(y[1]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn sig(v: Vec<f64>) -> Signal {
        Signal::new(v, 8000).unwrap()
    }

    #[test]
    fn rejects_bad_signals() {
        assert!(matches!(
            Signal::new(vec![], 8000),
            Err(Error::Dimension(_))
        ));
        assert!(Signal::new(vec![f64::NAN], 8000).is_err());
        assert!(Signal::new(vec![0.0], 0).is_err());
    }

    #[test]
    fn identity_mixing_returns_sources() {
        let s1 = sig(vec![0.1, -0.2, 0.3]);
        let s2 = sig(vec![1.0, 2.0, 3.0]);
        let id = MixingMatrix::new([[1.0, 0.0], [0.0, 1.0]]).unwrap();
        let [x1, x2] = mix([&s1, &s2], &id).unwrap();
        assert_eq!(x1, s1);
        assert_eq!(x2, s2);
    }

    #[test]
    fn experiment_matrix_columns() {
        let s1 = sig(vec![1.0, 0.0]);
        let s2 = sig(vec![0.0, 1.0]);
        let [x1, x2] = mix([&s1, &s2], &MixingMatrix::experiment()).unwrap();
        assert_eq!(x1.samples(), &[2.0, 1.0]);
        assert_eq!(x2.samples(), &[1.0, 1.0]);
    }

    #[test]
    fn length_mismatch_is_dimension_error() {
        let s1 = sig(vec![1.0, 0.0]);
        let s2 = sig(vec![0.0]);
        assert!(matches!(
            mix([&s1, &s2], &MixingMatrix::experiment()),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn singular_matrix_rejected() {
        assert!(MixingMatrix::new([[1.0, 2.0], [2.0, 4.0]]).is_err());
        assert!(MixingMatrix::new([[1e-7, 0.0], [0.0, 1e-6]]).is_err());
    }
}
