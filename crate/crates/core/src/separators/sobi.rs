use alloc::format;
use alloc::vec::Vec;

use super::{FittedUnmixing, UnmixingModel};
use crate::error::{Error, Result};
use crate::linalg::Mat2;
use crate::numeric::pairwise;
use crate::statistics::fit_whitening;

/// Lags used when the caller does not choose any: 1 through 20 samples.
pub const DEFAULT_SOBI_LAGS: [usize; 20] = [
    1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20,
];

/// Rotations smaller than this end the Jacobi sweeps.
const ROTATION_THRESHOLD: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Result of jointly diagonalizing a set of symmetric 2×2 matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDiagonalization {
    /// Orthonormal `V` such that every `Vᵀ M V` is as diagonal as possible.
    pub basis: Mat2,
    pub sweeps: usize,
    /// Sum of squared off-diagonal entries before the first sweep and after each sweep.
    pub off_diagonal: Vec<f64>,
}

fn off_diagonal(mats: &[Mat2]) -> f64 {
    mats.iter().map(|m| 2.0 * m.get(0, 1) * m.get(0, 1)).sum()
}

/// Jacobi joint diagonalization with closed-form Givens angles.
///
/// For two dimensions each sweep is a single rotation, and its angle is the
/// global minimizer of the off-diagonal objective, so the objective never
/// increases from one sweep to the next.
pub fn joint_diagonalize(mats: &[Mat2]) -> JointDiagonalization {
    let mut mats: Vec<Mat2> = mats.to_vec();
    let mut basis = Mat2::IDENTITY;
    let mut history = alloc::vec![off_diagonal(&mats)];
    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS {
        sweeps += 1;
        let (mut g00, mut g01, mut g11) = (0.0, 0.0, 0.0);
        for m in &mats {
            let diff = m.get(0, 0) - m.get(1, 1);
            let cross = m.get(0, 1) + m.get(1, 0);
            g00 += diff * diff;
            g01 += diff * cross;
            g11 += cross * cross;
        }
        let ton = g00 - g11;
        let toff = 2.0 * g01;
        let theta = 0.5 * libm::atan2(toff, ton + libm::sqrt(ton * ton + toff * toff));
        let (s, c) = (libm::sin(theta), libm::cos(theta));
        if s.abs() <= ROTATION_THRESHOLD {
            history.push(off_diagonal(&mats));
            break;
        }
        let g = Mat2::new(c, -s, s, c);
        for m in mats.iter_mut() {
            *m = g.transpose() * *m * g;
        }
        basis = basis * g;
        history.push(off_diagonal(&mats));
    }
    JointDiagonalization {
        basis,
        sweeps,
        off_diagonal: history,
    }
}

/// Symmetrized lagged covariance `(R + Rᵀ)/2`, `R_ij = mean_t z_i(t) z_j(t+lag)`.
fn lagged_covariance(z: &[Vec<f64>; 2], lag: usize) -> Mat2 {
    let n = z[0].len() - lag;
    let nf = n as f64;
    let r = |i: usize, j: usize| pairwise(0, n, |t| z[i][t] * z[j][t + lag]) / nf;
    let off = 0.5 * (r(0, 1) + r(1, 0));
    Mat2::new(r(0, 0), off, off, r(1, 1))
}

/// Second-order blind identification.
///
/// Whitens the data, builds one symmetrized lagged covariance per lag and
/// takes the joint diagonalizer as the rotation. `ill_conditioned` is set when
/// the lagged covariances are statistically indistinguishable from multiples
/// of the identity: the eigenvalue spread `s_τ` of each whitened lagged
/// covariance is tested through `N · Σ s_τ² / 2`, which is roughly χ² with
/// `2L` degrees of freedom for white sources with identical spectra.
pub fn sobi(x: [&[f64]; 2], lags: &[usize]) -> Result<FittedUnmixing> {
    let n = x[0].len();
    if lags.is_empty() {
        return Err(Error::Parameter("SOBI needs at least one lag".into()));
    }
    if lags.contains(&0) {
        return Err(Error::Parameter("SOBI lags must be positive".into()));
    }
    let max_lag = *lags.iter().max().expect("non-empty");
    if 4 * max_lag >= n {
        return Err(Error::Length(format!(
            "largest lag {max_lag} must be below a quarter of the {n} samples"
        )));
    }
    let whitening = fit_whitening(x)?;
    let z = whitening.transform(x);
    let mats: Vec<Mat2> = lags.iter().map(|&lag| lagged_covariance(&z, lag)).collect();

    let spread: f64 = mats
        .iter()
        .map(|m| {
            let d = m.get(0, 0) - m.get(1, 1);
            d * d + 4.0 * m.get(0, 1) * m.get(0, 1)
        })
        .sum();
    let dof = 2.0 * lags.len() as f64;
    let statistic = n as f64 * spread / 2.0;
    let ill_conditioned = statistic < dof + 8.0 * libm::sqrt(2.0 * dof);

    let jd = joint_diagonalize(&mats);
    let converged = jd.sweeps < MAX_SWEEPS;
    Ok(FittedUnmixing {
        model: UnmixingModel::new(whitening, jd.basis.transpose()),
        converged,
        iterations: jd.sweeps,
        ill_conditioned,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::{mix, MixingMatrix};
    use crate::synth::{synth_source, SourceKind};
    use crate::testutil::amari_index;

    #[test]
    fn diagonal_input_needs_no_rotation() {
        let jd = joint_diagonalize(&[Mat2::diag(0.8, -0.3)]);
        let b = jd.basis;
        let is_signed_perm = (b.get(0, 1).abs() < 1e-12 && b.get(1, 0).abs() < 1e-12)
            || (b.get(0, 0).abs() < 1e-12 && b.get(1, 1).abs() < 1e-12);
        assert!(is_signed_perm, "{b:?}");
    }

    #[test]
    fn recovers_rotation_of_commuting_matrices() {
        let r = Mat2::rotation(0.4);
        let mats = [
            r * Mat2::diag(1.0, 0.2) * r.transpose(),
            r * Mat2::diag(-0.5, 0.3) * r.transpose(),
        ];
        let jd = joint_diagonalize(&mats);
        assert!(*jd.off_diagonal.last().unwrap() < 1e-20);
        let p = jd.basis.transpose() * r;
        assert!(amari_index(&p) < 1e-10);
    }

    #[test]
    fn separates_ar_sources() {
        let s1 = synth_source(SourceKind::Ar1 { pole: 0.9 }, 16384, 1).unwrap();
        let s2 = synth_source(SourceKind::Ar1 { pole: -0.5 }, 16384, 2).unwrap();
        let [x1, x2] = mix([&s1, &s2], &MixingMatrix::experiment()).unwrap();
        let fit = sobi([x1.samples(), x2.samples()], &DEFAULT_SOBI_LAGS).unwrap();
        assert!(!fit.ill_conditioned);
        let p = fit.model.combined * MixingMatrix::experiment().matrix();
        assert!(amari_index(&p) < 0.05, "amari {}", amari_index(&p));
    }

    #[test]
    fn identical_white_spectra_are_flagged() {
        for seed in 0..5 {
            let s1 = synth_source(SourceKind::Laplacian, 16384, seed).unwrap();
            let s2 = synth_source(SourceKind::Laplacian, 16384, seed + 100).unwrap();
            let [x1, x2] = mix([&s1, &s2], &MixingMatrix::experiment()).unwrap();
            let fit = sobi([x1.samples(), x2.samples()], &DEFAULT_SOBI_LAGS).unwrap();
            assert!(fit.ill_conditioned, "seed {seed}");
        }
    }

    #[test]
    fn lag_preconditions() {
        let x = alloc::vec![0.0; 40];
        assert!(matches!(sobi([&x, &x], &[10]), Err(Error::Length(_))));
        assert!(matches!(sobi([&x, &x], &[]), Err(Error::Parameter(_))));
        assert!(matches!(sobi([&x, &x], &[0, 1]), Err(Error::Parameter(_))));
    }
}
