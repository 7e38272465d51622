use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{FittedUnmixing, UnmixingModel};
use crate::error::{Error, Result};
use crate::linalg::Mat2;
use crate::numeric::pairwise;
use crate::statistics::fit_whitening;

/// Minimum number of samples FastICA accepts.
pub const MIN_SAMPLES: usize = 64;

/// Non-quadratic contrast `G`; the iteration uses its derivative `g` and `g'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Contrast {
    /// `g(u) = tanh(u)`
    #[default]
    Tanh,
    /// `g(u) = u·exp(-u²/2)`
    Gauss,
    /// `g(u) = u³`
    Cube,
}

impl Contrast {
    /// `(g(u), g'(u))`
    #[inline]
    pub fn eval(self, u: f64) -> (f64, f64) {
        match self {
            Contrast::Tanh => {
                let t = libm::tanh(u);
                (t, 1.0 - t * t)
            }
            Contrast::Gauss => {
                let e = libm::exp(-0.5 * u * u);
                (u * e, (1.0 - u * u) * e)
            }
            Contrast::Cube => (u * u * u, 3.0 * u * u),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IcaOptions {
    pub contrast: Contrast,
    pub tolerance: f64,
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for IcaOptions {
    fn default() -> Self {
        IcaOptions {
            contrast: Contrast::Tanh,
            tolerance: 1e-6,
            max_iterations: 200,
            seed: 42,
        }
    }
}

impl IcaOptions {
    fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::Parameter("tolerance must be positive".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::Parameter("max_iterations must be at least 1".into()));
        }
        Ok(())
    }
}

/// Symmetric FastICA on two channels.
///
/// After whitening to `z`, every row `w` of the rotation is updated as
/// `w ← E{z g(wᵀz)} - E{g'(wᵀz)} w`, and the stacked rows are re-orthonormalized
/// with `W ← (W Wᵀ)^(-1/2) W`. The run stops when every row has turned by less
/// than the tolerance, i.e. `1 - min_i |⟨w_i, w_i_old⟩| < tolerance`.
///
/// Hitting `max_iterations` is not an error: the last iterate is returned with
/// `converged = false`.
pub fn fastica(x: [&[f64]; 2], opts: &IcaOptions) -> Result<FittedUnmixing> {
    opts.validate()?;
    if x[0].len() < MIN_SAMPLES {
        return Err(Error::Length(alloc::format!(
            "FastICA needs at least {MIN_SAMPLES} samples, got {}",
            x[0].len()
        )));
    }
    let whitening = fit_whitening(x)?;
    let z = whitening.transform(x);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let theta: f64 = rng.random_range(0.0..core::f64::consts::TAU);
    let mut w = Mat2::rotation(theta);

    let mut converged = false;
    let mut iterations = 0;
    while iterations < opts.max_iterations {
        iterations += 1;
        let updated = fixed_point_update(&z, &w, opts.contrast);
        let Some(next) = symmetric_decorrelation(&updated) else {
            break;
        };
        let lim = (0..2)
            .map(|i| {
                let (a, b) = (next.row(i), w.row(i));
                1.0 - (a[0] * b[0] + a[1] * b[1]).abs()
            })
            .fold(0.0f64, f64::max);
        w = next;
        if lim < opts.tolerance {
            converged = true;
            break;
        }
    }

    Ok(FittedUnmixing {
        model: UnmixingModel::new(whitening, w),
        converged,
        iterations,
        ill_conditioned: false,
    })
}

fn fixed_point_update(z: &[Vec<f64>; 2], w: &Mat2, contrast: Contrast) -> Mat2 {
    let n = z[0].len();
    let nf = n as f64;
    let mut rows = [[0.0; 2]; 2];
    let mut g = Vec::with_capacity(n);
    let mut dg = Vec::with_capacity(n);
    for (i, row) in rows.iter_mut().enumerate() {
        let wi = w.row(i);
        g.clear();
        dg.clear();
        for t in 0..n {
            let (gv, dv) = contrast.eval(wi[0] * z[0][t] + wi[1] * z[1][t]);
            g.push(gv);
            dg.push(dv);
        }
        let ezg0 = pairwise(0, n, |t| z[0][t] * g[t]) / nf;
        let ezg1 = pairwise(0, n, |t| z[1][t] * g[t]) / nf;
        let edg = pairwise(0, n, |t| dg[t]) / nf;
        *row = [ezg0 - edg * wi[0], ezg1 - edg * wi[1]];
    }
    Mat2(rows)
}

/// `(W Wᵀ)^(-1/2) W`; `None` when the rows are linearly dependent.
pub(crate) fn symmetric_decorrelation(w: &Mat2) -> Option<Mat2> {
    let gram = *w * w.transpose();
    Some(gram.inverse_sqrt_spd()? * *w)
}
