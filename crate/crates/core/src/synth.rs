//! Seeded synthetic sources used in place of recorded speech.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::numeric;
use crate::signal::{Signal, PIPELINE_RATE_HZ};

/// Length of one burst of [`SourceKind::ToneBursts`] in samples (50 ms at 8 kHz).
pub const BURST_LEN: usize = 400;
const BURST_PROBABILITY: f64 = 0.35;
const AR_BURN_IN: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SourceKind {
    Laplacian,
    Uniform,
    Gaussian,
    /// First-order autoregressive process driven by white Gaussian noise.
    Ar1 {
        pole: f64,
    },
    /// Sinusoid with a seeded random phase.
    Sine {
        freq_hz: f64,
    },
    /// Hann-windowed bursts of a carrier with Laplacian amplitudes. Supergaussian
    /// and confined to roughly `carrier_hz ± 40 Hz`.
    ToneBursts {
        carrier_hz: f64,
    },
    /// Unit-variance tone bursts plus white Gaussian noise of standard deviation
    /// `noise_std`. Only the burst component is band-limited.
    BurstsInNoise {
        carrier_hz: f64,
        noise_std: f64,
    },
}

/// Generates `n` samples at 8 kHz, centered and scaled to unit sample variance.
pub fn synth_source(kind: SourceKind, n: usize, seed: u64) -> Result<Signal> {
    if n == 0 {
        return Err(Error::Parameter("source length must be at least 1".into()));
    }
    let nyquist = PIPELINE_RATE_HZ as f64 / 2.0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x: Vec<f64> = match kind {
        SourceKind::Laplacian => (0..n).map(|_| laplace(&mut rng)).collect(),
        SourceKind::Uniform => (0..n).map(|_| rng.random_range(-1.0..1.0)).collect(),
        SourceKind::Gaussian => (0..n).map(|_| rng.sample(StandardNormal)).collect(),
        SourceKind::Ar1 { pole } => {
            if !(pole.abs() < 1.0) {
                return Err(Error::Parameter(format!(
                    "AR(1) pole {pole} must satisfy |pole| < 1"
                )));
            }
            let mut state = 0.0;
            let mut out = Vec::with_capacity(n);
            for i in 0..n + AR_BURN_IN {
                let e: f64 = rng.sample(StandardNormal);
                state = pole * state + e;
                if i >= AR_BURN_IN {
                    out.push(state);
                }
            }
            out
        }
        SourceKind::Sine { freq_hz } => {
            check_frequency(freq_hz, nyquist)?;
            let phase = rng.random_range(0.0..2.0 * PI);
            let w = 2.0 * PI * freq_hz / PIPELINE_RATE_HZ as f64;
            (0..n).map(|t| libm::cos(w * t as f64 + phase)).collect()
        }
        SourceKind::ToneBursts { carrier_hz } => {
            check_frequency(carrier_hz, nyquist)?;
            tone_bursts(&mut rng, carrier_hz, n)
        }
        SourceKind::BurstsInNoise {
            carrier_hz,
            noise_std,
        } => {
            check_frequency(carrier_hz, nyquist)?;
            if !(noise_std >= 0.0 && noise_std.is_finite()) {
                return Err(Error::Parameter(format!(
                    "noise level {noise_std} must be finite and non-negative"
                )));
            }
            let mut out = tone_bursts(&mut rng, carrier_hz, n);
            normalize(&mut out);
            for v in out.iter_mut() {
                let e: f64 = rng.sample(StandardNormal);
                *v += noise_std * e;
            }
            out
        }
    };
    normalize(&mut x);
    Signal::new(x, PIPELINE_RATE_HZ)
}

fn tone_bursts<R: Rng>(rng: &mut R, carrier_hz: f64, n: usize) -> Vec<f64> {
    let phase = rng.random_range(0.0..2.0 * PI);
    let w = 2.0 * PI * carrier_hz / PIPELINE_RATE_HZ as f64;
    let mut out = Vec::with_capacity(n);
    let mut amp = 0.0;
    for t in 0..n {
        let k = t % BURST_LEN;
        if k == 0 {
            amp = if rng.random_bool(BURST_PROBABILITY) {
                laplace(rng).abs()
            } else {
                0.0
            };
        }
        let hann = 0.5 - 0.5 * libm::cos(2.0 * PI * k as f64 / BURST_LEN as f64);
        out.push(amp * hann * libm::cos(w * t as f64 + phase));
    }
    out
}

fn check_frequency(freq_hz: f64, nyquist: f64) -> Result<()> {
    if freq_hz > 0.0 && freq_hz < nyquist {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "frequency {freq_hz} Hz must lie strictly between 0 and {nyquist} Hz"
        )))
    }
}

/// Standard Laplace draw by inverse CDF.
fn laplace<R: Rng>(rng: &mut R) -> f64 {
    let u: f64 = rng.random_range(-0.5..0.5);
    let mag = -libm::log(1.0 - 2.0 * u.abs());
    if u < 0.0 {
        -mag
    } else {
        mag
    }
}

fn normalize(x: &mut [f64]) {
    let m = numeric::mean(x);
    x.iter_mut().for_each(|v| *v -= m);
    let var = numeric::variance(x);
    if var > 0.0 {
        let inv = 1.0 / libm::sqrt(var);
        x.iter_mut().for_each(|v| *v *= inv);
    }
}
