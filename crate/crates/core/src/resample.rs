//! Integer-ratio decimation to the 8 kHz pipeline rate.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::signal::{Signal, PIPELINE_RATE_HZ};

/// Anti-alias cutoff as a fraction of the output rate.
const CUTOFF_FRACTION: f64 = 0.45;
const TAPS_PER_RATIO: usize = 32;

/// Low-pass filters and keeps every `rate/8000`-th sample.
///
/// The filter is a Hamming-windowed sinc of odd length `32·k + 1`, applied
/// with its group delay removed so output sample `j` lines up with input
/// sample `j·k`. Samples beyond either end are treated as zero.
pub fn decimate_to_8k(signal: &Signal) -> Result<Signal> {
    let rate = signal.sample_rate_hz();
    if rate == PIPELINE_RATE_HZ {
        return Ok(signal.clone());
    }
    if !rate.is_multiple_of(PIPELINE_RATE_HZ) {
        return Err(Error::UnsupportedRate(rate));
    }
    let ratio = (rate / PIPELINE_RATE_HZ) as usize;
    let taps = lowpass_taps(ratio);
    let delay = (taps.len() - 1) / 2;
    let x = signal.samples();
    let n = x.len();
    let out_len = n.div_ceil(ratio);
    let mut out = Vec::with_capacity(out_len);
    for j in 0..out_len {
        let centre = j * ratio + delay;
        let mut acc = 0.0;
        for (m, &h) in taps.iter().enumerate() {
            // input index centre - m, skipped when outside the signal
            if let Some(idx) = centre.checked_sub(m) {
                if idx < n {
                    acc += h * x[idx];
                }
            }
        }
        out.push(acc);
    }
    Signal::new(out, PIPELINE_RATE_HZ)
}

/// Linear-phase low-pass taps for decimation by `ratio`, unit DC gain.
pub fn lowpass_taps(ratio: usize) -> Vec<f64> {
    let len = TAPS_PER_RATIO * ratio + 1;
    let centre = (len - 1) as f64 / 2.0;
    // cutoff in cycles per input sample
    let fc = CUTOFF_FRACTION / ratio as f64;
    let mut taps: Vec<f64> = (0..len)
        .map(|m| {
            let t = m as f64 - centre;
            let sinc = if t == 0.0 {
                2.0 * fc
            } else {
                libm::sin(2.0 * PI * fc * t) / (PI * t)
            };
            let window = 0.54 - 0.46 * libm::cos(2.0 * PI * m as f64 / (len - 1) as f64);
            sinc * window
        })
        .collect();
    let gain: f64 = taps.iter().sum();
    taps.iter_mut().for_each(|h| *h /= gain);
    taps
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn sine(freq: f64, rate: u32, n: usize) -> Vec<f64> {
        (0..n)
            .map(|t| libm::sin(2.0 * PI * freq * t as f64 / rate as f64))
            .collect()
    }

    fn rms(x: &[f64]) -> f64 {
        libm::sqrt(x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64)
    }

    #[test]
    fn identity_at_8k() {
        let s = Signal::new(vec![0.25, -0.5, 0.125], 8000).unwrap();
        assert_eq!(decimate_to_8k(&s).unwrap(), s);
    }

    #[test]
    fn rejects_non_integer_ratio() {
        let s = Signal::new(vec![0.0; 100], 11025).unwrap();
        assert_eq!(decimate_to_8k(&s), Err(Error::UnsupportedRate(11025)));
    }

    #[test]
    fn taps_are_symmetric_and_long_enough() {
        for ratio in [2, 3, 6] {
            let h = lowpass_taps(ratio);
            assert!(h.len() >= 64 && h.len() % 2 == 1);
            for i in 0..h.len() {
                assert!((h[i] - h[h.len() - 1 - i]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn passband_sine_is_preserved() {
        let n = 16000;
        let s = Signal::new(sine(500.0, 16000, n), 16000).unwrap();
        let d = decimate_to_8k(&s).unwrap();
        assert_eq!(d.len(), n / 2);
        let expected = sine(500.0, 8000, n / 2);
        // compare away from the zero-padded edges
        let inner = 64..d.len() - 64;
        let got = &d.samples()[inner.clone()];
        let want = &expected[inner];
        let amp_ratio = rms(got) / rms(want);
        assert!(
            (amp_ratio - 1.0).abs() < 0.01,
            "amplitude ratio {amp_ratio}"
        );
        let max_err = got
            .iter()
            .zip(want)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(max_err < 0.01, "alignment error {max_err}");
    }

    #[test]
    fn stopband_sine_is_suppressed() {
        let n = 16000;
        let x = sine(6000.0, 16000, n);
        let s = Signal::new(x.clone(), 16000).unwrap();
        let d = decimate_to_8k(&s).unwrap();
        let inner = &d.samples()[64..d.len() - 64];
        assert!(rms(inner) < 0.05 * rms(&x), "residual rms {}", rms(inner));
    }
}
