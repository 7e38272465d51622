//! Separation quality: projection-based SIR/SDR, segmental and overall SNR,
//! and alignment of estimates to references.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::numeric::{self, dot, energy, pairwise};
use crate::signal::Signal;

/// Every ratio in dB is clamped to `±DB_CAP`.
pub const DB_CAP: f64 = 300.0;
/// Segmental SNR frame length (32 ms at 8 kHz) and hop (50 % overlap).
pub const SEG_FRAME: usize = 256;
pub const SEG_HOP: usize = 128;
/// Per-frame clamp of segmental SNR.
pub const SEG_MIN_DB: f64 = -10.0;
pub const SEG_MAX_DB: f64 = 35.0;
/// Frames whose reference energy is at or below this are silent and skipped.
pub const SEG_SILENCE: f64 = 1e-12;

/// `10·log10(num/den)` clamped to `±DB_CAP`; a zero denominator means a
/// perfect ratio.
pub fn ratio_db(num: f64, den: f64) -> f64 {
    if !(num > 0.0) {
        return -DB_CAP;
    }
    if !(den > 0.0) {
        return DB_CAP;
    }
    (10.0 * libm::log10(num / den)).clamp(-DB_CAP, DB_CAP)
}

/// Estimate→reference assignment and the sign that matches each estimate to
/// its reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Alignment {
    /// `permutation[i]` is the reference matched to estimate `i`.
    pub permutation: [usize; 2],
    pub signs: [i8; 2],
}

impl Alignment {
    /// Index of the estimate matched to reference `j`.
    pub fn estimate_for(&self, j: usize) -> usize {
        if self.permutation[0] == j {
            0
        } else {
            1
        }
    }
}

fn pearson(a: &[f64], b: &[f64]) -> Result<f64> {
    let (ma, mb) = (numeric::mean(a), numeric::mean(b));
    let n = a.len();
    let saa = pairwise(0, n, |i| (a[i] - ma) * (a[i] - ma));
    let sbb = pairwise(0, n, |i| (b[i] - mb) * (b[i] - mb));
    if !(saa > 0.0) || !(sbb > 0.0) {
        return Err(Error::Degenerate(
            "zero-variance signal cannot be aligned".into(),
        ));
    }
    let sab = pairwise(0, n, |i| (a[i] - ma) * (b[i] - mb));
    Ok(sab / libm::sqrt(saa * sbb))
}

fn check_lengths(signals: &[&Signal]) -> Result<usize> {
    let n = signals[0].len();
    if signals.iter().any(|s| s.len() != n) {
        return Err(Error::Dimension(
            "estimates and references must have equal lengths".into(),
        ));
    }
    Ok(n)
}

/// Picks the assignment maximizing the summed absolute Pearson correlation.
pub fn align(estimates: [&Signal; 2], references: [&Signal; 2]) -> Result<Alignment> {
    check_lengths(&[estimates[0], estimates[1], references[0], references[1]])?;
    let mut c = [[0.0; 2]; 2];
    for (i, est) in estimates.iter().enumerate() {
        for (j, r) in references.iter().enumerate() {
            c[i][j] = pearson(est.samples(), r.samples())?;
        }
    }
    let straight = c[0][0].abs() + c[1][1].abs();
    let crossed = c[0][1].abs() + c[1][0].abs();
    let permutation = if crossed > straight { [1, 0] } else { [0, 1] };
    let sign = |v: f64| if v < 0.0 { -1 } else { 1 };
    Ok(Alignment {
        permutation,
        signs: [sign(c[0][permutation[0]]), sign(c[1][permutation[1]])],
    })
}

/// Split of an estimate into target, interference and artifact parts.
#[derive(Debug, Clone, PartialEq)]
pub struct BssDecomposition {
    pub target: Vec<f64>,
    pub interference: Vec<f64>,
    pub artifact: Vec<f64>,
    /// The references were collinear; interference is defined as zero.
    pub collinear: bool,
}

/// Orthogonal projections of `estimate`: onto the target reference gives the
/// target part, onto the span of both references minus the target gives the
/// interference, and the remainder is the artifact.
pub fn bss_decompose(
    estimate: &[f64],
    references: [&[f64]; 2],
    target: usize,
) -> Result<BssDecomposition> {
    if target > 1 {
        return Err(Error::Parameter(format!(
            "target index {target} must be 0 or 1"
        )));
    }
    let n = estimate.len();
    if references.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension(
            "estimate and references must have equal lengths".into(),
        ));
    }
    let rt = references[target];
    let gtt = energy(rt);
    if !(gtt > 0.0) {
        return Err(Error::Degenerate("target reference is silent".into()));
    }
    let bt = dot(rt, estimate);
    let target_part: Vec<f64> = rt.iter().map(|r| r * bt / gtt).collect();

    let (r0, r1) = (references[0], references[1]);
    let g00 = energy(r0);
    let g11 = energy(r1);
    let g01 = dot(r0, r1);
    let det = g00 * g11 - g01 * g01;
    let collinear = !(det > 1e-12 * g00 * g11);
    let interference: Vec<f64> = if collinear {
        alloc::vec![0.0; n]
    } else {
        let b0 = dot(r0, estimate);
        let b1 = dot(r1, estimate);
        let c0 = (g11 * b0 - g01 * b1) / det;
        let c1 = (g00 * b1 - g01 * b0) / det;
        (0..n)
            .map(|t| c0 * r0[t] + c1 * r1[t] - target_part[t])
            .collect()
    };
    let artifact = (0..n)
        .map(|t| estimate[t] - target_part[t] - interference[t])
        .collect();
    Ok(BssDecomposition {
        target: target_part,
        interference,
        artifact,
        collinear,
    })
}

/// Signal-to-interference ratio in dB.
pub fn sir(d: &BssDecomposition) -> f64 {
    ratio_db(energy(&d.target), energy(&d.interference))
}

/// Signal-to-distortion ratio in dB; distortion is interference plus artifact.
pub fn sdr(d: &BssDecomposition) -> f64 {
    let n = d.target.len();
    let distortion = pairwise(0, n, |t| {
        let e = d.interference[t] + d.artifact[t];
        e * e
    });
    ratio_db(energy(&d.target), distortion)
}

/// Least-squares gain `α` minimizing `‖reference - α·estimate‖`.
fn ls_gain(estimate: &[f64], reference: &[f64]) -> f64 {
    let ee = energy(estimate);
    if ee > 0.0 {
        dot(reference, estimate) / ee
    } else {
        0.0
    }
}

/// Mean of per-frame SNRs (256-sample frames, hop 128) after least-squares
/// scaling of the estimate. Frame values are clamped to [-10, 35] dB and
/// frames with a silent reference are skipped.
pub fn segmental_snr(estimate: &Signal, reference: &Signal) -> Result<f64> {
    let n = check_lengths(&[estimate, reference])?;
    if n < SEG_FRAME {
        return Err(Error::Length(format!(
            "segmental SNR needs at least {SEG_FRAME} samples, got {n}"
        )));
    }
    let (est, r) = (estimate.samples(), reference.samples());
    let alpha = ls_gain(est, r);
    let mut total = 0.0;
    let mut frames = 0usize;
    let mut start = 0;
    while start + SEG_FRAME <= n {
        let frame = start..start + SEG_FRAME;
        let signal = energy(&r[frame.clone()]);
        if signal > SEG_SILENCE {
            let noise = pairwise(start, SEG_FRAME, |t| {
                let e = r[t] - alpha * est[t];
                e * e
            });
            let snr = if noise > 0.0 {
                10.0 * libm::log10(signal / noise)
            } else {
                SEG_MAX_DB
            };
            total += snr.clamp(SEG_MIN_DB, SEG_MAX_DB);
            frames += 1;
        }
        start += SEG_HOP;
    }
    if frames == 0 {
        return Err(Error::Degenerate(
            "reference is silent in every frame".into(),
        ));
    }
    Ok(total / frames as f64)
}

/// `10·log10(‖ref‖² / ‖ref - α·est‖²)` with least-squares `α`.
pub fn overall_snr(estimate: &Signal, reference: &Signal) -> Result<f64> {
    let n = check_lengths(&[estimate, reference])?;
    let (est, r) = (estimate.samples(), reference.samples());
    let alpha = ls_gain(est, r);
    let residual = pairwise(0, n, |t| {
        let e = r[t] - alpha * est[t];
        e * e
    });
    Ok(ratio_db(energy(r), residual))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceMetrics {
    pub sir_db: f64,
    pub sdr_db: f64,
    pub seg_snr_db: f64,
    pub overall_snr_db: f64,
}

impl SourceMetrics {
    pub fn mean(rows: &[SourceMetrics]) -> SourceMetrics {
        let n = rows.len() as f64;
        let avg = |f: fn(&SourceMetrics) -> f64| rows.iter().map(f).sum::<f64>() / n;
        SourceMetrics {
            sir_db: avg(|m| m.sir_db),
            sdr_db: avg(|m| m.sdr_db),
            seg_snr_db: avg(|m| m.seg_snr_db),
            overall_snr_db: avg(|m| m.overall_snr_db),
        }
    }
}

/// Metrics per reference source, after alignment.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    /// Indexed by reference.
    pub per_source: Vec<SourceMetrics>,
    pub alignment: Alignment,
}

impl MetricsReport {
    pub fn average(&self) -> SourceMetrics {
        SourceMetrics::mean(&self.per_source)
    }
}

/// Aligns the estimates, then scores each reference against its matched estimate.
pub fn evaluate(estimates: [&Signal; 2], references: [&Signal; 2]) -> Result<MetricsReport> {
    let alignment = align(estimates, references)?;
    let refs = [references[0].samples(), references[1].samples()];
    let mut per_source = Vec::with_capacity(2);
    for (j, reference) in references.iter().enumerate() {
        let i = alignment.estimate_for(j);
        let est = estimates[i].scaled(alignment.signs[i] as f64);
        let d = bss_decompose(est.samples(), refs, j)?;
        per_source.push(SourceMetrics {
            sir_db: sir(&d),
            sdr_db: sdr(&d),
            seg_snr_db: segmental_snr(&est, reference)?,
            overall_snr_db: overall_snr(&est, reference)?,
        });
    }
    Ok(MetricsReport {
        per_source,
        alignment,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn sig(v: Vec<f64>) -> Signal {
        Signal::new(v, 8000).unwrap()
    }

    fn wave(n: usize, w: f64, phase: f64) -> Vec<f64> {
        (0..n).map(|t| libm::sin(w * t as f64 + phase)).collect()
    }

    #[test]
    fn identity_alignment() {
        let a = sig(wave(512, 0.1, 0.0));
        let b = sig(wave(512, 0.37, 1.0));
        let al = align([&a, &b], [&a, &b]).unwrap();
        assert_eq!(al.permutation, [0, 1]);
        assert_eq!(al.signs, [1, 1]);
    }

    #[test]
    fn swapped_and_negated_alignment() {
        let a = sig(wave(512, 0.1, 0.0));
        let b = sig(wave(512, 0.37, 1.0));
        let al = align([&b.scaled(-1.0), &a], [&a, &b]).unwrap();
        assert_eq!(al.permutation, [1, 0]);
        assert_eq!(al.signs, [-1, 1]);
        assert_eq!(al.estimate_for(0), 1);
    }

    #[test]
    fn pure_scaling_has_no_interference() {
        let a = wave(400, 0.1, 0.0);
        let b = wave(400, 0.23, 0.5);
        let est: Vec<f64> = a.iter().map(|v| 2.0 * v).collect();
        let d = bss_decompose(&est, [&a, &b], 0).unwrap();
        assert!(d.interference.iter().all(|v| v.abs() < 1e-10));
        assert!(d.artifact.iter().all(|v| v.abs() < 1e-10));
        assert!(d
            .target
            .iter()
            .zip(&est)
            .all(|(t, e)| (t - e).abs() < 1e-10));
        assert_eq!(sir(&d), DB_CAP);
    }

    #[test]
    fn orthogonal_noise_is_artifact() {
        let n = 256;
        let a: Vec<f64> = (0..n)
            .map(|t| if t % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        let b: Vec<f64> = (0..n).map(|t| if t % 4 < 2 { 1.0 } else { -1.0 }).collect();
        let noise: Vec<f64> = (0..n).map(|t| if t % 8 < 4 { 0.1 } else { -0.1 }).collect();
        let est: Vec<f64> = a.iter().zip(&noise).map(|(x, e)| x + e).collect();
        let d = bss_decompose(&est, [&a, &b], 0).unwrap();
        assert!(d.interference.iter().all(|v| v.abs() < 1e-12));
        assert!(d
            .artifact
            .iter()
            .zip(&noise)
            .all(|(x, e)| (x - e).abs() < 1e-12));
    }

    #[test]
    fn collinear_references_are_flagged() {
        let a = wave(300, 0.2, 0.0);
        let b: Vec<f64> = a.iter().map(|v| -3.0 * v).collect();
        let est = wave(300, 0.5, 0.3);
        let d = bss_decompose(&est, [&a, &b], 1).unwrap();
        assert!(d.collinear);
        assert!(d.interference.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn ratio_edge_cases() {
        assert_eq!(ratio_db(1.0, 0.0), 300.0);
        assert_eq!(ratio_db(0.0, 1.0), -300.0);
        assert_eq!(ratio_db(2.0, 2.0), 0.0);
        assert!((ratio_db(100.0, 1.0) - 20.0).abs() < 1e-12);
        assert_eq!(ratio_db(1e300, 1e-300), 300.0);
    }

    #[test]
    fn sdr_pythagorean_case() {
        let n = 8;
        let mut target = vec![0.0; n];
        let mut interf = vec![0.0; n];
        let mut artif = vec![0.0; n];
        target[0] = 10.0;
        interf[1] = 1.0;
        artif[2] = 1.0;
        let d = BssDecomposition {
            target,
            interference: interf,
            artifact: artif,
            collinear: false,
        };
        assert!((sdr(&d) - 10.0 * libm::log10(50.0)).abs() < 1e-12);
        assert!((sir(&d) - 20.0).abs() < 1e-12);
    }

    #[test]
    fn seg_snr_of_perfect_estimate_hits_clamp() {
        let r = sig(wave(2048, 0.05, 0.0));
        assert_eq!(segmental_snr(&r, &r).unwrap(), SEG_MAX_DB);
        assert_eq!(overall_snr(&r.scaled(-0.4), &r).unwrap(), DB_CAP);
    }

    #[test]
    fn seg_snr_requires_a_frame() {
        let r = sig(wave(100, 0.05, 0.0));
        assert!(matches!(segmental_snr(&r, &r), Err(Error::Length(_))));
    }

    #[test]
    fn overall_snr_cases() {
        // est orthogonal to ref: alpha = 0, residual = ref
        let n = 512;
        let a: Vec<f64> = (0..n)
            .map(|t| if t % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        let b: Vec<f64> = (0..n).map(|t| if t % 4 < 2 { 1.0 } else { -1.0 }).collect();
        assert_eq!(overall_snr(&sig(b.clone()), &sig(a.clone())).unwrap(), 0.0);
        // est = ref + orthogonal e with ‖e‖² = ‖ref‖²/99 leaves residual ‖ref‖²/100
        let k = 1.0 / libm::sqrt(99.0);
        let est: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + k * y).collect();
        assert!((overall_snr(&sig(est), &sig(a)).unwrap() - 20.0).abs() < 1e-9);
    }
}
