#![allow(dead_code)]

use uwpd_bss_core::metrics::MetricsReport;
use uwpd_bss_core::synth::{synth_source, SourceKind};
use uwpd_bss_core::{Mat2, Signal};

/// Normalized Amari index; 0 iff `p` is a scaled permutation.
pub fn amari_index(p: &Mat2) -> f64 {
    let a = |i: usize, j: usize| p.get(i, j).abs();
    let rows: f64 = (0..2)
        .map(|i| (a(i, 0) + a(i, 1)) / a(i, 0).max(a(i, 1)) - 1.0)
        .sum();
    let cols: f64 = (0..2)
        .map(|j| (a(0, j) + a(1, j)) / a(0, j).max(a(1, j)) - 1.0)
        .sum();
    (rows + cols) / 4.0
}

pub fn gaussian(n: usize, seed: u64) -> Signal {
    synth_source(SourceKind::Gaussian, n, seed).unwrap()
}

pub fn pair(kinds: [SourceKind; 2], n: usize, seed: u64) -> [Signal; 2] {
    [
        synth_source(kinds[0], n, seed.wrapping_mul(2)).unwrap(),
        synth_source(kinds[1], n, seed.wrapping_mul(2).wrapping_add(1)).unwrap(),
    ]
}

/// Burst carriers of the band-limited sources. 2650 Hz sits in the critical
/// band 2320–2700 Hz, 2850 Hz in 2700–3150 Hz; both inside leaf (3, 5).
pub const BURST_CARRIERS: [f64; 2] = [2650.0, 2850.0];
/// Bursts span roughly ±40 Hz around the carrier.
pub const BURST_HALF_WIDTH_HZ: f64 = 40.0;
pub const BURST_NOISE_STD: f64 = 1.25;

pub fn burst_sources(n: usize, seed: u64) -> [Signal; 2] {
    pair(
        BURST_CARRIERS.map(|c| SourceKind::BurstsInNoise {
            carrier_hz: c,
            noise_std: BURST_NOISE_STD,
        }),
        n,
        seed,
    )
}

pub fn min_sir(report: &MetricsReport) -> f64 {
    report
        .per_source
        .iter()
        .map(|m| m.sir_db)
        .fold(f64::INFINITY, f64::min)
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

pub fn rotate(x: &[f64], k: usize) -> Vec<f64> {
    let n = x.len();
    (0..n).map(|i| x[(i + n - k % n) % n]).collect()
}
