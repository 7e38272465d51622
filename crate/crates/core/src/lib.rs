//! Blind separation of two speech sources from two instantaneous mixtures.
//!
//! The mixtures are split by an undecimated wavelet packet filterbank whose
//! leaves follow the critical bands below 4 kHz. The subband with the highest
//! kurtosis on both mixtures trains a FastICA unmixing matrix, which is then
//! applied to the original mixtures. A SOBI baseline and the usual separation
//! metrics (SIR, SDR, segmental and overall SNR) are included.
//!
//! The crate is `no_std` and only needs `alloc`; file formats and the
//! command-line harness live in the companion `uwpd-bss` crate.

#![no_std]
// `!(x > 0.0)` is used on purpose so that NaN fails the check
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod filterbank;
pub mod linalg;
pub mod metrics;
pub mod numeric;
pub mod pipeline;
pub mod resample;
pub mod separators;
pub mod signal;
pub mod statistics;
pub mod synth;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use linalg::Mat2;
pub use signal::{mix, MixingMatrix, Signal, PIPELINE_RATE_HZ};
