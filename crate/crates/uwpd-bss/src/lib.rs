//! File formats and the experiment harness around `uwpd-bss-core`.

pub mod error;
pub mod experiment;
pub mod fsutil;
pub mod manifest;
pub mod parse;
pub mod report;
pub mod wav;

pub use error::{Error, Result};
pub use uwpd_bss_core as core;
