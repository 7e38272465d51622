use serde::{Deserialize, Serialize};

/// Everything needed to trace the mixture files back to their sources.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    /// Row-major mixing matrix, as configured.
    pub matrix: [[f64; 2]; 2],
    /// Joint gain applied to both mixtures before quantization.
    pub scale: f64,
    pub sample_rate_hz: u32,
    pub length: usize,
    pub sources: [String; 2],
    pub mixtures: [String; 2],
    pub references: [String; 2],
    /// Gain applied to each decimated source before it was written as a reference.
    pub reference_scales: [f64; 2],
}
