//! Run records, metric rows and the text table.

use std::fmt::Write;

use serde::{Deserialize, Serialize};
use uwpd_bss_core::filterbank::NodeId;
use uwpd_bss_core::metrics::{MetricsReport, SourceMetrics};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeRef {
    pub level: u8,
    pub position: u32,
}

impl From<NodeId> for NodeRef {
    fn from(n: NodeId) -> Self {
        NodeRef {
            level: n.level,
            position: n.position,
        }
    }
}

/// One line of `runs.jsonl`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub method: String,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selected_node: Option<NodeRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub second_channel_node: Option<NodeRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node_kurtosis: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contrast: Option<String>,
    pub iterations: usize,
    pub converged: bool,
    pub ill_conditioned: bool,
    pub estimates: [String; 2],
    /// Gain applied to each unit-variance estimate before quantization.
    pub output_gains: [f64; 2],
}

/// One machine-readable metrics row; `source` is "1", "2" or "Average".
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub method: String,
    pub source: String,
    pub sir_db: f64,
    pub sdr_db: f64,
    pub seg_snr_db: f64,
    pub overall_snr_db: f64,
}

impl MetricsRow {
    fn new(method: &str, source: String, m: &SourceMetrics) -> Self {
        MetricsRow {
            method: method.to_string(),
            source,
            sir_db: m.sir_db,
            sdr_db: m.sdr_db,
            seg_snr_db: m.seg_snr_db,
            overall_snr_db: m.overall_snr_db,
        }
    }
}

/// Per-source rows followed by the Average row.
pub fn metrics_rows(method: &str, report: &MetricsReport) -> Vec<MetricsRow> {
    let mut rows: Vec<MetricsRow> = report
        .per_source
        .iter()
        .enumerate()
        .map(|(i, m)| MetricsRow::new(method, (i + 1).to_string(), m))
        .collect();
    rows.push(MetricsRow::new(method, "Average".into(), &report.average()));
    rows
}

pub fn to_json_lines<T: Serialize>(items: &[T]) -> serde_json::Result<String> {
    let mut out = String::new();
    for item in items {
        out.push_str(&serde_json::to_string(item)?);
        out.push('\n');
    }
    Ok(out)
}

/// Fixed-width table, one section per method.
pub fn render_table(rows: &[MetricsRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<10} {:<8} {:>10} {:>10} {:>12} {:>10}",
        "method", "source", "SIR (dB)", "SDR (dB)", "segSNR (dB)", "SNR (dB)"
    );
    let mut last: Option<&str> = None;
    for r in rows {
        let label = if last == Some(r.method.as_str()) {
            ""
        } else {
            r.method.as_str()
        };
        last = Some(&r.method);
        let _ = writeln!(
            out,
            "{:<10} {:<8} {:>10.2} {:>10.2} {:>12.2} {:>10.2}",
            label, r.source, r.sir_db, r.sdr_db, r.seg_snr_db, r.overall_snr_db
        );
    }
    out
}
