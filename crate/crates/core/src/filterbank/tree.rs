//! The critical-band tree: a pruned five-level wavelet packet tree whose
//! leaf bandwidths approximate the critical bandwidths below 4 kHz.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Deepest decomposition level of the packet tree.
pub const MAX_LEVEL: u8 = 5;

/// Sample rate the critical-band table is laid out for.
pub const TREE_RATE_HZ: u32 = 8000;

/// One row of the critical-band table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalBand {
    pub center_hz: f64,
    pub bandwidth_hz: f64,
}

const fn band(center_hz: f64, bandwidth_hz: f64) -> CriticalBand {
    CriticalBand {
        center_hz,
        bandwidth_hz,
    }
}

/// The 17 critical bands (barks) covering 0–4 kHz.
pub const CRITICAL_BANDS: [CriticalBand; 17] = [
    band(50.0, 100.0),
    band(150.0, 100.0),
    band(250.0, 100.0),
    band(350.0, 100.0),
    band(450.0, 110.0),
    band(570.0, 120.0),
    band(700.0, 140.0),
    band(840.0, 150.0),
    band(1000.0, 160.0),
    band(1170.0, 190.0),
    band(1370.0, 210.0),
    band(1600.0, 240.0),
    band(1850.0, 280.0),
    band(2150.0, 320.0),
    band(2500.0, 380.0),
    band(2900.0, 450.0),
    band(3400.0, 550.0),
];

/// A wavelet packet node in natural (frequency) order: `position` 0 is the
/// lowest band at that level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId {
    pub level: u8,
    pub position: u32,
}

impl NodeId {
    pub const ROOT: NodeId = NodeId {
        level: 0,
        position: 0,
    };

    pub fn new(level: u8, position: u32) -> Self {
        NodeId { level, position }
    }

    pub fn children(self) -> [NodeId; 2] {
        let level = self.level + 1;
        [
            NodeId::new(level, 2 * self.position),
            NodeId::new(level, 2 * self.position + 1),
        ]
    }

    pub fn parent(self) -> Option<NodeId> {
        (self.level > 0).then(|| NodeId::new(self.level - 1, self.position / 2))
    }

    /// Nominal band width `fs / 2^(level+1)`.
    pub fn width_hz(self, fs_hz: u32) -> f64 {
        fs_hz as f64 / (1u64 << (self.level + 1)) as f64
    }

    pub fn band_hz(self, fs_hz: u32) -> (f64, f64) {
        let w = self.width_hz(fs_hz);
        (self.position as f64 * w, (self.position + 1) as f64 * w)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.level, self.position)
    }
}

/// A leaf of the critical-band tree with its nominal band and the critical
/// bandwidth it was matched against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CbLeaf {
    pub node: NodeId,
    pub band_low_hz: f64,
    pub band_high_hz: f64,
    pub cbw_target_hz: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CbTree {
    fs_hz: u32,
    leaves: Vec<CbLeaf>,
}

impl CbTree {
    /// Builds a tree from an explicit leaf set, which must tile `[0, fs/2]`.
    pub fn from_leaves(fs_hz: u32, bands: &[CriticalBand], nodes: &[NodeId]) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::Parameter("tree needs at least one leaf".into()));
        }
        let mut leaves: Vec<CbLeaf> = Vec::with_capacity(nodes.len());
        for &node in nodes {
            if node.level > MAX_LEVEL || node.position >= (1u32 << node.level) {
                return Err(Error::Parameter(format!(
                    "node {node} is outside the 5-level tree"
                )));
            }
            let (lo, hi) = node.band_hz(fs_hz);
            leaves.push(CbLeaf {
                node,
                band_low_hz: lo,
                band_high_hz: hi,
                cbw_target_hz: critical_bandwidth_at(bands, 0.5 * (lo + hi)),
            });
        }
        leaves.sort_by(|a, b| a.band_low_hz.total_cmp(&b.band_low_hz));
        let mut edge = 0.0;
        for leaf in &leaves {
            if leaf.band_low_hz != edge {
                return Err(Error::Parameter(format!(
                    "leaves do not tile the band: gap or overlap at {edge} Hz"
                )));
            }
            edge = leaf.band_high_hz;
        }
        if edge != fs_hz as f64 / 2.0 {
            return Err(Error::Parameter(format!("leaves stop at {edge} Hz")));
        }
        Ok(CbTree { fs_hz, leaves })
    }

    pub fn fs_hz(&self) -> u32 {
        self.fs_hz
    }

    /// Leaves in increasing frequency order.
    pub fn leaves(&self) -> &[CbLeaf] {
        &self.leaves
    }

    pub fn is_leaf(&self, node: NodeId) -> bool {
        self.leaves.iter().any(|l| l.node == node)
    }

    /// Whether `node` lies on some root-to-leaf path (the root included).
    pub fn contains(&self, node: NodeId) -> bool {
        self.leaves.iter().any(|l| {
            l.node.level >= node.level
                && (l.node.position >> (l.node.level - node.level)) == node.position
        })
    }

    /// Every node below the root, internal and leaf, in pre-order.
    pub fn nodes(&self) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut stack = alloc::vec![NodeId::ROOT];
        while let Some(node) = stack.pop() {
            if node != NodeId::ROOT {
                out.push(node);
            }
            if !self.is_leaf(node) {
                let [lo, hi] = node.children();
                stack.push(hi);
                stack.push(lo);
            }
        }
        out
    }
}

/// Prints one line per leaf: `level position band_low band_high cbw_target`.
impl fmt::Display for CbTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for leaf in &self.leaves {
            writeln!(
                f,
                "{} {} {} {} {}",
                leaf.node.level,
                leaf.node.position,
                leaf.band_low_hz,
                leaf.band_high_hz,
                leaf.cbw_target_hz
            )?;
        }
        Ok(())
    }
}

/// Critical bandwidth of the band containing `freq_hz`. Band edges are the
/// running sum of the bandwidths; frequencies above the last edge use the
/// last band.
pub fn critical_bandwidth_at(bands: &[CriticalBand], freq_hz: f64) -> f64 {
    let mut upper = 0.0;
    for b in bands {
        upper += b.bandwidth_hz;
        if freq_hz < upper {
            return b.bandwidth_hz;
        }
    }
    bands.last().map_or(f64::INFINITY, |b| b.bandwidth_hz)
}

/// Prunes the full five-level packet tree to the critical bands.
///
/// A band is split while its width exceeds `√2 ×` the critical bandwidth at
/// its centre frequency, down to level 5.
pub fn build_cb_tree(fs_hz: u32, bands: &[CriticalBand]) -> Result<CbTree> {
    if fs_hz != TREE_RATE_HZ {
        return Err(Error::UnsupportedRate(fs_hz));
    }
    if bands.is_empty() {
        return Err(Error::Parameter("critical band table is empty".into()));
    }
    let mut leaves = Vec::new();
    let mut stack = alloc::vec![NodeId::ROOT];
    while let Some(node) = stack.pop() {
        let (lo, hi) = node.band_hz(fs_hz);
        let target = critical_bandwidth_at(bands, 0.5 * (lo + hi));
        if node.level < MAX_LEVEL && hi - lo > core::f64::consts::SQRT_2 * target {
            let [a, b] = node.children();
            stack.push(b);
            stack.push(a);
        } else {
            leaves.push(node);
        }
    }
    CbTree::from_leaves(fs_hz, bands, &leaves)
}

/// The critical-band tree at 8 kHz.
pub fn default_cb_tree() -> CbTree {
    build_cb_tree(TREE_RATE_HZ, &CRITICAL_BANDS).expect("8 kHz table builds")
}
