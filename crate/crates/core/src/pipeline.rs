//! End-to-end separation of two 8 kHz mixtures.
//!
//! The proposed method decomposes both mixtures over the critical-band tree,
//! scores every node by kurtosis, fits FastICA on the coefficients of the
//! chosen node, and applies the resulting unmixing matrix to the original
//! time-domain mixtures. The baselines fit directly on the mixtures.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::filterbank::{db4_filters, decompose_nodes, default_cb_tree, NodeCoefficients, NodeId};
use crate::numeric;
use crate::separators::{
    fastica, sobi, FittedUnmixing, IcaOptions, UnmixingModel, DEFAULT_SOBI_LAGS,
};
use crate::signal::{Signal, PIPELINE_RATE_HZ};
use crate::statistics::{
    fit_whitening, score_nodes, select_best_node, select_per_channel, NodeScore, SelectionRule,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Critical-band UWPD preprocessing, kurtosis node selection, FastICA.
    Proposed,
    /// FastICA on the time-domain mixtures.
    FastIcaPlain,
    /// SOBI on the time-domain mixtures.
    Sobi,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Proposed => "proposed",
            Method::FastIcaPlain => "fastica",
            Method::Sobi => "sobi",
        }
    }
}

/// How the subband-fitted model is carried over to the time-domain mixtures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TransferMode {
    /// Use the subband unmixing matrix as is, centred on the mixture means.
    #[default]
    SubbandModel,
    /// Keep the subband rotation but refit whitening on the mixtures.
    RefitWhitening,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparationOptions {
    pub ica: IcaOptions,
    pub sobi_lags: Vec<usize>,
    pub selection: SelectionRule,
    pub transfer: TransferMode,
}

impl Default for SeparationOptions {
    fn default() -> Self {
        SeparationOptions {
            ica: IcaOptions::default(),
            sobi_lags: DEFAULT_SOBI_LAGS.to_vec(),
            selection: SelectionRule::CommonMin,
            transfer: TransferMode::SubbandModel,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparationResult {
    /// Unit-variance source estimates, same length and rate as the mixtures.
    pub estimates: [Signal; 2],
    pub model: UnmixingModel,
    pub method: Method,
    /// Node whose coefficients trained the model (first mixture's node under
    /// [`SelectionRule::PerChannel`]); present only for [`Method::Proposed`].
    pub selected_node: Option<NodeId>,
    /// The second mixture's node when it differs from `selected_node`.
    pub second_channel_node: Option<NodeId>,
    pub node_kurtosis: Option<[f64; 2]>,
    pub converged: bool,
    pub iterations: usize,
    pub ill_conditioned: bool,
}

fn check_mixtures(x1: &Signal, x2: &Signal) -> Result<()> {
    if x1.len() != x2.len() {
        return Err(Error::Dimension(format!(
            "mixture lengths differ: {} vs {}",
            x1.len(),
            x2.len()
        )));
    }
    for x in [x1, x2] {
        if x.sample_rate_hz() != PIPELINE_RATE_HZ {
            return Err(Error::UnsupportedRate(x.sample_rate_hz()));
        }
    }
    Ok(())
}

fn coefficients(nodes: &[NodeCoefficients], node: NodeId) -> &[f64] {
    &nodes
        .iter()
        .find(|n| n.node == node)
        .expect("scored node comes from the decomposition")
        .coeffs
}

/// Applies `model` to the mixtures and rescales each output to unit variance.
fn finish(
    x1: &Signal,
    x2: &Signal,
    model: UnmixingModel,
    method: Method,
    fit: &FittedUnmixing,
) -> Result<SeparationResult> {
    let [y1, y2] = model.apply([x1.samples(), x2.samples()]);
    let mut estimates = Vec::with_capacity(2);
    for mut y in [y1, y2] {
        let m = numeric::mean(&y);
        y.iter_mut().for_each(|v| *v -= m);
        let var = numeric::variance(&y);
        if !(var > 0.0) {
            return Err(Error::Degenerate(
                "separated output has zero variance".into(),
            ));
        }
        let inv = 1.0 / libm::sqrt(var);
        y.iter_mut().for_each(|v| *v *= inv);
        estimates.push(Signal::new(y, x1.sample_rate_hz())?);
    }
    let e2 = estimates.pop().expect("two outputs");
    let e1 = estimates.pop().expect("two outputs");
    Ok(SeparationResult {
        estimates: [e1, e2],
        model,
        method,
        selected_node: None,
        second_channel_node: None,
        node_kurtosis: None,
        converged: fit.converged,
        iterations: fit.iterations,
        ill_conditioned: fit.ill_conditioned,
    })
}

/// The subband-trained separation of two mixtures.
pub fn separate_proposed(
    x1: &Signal,
    x2: &Signal,
    opts: &SeparationOptions,
) -> Result<SeparationResult> {
    check_mixtures(x1, x2)?;
    let tree = default_cb_tree();
    let filters = db4_filters();
    let nodes1 = decompose_nodes(x1, &tree, &filters)?;
    let nodes2 = decompose_nodes(x2, &tree, &filters)?;
    let scores = score_nodes(&nodes1, &nodes2);

    let (first, second): (NodeScore, NodeScore) = match opts.selection {
        SelectionRule::CommonMin => {
            let best = select_best_node(&scores)?;
            (best, best)
        }
        SelectionRule::PerChannel => {
            let [a, b] = select_per_channel(&scores)?;
            (a, b)
        }
    };
    let c1 = coefficients(&nodes1, first.node);
    let c2 = coefficients(&nodes2, second.node);
    let fit = fastica([c1, c2], &opts.ica)?;

    let time_data = [x1.samples(), x2.samples()];
    let model = match opts.transfer {
        TransferMode::SubbandModel => {
            let (mean, _) = crate::statistics::covariance(time_data);
            fit.model.with_mean(mean)
        }
        TransferMode::RefitWhitening => {
            UnmixingModel::new(fit_whitening(time_data)?, fit.model.rotation)
        }
    };
    let mut result = finish(x1, x2, model, Method::Proposed, &fit)?;
    result.selected_node = Some(first.node);
    result.second_channel_node = (second.node != first.node).then_some(second.node);
    result.node_kurtosis = Some([first.kurtosis[0], second.kurtosis[1]]);
    Ok(result)
}

/// Plain FastICA or SOBI fitted on the time-domain mixtures.
pub fn separate_baseline(
    x1: &Signal,
    x2: &Signal,
    method: Method,
    opts: &SeparationOptions,
) -> Result<SeparationResult> {
    check_mixtures(x1, x2)?;
    let data = [x1.samples(), x2.samples()];
    let fit = match method {
        Method::FastIcaPlain => fastica(data, &opts.ica)?,
        Method::Sobi => sobi(data, &opts.sobi_lags)?,
        Method::Proposed => {
            return Err(Error::Parameter(
                "the proposed method is not a baseline".into(),
            ));
        }
    };
    finish(x1, x2, fit.model, method, &fit)
}

/// Dispatches on `method`.
pub fn separate(
    x1: &Signal,
    x2: &Signal,
    method: Method,
    opts: &SeparationOptions,
) -> Result<SeparationResult> {
    match method {
        Method::Proposed => separate_proposed(x1, x2, opts),
        _ => separate_baseline(x1, x2, method, opts),
    }
}
