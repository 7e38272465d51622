//! The mix → separate → evaluate protocol over WAV files.

use std::path::{Path, PathBuf};

use uwpd_bss_core::metrics::{evaluate, MetricsReport};
use uwpd_bss_core::pipeline::{separate, Method, SeparationOptions};
use uwpd_bss_core::resample::decimate_to_8k;
use uwpd_bss_core::separators::Contrast;
use uwpd_bss_core::{mix, MixingMatrix, Signal};

use crate::error::{io_error, Error, Result};
use crate::fsutil::write_atomic;
use crate::manifest::Manifest;
use crate::report::{metrics_rows, render_table, to_json_lines, MetricsRow, RunRecord};
use crate::wav::{decode_wav, encode_wav, read_wav};

/// Peak level of written mixtures, references and estimates.
pub const PEAK_LEVEL: f64 = 0.9;
pub const MIXTURE_FILES: [&str; 2] = ["mix1.wav", "mix2.wav"];
pub const REFERENCE_FILES: [&str; 2] = ["ref1.wav", "ref2.wav"];
pub const ESTIMATE_FILES: [&str; 2] = ["est1.wav", "est2.wav"];
pub const MANIFEST_FILE: &str = "manifest.json";
pub const RUNS_FILE: &str = "runs.jsonl";
pub const REPORT_TEXT_FILE: &str = "report.txt";
pub const REPORT_JSON_FILE: &str = "report.jsonl";

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub sources: [PathBuf; 2],
    pub matrix: MixingMatrix,
    pub methods: Vec<Method>,
    pub options: SeparationOptions,
    pub output_dir: PathBuf,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(Error::Config("at least one method is required".into()));
        }
        if self.sources[0] == self.sources[1] {
            return Err(Error::Config("the two source paths must differ".into()));
        }
        Ok(())
    }
}

/// Files produced by a command, held in memory until every step succeeded.
#[derive(Debug, Default)]
struct Artifacts(Vec<(PathBuf, Vec<u8>)>);

impl Artifacts {
    fn add(&mut self, rel: impl Into<PathBuf>, bytes: Vec<u8>) {
        self.0.push((rel.into(), bytes));
    }

    fn commit(&self, dir: &Path) -> Result<()> {
        for (rel, bytes) in &self.0 {
            write_atomic(&dir.join(rel), bytes)?;
        }
        Ok(())
    }
}

fn scale_to_peak(s: &Signal, what: &str) -> Result<(Signal, f64)> {
    let peak = s.peak();
    if peak <= 0.0 {
        return Err(Error::Config(format!("{what} is silent")));
    }
    let gain = PEAK_LEVEL / peak;
    Ok((s.scaled(gain), gain))
}

/// Quantizes through the WAV codec so callers see exactly what is stored.
fn through_wav(s: &Signal) -> (Vec<u8>, Signal) {
    let bytes = encode_wav(s);
    let back = decode_wav(&bytes).expect("freshly encoded WAV decodes");
    (bytes, back)
}

/// Mixtures and references as written to disk.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub mixtures: [Signal; 2],
    pub references: [Signal; 2],
    pub manifest: Manifest,
    files: Vec<(PathBuf, Vec<u8>)>,
}

/// Decimates both sources to 8 kHz, truncates them to a common length, mixes
/// them and normalizes the pair of mixtures jointly to [`PEAK_LEVEL`].
pub fn prepare(
    sources: [&Signal; 2],
    names: [String; 2],
    matrix: &MixingMatrix,
) -> Result<Prepared> {
    let s1 = decimate_to_8k(sources[0])?;
    let s2 = decimate_to_8k(sources[1])?;
    let n = s1.len().min(s2.len());
    let s = [s1.truncated(n)?, s2.truncated(n)?];
    let x = mix([&s[0], &s[1]], matrix)?;
    let peak = x[0].peak().max(x[1].peak());
    if peak <= 0.0 {
        return Err(Error::Config("mixtures are silent".into()));
    }
    let scale = PEAK_LEVEL / peak;

    let mut files = Vec::new();
    let mut mixtures = Vec::new();
    for (sig, name) in x.iter().zip(MIXTURE_FILES) {
        let (bytes, back) = through_wav(&sig.scaled(scale));
        files.push((PathBuf::from(name), bytes));
        mixtures.push(back);
    }
    let mut references = Vec::new();
    let mut reference_scales = [0.0; 2];
    for (i, (sig, name)) in s.iter().zip(REFERENCE_FILES).enumerate() {
        let (scaled, gain) = scale_to_peak(sig, &format!("source {}", i + 1))?;
        let (bytes, back) = through_wav(&scaled);
        files.push((PathBuf::from(name), bytes));
        references.push(back);
        reference_scales[i] = gain;
    }
    let manifest = Manifest {
        matrix: matrix.entries(),
        scale,
        sample_rate_hz: s[0].sample_rate_hz(),
        length: n,
        sources: names,
        mixtures: MIXTURE_FILES.map(String::from),
        references: REFERENCE_FILES.map(String::from),
        reference_scales,
    };
    let mut manifest_json = serde_json::to_string_pretty(&manifest)?;
    manifest_json.push('\n');
    files.push((PathBuf::from(MANIFEST_FILE), manifest_json.into_bytes()));
    Ok(Prepared {
        mixtures: to_pair(mixtures),
        references: to_pair(references),
        manifest,
        files,
    })
}

fn to_pair(mut v: Vec<Signal>) -> [Signal; 2] {
    let b = v.pop().expect("two signals");
    let a = v.pop().expect("two signals");
    [a, b]
}

pub fn contrast_name(c: Contrast) -> &'static str {
    match c {
        Contrast::Tanh => "tanh",
        Contrast::Gauss => "gauss",
        Contrast::Cube => "cube",
    }
}

/// Estimates as written to disk, plus the run record describing them.
#[derive(Debug, Clone)]
pub struct Separated {
    pub estimates: [Signal; 2],
    pub record: RunRecord,
    files: Vec<(PathBuf, Vec<u8>)>,
}

/// Separates and peak-normalizes each estimate; `prefix` is prepended to the
/// estimate file names recorded in the run record.
pub fn separate_mixtures(
    mixtures: [&Signal; 2],
    method: Method,
    opts: &SeparationOptions,
    prefix: &str,
) -> Result<Separated> {
    let r = separate(mixtures[0], mixtures[1], method, opts).map_err(|source| Error::Method {
        method: method.name(),
        source,
    })?;
    let mut files = Vec::new();
    let mut estimates = Vec::new();
    let mut gains = [0.0; 2];
    for (i, (est, name)) in r.estimates.iter().zip(ESTIMATE_FILES).enumerate() {
        let (scaled, gain) = scale_to_peak(est, &format!("{} estimate {}", method.name(), i + 1))?;
        let (bytes, back) = through_wav(&scaled);
        files.push((PathBuf::from(format!("{prefix}{name}")), bytes));
        estimates.push(back);
        gains[i] = gain;
    }
    let uses_ica = method != Method::Sobi;
    let record = RunRecord {
        method: method.name().to_string(),
        seed: opts.ica.seed,
        selected_node: r.selected_node.map(Into::into),
        second_channel_node: r.second_channel_node.map(Into::into),
        node_kurtosis: r.node_kurtosis,
        contrast: uses_ica.then(|| contrast_name(opts.ica.contrast).to_string()),
        iterations: r.iterations,
        converged: r.converged,
        ill_conditioned: r.ill_conditioned,
        estimates: ESTIMATE_FILES.map(|n| format!("{prefix}{n}")),
        output_gains: gains,
    };
    Ok(Separated {
        estimates: to_pair(estimates),
        record,
        files,
    })
}

fn read_pair(paths: [&Path; 2]) -> Result<[Signal; 2]> {
    Ok([read_wav(paths[0])?, read_wav(paths[1])?])
}

fn path_name(p: &Path) -> String {
    p.to_string_lossy().into_owned()
}

/// Writes `mix1.wav`, `mix2.wav`, `ref1.wav`, `ref2.wav` and `manifest.json`.
pub fn cmd_mix(sources: [&Path; 2], matrix: &MixingMatrix, out: &Path) -> Result<Manifest> {
    let s = read_pair(sources)?;
    let p = prepare([&s[0], &s[1]], sources.map(path_name), matrix)?;
    Artifacts(p.files).commit(out)?;
    Ok(p.manifest)
}

/// Writes `est1.wav` and `est2.wav` and appends a line to `runs.jsonl`.
pub fn cmd_separate(
    mixtures: [&Path; 2],
    method: Method,
    opts: &SeparationOptions,
    out: &Path,
) -> Result<RunRecord> {
    let x = read_pair(mixtures)?;
    let sep = separate_mixtures([&x[0], &x[1]], method, opts, "")?;
    let runs = out.join(RUNS_FILE);
    let mut log = match std::fs::read(&runs) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Vec::new(),
        Err(e) => return Err(io_error(&runs)(e)),
    };
    log.extend_from_slice(to_json_lines(std::slice::from_ref(&sep.record))?.as_bytes());
    let mut files = Artifacts(sep.files);
    files.add(RUNS_FILE, log);
    files.commit(out)?;
    Ok(sep.record)
}

pub fn cmd_evaluate(estimates: [&Path; 2], references: [&Path; 2]) -> Result<MetricsReport> {
    let e = read_pair(estimates)?;
    let r = read_pair(references)?;
    Ok(evaluate([&e[0], &e[1]], [&r[0], &r[1]])?)
}

#[derive(Debug)]
pub struct ExperimentOutcome {
    pub manifest: Manifest,
    pub runs: Vec<RunRecord>,
    pub rows: Vec<MetricsRow>,
    pub failures: Vec<Error>,
    pub report_text: String,
}

impl ExperimentOutcome {
    pub fn all_succeeded(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Full protocol. Inputs are read before anything is written, so a missing
/// file leaves the output directory untouched. A method that fails is listed
/// in the report and in `failures`; the others are still written.
pub fn cmd_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    cfg.validate()?;
    let s = read_pair([&cfg.sources[0], &cfg.sources[1]])?;
    let prepared = prepare(
        [&s[0], &s[1]],
        cfg.sources.each_ref().map(|p| path_name(p)),
        &cfg.matrix,
    )?;
    let mut files = Artifacts(prepared.files);
    let x = &prepared.mixtures;
    let refs = &prepared.references;

    let mut runs = Vec::new();
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    let mut failure_lines = String::new();
    let mut methods = cfg.methods.clone();
    methods.dedup();
    for method in methods {
        let prefix = format!("{}/", method.name());
        let outcome =
            separate_mixtures([&x[0], &x[1]], method, &cfg.options, &prefix).and_then(|sep| {
                let report =
                    evaluate([&sep.estimates[0], &sep.estimates[1]], [&refs[0], &refs[1]])?;
                Ok((sep, report))
            });
        match outcome {
            Ok((sep, report)) => {
                rows.extend(metrics_rows(method.name(), &report));
                runs.push(sep.record);
                for (rel, bytes) in sep.files {
                    files.add(rel, bytes);
                }
            }
            Err(e) => {
                failure_lines.push_str(&format!("{}: FAILED: {e}\n", method.name()));
                failures.push(e);
            }
        }
    }
    let mut report_text = render_table(&rows);
    report_text.push_str(&failure_lines);
    files.add(RUNS_FILE, to_json_lines(&runs)?.into_bytes());
    files.add(REPORT_JSON_FILE, to_json_lines(&rows)?.into_bytes());
    files.add(REPORT_TEXT_FILE, report_text.clone().into_bytes());
    files.commit(&cfg.output_dir)?;
    Ok(ExperimentOutcome {
        manifest: prepared.manifest,
        runs,
        rows,
        failures,
        report_text,
    })
}
