use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use uwpd_bss::experiment::{cmd_evaluate, cmd_experiment, cmd_mix, cmd_separate, ExperimentConfig};
use uwpd_bss::parse::{parse_lags, parse_matrix};
use uwpd_bss::report::{metrics_rows, render_table, to_json_lines};
use uwpd_bss::wav::write_wav;
use uwpd_bss::Error;
use uwpd_bss_core::filterbank::default_cb_tree;
use uwpd_bss_core::pipeline::{Method, SeparationOptions, TransferMode};
use uwpd_bss_core::separators::{Contrast, IcaOptions};
use uwpd_bss_core::statistics::SelectionRule;
use uwpd_bss_core::synth::{synth_source, SourceKind};
use uwpd_bss_core::MixingMatrix;

#[derive(Parser)]
#[command(
    name = "uwpd-bss",
    version,
    about = "Two-channel blind source separation with a critical-band wavelet packet front end"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decimate two sources to 8 kHz, mix them and write mix1/mix2, ref1/ref2 and manifest.json
    Mix {
        #[arg(long, num_args = 2, value_names = ["SRC1", "SRC2"], required = true)]
        sources: Vec<PathBuf>,
        #[arg(long, default_value = "2,1,1,1", value_parser = parse_matrix)]
        matrix: MixingMatrix,
        #[arg(long)]
        out: PathBuf,
    },
    /// Separate two mixture files into est1.wav and est2.wav
    Separate {
        #[arg(long, num_args = 2, value_names = ["MIX1", "MIX2"], required = true)]
        mixtures: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = MethodArg::Proposed)]
        method: MethodArg,
        #[command(flatten)]
        sep: SeparationArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score two estimates against two references
    Evaluate {
        #[arg(long, num_args = 2, value_names = ["EST1", "EST2"], required = true)]
        estimates: Vec<PathBuf>,
        #[arg(long, num_args = 2, value_names = ["REF1", "REF2"], required = true)]
        references: Vec<PathBuf>,
        /// Label used in the table
        #[arg(long, default_value = "estimate")]
        label: String,
        /// Print JSON lines instead of the table
        #[arg(long)]
        json: bool,
    },
    /// Mix, separate with every requested method and evaluate
    Experiment {
        #[arg(long, num_args = 2, value_names = ["SRC1", "SRC2"], required = true)]
        sources: Vec<PathBuf>,
        #[arg(long, default_value = "2,1,1,1", value_parser = parse_matrix)]
        matrix: MixingMatrix,
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [MethodArg::Proposed, MethodArg::Fastica, MethodArg::Sobi])]
        method: Vec<MethodArg>,
        #[command(flatten)]
        sep: SeparationArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the critical-band packet tree, one leaf per line
    Tree,
    /// Write a seeded synthetic source as an 8 kHz WAV file
    Synth {
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Carrier or tone frequency in Hz
        #[arg(long, default_value_t = 1000.0)]
        freq: f64,
        /// AR(1) pole
        #[arg(long, default_value_t = 0.9)]
        pole: f64,
        /// Gaussian floor for bursts-in-noise
        #[arg(long, default_value_t = 1.0)]
        noise_std: f64,
        #[arg(long, default_value_t = 16384)]
        length: usize,
        #[arg(long, env = "BSS_UWPD_SEED", default_value_t = 42)]
        seed: u64,
        /// Peak level of the written file
        #[arg(long, default_value_t = 0.9)]
        peak: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct SeparationArgs {
    #[arg(long, env = "BSS_UWPD_SEED", default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = ContrastArg::Tanh)]
    contrast: ContrastArg,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, default_value_t = 200)]
    max_iter: usize,
    /// SOBI lags, e.g. 1-20 or 1,2,5
    #[arg(long, default_value = "1-20", value_parser = |s: &str| parse_lags(s).map(Lags))]
    lags: Lags,
    #[arg(long, value_enum, default_value_t = SelectionArg::CommonMin)]
    selection: SelectionArg,
    #[arg(long, value_enum, default_value_t = TransferArg::Subband)]
    transfer: TransferArg,
}

impl SeparationArgs {
    fn options(&self) -> SeparationOptions {
        SeparationOptions {
            ica: IcaOptions {
                contrast: match self.contrast {
                    ContrastArg::Tanh => Contrast::Tanh,
                    ContrastArg::Gauss => Contrast::Gauss,
                    ContrastArg::Cube => Contrast::Cube,
                },
                tolerance: self.tol,
                max_iterations: self.max_iter,
                seed: self.seed,
            },
            sobi_lags: self.lags.0.clone(),
            selection: match self.selection {
                SelectionArg::CommonMin => SelectionRule::CommonMin,
                SelectionArg::PerChannel => SelectionRule::PerChannel,
            },
            transfer: match self.transfer {
                TransferArg::Subband => TransferMode::SubbandModel,
                TransferArg::Refit => TransferMode::RefitWhitening,
            },
        }
    }
}

#[derive(Clone)]
struct Lags(Vec<usize>);

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Proposed,
    Fastica,
    Sobi,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Proposed => Method::Proposed,
            MethodArg::Fastica => Method::FastIcaPlain,
            MethodArg::Sobi => Method::Sobi,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ContrastArg {
    Tanh,
    Gauss,
    Cube,
}

#[derive(Clone, Copy, ValueEnum)]
enum SelectionArg {
    CommonMin,
    PerChannel,
}

#[derive(Clone, Copy, ValueEnum)]
enum TransferArg {
    Subband,
    Refit,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Laplacian,
    Uniform,
    Gaussian,
    Ar1,
    Sine,
    ToneBursts,
    BurstsInNoise,
}

fn pair(v: &[PathBuf]) -> [&std::path::Path; 2] {
    [v[0].as_path(), v[1].as_path()]
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Mix {
            sources,
            matrix,
            out,
        } => {
            let m = cmd_mix(pair(&sources), &matrix, &out)?;
            println!(
                "wrote {} mixtures of {} samples at {} Hz to {}",
                m.mixtures.len(),
                m.length,
                m.sample_rate_hz,
                out.display()
            );
        }
        Command::Separate {
            mixtures,
            method,
            sep,
            out,
        } => {
            let record = cmd_separate(pair(&mixtures), method.into(), &sep.options(), &out)?;
            print!("{}", to_json_lines(&[record])?);
        }
        Command::Evaluate {
            estimates,
            references,
            label,
            json,
        } => {
            let report = cmd_evaluate(pair(&estimates), pair(&references))?;
            let rows = metrics_rows(&label, &report);
            if json {
                print!("{}", to_json_lines(&rows)?);
            } else {
                print!("{}", render_table(&rows));
            }
        }
        Command::Experiment {
            sources,
            matrix,
            method,
            sep,
            out,
        } => {
            let cfg = ExperimentConfig {
                sources: [sources[0].clone(), sources[1].clone()],
                matrix,
                methods: method.into_iter().map(Method::from).collect(),
                options: sep.options(),
                output_dir: out,
            };
            let outcome = cmd_experiment(&cfg)?;
            print!("{}", outcome.report_text);
            if !outcome.all_succeeded() {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Tree => print!("{}", default_cb_tree()),
        Command::Synth {
            kind,
            freq,
            pole,
            noise_std,
            length,
            seed,
            peak,
            out,
        } => {
            let kind = match kind {
                KindArg::Laplacian => SourceKind::Laplacian,
                KindArg::Uniform => SourceKind::Uniform,
                KindArg::Gaussian => SourceKind::Gaussian,
                KindArg::Ar1 => SourceKind::Ar1 { pole },
                KindArg::Sine => SourceKind::Sine { freq_hz: freq },
                KindArg::ToneBursts => SourceKind::ToneBursts { carrier_hz: freq },
                KindArg::BurstsInNoise => SourceKind::BurstsInNoise {
                    carrier_hz: freq,
                    noise_std,
                },
            };
            if !(peak > 0.0 && peak < 1.0) {
                return Err(Error::Config("--peak must lie in (0, 1)".into()));
            }
            let s = synth_source(kind, length, seed)?;
            write_wav(&out, &s.scaled(peak / s.peak()))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn lags_and_methods_parse() {
        let cli = Cli::try_parse_from([
            "uwpd-bss",
            "experiment",
            "--sources",
            "a.wav",
            "b.wav",
            "--method",
            "sobi,fastica",
            "--lags",
            "1-3",
            "--out",
            "o",
        ])
        .unwrap();
        let Command::Experiment { method, sep, .. } = cli.command else {
            panic!()
        };
        assert!(method == [MethodArg::Sobi, MethodArg::Fastica]);
        assert_eq!(sep.options().sobi_lags, vec![1, 2, 3]);
    }
}
