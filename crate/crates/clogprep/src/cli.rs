//! `clogprep preprocess|synth|split|eval`.
//!
//! Exit codes: 0 success, 1 a sample failed or a prediction is missing,
//! 2 bad arguments, config or manifest.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use clogprep_core::synth::SynthConfig;

use crate::config::PipelineConfig;
use crate::dataset::{generate_dataset, MANIFEST_NAME};
use crate::error::Error;
use crate::eval::{evaluate, load_predictions};
use crate::manifest::{assign_splits, SampleManifest};
use crate::preprocess::{run_batch, REPORT_NAME};

#[derive(Debug, Parser)]
#[command(name = "clogprep", version, about = "Stalled-capillary preprocessing toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build image and point-cloud tensors for every sample in a manifest.
    Preprocess {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// JSON pipeline config; defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the config's worker count.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        workers: Option<u64>,
    },
    /// Render a synthetic labelled dataset with a manifest.
    Synth(SynthArgs),
    /// Assign stratified 75:15:10 train/val/test splits in place.
    Split {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Score predictions on the manifest's test split.
    Eval {
        #[arg(long)]
        predictions: PathBuf,
        #[arg(long)]
        manifest: PathBuf,
        /// Metrics JSON; defaults to metrics.json beside the predictions.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Samples per class.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub width: Option<usize>,
    #[arg(long)]
    pub height: Option<usize>,
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long)]
    pub tube_radius: Option<f64>,
    #[arg(long)]
    pub gap_length: Option<usize>,
    #[arg(long)]
    pub noise_std: Option<f64>,
    #[arg(long)]
    pub curvature: Option<f64>,
}

impl SynthArgs {
    fn config(&self) -> SynthConfig {
        let d = SynthConfig::default();
        SynthConfig {
            width: self.width.unwrap_or(d.width),
            height: self.height.unwrap_or(d.height),
            depth: self.depth.unwrap_or(d.depth),
            tube_radius: self.tube_radius.unwrap_or(d.tube_radius),
            gap_length: self.gap_length.unwrap_or(d.gap_length),
            noise_std: self.noise_std.unwrap_or(d.noise_std),
            curvature: self.curvature.unwrap_or(d.curvature),
            seed: self.seed.unwrap_or(d.seed),
        }
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                2
            } else {
                0
            }
        }
    }
}

pub fn execute(cli: Cli) -> i32 {
    match cli.command {
        Command::Preprocess { manifest, out, config, workers } => preprocess(&manifest, &out, config.as_deref(), workers),
        Command::Synth(args) => synth(&args),
        Command::Split { manifest, seed } => split(&manifest, seed),
        Command::Eval { predictions, manifest, out } => eval(&predictions, &manifest, out),
    }
}

fn fail(code: i32, e: &Error) -> i32 {
    eprintln!("error: {e}");
    code
}

fn preprocess(manifest: &Path, out: &Path, config: Option<&Path>, workers: Option<u64>) -> i32 {
    let cfg = match config.map_or_else(|| Ok(PipelineConfig::default()), PipelineConfig::load) {
        Ok(c) => c,
        Err(e) => return fail(2, &e),
    };
    let workers = workers.map_or(cfg.workers, |w| w as usize);
    let report = match run_batch(manifest, out, &cfg, workers) {
        Ok(r) => r,
        Err(e) => return fail(2, &e),
    };
    for s in report.samples.iter().filter(|s| s.error.is_some()) {
        eprintln!("{}: {}", s.id, s.error.as_deref().unwrap_or_default());
    }
    println!(
        "{} ok, {} failed; report at {}",
        report.summary.ok,
        report.summary.failed,
        out.join(REPORT_NAME).display()
    );
    i32::from(report.summary.failed > 0)
}

fn synth(args: &SynthArgs) -> i32 {
    match generate_dataset(args.n as usize, &args.config(), &args.out) {
        Ok(_) => {
            println!("{}", args.out.join(MANIFEST_NAME).display());
            0
        }
        Err(e) => fail(2, &e),
    }
}

fn split(manifest: &Path, seed: u64) -> i32 {
    let result = SampleManifest::load(manifest)
        .and_then(|m| assign_splits(&m, seed))
        .and_then(|m| m.save(manifest));
    match result {
        Ok(()) => 0,
        Err(e) => fail(2, &e),
    }
}

fn eval(predictions: &Path, manifest: &Path, out: Option<PathBuf>) -> i32 {
    let inputs = load_predictions(predictions).and_then(|p| Ok((p, SampleManifest::load(manifest)?)));
    let (preds, m) = match inputs {
        Ok(x) => x,
        Err(e) => return fail(2, &e),
    };
    let metrics = match evaluate(&preds, &m) {
        Ok(r) => r,
        Err(e) => return fail(1, &e),
    };
    let out = out.unwrap_or_else(|| predictions.with_file_name("metrics.json"));
    if let Err(e) = metrics.save(&out) {
        return fail(2, &e);
    }
    println!("{}", metrics.summary_line());
    0
}
