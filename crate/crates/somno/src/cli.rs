//! Command-line interface.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use somno_core::baselines::{band_powers, Method};
use somno_core::cam::explain;
use somno_core::data::{synth_generate, EventKind, Label, LabeledSet, SynthSpec};
use somno_core::eval::{band_feature_matrix, run_baseline_on_features, BaselineReport, EvalReport};
use somno_core::model::{ModelConfig, TrainConfig, Trainer, Variant};
use somno_core::nn::AdamConfig;
use somno_core::rng::derive_seed;

use crate::checkpoint::{load_checkpoint, save_checkpoint};
use crate::csvio::{self, write_text};
use crate::edd::{load_edd, save_edd};
use crate::error::{Error, Result};
use crate::parallel;
use crate::report::{self, BaselineSummary, RunSummary, Summary, TTestSummary};
use crate::svg;

#[derive(Debug, Parser)]
#[command(
    name = "somno",
    version,
    about = "Interpretable single-channel EEG drowsiness CNN"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train one model on a whole dataset and save a checkpoint.
    Train(TrainArgs),
    /// Leave-one-subject-out evaluation of the CNN or one baseline.
    Eval(EvalArgs),
    /// Leave-one-subject-out evaluation of all band-power baselines.
    Baseline(BaselineArgs),
    /// Evaluate several model variants with shared fold seeds.
    Ablate(AblateArgs),
    /// Class activation heatmaps for one sample.
    Explain(ExplainArgs),
    /// Generate a synthetic dataset with annotated events.
    Synth(SynthArgs),
    /// Dump relative band-power features.
    Bands(BandsArgs),
    /// Convert between CSV and EDD (chosen by file extension).
    Convert(ConvertArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Optim {
    /// Mini-batch size.
    #[arg(long = "batch", default_value_t = 50)]
    pub batch: usize,
    /// Adam learning rate.
    #[arg(long, default_value_t = 0.01)]
    pub lr: f64,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub data: PathBuf,
    /// Checkpoint path.
    #[arg(long)]
    pub out: PathBuf,
    /// Training-loss CSV [default: <out stem>_loss.csv next to the checkpoint].
    #[arg(long)]
    pub loss: Option<PathBuf>,
    #[arg(long, default_value_t = 50)]
    pub epochs: usize,
    #[command(flatten)]
    pub optim: Optim,
    #[arg(long, env = "SOMNO_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "full", value_parser = parse_variant)]
    pub variant: Variant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Cnn,
    Lda,
    Lr,
    Gnb,
    Knn,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "cnn")]
    pub method: MethodArg,
    #[arg(long, default_value_t = 10)]
    pub repeats: usize,
    #[arg(long, default_value_t = 50)]
    pub epochs: usize,
    #[arg(long, default_value = "full", value_parser = parse_variant)]
    pub variant: Variant,
    #[command(flatten)]
    pub optim: Optim,
    #[arg(long, env = "SOMNO_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for folds; results do not depend on it.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct BaselineArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct AblateArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Comma-separated; the first one is the reference for t-tests.
    #[arg(
        long,
        value_delimiter = ',',
        value_parser = parse_variant,
        default_value = "full,no-activation,no-batchnorm,avgpool40,avgpool80"
    )]
    pub variants: Vec<Variant>,
    #[arg(long, default_value_t = 10)]
    pub repeats: usize,
    #[arg(long, default_value_t = 50)]
    pub epochs: usize,
    #[command(flatten)]
    pub optim: Optim,
    #[arg(long, env = "SOMNO_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct ExplainArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub ckpt: PathBuf,
    /// Subject whose samples form the inference bundle.
    #[arg(long)]
    pub subject: u16,
    /// 0-based index of the sample within the subject's samples.
    #[arg(long)]
    pub sample: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 8)]
    pub subjects: usize,
    #[arg(long = "per-class", default_value_t = 100)]
    pub per_class: usize,
    /// Comma-separated subset of spindle,theta,emg,drift.
    #[arg(long, value_delimiter = ',', value_parser = parse_event, default_value = "spindle,theta,emg,drift")]
    pub events: Vec<EventKind>,
    /// Event peak amplitude relative to background RMS.
    #[arg(long, default_value_t = 2.0)]
    pub amplitude: f64,
    /// Per-subject gain spread factor (1 disables it).
    #[arg(long = "gain-spread", default_value_t = 2.0)]
    pub gain_spread: f64,
    #[arg(long, env = "SOMNO_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct BandsArgs {
    #[arg(long)]
    pub data: PathBuf,
    /// Feature CSV path.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
}

fn parse_variant(s: &str) -> std::result::Result<Variant, String> {
    Variant::parse(s).map_err(|e| e.to_string())
}

fn parse_event(s: &str) -> std::result::Result<EventKind, String> {
    EventKind::parse(s).ok_or_else(|| format!("unknown event type {s:?}"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Edd,
    Csv,
}

fn format_of(path: &Path) -> Result<Format> {
    match path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase)
        .as_deref()
    {
        Some("edd") => Ok(Format::Edd),
        Some("csv") => Ok(Format::Csv),
        _ => Err(Error::Usage(format!(
            "{}: unknown dataset extension (expected .edd or .csv)",
            path.display()
        ))),
    }
}

pub fn load_dataset(path: &Path) -> Result<LabeledSet> {
    match format_of(path)? {
        Format::Edd => load_edd(path),
        Format::Csv => csvio::import_csv(path),
    }
}

pub fn save_dataset(set: &LabeledSet, path: &Path) -> Result<()> {
    match format_of(path)? {
        Format::Edd => save_edd(set, path),
        Format::Csv => csvio::export_csv(set, path),
    }
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn train_config(optim: &Optim, epochs: usize) -> Result<TrainConfig> {
    let cfg = TrainConfig {
        batch_size: optim.batch,
        epochs,
        optimizer: AdamConfig {
            learning_rate: optim.lr,
            ..AdamConfig::default()
        },
        shuffle_seed: 0,
    };
    cfg.optimizer.validate()?;
    Ok(cfg)
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Train(a) => cmd_train(&a),
        Command::Eval(a) => cmd_eval(&a),
        Command::Baseline(a) => cmd_baseline(&a),
        Command::Ablate(a) => cmd_ablate(&a),
        Command::Explain(a) => cmd_explain(&a),
        Command::Synth(a) => cmd_synth(&a),
        Command::Bands(a) => cmd_bands(&a),
        Command::Convert(a) => cmd_convert(&a),
    }
}

pub fn cmd_train(a: &TrainArgs) -> Result<()> {
    let set = load_dataset(&a.data)?;
    let model = ModelConfig::default()
        .with_variant(a.variant)
        .with_seed(derive_seed(a.seed, &[1]));
    let train = TrainConfig {
        shuffle_seed: derive_seed(a.seed, &[2]),
        ..train_config(&a.optim, a.epochs)?
    };
    let samples: Vec<_> = set.samples.iter().collect();
    let mut trainer = Trainer::new(&samples, &model, &train)?;
    let mut losses = Vec::with_capacity(a.epochs);
    for _ in 0..a.epochs {
        losses.push(trainer.run_epoch()?);
    }
    save_checkpoint(&model, trainer.params(), &a.out)?;
    let loss_path = a.loss.clone().unwrap_or_else(|| {
        let stem = a
            .out
            .file_stem()
            .map_or("model".into(), |s| s.to_string_lossy().into_owned());
        a.out.with_file_name(format!("{stem}_loss.csv"))
    });
    write_text(&loss_path, &csvio::loss_csv(&losses))
}

fn baseline_reports(set: &LabeledSet, methods: &[Method]) -> Result<Vec<BaselineReport>> {
    let features = band_feature_matrix(set)?;
    Ok(methods
        .iter()
        .map(|&m| run_baseline_on_features(set, &features, m))
        .collect::<std::result::Result<_, _>>()?)
}

fn curve_csv(reports: &[EvalReport]) -> String {
    let mut out = String::from("variant,epoch,mean,stderr\n");
    for r in reports {
        for (e, (m, s)) in r.mean_curve().iter().zip(r.stderr_curve()).enumerate() {
            out.push_str(&format!("{},{},{m},{s}\n", r.variant, e + 1));
        }
    }
    out
}

fn chart(title: &str, reports: &[EvalReport]) -> String {
    let curves: Vec<(Vec<f64>, Vec<f64>)> = reports
        .iter()
        .map(|r| (r.mean_curve(), r.stderr_curve()))
        .collect();
    let series: Vec<svg::Series> = reports
        .iter()
        .zip(&curves)
        .map(|(r, (m, s))| svg::Series {
            label: &r.variant,
            mean: m,
            stderr: s,
        })
        .collect();
    svg::accuracy_chart(title, &series)
}

pub fn cmd_eval(a: &EvalArgs) -> Result<()> {
    let set = load_dataset(&a.data)?;
    create_dir(&a.out)?;
    let method = match a.method {
        MethodArg::Cnn => None,
        MethodArg::Lda => Some(Method::Lda),
        MethodArg::Lr => Some(Method::LogReg),
        MethodArg::Gnb => Some(Method::GaussianNb),
        MethodArg::Knn => Some(Method::Knn),
    };
    let mut summary = Summary::default();
    let mut table = String::from(report::ACCURACY_HEADER);
    if let Some(m) = method {
        let r = baseline_reports(&set, &[m])?.remove(0);
        table.push_str(&report::baseline_rows(&r));
        summary.baselines.push(BaselineSummary::new(&r));
    } else {
        let model = ModelConfig::default().with_variant(a.variant);
        let train = train_config(&a.optim, a.epochs)?;
        let r = parallel::cnn_experiment(&set, &model, &train, a.repeats, a.seed, a.jobs)?;
        table.push_str(&report::accuracy_rows(&r));
        let run = RunSummary::new(&r);
        for b in baseline_reports(&set, &Method::ALL)? {
            let name = format!("cnn/{}@{}", r.variant, run.peak_epoch);
            summary.ttests.push(TTestSummary::compare(
                &name,
                &run.subject_means_at_peak,
                b.method.name(),
                &b.accuracy,
            )?);
            summary.baselines.push(BaselineSummary::new(&b));
        }
        summary.runs.push(run);
        let reports = [r];
        write_text(&a.out.join("accuracy_curve.csv"), &curve_csv(&reports))?;
        write_text(
            &a.out.join("accuracy.svg"),
            &chart("Leave-one-subject-out accuracy", &reports),
        )?;
    }
    write_text(&a.out.join("accuracy.csv"), &table)?;
    write_text(&a.out.join("summary.json"), &summary.to_json())
}

pub fn cmd_baseline(a: &BaselineArgs) -> Result<()> {
    let set = load_dataset(&a.data)?;
    create_dir(&a.out)?;
    let reports = baseline_reports(&set, &Method::ALL)?;
    let mut table = String::from(report::ACCURACY_HEADER);
    let mut summary = Summary::default();
    for r in &reports {
        table.push_str(&report::baseline_rows(r));
        summary.baselines.push(BaselineSummary::new(r));
    }
    for (i, x) in reports.iter().enumerate() {
        for y in &reports[i + 1..] {
            summary.ttests.push(TTestSummary::compare(
                x.method.name(),
                &x.accuracy,
                y.method.name(),
                &y.accuracy,
            )?);
        }
    }
    write_text(&a.out.join("baselines.csv"), &table)?;
    write_text(&a.out.join("summary.json"), &summary.to_json())
}

pub fn cmd_ablate(a: &AblateArgs) -> Result<()> {
    if a.variants.is_empty() {
        return Err(Error::Usage("no variants given".into()));
    }
    let set = load_dataset(&a.data)?;
    create_dir(&a.out)?;
    let train = train_config(&a.optim, a.epochs)?;
    let reports = parallel::ablations(
        &set,
        &a.variants,
        &ModelConfig::default(),
        &train,
        a.repeats,
        a.seed,
        a.jobs,
    )?;
    let mut table = String::from(report::ACCURACY_HEADER);
    let mut summary = Summary::default();
    for r in &reports {
        table.push_str(&report::accuracy_rows(r));
        summary.runs.push(RunSummary::new(r));
    }
    let reference = &reports[0];
    let peak = reference.peak_epoch();
    for r in &reports[1..] {
        summary.ttests.push(TTestSummary::compare(
            &format!("{}@{peak}", reference.variant),
            &reference.subject_means(peak),
            &format!("{}@{peak}", r.variant),
            &r.subject_means(peak),
        )?);
    }
    write_text(&a.out.join("accuracy.csv"), &table)?;
    write_text(&a.out.join("summary.json"), &summary.to_json())?;
    write_text(&a.out.join("ablation_curves.csv"), &curve_csv(&reports))?;
    write_text(
        &a.out.join("ablation.svg"),
        &chart("Ablation: mean accuracy per epoch", &reports),
    )
}

pub fn cmd_explain(a: &ExplainArgs) -> Result<()> {
    let set = load_dataset(&a.data)?;
    let (config, params) = load_checkpoint(&a.ckpt)?;
    let bundle = set.subject_samples(a.subject);
    if bundle.is_empty() {
        return Err(Error::Usage(format!("subject {} has no samples", a.subject)));
    }
    if a.sample >= bundle.len() {
        return Err(Error::Usage(format!(
            "sample {} out of range: subject {} has {} samples",
            a.sample,
            a.subject,
            bundle.len()
        )));
    }
    let ex = explain(&bundle, a.sample, &params, &config)?;
    create_dir(&a.out)?;
    let sample = bundle[a.sample];
    let signal = sample.to_f64();
    let heat = |l: Label| &ex.heatmaps[l.index()].values;
    let mut text = format!(
        "# subject={},sample={},label={},predicted={},p_alert={},p_drowsy={}\n",
        a.subject,
        a.sample,
        sample.label.name(),
        ex.predicted.name(),
        ex.probs[0],
        ex.probs[1]
    );
    match ex.band_powers {
        Some(b) => text.push_str(&format!(
            "# delta={},theta={},alpha={},beta={}\n",
            b.delta, b.theta, b.alpha, b.beta
        )),
        None => text.push_str("# band powers undefined\n"),
    }
    text.push_str("position,signal,heatmap_alert,heatmap_drowsy\n");
    for (j, v) in signal.iter().enumerate() {
        text.push_str(&format!(
            "{j},{v},{},{}\n",
            heat(Label::Alert)[j],
            heat(Label::Drowsy)[j]
        ));
    }
    write_text(&a.out.join("explanation.csv"), &text)?;
    let title = format!(
        "subject {} sample {}: label {}, predicted {} (p_alert {:.3}, p_drowsy {:.3})",
        a.subject,
        a.sample,
        sample.label.name(),
        ex.predicted.name(),
        ex.probs[0],
        ex.probs[1]
    );
    let fig = svg::ExplanationFigure {
        title: &title,
        signal: &signal,
        heatmaps: vec![
            ("drowsy evidence", heat(Label::Drowsy)),
            ("alert evidence", heat(Label::Alert)),
        ],
        band_powers: ex.band_powers,
    };
    write_text(&a.out.join("explanation.svg"), &svg::explanation_svg(&fig))
}

pub fn cmd_synth(a: &SynthArgs) -> Result<()> {
    if a.subjects == 0 || a.per_class == 0 {
        return Err(Error::Usage("subjects and per-class must be positive".into()));
    }
    if !(a.amplitude.is_finite() && a.amplitude >= 0.0 && a.gain_spread.is_finite() && a.gain_spread >= 1.0) {
        return Err(Error::Usage("amplitude must be ≥ 0 and gain-spread ≥ 1".into()));
    }
    let spec = SynthSpec {
        subjects: a.subjects,
        samples_per_class: a.per_class,
        events: a.events.clone(),
        event_amplitude: a.amplitude,
        gain_spread: a.gain_spread,
        seed: a.seed,
        ..SynthSpec::default()
    };
    let s = synth_generate(&spec)?;
    create_dir(&a.out)?;
    save_edd(&s.set, &a.out.join("synth.edd"))?;
    write_text(
        &a.out.join("synth_events.csv"),
        &csvio::annotations_csv(&s.events),
    )
}

pub fn cmd_bands(a: &BandsArgs) -> Result<()> {
    let set = load_dataset(&a.data)?;
    let features = set
        .samples
        .iter()
        .map(|s| band_powers(&s.to_f64()))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    write_text(&a.out, &csvio::features_csv(&set, &features))
}

pub fn cmd_convert(a: &ConvertArgs) -> Result<()> {
    let set = load_dataset(&a.input)?;
    save_dataset(&set, &a.output)
}
