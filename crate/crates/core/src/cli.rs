//! `soundtex` command line. Exit codes: 0 success, 1 usage error, 2 data error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dsp::{cochleagram, Waveform};
use crate::error::{Error, Result};
use crate::io::labels::{self, ClusterLabelRow};
use crate::io::{
    clip_seed, decode_wav, read_header, read_store, sample_windows, write_store, FeatureStore,
    Manifest, RowId,
};
use crate::labeling::{
    assign, binary_encode, cluster_count_sweep, kmeans_fit, pca_fit, prune_outliers_with,
    spectrum_feature, ClusterModel, KMeansConfig, PcaModel, PruneMode,
};
use crate::probe::{baselines, evaluate, train, TrainConfig};
use crate::texture::{Rescale, TextureConfig, TextureExtractor, TextureLayout};
use crate::viz::{render_centroid_stats, render_cochleagram, RenderSpec};

#[derive(Debug, Parser)]
#[command(name = "soundtex", version, about = "Sound-texture features and self-supervised labels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute texture or spectrum features for every clip in a manifest.
    Extract(ExtractArgs),
    /// Fit k-means, assign labels and flag outliers.
    Cluster(ClusterArgs),
    /// Fit the PCA model used for binary codes.
    PcaFit(PcaFitArgs),
    /// Encode every row of a store as a binary code.
    Encode(EncodeArgs),
    /// Fit and prune over several cluster counts.
    Sweep(SweepArgs),
    /// Train a linear probe on features and cluster labels.
    Probe(ProbeArgs),
    /// Render a figure.
    Viz(VizArgs),
    /// Print a store header.
    Stats(StatsArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FeatureKind {
    Texture,
    Spectrum,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RescaleArg {
    Dim,
    Sqrtdim,
}

impl From<RescaleArg> for Rescale {
    fn from(r: RescaleArg) -> Self {
        match r {
            RescaleArg::Dim => Rescale::Dim,
            RescaleArg::Sqrtdim => Rescale::SqrtDim,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PruneArg {
    PerCluster,
    Global,
    Off,
}

impl From<PruneArg> for PruneMode {
    fn from(p: PruneArg) -> Self {
        match p {
            PruneArg::PerCluster => PruneMode::PerCluster,
            PruneArg::Global => PruneMode::Global,
            PruneArg::Off => PruneMode::Off,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VizKind {
    Cochleagram,
    Centroid,
}

#[derive(Debug, Args)]
struct ExtractArgs {
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Window centres sampled per clip when the manifest lists none.
    #[arg(long, default_value_t = 10)]
    windows: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = FeatureKind::Texture)]
    feature: FeatureKind,
    #[arg(long, value_enum, default_value_t = RescaleArg::Dim)]
    rescale: RescaleArg,
}

#[derive(Debug, Args)]
struct ClusterArgs {
    #[arg(long)]
    features: PathBuf,
    #[arg(long, default_value_t = 30)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    max_iter: usize,
    #[arg(long, value_enum, default_value_t = PruneArg::PerCluster)]
    prune: PruneArg,
    #[arg(long)]
    model_out: PathBuf,
    #[arg(long)]
    labels_out: PathBuf,
}

#[derive(Debug, Args)]
struct PcaFitArgs {
    #[arg(long)]
    features: PathBuf,
    #[arg(long, default_value_t = 30)]
    components: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct EncodeArgs {
    #[arg(long)]
    features: PathBuf,
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    features: PathBuf,
    #[arg(long, value_delimiter = ',', required = true)]
    ks: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    restarts: usize,
    #[arg(long, value_enum, default_value_t = PruneArg::PerCluster)]
    prune: PruneArg,
}

#[derive(Debug, Args)]
struct ProbeArgs {
    #[arg(long)]
    features: PathBuf,
    #[arg(long)]
    labels: PathBuf,
    #[arg(long, default_value_t = 200)]
    epochs: usize,
    #[arg(long, default_value_t = 1.0)]
    lr: f64,
    #[arg(long, default_value_t = 1e-4)]
    l2: f64,
    /// Fraction of rows held out for evaluation; 0 evaluates on the training rows.
    #[arg(long, default_value_t = 0.0)]
    test_fraction: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Train on rows flagged as outliers too.
    #[arg(long)]
    include_pruned: bool,
    /// Also write the report to this file.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VizArgs {
    #[arg(long, value_enum)]
    kind: VizKind,
    #[arg(long)]
    out: PathBuf,
    /// Input audio (cochleagram).
    #[arg(long)]
    wav: Option<PathBuf>,
    /// Render only the analysis window centred here (cochleagram).
    #[arg(long)]
    t_center: Option<f64>,
    #[arg(long)]
    width: Option<usize>,
    #[arg(long)]
    height: Option<usize>,
    /// Cluster model JSON (centroid).
    #[arg(long)]
    model: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    cluster: usize,
    #[arg(long, value_enum, default_value_t = RescaleArg::Dim)]
    rescale: RescaleArg,
}

#[derive(Debug, Args)]
struct StatsArgs {
    store: PathBuf,
}

/// Parse `args` (including the program name) and run, writing reports to
/// stdout and diagnostics to stderr.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli.command, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn execute(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Extract(a) => extract(a, out, err),
        Command::Cluster(a) => cluster(a, out),
        Command::PcaFit(a) => pca_fit_cmd(a, out),
        Command::Encode(a) => encode(a, out),
        Command::Sweep(a) => sweep(a, out),
        Command::Probe(a) => probe(a, out),
        Command::Viz(a) => viz(a, out),
        Command::Stats(a) => stats(a, out),
    }
}

struct ClipFeatures {
    rows: Vec<(RowId, Vec<f32>)>,
    warning: Option<String>,
}

fn extract(a: ExtractArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let manifest = Manifest::load(&a.manifest)?;
    let base = a.manifest.parent().map(Path::to_path_buf).unwrap_or_default();
    let config = TextureConfig {
        rescale: a.rescale.into(),
        ..TextureConfig::default()
    };
    let extractor = TextureExtractor::<f64>::new(config.clone())?;
    let dim = match a.feature {
        FeatureKind::Texture => config.layout().dim(),
        FeatureKind::Spectrum => config.n_channels,
    };

    let per_clip: Vec<ClipFeatures> = manifest
        .records
        .par_iter()
        .map(|rec| -> Result<ClipFeatures> {
            let path = Manifest::resolve(rec, &base);
            let wav: Waveform<f64> = decode_wav(&path).map_err(|e| {
                Error::invalid_input(format!("{}: {e}", path.display()))
            })?;
            let prepared = extractor.prepare(&wav)?;
            let (centers, warning) = if rec.window_centers_s.is_empty() {
                let s = sample_windows(prepared.duration_s(), a.windows, clip_seed(a.seed, &rec.clip_id));
                (s.centers, s.warning)
            } else {
                (rec.window_centers_s.clone(), None)
            };
            let features: Vec<Vec<f64>> = match a.feature {
                FeatureKind::Texture => extractor
                    .textures(&prepared, &centers)?
                    .into_iter()
                    .map(|t| t.to_vec())
                    .collect(),
                FeatureKind::Spectrum => centers
                    .iter()
                    .map(|&c| spectrum_feature(&prepared, extractor.cochlear_bank(), c))
                    .collect::<Result<_>>()?,
            };
            log::debug!("{}: {} windows", rec.clip_id, features.len());
            let rows = features
                .into_iter()
                .enumerate()
                .map(|(i, f)| {
                    (
                        RowId {
                            clip_id: rec.clip_id.clone(),
                            window: i as u32,
                        },
                        f.into_iter().map(|v| v as f32).collect(),
                    )
                })
                .collect();
            Ok(ClipFeatures {
                rows,
                warning: warning.map(|w| format!("clip {:?}: {w}", rec.clip_id)),
            })
        })
        .collect::<Result<_>>()?;

    let mut store = FeatureStore::empty(dim);
    let mut warnings = 0;
    for clip in per_clip {
        if let Some(w) = clip.warning {
            warnings += 1;
            writeln!(err, "warning: {w}")?;
        }
        for (id, row) in clip.rows {
            store.push(id, &row)?;
        }
    }
    write_store(&a.out, &store)?;
    writeln!(out, "clips: {}", manifest.records.len())?;
    writeln!(out, "rows: {}", store.rows())?;
    writeln!(out, "dim: {}", store.dim())?;
    writeln!(out, "warnings: {warnings}")?;
    Ok(())
}

fn cluster(a: ClusterArgs, out: &mut dyn Write) -> Result<()> {
    let store = read_store(&a.features)?;
    let x = store.to_array();
    let config = KMeansConfig {
        max_iter: a.max_iter,
        ..KMeansConfig::new(a.k, a.seed)
    };
    let model = kmeans_fit(x.view(), &config)?;
    log::info!("k-means converged after {} iterations", model.iterations_run);
    let (ids, dist) = assign(&model, x.view())?;
    let pruned = prune_outliers_with(&ids, &dist, a.prune.into());
    let rows: Vec<ClusterLabelRow> = store
        .ids()
        .iter()
        .zip(ids.iter().zip(dist.iter().zip(&pruned)))
        .map(|(id, (&cluster, (&distance, &pruned)))| ClusterLabelRow {
            id: id.clone(),
            cluster,
            distance,
            pruned,
        })
        .collect();
    std::fs::write(&a.model_out, serde_json::to_string_pretty(&model)? + "\n")?;
    std::fs::write(&a.labels_out, labels::format_cluster_labels(&rows))?;
    writeln!(out, "rows: {}", store.rows())?;
    writeln!(out, "k: {}", model.k)?;
    writeln!(out, "iterations: {}", model.iterations_run)?;
    writeln!(out, "inertia: {:.9e}", model.inertia)?;
    writeln!(out, "retained: {}", pruned.iter().filter(|p| !**p).count())?;
    Ok(())
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

fn pca_fit_cmd(a: PcaFitArgs, out: &mut dyn Write) -> Result<()> {
    let store = read_store(&a.features)?;
    let model = pca_fit(store.to_array().view(), a.components)?;
    std::fs::write(&a.out, serde_json::to_string_pretty(&model)? + "\n")?;
    writeln!(out, "rows: {}", store.rows())?;
    writeln!(out, "components: {}", model.n_components())?;
    let total: f64 = model.explained_variance.iter().sum();
    writeln!(out, "explained variance: {total:.9e}")?;
    Ok(())
}

fn encode(a: EncodeArgs, out: &mut dyn Write) -> Result<()> {
    let store = read_store(&a.features)?;
    let model: PcaModel<f64> = load_json(&a.model)?;
    let x = store.to_array();
    let codes = x
        .rows()
        .into_iter()
        .map(|r| binary_encode(&r.to_vec(), &model))
        .collect::<Result<Vec<_>>>()?;
    std::fs::write(&a.out, labels::format_codes(store.ids(), &codes))?;
    writeln!(out, "rows: {}", codes.len())?;
    writeln!(out, "bits: {}", model.n_components())?;
    Ok(())
}

fn sweep(a: SweepArgs, out: &mut dyn Write) -> Result<()> {
    let store = read_store(&a.features)?;
    let x = store.to_array();
    let entries = cluster_count_sweep(x.view(), &a.ks, a.seed, a.restarts, a.prune.into())?;
    writeln!(out, "k\tinertia\tretained\trows")?;
    for e in entries {
        writeln!(out, "{}\t{:.9e}\t{}\t{}", e.k, e.model.inertia, e.retained, store.rows())?;
    }
    Ok(())
}

fn pct(x: f64) -> String {
    format!("{:.1}%", 100.0 * x)
}

fn probe(a: ProbeArgs, out: &mut dyn Write) -> Result<()> {
    let store = read_store(&a.features)?;
    let rows = labels::read_cluster_labels(&a.labels)?;
    if rows.len() != store.rows() {
        return Err(Error::invalid_input(format!(
            "{} label rows for {} feature rows",
            rows.len(),
            store.rows()
        )));
    }
    if let Some(i) = (0..rows.len()).find(|&i| rows[i].id != store.ids()[i]) {
        return Err(Error::invalid_input(format!("label row {i} does not match store row id")));
    }
    if !(0.0..1.0).contains(&a.test_fraction) {
        return Err(Error::invalid_input("test fraction must lie in [0, 1)"));
    }
    let n_classes = rows.iter().map(|r| r.cluster).max().map_or(0, |m| m + 1);
    let mut order: Vec<usize> = (0..rows.len()).collect();
    let n_test = (a.test_fraction * rows.len() as f64).round() as usize;
    if n_test > 0 {
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(a.seed));
    }
    let (test_idx, train_idx) = order.split_at(n_test);
    let mut train_idx: Vec<usize> = train_idx
        .iter()
        .copied()
        .filter(|&i| a.include_pruned || !rows[i].pruned)
        .collect();
    train_idx.sort_unstable();
    let mut eval_idx: Vec<usize> = if n_test > 0 { test_idx.to_vec() } else { train_idx.clone() };
    eval_idx.sort_unstable();
    if train_idx.is_empty() || eval_idx.is_empty() {
        return Err(Error::invalid_input("no rows left to train or evaluate on"));
    }

    let x = store.to_array();
    let take = |idx: &[usize]| x.select(ndarray::Axis(0), idx);
    let y_of = |idx: &[usize]| idx.iter().map(|&i| rows[i].cluster).collect::<Vec<_>>();
    let (x_train, y_train) = (take(&train_idx), y_of(&train_idx));
    let (x_eval, y_eval) = (take(&eval_idx), y_of(&eval_idx));
    let config = TrainConfig {
        epochs: a.epochs,
        lr: a.lr,
        l2: a.l2,
        ..TrainConfig::new(n_classes)
    };
    let model = train(x_train.view(), &y_train, &config)?;
    let eval = evaluate(&model, x_eval.view(), &y_eval)?;
    let base = baselines(&y_eval)?;

    let mut report = String::new();
    use std::fmt::Write as _;
    writeln!(report, "rows: {}", rows.len()).unwrap();
    writeln!(report, "train rows: {}", train_idx.len()).unwrap();
    writeln!(
        report,
        "eval rows: {} ({})",
        eval_idx.len(),
        if n_test > 0 { "held out" } else { "training set" }
    )
    .unwrap();
    writeln!(report, "classes: {n_classes}").unwrap();
    writeln!(report, "accuracy: {}", pct(eval.accuracy)).unwrap();
    writeln!(report, "chance: {}", pct(base.chance)).unwrap();
    writeln!(report, "majority: {}", pct(base.majority)).unwrap();
    if let Some(loss) = model.training_log.last() {
        writeln!(report, "final loss: {loss:.9e}").unwrap();
    }
    out.write_all(report.as_bytes())?;
    if let Some(path) = &a.report {
        std::fs::write(path, &report)?;
    }
    Ok(())
}

fn viz(a: VizArgs, out: &mut dyn Write) -> Result<()> {
    match a.kind {
        VizKind::Cochleagram => {
            let path = a
                .wav
                .as_ref()
                .ok_or_else(|| Error::invalid_input("--wav is required for a cochleagram"))?;
            let config = TextureConfig::default();
            let extractor = TextureExtractor::<f64>::new(config.clone())?;
            let mut w = extractor.prepare(&decode_wav(path)?)?;
            if let Some(t) = a.t_center {
                let sr = w.sample_rate() as f64;
                let start = ((t - config.window_s / 2.0) * sr).round();
                if start < 0.0 {
                    return Err(Error::OutOfRange(format!("window at {t} s starts before the clip")));
                }
                w = w.segment(start as usize, config.window_samples())?;
            }
            let c = cochleagram(&w, extractor.cochlear_bank())?;
            let spec = RenderSpec {
                width: a.width,
                height: a.height,
                ..RenderSpec::default()
            };
            std::fs::write(&a.out, render_cochleagram(&c, &spec)?)?;
            writeln!(out, "wrote {} ({} x {})", a.out.display(), c.n_frames(), c.n_channels())?;
        }
        VizKind::Centroid => {
            let path = a
                .model
                .as_ref()
                .ok_or_else(|| Error::invalid_input("--model is required for a centroid chart"))?;
            let model: ClusterModel<f64> = load_json(path)?;
            let svg = render_centroid_stats(&model, a.cluster, &TextureLayout::default(), a.rescale.into())?;
            std::fs::write(&a.out, svg)?;
            writeln!(out, "wrote {} (cluster {})", a.out.display(), a.cluster)?;
        }
    }
    Ok(())
}

fn stats(a: StatsArgs, out: &mut dyn Write) -> Result<()> {
    let h = read_header(&a.store)?;
    writeln!(out, "version: {}", h.version)?;
    writeln!(out, "row_count: {}", h.row_count)?;
    writeln!(out, "dim: {}", h.dim)?;
    writeln!(out, "dtype: f32")?;
    Ok(())
}
