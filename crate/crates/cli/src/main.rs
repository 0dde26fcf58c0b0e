use std::collections::HashMap;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use avqa_core::attributes::{compute_attributes, histogram, write_histogram_csv, ATTRIBUTE_NAMES};
use avqa_core::evaluation::{run_protocol, DatasetManifest, ProtocolConfig};
use avqa_core::features::{extract_features, read_feature_cache, write_feature_cache, FeatureRecord};
use avqa_core::media::{load_wav, load_y4m};
use avqa_core::regressor::{default_grid, grid_search, SolverConfig, SvrModel};
use avqa_core::subjective::{process_scores, read_score_csv, write_mos_csv, write_rejected_csv};

#[derive(Parser)]
#[command(
    name = "avqa",
    version,
    about = "Audio-visual quality assessment for user-generated content"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract (w, h, video, audio) feature vectors for every manifest entry.
    Extract {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Leave out the MFCC block.
        #[arg(long)]
        no_audio_features: bool,
        /// Use every n-th frame.
        #[arg(long, default_value_t = 10)]
        stride: usize,
    },
    /// Compute the nine content attributes, optionally with histograms.
    Attrs {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 10)]
        stride: usize,
        /// Also write `<out>.<attribute>.hist.csv` with this many bins.
        #[arg(long)]
        hist_bins: Option<usize>,
    },
    /// Normalize raw subjective scores, screen subjects and compute MOS.
    Mos {
        #[arg(long)]
        raw: PathBuf,
        #[arg(long, value_enum, default_value_t = Screen::Bt500)]
        screen: Screen,
        #[arg(long)]
        out: PathBuf,
        /// Lowest and highest value of the rating scale.
        #[arg(long, num_args = 2, value_names = ["MIN", "MAX"], default_values_t = [0.0, 100.0])]
        scale: Vec<f64>,
    },
    /// Grid-search and train a regressor on every manifest entry.
    Train {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        no_audio_features: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Predict quality scores with a trained model.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        no_audio_features: bool,
    },
    /// Repeated content-separated train/test evaluation.
    Eval {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 100)]
        repeats: usize,
        #[arg(long, default_value_t = 0.8)]
        ratio: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        no_audio_features: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Screen {
    Bt500,
    None,
}

fn load_features(path: &Path, no_audio: bool) -> Result<Vec<FeatureRecord>> {
    let records = read_feature_cache(File::open(path).with_context(|| format!("opening {}", path.display()))?)
        .with_context(|| format!("reading {}", path.display()))?;
    Ok(if no_audio {
        records
            .into_iter()
            .map(|r| FeatureRecord {
                features: r.features.without_audio(),
                id: r.id,
            })
            .collect()
    } else {
        records
    })
}

fn load_manifest(path: &Path) -> Result<DatasetManifest> {
    DatasetManifest::load(path).with_context(|| format!("reading manifest {}", path.display()))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("creating {}", path.display()))?,
    ))
}

/// `<out>` with `suffix` appended to its file name.
fn sidecar(out: &Path, suffix: &str) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(suffix);
    out.with_file_name(name)
}

fn training_rows(manifest: &DatasetManifest, records: &[FeatureRecord]) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    let by_id: HashMap<&str, &FeatureRecord> = records.iter().map(|r| (r.id.as_str(), r)).collect();
    manifest
        .entries()
        .iter()
        .map(|e| {
            let r = by_id
                .get(e.id.as_str())
                .with_context(|| format!("no features for `{}`", e.id))?;
            Ok((r.features.values().to_vec(), e.mos))
        })
        .collect::<Result<Vec<_>>>()
        .map(|rows| rows.into_iter().unzip())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Extract {
            manifest,
            out,
            no_audio_features,
            stride,
        } => {
            let manifest = load_manifest(&manifest)?;
            let mut records = Vec::with_capacity(manifest.len());
            for e in manifest.entries() {
                let video = load_y4m(&e.video).with_context(|| format!("loading {}", e.video.display()))?;
                let audio = if no_audio_features {
                    None
                } else if e.audio.as_os_str().is_empty() {
                    bail!("`{}` has no audio track; use --no-audio-features", e.id);
                } else {
                    Some(load_wav(&e.audio).with_context(|| format!("loading {}", e.audio.display()))?)
                };
                let features = extract_features(&video, audio.as_ref(), stride)
                    .with_context(|| format!("extracting features for `{}`", e.id))?;
                records.push(FeatureRecord {
                    id: e.id.clone(),
                    features,
                });
            }
            write_feature_cache(create(&out)?, &records)?;
            eprintln!("wrote {} feature rows to {}", records.len(), out.display());
        }
        Command::Attrs {
            manifest,
            out,
            stride,
            hist_bins,
        } => {
            let manifest = load_manifest(&manifest)?;
            let mut w = csv::Writer::from_writer(create(&out)?);
            w.write_record(std::iter::once("id").chain(ATTRIBUTE_NAMES))?;
            let mut columns = vec![Vec::with_capacity(manifest.len()); ATTRIBUTE_NAMES.len()];
            for e in manifest.entries() {
                let video = load_y4m(&e.video).with_context(|| format!("loading {}", e.video.display()))?;
                let audio = load_wav(&e.audio).with_context(|| format!("loading audio of `{}`", e.id))?;
                let report = compute_attributes(&video, &audio, stride)
                    .with_context(|| format!("computing attributes for `{}`", e.id))?;
                let values = report.values();
                w.write_record(std::iter::once(e.id.clone()).chain(values.iter().map(f64::to_string)))?;
                for (col, v) in columns.iter_mut().zip(values) {
                    col.push(v);
                }
            }
            w.flush()?;
            if let Some(bins) = hist_bins {
                for (name, col) in ATTRIBUTE_NAMES.iter().zip(&columns) {
                    let path = sidecar(&out, &format!(".{name}.hist.csv"));
                    write_histogram_csv(create(&path)?, &histogram(col, bins)?)?;
                }
            }
        }
        Command::Mos {
            raw,
            screen,
            out,
            scale,
        } => {
            let bounds = (scale[0], scale[1]);
            let file = File::open(&raw).with_context(|| format!("opening {}", raw.display()))?;
            let scores = read_score_csv(file, bounds).with_context(|| format!("reading {}", raw.display()))?;
            let (table, normalized, _) = process_scores(&scores, matches!(screen, Screen::Bt500))?;
            write_mos_csv(create(&out)?, &table)?;
            write_rejected_csv(
                create(&sidecar(&out, ".rejected_subjects.csv"))?,
                &table.rejected_subjects,
            )?;
            eprintln!(
                "{} sequences, {} subjects rejected, {} normalized scores clipped",
                table.mos.len(),
                table.rejected_subjects.len(),
                normalized.clipped
            );
        }
        Command::Train {
            manifest,
            features,
            out,
            no_audio_features,
            seed,
        } => {
            let manifest = load_manifest(&manifest)?;
            let records = load_features(&features, no_audio_features)?;
            let (rows, targets) = training_rows(&manifest, &records)?;
            let config = SolverConfig {
                seed,
                ..SolverConfig::default()
            };
            let search = grid_search(&rows, &targets, &default_grid(), &config)?;
            search.model.save(&out)?;
            let hp = search.hyperparams;
            eprintln!(
                "C = {}, epsilon = {}, gamma = {}, training RMSE {:.4}",
                hp.c, hp.epsilon, hp.gamma, search.report.train_rmse
            );
        }
        Command::Predict {
            model,
            features,
            out,
            no_audio_features,
        } => {
            let model = SvrModel::load(&model).with_context(|| format!("loading model {}", model.display()))?;
            let records = load_features(&features, no_audio_features)?;
            let mut w = csv::Writer::from_writer(create(&out)?);
            w.write_record(["id", "prediction"])?;
            for r in &records {
                let p = model
                    .predict(r.features.values())
                    .with_context(|| format!("predicting `{}`", r.id))?;
                w.write_record([r.id.clone(), p.to_string()])?;
            }
            w.flush()?;
        }
        Command::Eval {
            manifest,
            features,
            out,
            repeats,
            ratio,
            seed,
            no_audio_features,
        } => {
            let manifest = load_manifest(&manifest)?;
            let rows: HashMap<String, Vec<f64>> = load_features(&features, no_audio_features)?
                .into_iter()
                .map(|r| (r.id, r.features.into_values()))
                .collect();
            let config = ProtocolConfig {
                repeats,
                ratio,
                master_seed: seed,
                ..ProtocolConfig::default()
            };
            let report = run_protocol(&manifest, &rows, &config)?;
            report.save(&out)?;
            let a = &report.aggregate;
            let show = |v: Option<f64>| v.map_or("n/a".to_string(), |v| format!("{v:.4}"));
            eprintln!(
                "{} repeats ({} failed): mean SRCC {}, PLCC {}, RMSE {}",
                report.repeats,
                a.failures,
                show(a.mean_srcc),
                show(a.mean_plcc),
                show(a.mean_rmse)
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
