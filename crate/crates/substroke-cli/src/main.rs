//! Batch front end: preprocess ink files, segment them into sub-units,
//! generate labeled synthetic corpora, and train/evaluate the feature
//! harness.
//!
//! Output files are deterministic functions of inputs, configuration, and
//! seed; the run report (timings included) goes to stdout only.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use substroke::config::Config;
use substroke::features::{
    classify, combined_features, global_features, train_centroid, FeatureVector,
};
use substroke::ink::{parse_ink, serialize_ink, Character};
use substroke::preprocess::{preprocess_character, PreprocessParams};
use substroke::render::render_svg;
use substroke::sue::{segment_character, CharacterSegmentation};
use substroke::synth::corpus::{generate_corpus, CorpusManifest};

#[derive(Parser)]
#[command(name = "substroke", version, about = "Stroke sub-unit segmentation toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ConfigArgs {
    /// Threshold configuration file (JSON). Defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override a single threshold, e.g. --set tau_rldc=95 (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Normalize, resample, and smooth ink files.
    Preprocess {
        /// Input ink file or directory of *.json ink files.
        #[arg(long = "in")]
        input: PathBuf,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Segment preprocessed ink files into sub-units.
    Segment {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also write an SVG per character with sub-units colored in order.
        #[arg(long)]
        svg: bool,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Generate a synthetic labeled corpus with ground truth.
    Synth {
        /// Corpus manifest (JSON). The shipped recipe is used when omitted.
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Write the effective manifest to this path and exit.
        #[arg(long)]
        emit_manifest: Option<PathBuf>,
    },
    /// Train a nearest-centroid model and report test accuracy.
    Eval {
        #[arg(long)]
        train: PathBuf,
        #[arg(long)]
        test: PathBuf,
        /// Feature schema: "global" or "local+global".
        #[arg(long, default_value = "local+global")]
        features: String,
        /// Write the accuracy report (JSON) here as well as stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        config: ConfigArgs,
    },
}

#[derive(Serialize)]
struct FileEntry {
    file: String,
    status: String,
    strokes: Option<usize>,
    subunits: Option<usize>,
    ms: u128,
}

#[derive(Serialize)]
struct RunReport {
    command: String,
    files: Vec<FileEntry>,
    ok: usize,
    failed: usize,
    notes: Vec<String>,
    accuracy: Option<f64>,
}

impl RunReport {
    fn new(command: &str) -> Self {
        Self {
            command: command.into(),
            files: Vec::new(),
            ok: 0,
            failed: 0,
            notes: Vec::new(),
            accuracy: None,
        }
    }

    fn finish(self) -> Result<()> {
        println!("{}", serde_json::to_string_pretty(&self)?);
        if self.failed > 0 {
            bail!("{} file(s) failed", self.failed);
        }
        Ok(())
    }
}

fn load_config(args: &ConfigArgs, notes: &mut Vec<String>) -> Result<Config> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            serde_json::from_str(&text).with_context(|| "parsing config")?
        }
        None => {
            notes.push("no config given; using default thresholds".into());
            Config::default()
        }
    };
    for kv in &args.set {
        let (key, value) = kv
            .split_once('=')
            .with_context(|| format!("--set expects KEY=VALUE, got {kv}"))?;
        apply_override(&mut cfg, key, value)?;
    }
    cfg.validate().map_err(|e| anyhow::anyhow!("invalid config: {e}"))?;
    for w in cfg.warnings() {
        notes.push(w);
    }
    Ok(cfg)
}

fn apply_override(cfg: &mut Config, key: &str, value: &str) -> Result<()> {
    let f = || -> Result<f64> { Ok(value.parse::<f64>()?) };
    let u = || -> Result<usize> { Ok(value.parse::<usize>()?) };
    match key {
        "tau_cw" => cfg.tau_cw = f()?,
        "tau_ccw" => cfg.tau_ccw = f()?,
        "tau_cw_ip" => cfg.tau_cw_ip = u()?,
        "tau_ccw_ip" => cfg.tau_ccw_ip = u()?,
        "tau_su_len" => cfg.tau_su_len = u()?,
        "tau_rldc" => cfg.tau_rldc = f()?,
        "tau_tdc_lower" => cfg.tau_tdc_lower = f()?,
        "tau_tdc_upper" => cfg.tau_tdc_upper = f()?,
        "tau_delta" => cfg.tau_delta = f()?,
        "tau_mdc" => cfg.tau_mdc = u()?,
        "tau_lv" => cfg.tau_lv = u()?,
        "delta" => cfg.delta = f()?,
        "epsilon" => cfg.epsilon = f()?,
        other => bail!("unknown config key {other}"),
    }
    Ok(())
}

/// Ink files under a path: the file itself, or *.json directly inside a
/// directory, skipping *.gt.json ground-truth side-cars. Sorted for
/// deterministic report order.
fn ink_files(path: &Path) -> Result<Vec<PathBuf>> {
    if path.is_file() {
        return Ok(vec![path.to_path_buf()]);
    }
    let mut out = Vec::new();
    for entry in fs::read_dir(path).with_context(|| format!("reading {}", path.display()))? {
        let p = entry?.path();
        let name = p.file_name().and_then(|s| s.to_str()).unwrap_or("");
        if p.is_file() && name.ends_with(".json") && !name.ends_with(".gt.json") {
            out.push(p);
        }
    }
    out.sort();
    Ok(out)
}

fn read_character(path: &Path) -> Result<Character> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_ink(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

fn cmd_preprocess(input: &Path, out: &Path, config: &ConfigArgs) -> Result<()> {
    let mut report = RunReport::new("preprocess");
    let cfg = load_config(config, &mut report.notes)?;
    let params = PreprocessParams {
        delta: cfg.delta,
        ..PreprocessParams::default()
    };
    fs::create_dir_all(out)?;
    for path in ink_files(input)? {
        let t0 = Instant::now();
        let name = path.file_name().unwrap().to_string_lossy().to_string();
        let result = read_character(&path)
            .and_then(|c| preprocess_character(&c, &params).map_err(|e| anyhow::anyhow!("{e}")));
        match result {
            Ok(c) => {
                fs::write(out.join(&name), serialize_ink(&c))?;
                report.files.push(FileEntry {
                    file: name,
                    status: "ok".into(),
                    strokes: Some(c.strokes.len()),
                    subunits: None,
                    ms: t0.elapsed().as_millis(),
                });
                report.ok += 1;
            }
            Err(e) => {
                report.files.push(FileEntry {
                    file: name,
                    status: format!("error: {e}"),
                    strokes: None,
                    subunits: None,
                    ms: t0.elapsed().as_millis(),
                });
                report.failed += 1;
            }
        }
    }
    report.finish()
}

fn cmd_segment(input: &Path, out: &Path, svg: bool, config: &ConfigArgs) -> Result<()> {
    let mut report = RunReport::new("segment");
    let cfg = load_config(config, &mut report.notes)?;
    fs::create_dir_all(out)?;
    for path in ink_files(input)? {
        let t0 = Instant::now();
        let name = path.file_name().unwrap().to_string_lossy().to_string();
        let stem = name.trim_end_matches(".json").to_string();
        match read_character(&path) {
            Ok(c) => {
                let results = segment_character(&c, &cfg);
                let wrapped = CharacterSegmentation::from_results(&results);
                fs::write(
                    out.join(format!("{stem}.seg.json")),
                    serde_json::to_string(&wrapped)?,
                )?;
                if svg {
                    fs::write(out.join(format!("{stem}.svg")), render_svg(&c, &results))?;
                }
                let n_sub: usize = results.iter().map(|r| r.subunits.len()).sum();
                report.files.push(FileEntry {
                    file: name,
                    status: "ok".into(),
                    strokes: Some(c.strokes.len()),
                    subunits: Some(n_sub),
                    ms: t0.elapsed().as_millis(),
                });
                report.ok += 1;
            }
            Err(e) => {
                report.files.push(FileEntry {
                    file: name,
                    status: format!("error: {e}"),
                    strokes: None,
                    subunits: None,
                    ms: t0.elapsed().as_millis(),
                });
                report.failed += 1;
            }
        }
    }
    report.finish()
}

fn cmd_synth(manifest: Option<&Path>, out: &Path, emit: Option<&Path>) -> Result<()> {
    let manifest_value: CorpusManifest = match manifest {
        Some(p) => serde_json::from_str(&fs::read_to_string(p)?)
            .with_context(|| format!("parsing manifest {}", p.display()))?,
        None => CorpusManifest::standard(),
    };
    if let Some(path) = emit {
        fs::write(path, serde_json::to_string_pretty(&manifest_value)?)?;
        println!("{{\"command\":\"synth\",\"emitted\":\"{}\"}}", path.display());
        return Ok(());
    }
    let mut report = RunReport::new("synth");
    let t0 = Instant::now();
    let samples = generate_corpus(&manifest_value)?;
    for split in ["train", "test"] {
        fs::create_dir_all(out.join(split))?;
    }
    for s in &samples {
        let split = if s.train { "train" } else { "test" };
        let stem = s.stem();
        fs::write(
            out.join(split).join(format!("{stem}.json")),
            serialize_ink(&s.character),
        )?;
        fs::write(
            out.join(split).join(format!("{stem}.gt.json")),
            serde_json::to_string(&s.truth)?,
        )?;
    }
    fs::write(
        out.join("manifest.json"),
        serde_json::to_string_pretty(&manifest_value)?,
    )?;
    report.files.push(FileEntry {
        file: out.display().to_string(),
        status: format!("ok: {} samples", samples.len()),
        strokes: None,
        subunits: None,
        ms: t0.elapsed().as_millis(),
    });
    report.ok = samples.len();
    report.finish()
}

#[derive(Serialize)]
struct EvalReport {
    features: String,
    train_samples: usize,
    test_samples: usize,
    correct: usize,
    accuracy: f64,
}

fn featurize(
    path: &Path,
    mode: &str,
    cfg: &Config,
    params: &PreprocessParams,
) -> Result<Vec<(FeatureVector, u32)>> {
    let mut out = Vec::new();
    for file in ink_files(path)? {
        let raw = read_character(&file)?;
        let label = raw
            .label
            .with_context(|| format!("{} has no label", file.display()))?;
        let c = preprocess_character(&raw, params).map_err(|e| anyhow::anyhow!("{e}"))?;
        let f = match mode {
            "global" => global_features(&c)?,
            "local+global" => {
                let seg = segment_character(&c, cfg);
                combined_features(&seg, &c, cfg)?
            }
            other => bail!("unknown feature mode {other} (use global or local+global)"),
        };
        out.push((f, label));
    }
    Ok(out)
}

fn cmd_eval(
    train: &Path,
    test: &Path,
    features: &str,
    out: Option<&Path>,
    config: &ConfigArgs,
) -> Result<()> {
    let mut report = RunReport::new("eval");
    let cfg = load_config(config, &mut report.notes)?;
    let params = PreprocessParams {
        delta: cfg.delta,
        ..PreprocessParams::default()
    };
    let train_set = featurize(train, features, &cfg, &params)?;
    let test_set = featurize(test, features, &cfg, &params)?;
    if train_set.is_empty() || test_set.is_empty() {
        bail!("empty train or test set");
    }
    let train_classes: std::collections::BTreeSet<u32> =
        train_set.iter().map(|&(_, l)| l).collect();
    for (_, l) in &test_set {
        if !train_classes.contains(l) {
            bail!("test label {l} missing from training set");
        }
    }
    let model = train_centroid(&train_set).map_err(|e| anyhow::anyhow!("{e}"))?;
    let mut correct = 0usize;
    for (f, label) in &test_set {
        let (got, _) = classify(&model, f).map_err(|e| anyhow::anyhow!("{e}"))?;
        if got == *label {
            correct += 1;
        }
    }
    let accuracy = correct as f64 / test_set.len() as f64;
    let eval = EvalReport {
        features: features.into(),
        train_samples: train_set.len(),
        test_samples: test_set.len(),
        correct,
        accuracy,
    };
    if let Some(path) = out {
        fs::write(path, serde_json::to_string_pretty(&eval)?)?;
    }
    report.accuracy = Some(accuracy);
    report.files.push(FileEntry {
        file: format!("{} vs {}", train.display(), test.display()),
        status: format!("ok: accuracy {:.4}", accuracy),
        strokes: None,
        subunits: None,
        ms: 0,
    });
    report.ok = test_set.len();
    report.finish()
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Preprocess { input, out, config } => cmd_preprocess(input, out, config),
        Command::Segment {
            input,
            out,
            svg,
            config,
        } => cmd_segment(input, out, *svg, config),
        Command::Synth {
            manifest,
            out,
            emit_manifest,
        } => cmd_synth(manifest.as_deref(), out, emit_manifest.as_deref()),
        Command::Eval {
            train,
            test,
            features,
            out,
            config,
        } => cmd_eval(train, test, features, out.as_deref(), config),
    }
}
