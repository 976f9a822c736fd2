//! Command-line front end.
//!
//! Every subcommand validates its flags and input paths before loading a
//! model, writes its output atomically, and reports failures as a one-line
//! JSON object on stderr with a kind-specific exit code.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::evaluate::{
    self, default_lt_grid, read_predictions, score, threshold_sweep, write_sweep_table, EvalError,
    GoldStandard, SweepRow,
};
use crate::generator::{self, generate_batch, GenerateError, GenerationConfig, Mode};
use crate::lexical::{EditCosts, LexicalError, RatioConvention, WeightProfile, WindowSize};
use crate::vector_model::{file_digest, ModelError, ModelFormat, VectorModel};
use crate::weights::{estimate_distributions, learn_profile, read_labeled_pairs, LearnError};

pub const MODEL_ENV: &str = "SPELLVAR_MODEL";

pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 2;
    pub const INVALID_RANGE: i32 = 3;
    pub const MISSING_INPUT: i32 = 4;
    pub const MODEL: i32 = 5;
    pub const PROFILE: i32 = 6;
    pub const LEARN: i32 = 7;
    pub const RUN: i32 = 8;
    pub const IO: i32 = 9;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    InvalidRange(String),
    #[error("input file not found: {}", .0.display())]
    MissingInput(PathBuf),
    #[error("cannot load model: {0}")]
    Model(#[from] ModelError),
    #[error("bad weight profile {}: {source}", path.display())]
    Profile { path: PathBuf, source: LexicalError },
    #[error(transparent)]
    Learn(#[from] LearnError),
    #[error(transparent)]
    Generate(#[from] GenerateError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("I/O error on {}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::InvalidRange(_) => exit::INVALID_RANGE,
            CliError::MissingInput(_) => exit::MISSING_INPUT,
            CliError::Model(_) => exit::MODEL,
            CliError::Profile { .. } => exit::PROFILE,
            CliError::Learn(_) => exit::LEARN,
            CliError::Generate(_) | CliError::Eval(_) => exit::RUN,
            CliError::Io { .. } => exit::IO,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::InvalidRange(_) => "invalid-range",
            CliError::MissingInput(_) => "missing-input",
            CliError::Model(_) => "model",
            CliError::Profile { .. } => "profile",
            CliError::Learn(_) => "learning",
            CliError::Generate(_) => "generation",
            CliError::Eval(_) => "evaluation",
            CliError::Io { .. } => "io",
        }
    }

    /// Machine-readable one-line report.
    pub fn report(&self) -> String {
        json!({
            "error": {
                "kind": self.kind(),
                "exit_code": self.exit_code(),
                "message": self.to_string(),
            }
        })
        .to_string()
    }
}

#[derive(Debug, Parser)]
#[command(name = "spellvar", version, about = "Generate spelling variants of keywords from a word-vector model")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate spelling variants for seed keywords.
    Generate(GenerateArgs),
    /// Learn a position weight profile from labelled pairs.
    LearnWeights(LearnArgs),
    /// Score predictions against a gold standard.
    Evaluate(EvaluateArgs),
    /// Precision/recall/F-scores over a grid of thresholds.
    Sweep(SweepArgs),
    /// Vocabulary tokens within min(6, len - 2) edits of each keyword.
    Candidates(CandidatesArgs),
    /// Count corpus documents matched with and without variants.
    Retrieval(RetrievalArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Structured,
    Flat,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// word2vec model file.
    #[arg(long, env = MODEL_ENV)]
    pub model: Option<PathBuf>,
    /// Model encoding: text or binary (default: binary for .bin, else text).
    #[arg(long)]
    pub format: Option<ModelFormat>,
}

#[derive(Debug, Args)]
pub struct SeedArgs {
    /// Seed keyword; repeatable.
    #[arg(long = "seed")]
    pub seeds: Vec<String>,
    /// File with one seed per line.
    #[arg(long)]
    pub seeds_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenParams {
    /// Ratio threshold against the seed, in [0, 1].
    #[arg(long, default_value_t = 0.75)]
    pub lt: f64,
    /// Neighbours fetched per expanded term.
    #[arg(long, default_value_t = 4000)]
    pub ssl: usize,
    /// default or weighted (weighted when --profile is given).
    #[arg(long)]
    pub mode: Option<Mode>,
    /// Weight profile file for weighted mode.
    #[arg(long)]
    pub profile: Option<PathBuf>,
    /// Ratio normalisation: length-sum or max-length.
    #[arg(long, default_value = "length-sum")]
    pub ratio: RatioConvention,
    /// Look seeds up exactly as given.
    #[arg(long)]
    pub no_case_fold: bool,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub out_format: Option<OutFormat>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub seeds: SeedArgs,
    #[command(flatten)]
    pub params: GenParams,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct LearnArgs {
    /// Tab-separated keyword, candidate, label (1/0) lines.
    #[arg(long)]
    pub pairs: PathBuf,
    /// Window length in characters, or "auto" for max(3, len(keyword)/2).
    #[arg(long, default_value = "auto")]
    pub window: WindowSize,
    #[arg(long, default_value_t = WeightProfile::DEFAULT_BUCKET_WIDTH)]
    pub bucket_width: f64,
    /// Maximum reward/penalty fraction k, in (0, 1].
    #[arg(long, default_value_t = 0.05)]
    pub scale: f64,
    /// Substitution cost of the window edit distance.
    #[arg(long, default_value_t = 2)]
    pub substitution_cost: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub gold: PathBuf,
    /// Flat variant file to score; otherwise variants are generated with --model.
    #[arg(long)]
    pub predictions: Option<PathBuf>,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub seeds: SeedArgs,
    #[command(flatten)]
    pub params: GenParams,
    #[arg(long, value_delimiter = ',', default_value = "1,0.25")]
    pub betas: Vec<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub gold: PathBuf,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub seeds: SeedArgs,
    #[command(flatten)]
    pub params: GenParams,
    /// Comma-separated thresholds (default 0.55 to 0.95 step 0.05).
    #[arg(long, value_delimiter = ',')]
    pub lt_grid: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1,0.25")]
    pub betas: Vec<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CandidatesArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Vocabulary file, one token per line (instead of --model).
    #[arg(long)]
    pub vocab: Option<PathBuf>,
    #[command(flatten)]
    pub seeds: SeedArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RetrievalArgs {
    /// UTF-8 corpus, one document per line.
    #[arg(long)]
    pub corpus: PathBuf,
    #[command(flatten)]
    pub seeds: SeedArgs,
    /// Flat variant file whose variants extend the keyword set.
    #[arg(long)]
    pub variants: Option<PathBuf>,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub params: GenParams,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Parse `args` and run; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => exit::OK,
        Err(e) => {
            eprintln!("{}", e.report());
            e.exit_code()
        }
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::LearnWeights(args) => cmd_learn_weights(args),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Candidates(args) => cmd_candidates(args),
        Command::Retrieval(args) => cmd_retrieval(args),
    }
}

fn require_file(path: &Path) -> Result<(), CliError> {
    if path.is_file() {
        Ok(())
    } else {
        Err(CliError::MissingInput(path.to_path_buf()))
    }
}

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path).map(BufReader::new).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn model_path(args: &ModelArgs) -> Result<&Path, CliError> {
    args.model
        .as_deref()
        .ok_or_else(|| CliError::Usage(format!("--model is required (or set {MODEL_ENV})")))
}

#[derive(Debug, Serialize)]
struct ModelInfo {
    format: String,
    digest: String,
    vocab_size: usize,
    dim: usize,
}

fn load_model(path: &Path, format: Option<ModelFormat>) -> Result<(VectorModel, ModelInfo), CliError> {
    let format = format.unwrap_or_else(|| ModelFormat::infer(path));
    let model = VectorModel::load(path, format)?;
    let digest = file_digest(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let info = ModelInfo {
        format: format.to_string(),
        digest,
        vocab_size: model.len(),
        dim: model.dim(),
    };
    Ok((model, info))
}

fn read_lines(path: &Path) -> Result<Vec<String>, CliError> {
    let mut out = Vec::new();
    for line in open(path)?.lines() {
        let line = line.map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let line = line.trim();
        if !line.is_empty() && !line.starts_with('#') {
            out.push(line.to_string());
        }
    }
    Ok(out)
}

impl SeedArgs {
    fn check(&self) -> Result<(), CliError> {
        if let Some(path) = &self.seeds_file {
            require_file(path)?;
        }
        Ok(())
    }

    fn is_given(&self) -> bool {
        !self.seeds.is_empty() || self.seeds_file.is_some()
    }

    fn collect(&self) -> Result<Vec<String>, CliError> {
        let mut seeds = self.seeds.clone();
        if let Some(path) = &self.seeds_file {
            seeds.extend(read_lines(path)?);
        }
        if seeds.is_empty() {
            return Err(CliError::Usage("no seeds given; use --seed or --seeds-file".into()));
        }
        Ok(seeds)
    }
}

impl GenParams {
    /// Checks ranges and flag consistency; returns the effective mode.
    fn check(&self) -> Result<Mode, CliError> {
        if !(0.0..=1.0).contains(&self.lt) {
            return Err(CliError::InvalidRange(format!("--lt {} outside [0, 1]", self.lt)));
        }
        if self.ssl == 0 {
            return Err(CliError::InvalidRange("--ssl must be at least 1".into()));
        }
        let mode = match (self.mode, &self.profile) {
            (None, Some(_)) | (Some(Mode::Weighted), Some(_)) => Mode::Weighted,
            (None, None) | (Some(Mode::Default), None) => Mode::Default,
            (Some(Mode::Weighted), None) => {
                return Err(CliError::Usage("--mode weighted requires --profile".into()))
            }
            (Some(Mode::Default), Some(_)) => {
                return Err(CliError::Usage(
                    "--profile conflicts with --mode default".into(),
                ))
            }
        };
        if let Some(path) = &self.profile {
            require_file(path)?;
        }
        Ok(mode)
    }

    fn load_profile(&self) -> Result<Option<WeightProfile>, CliError> {
        let Some(path) = &self.profile else {
            return Ok(None);
        };
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        WeightProfile::from_text(&text)
            .map(Some)
            .map_err(|source| CliError::Profile {
                path: path.clone(),
                source,
            })
    }

    fn config(&self, mode: Mode, profile: Option<WeightProfile>) -> GenerationConfig {
        GenerationConfig {
            ssl: self.ssl,
            lt: self.lt,
            mode,
            profile,
            convention: self.ratio,
            case_fold: !self.no_case_fold,
        }
    }
}

/// Write to `path` through a temporary file in the same directory, or to stdout.
fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    let Some(path) = path else {
        let mut stdout = io::stdout().lock();
        return stdout
            .write_all(bytes)
            .and_then(|_| stdout.flush())
            .map_err(|source| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            });
    };
    let io_err = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(bytes).map_err(io_err)?;
    tmp.as_file().sync_all().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("report is serialisable");
    out.push(b'\n');
    out
}

pub fn cmd_generate(args: GenerateArgs) -> Result<(), CliError> {
    let mode = args.params.check()?;
    let model_path = model_path(&args.model)?;
    require_file(model_path)?;
    args.seeds.check()?;
    let seeds = args.seeds.collect()?;
    let profile = args.params.load_profile()?;
    let config = args.params.config(mode, profile);
    config.validate()?;

    let (model, info) = load_model(model_path, args.model.format)?;
    let batch = generate_batch(&seeds, &model, &config)?;
    for seed in &batch.skipped {
        eprintln!("{}", json!({ "warning": "out-of-vocabulary seed", "seed": seed }));
    }

    let bytes = match args.output.out_format.unwrap_or(OutFormat::Structured) {
        OutFormat::Structured => to_json(&json!({
            "model": info,
            "config": config.echo(),
            "results": batch.results.values().collect::<Vec<_>>(),
            "skipped": batch.skipped,
        })),
        OutFormat::Flat => {
            let mut buf = Vec::new();
            generator::write_flat(&mut buf, batch.results.values()).expect("write to memory");
            buf
        }
    };
    write_output(args.output.out.as_deref(), &bytes)
}

pub fn cmd_learn_weights(args: LearnArgs) -> Result<(), CliError> {
    if !(args.scale > 0.0 && args.scale <= 1.0) {
        return Err(CliError::InvalidRange(format!("--scale {} outside (0, 1]", args.scale)));
    }
    if !(args.bucket_width > 0.0 && args.bucket_width <= 1.0) {
        return Err(CliError::InvalidRange(format!(
            "--bucket-width {} outside (0, 1]",
            args.bucket_width
        )));
    }
    require_file(&args.pairs)?;
    let pairs = read_labeled_pairs(open(&args.pairs)?)?;
    let costs = EditCosts {
        substitution: args.substitution_cost,
        ..EditCosts::RATIO
    };
    let dist = estimate_distributions(&pairs, args.window, args.bucket_width, &costs)?;
    let profile = learn_profile(&dist, args.scale)?;

    let join = |v: Vec<f64>| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let text = format!(
        "# mean window distance per bucket, true misspellings: {}\n# mean window distance per bucket, false positives: {}\n{}",
        join(dist.tpldist()),
        join(dist.fpldist()),
        profile.to_text()
    );
    write_output(args.out.as_deref(), text.as_bytes())
}

fn load_gold(path: &Path) -> Result<GoldStandard, CliError> {
    Ok(GoldStandard::read(open(path)?)?)
}

pub fn cmd_evaluate(args: EvaluateArgs) -> Result<(), CliError> {
    require_file(&args.gold)?;
    let gold = load_gold(&args.gold)?;

    let (predictions, provenance) = match &args.predictions {
        Some(path) => {
            require_file(path)?;
            (read_predictions(open(path)?)?, None)
        }
        None => {
            let mode = args.params.check()?;
            let model_path = model_path(&args.model)?;
            require_file(model_path)?;
            args.seeds.check()?;
            let seeds = if args.seeds.is_given() {
                args.seeds.collect()?
            } else {
                gold.keywords().map(str::to_string).collect()
            };
            let config = args.params.config(mode, args.params.load_profile()?);
            config.validate()?;
            let (model, info) = load_model(model_path, args.model.format)?;
            let batch = generate_batch(&seeds, &model, &config)?;
            let predictions: BTreeMap<String, BTreeSet<String>> = batch
                .results
                .iter()
                .map(|(seed, set)| (seed.clone(), set.tokens().map(str::to_string).collect()))
                .collect();
            let provenance = json!({ "model": info, "config": config.echo(), "skipped": batch.skipped });
            (predictions, Some(provenance))
        }
    };

    let report = score(&predictions, &gold, &args.betas)?;
    let bytes = match args.output.out_format.unwrap_or(OutFormat::Structured) {
        OutFormat::Structured => to_json(&json!({ "run": provenance, "report": report })),
        OutFormat::Flat => {
            let mut out = String::from("keyword\ttp\tfp\tfn\tprecision\trecall");
            for &b in &args.betas {
                out.push('\t');
                out.push_str(&evaluate::f_column(b));
            }
            out.push('\n');
            let rows = report
                .per_keyword
                .iter()
                .map(|(k, m)| (k.as_str(), m))
                .chain(std::iter::once(("*micro*", &report.micro)));
            for (name, m) in rows {
                out.push_str(&format!(
                    "{name}\t{}\t{}\t{}\t{}\t{}",
                    m.counts.tp, m.counts.fp, m.counts.fn_, m.precision, m.recall
                ));
                for f in &m.f_scores {
                    out.push_str(&format!("\t{}", f.value));
                }
                out.push('\n');
            }
            out.into_bytes()
        }
    };
    write_output(args.output.out.as_deref(), &bytes)
}

pub fn cmd_sweep(args: SweepArgs) -> Result<(), CliError> {
    let grid = if args.lt_grid.is_empty() {
        default_lt_grid()
    } else {
        args.lt_grid.clone()
    };
    if let Some(bad) = grid.iter().find(|lt| !(0.0..=1.0).contains(*lt)) {
        return Err(CliError::InvalidRange(format!("--lt-grid value {bad} outside [0, 1]")));
    }
    // sweeps ignore --lt; run every requested mode, both when a profile is given
    let modes = match (args.params.mode, &args.params.profile) {
        (Some(Mode::Weighted), None) => {
            return Err(CliError::Usage("--mode weighted requires --profile".into()))
        }
        (Some(m), _) => vec![m],
        (None, Some(_)) => vec![Mode::Default, Mode::Weighted],
        (None, None) => vec![Mode::Default],
    };
    if args.params.ssl == 0 {
        return Err(CliError::InvalidRange("--ssl must be at least 1".into()));
    }
    require_file(&args.gold)?;
    if let Some(path) = &args.params.profile {
        require_file(path)?;
    }
    let model_path = model_path(&args.model)?;
    require_file(model_path)?;
    args.seeds.check()?;

    let gold = load_gold(&args.gold)?;
    let seeds = if args.seeds.is_given() {
        args.seeds.collect()?
    } else {
        gold.keywords().map(str::to_string).collect()
    };
    let profile = args.params.load_profile()?;
    let (model, info) = load_model(model_path, args.model.format)?;

    let mut rows: Vec<SweepRow> = Vec::new();
    for mode in modes {
        let template = args.params.config(mode, profile.clone());
        rows.extend(threshold_sweep(&seeds, &model, &template, &gold, &grid, &args.betas)?);
    }

    let bytes = match args.output.out_format.unwrap_or(OutFormat::Flat) {
        OutFormat::Flat => {
            let mut buf = Vec::new();
            write_sweep_table(&mut buf, &rows, &args.betas).expect("write to memory");
            buf
        }
        OutFormat::Structured => to_json(&json!({ "model": info, "rows": rows })),
    };
    write_output(args.output.out.as_deref(), &bytes)
}

pub fn cmd_candidates(args: CandidatesArgs) -> Result<(), CliError> {
    args.seeds.check()?;
    let keywords = args.seeds.collect()?;
    for k in &keywords {
        evaluate::candidate_threshold(k)?;
    }
    let vocab: Vec<String> = match (&args.vocab, &args.model.model) {
        // an explicit vocabulary wins over a model from the environment
        (Some(path), _) => {
            require_file(path)?;
            read_lines(path)?
                .into_iter()
                .filter_map(|l| l.split_whitespace().next().map(str::to_string))
                .collect()
        }
        (None, Some(path)) => {
            require_file(path)?;
            load_model(path, args.model.format)?.0.vocab().to_vec()
        }
        (None, None) => {
            return Err(CliError::Usage(format!(
                "a vocabulary is required: --vocab or --model (or set {MODEL_ENV})"
            )))
        }
    };

    let mut results = BTreeMap::new();
    for keyword in &keywords {
        let found = evaluate::fuzzy_candidates(keyword, vocab.iter().map(String::as_str))?;
        results.insert(keyword.clone(), found);
    }
    let bytes = match args.output.out_format.unwrap_or(OutFormat::Flat) {
        OutFormat::Flat => {
            let mut out = String::from("keyword\tcandidate\tdistance\n");
            for (k, found) in &results {
                for (c, d) in found {
                    out.push_str(&format!("{k}\t{c}\t{d}\n"));
                }
            }
            out.into_bytes()
        }
        OutFormat::Structured => {
            let doc: BTreeMap<_, _> = results
                .iter()
                .map(|(k, found)| {
                    let threshold = evaluate::candidate_threshold(k).expect("checked above");
                    let items: Vec<_> = found
                        .iter()
                        .map(|(c, d)| json!({ "candidate": c, "distance": d }))
                        .collect();
                    (k.clone(), json!({ "threshold": threshold, "candidates": items }))
                })
                .collect();
            to_json(&doc)
        }
    };
    write_output(args.output.out.as_deref(), &bytes)
}

pub fn cmd_retrieval(args: RetrievalArgs) -> Result<(), CliError> {
    require_file(&args.corpus)?;
    args.seeds.check()?;
    if let Some(path) = &args.variants {
        require_file(path)?;
    }
    let mode = args.params.check()?;
    if let (None, Some(path)) = (&args.variants, &args.model.model) {
        require_file(path)?;
    }
    let seeds = args.seeds.collect()?;

    let extra: Vec<String> = match (&args.variants, &args.model.model) {
        (Some(path), _) => read_predictions(open(path)?)?
            .into_values()
            .flatten()
            .collect(),
        (None, Some(path)) => {
            let config = args.params.config(mode, args.params.load_profile()?);
            config.validate()?;
            let (model, _) = load_model(path, args.model.format)?;
            let batch = generate_batch(&seeds, &model, &config)?;
            batch
                .results
                .values()
                .flat_map(|set| set.tokens().map(str::to_string).collect::<Vec<_>>())
                .collect()
        }
        (None, None) => Vec::new(),
    };

    let report = evaluate::retrieval_report(open(&args.corpus)?, &seeds, &extra)?;
    let bytes = match args.output.out_format.unwrap_or(OutFormat::Structured) {
        OutFormat::Structured => to_json(&report),
        OutFormat::Flat => format!(
            "base_keywords\texpanded_keywords\tbase_count\texpanded_count\tgain\n{}\t{}\t{}\t{}\t{}\n",
            report.base_keywords, report.expanded_keywords, report.base_count, report.expanded_count, report.gain
        )
        .into_bytes(),
    };
    write_output(args.output.out.as_deref(), &bytes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("spellvar").chain(args.iter().copied())).unwrap()
    }

    fn params(args: &[&str]) -> GenParams {
        match parse(&[&["generate"], args].concat()).command {
            Command::Generate(g) => g.params,
            _ => unreachable!(),
        }
    }

    #[test]
    fn defaults_mirror_the_test_configuration() {
        let p = params(&[]);
        assert_eq!((p.lt, p.ssl), (0.75, 4000));
        assert_eq!(p.check().unwrap(), Mode::Default);
        match parse(&["learn-weights", "--pairs", "x"]).command {
            Command::LearnWeights(l) => {
                assert_eq!(l.scale, 0.05);
                assert_eq!(l.bucket_width, 0.2);
                assert_eq!(l.window, WindowSize::Auto);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn mode_resolution() {
        assert!(matches!(params(&["--lt", "1.5"]).check(), Err(CliError::InvalidRange(_))));
        assert!(matches!(params(&["--ssl", "0"]).check(), Err(CliError::InvalidRange(_))));
        assert!(matches!(params(&["--mode", "weighted"]).check(), Err(CliError::Usage(_))));
        assert!(matches!(
            params(&["--mode", "default", "--profile", "p"]).check(),
            Err(CliError::Usage(_))
        ));
        assert!(matches!(
            params(&["--profile", "/nonexistent/p.toml"]).check(),
            Err(CliError::MissingInput(_))
        ));
    }

    #[test]
    fn error_report_is_json() {
        let e = CliError::InvalidRange("--lt 1.5 outside [0, 1]".into());
        let v: serde_json::Value = serde_json::from_str(&e.report()).unwrap();
        assert_eq!(v["error"]["kind"], "invalid-range");
        assert_eq!(v["error"]["exit_code"], exit::INVALID_RANGE);
    }
}
