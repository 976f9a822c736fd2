//! Gold standards, precision/recall/F-beta scoring, threshold sweeps,
//! fuzzy candidate extraction and corpus retrieval counting.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::{self, BufRead, Read, Write};

use serde::Serialize;
use thiserror::Error;

use crate::generator::{generate_batch, GenerateError, GenerationConfig, Mode};
use crate::lexical::{edit_distance_chars, EditCosts};
use crate::vector_model::VectorModel;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("gold standard is empty")]
    EmptyGold,
    #[error("gold standard line {line}: {message}")]
    GoldFormat { line: u64, message: String },
    #[error("predicted keywords missing from the gold standard: {}", .0.join(", "))]
    UnknownKeywords(Vec<String>),
    #[error("beta must be positive and finite, got {0}")]
    InvalidBeta(f64),
    #[error("threshold {0} outside [0, 1]")]
    InvalidThreshold(f64),
    #[error("no thresholds to sweep")]
    NoThresholds,
    #[error("keyword '{0}' is shorter than 3 characters; the edit-distance threshold would be non-positive")]
    KeywordTooShort(String),
    #[error("no keywords given")]
    NoKeywords,
    #[error("keyword '{0}' contains no alphanumeric token")]
    InvalidKeyword(String),
    #[error("retrieval gain is undefined for a base count of zero")]
    ZeroBaseCount,
    #[error(transparent)]
    Generate(#[from] GenerateError),
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
}

/// Keyword to its set of true misspellings.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GoldStandard {
    entries: BTreeMap<String, BTreeSet<String>>,
}

impl GoldStandard {
    /// Build from `(keyword, misspelling)` pairs; self-pairs are rejected.
    pub fn from_pairs<I, K, V>(pairs: I) -> Result<Self, EvalError>
    where
        I: IntoIterator<Item = (K, V)>,
        K: Into<String>,
        V: Into<String>,
    {
        let mut gold = GoldStandard::default();
        for (i, (k, v)) in pairs.into_iter().enumerate() {
            gold.insert(i as u64 + 1, k.into(), Some(v.into()))?;
        }
        Ok(gold)
    }

    fn insert(&mut self, line: u64, keyword: String, misspelling: Option<String>) -> Result<(), EvalError> {
        if keyword.is_empty() {
            return Err(EvalError::GoldFormat {
                line,
                message: "empty keyword".into(),
            });
        }
        if misspelling.as_deref() == Some(keyword.as_str()) {
            return Err(EvalError::GoldFormat {
                line,
                message: format!("'{keyword}' listed as its own misspelling"),
            });
        }
        let set = self.entries.entry(keyword).or_default();
        if let Some(m) = misspelling.filter(|m| !m.is_empty()) {
            set.insert(m);
        }
        Ok(())
    }

    /// Tab-separated `keyword, misspelling` lines. A line holding only a
    /// keyword registers it with no misspellings; `#` starts a comment.
    pub fn read<R: Read>(reader: R) -> Result<Self, EvalError> {
        let mut gold = GoldStandard::default();
        for (line, fields) in read_tsv(reader)? {
            let mut fields = fields.into_iter();
            let keyword = fields.next().unwrap_or_default();
            let misspelling = fields.next();
            if fields.next().is_some() {
                return Err(EvalError::GoldFormat {
                    line,
                    message: "expected at most 2 tab-separated fields".into(),
                });
            }
            gold.insert(line, keyword, misspelling)?;
        }
        Ok(gold)
    }

    pub fn keywords(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn misspellings(&self, keyword: &str) -> Option<&BTreeSet<String>> {
        self.entries.get(keyword)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Reads tab-separated records, skipping blank and `#` lines, trimming fields.
fn read_tsv<R: Read>(reader: R) -> Result<Vec<(u64, Vec<String>)>, EvalError> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .quoting(false)
        .from_reader(reader);
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => EvalError::Io(io),
            other => EvalError::GoldFormat {
                line: 0,
                message: format!("{other:?}"),
            },
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let fields: Vec<String> = record.iter().map(|f| f.trim().to_string()).collect();
        if fields.iter().all(String::is_empty) {
            continue;
        }
        rows.push((line, fields));
    }
    Ok(rows)
}

/// Predictions from a flat `seed, variant, ...` file (header row optional).
pub fn read_predictions<R: Read>(reader: R) -> Result<BTreeMap<String, BTreeSet<String>>, EvalError> {
    let mut out: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for (i, (line, fields)) in read_tsv(reader)?.into_iter().enumerate() {
        if i == 0 && fields.first().map(String::as_str) == Some("seed") {
            continue;
        }
        let mut it = fields.into_iter();
        let seed = it.next().unwrap_or_default();
        let set = out.entry(seed).or_default();
        match it.next() {
            Some(v) if !v.is_empty() => {
                set.insert(v);
            }
            _ => {
                return Err(EvalError::GoldFormat {
                    line,
                    message: "prediction line without a variant".into(),
                })
            }
        }
    }
    Ok(out)
}

/// Raw confusion counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl Counts {
    fn add(&mut self, other: Counts) {
        self.tp += other.tp;
        self.fp += other.fp;
        self.fn_ += other.fn_;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FScore {
    pub beta: f64,
    pub value: f64,
}

/// Precision, recall and F-scores derived from one set of counts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metrics {
    #[serde(flatten)]
    pub counts: Counts,
    pub precision: f64,
    pub recall: f64,
    pub f_scores: Vec<FScore>,
    /// Metrics whose denominator was zero and were defined as 0.
    pub undefined: Vec<&'static str>,
}

impl Metrics {
    pub fn from_counts(counts: Counts, betas: &[f64]) -> Self {
        let mut undefined = Vec::new();
        let precision = ratio_or_zero(counts.tp, counts.tp + counts.fp, "precision", &mut undefined);
        let recall = ratio_or_zero(counts.tp, counts.tp + counts.fn_, "recall", &mut undefined);
        let f_scores = betas
            .iter()
            .map(|&beta| FScore {
                beta,
                value: f_beta(precision, recall, beta),
            })
            .collect();
        Metrics {
            counts,
            precision,
            recall,
            f_scores,
            undefined,
        }
    }

    pub fn f(&self, beta: f64) -> Option<f64> {
        self.f_scores.iter().find(|f| f.beta == beta).map(|f| f.value)
    }
}

fn ratio_or_zero(num: u64, den: u64, name: &'static str, undefined: &mut Vec<&'static str>) -> f64 {
    if den == 0 {
        undefined.push(name);
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// `(1 + b^2) * P * R / (b^2 * P + R)`, or 0 when the denominator vanishes.
pub fn f_beta(precision: f64, recall: f64, beta: f64) -> f64 {
    let b2 = beta * beta;
    let den = b2 * precision + recall;
    if den == 0.0 {
        0.0
    } else {
        (1.0 + b2) * precision * recall / den
    }
}

/// Macro averages over keywords.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MacroAverage {
    pub precision: f64,
    pub recall: f64,
    pub f_scores: Vec<FScore>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    /// Micro-averaged (pooled) metrics.
    #[serde(flatten)]
    pub micro: Metrics,
    #[serde(rename = "macro")]
    pub macro_avg: MacroAverage,
    pub per_keyword: BTreeMap<String, Metrics>,
}

impl EvalReport {
    pub fn counts(&self) -> Counts {
        self.micro.counts
    }

    pub fn precision(&self) -> f64 {
        self.micro.precision
    }

    pub fn recall(&self) -> f64 {
        self.micro.recall
    }
}

fn check_betas(betas: &[f64]) -> Result<(), EvalError> {
    match betas.iter().find(|b| !(b.is_finite() && **b > 0.0)) {
        Some(&b) => Err(EvalError::InvalidBeta(b)),
        None => Ok(()),
    }
}

/// Score predicted variants against the gold standard, pooling counts over
/// all gold keywords. Gold keywords without predictions count as all misses.
pub fn score(
    predictions: &BTreeMap<String, BTreeSet<String>>,
    gold: &GoldStandard,
    betas: &[f64],
) -> Result<EvalReport, EvalError> {
    if gold.is_empty() {
        return Err(EvalError::EmptyGold);
    }
    check_betas(betas)?;
    let unknown: Vec<String> = predictions
        .keys()
        .filter(|k| !gold.entries.contains_key(*k))
        .cloned()
        .collect();
    if !unknown.is_empty() {
        return Err(EvalError::UnknownKeywords(unknown));
    }

    let empty = BTreeSet::new();
    let mut total = Counts::default();
    let mut per_keyword = BTreeMap::new();
    for (keyword, truth) in &gold.entries {
        let predicted = predictions.get(keyword).unwrap_or(&empty);
        let tp = predicted.intersection(truth).count() as u64;
        let counts = Counts {
            tp,
            fp: predicted.len() as u64 - tp,
            fn_: truth.len() as u64 - tp,
        };
        total.add(counts);
        per_keyword.insert(keyword.clone(), Metrics::from_counts(counts, betas));
    }

    let n = per_keyword.len() as f64;
    let macro_avg = MacroAverage {
        precision: per_keyword.values().map(|m| m.precision).sum::<f64>() / n,
        recall: per_keyword.values().map(|m| m.recall).sum::<f64>() / n,
        f_scores: betas
            .iter()
            .enumerate()
            .map(|(i, &beta)| FScore {
                beta,
                value: per_keyword.values().map(|m| m.f_scores[i].value).sum::<f64>() / n,
            })
            .collect(),
    };
    Ok(EvalReport {
        micro: Metrics::from_counts(total, betas),
        macro_avg,
        per_keyword,
    })
}

/// One row of a threshold sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub mode: Mode,
    pub lt: f64,
    #[serde(flatten)]
    pub metrics: Metrics,
}

/// The default threshold grid: 0.55 to 0.95 in steps of 0.05.
pub fn default_lt_grid() -> Vec<f64> {
    (0..9).map(|i| (55 + 5 * i) as f64 / 100.0).collect()
}

/// Generate and score once per threshold, keeping everything else from `template`.
pub fn threshold_sweep<S: AsRef<str> + Sync>(
    seeds: &[S],
    model: &VectorModel,
    template: &GenerationConfig,
    gold: &GoldStandard,
    lt_values: &[f64],
    betas: &[f64],
) -> Result<Vec<SweepRow>, EvalError> {
    if lt_values.is_empty() {
        return Err(EvalError::NoThresholds);
    }
    if let Some(&bad) = lt_values.iter().find(|lt| !(0.0..=1.0).contains(*lt)) {
        return Err(EvalError::InvalidThreshold(bad));
    }
    check_betas(betas)?;
    lt_values
        .iter()
        .map(|&lt| {
            let config = GenerationConfig {
                lt,
                ..template.clone()
            };
            let batch = generate_batch(seeds, model, &config)?;
            let predictions = batch
                .results
                .into_iter()
                .map(|(seed, set)| {
                    let tokens = set.tokens().map(str::to_string).collect();
                    (seed, tokens)
                })
                .collect();
            let report = score(&predictions, gold, betas)?;
            Ok(SweepRow {
                mode: template.mode,
                lt,
                metrics: report.micro,
            })
        })
        .collect()
}

/// Column name for an F-score, e.g. `f_1` or `f_0.25`.
pub fn f_column(beta: f64) -> String {
    format!("f_{beta}")
}

/// Tab-separated sweep table with header
/// `mode, lt, tp, fp, fn, precision, recall, f_<beta>...`.
pub fn write_sweep_table<W: Write>(mut writer: W, rows: &[SweepRow], betas: &[f64]) -> io::Result<()> {
    let mut header = vec!["mode", "lt", "tp", "fp", "fn", "precision", "recall"]
        .into_iter()
        .map(str::to_string)
        .collect::<Vec<_>>();
    header.extend(betas.iter().map(|&b| f_column(b)));
    writeln!(writer, "{}", header.join("\t"))?;
    for row in rows {
        let m = &row.metrics;
        write!(
            writer,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            row.mode, row.lt, m.counts.tp, m.counts.fp, m.counts.fn_, m.precision, m.recall
        )?;
        for &beta in betas {
            write!(writer, "\t{}", m.f(beta).unwrap_or(0.0))?;
        }
        writeln!(writer)?;
    }
    writer.flush()
}

/// Maximum edit distance used when collecting annotation candidates:
/// `min(6, len(keyword) - 2)`.
pub fn candidate_threshold(keyword: &str) -> Result<u32, EvalError> {
    let len = keyword.chars().count();
    if len < 3 {
        return Err(EvalError::KeywordTooShort(keyword.to_string()));
    }
    Ok((len as u32 - 2).min(6))
}

/// Vocabulary tokens within the candidate threshold of `keyword` under unit
/// edit costs, sorted by distance then token.
pub fn fuzzy_candidates<'a, I>(keyword: &str, vocabulary: I) -> Result<Vec<(String, u32)>, EvalError>
where
    I: IntoIterator<Item = &'a str>,
{
    let threshold = candidate_threshold(keyword)?;
    let key: Vec<char> = keyword.chars().collect();
    let mut buf = Vec::new();
    let mut out = Vec::new();
    for token in vocabulary {
        if token == keyword {
            continue;
        }
        buf.clear();
        buf.extend(token.chars());
        // the length difference is a lower bound on the distance
        if key.len().abs_diff(buf.len()) as u32 > threshold {
            continue;
        }
        let d = edit_distance_chars(&key, &buf, &EditCosts::UNIT);
        if d <= threshold {
            out.push((token.to_string(), d));
        }
    }
    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    out.dedup();
    Ok(out)
}

/// Lowercased runs of alphanumeric characters.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

/// Whole-token keyword matcher; multi-token keywords match as contiguous
/// token sequences.
#[derive(Debug, Clone)]
pub struct KeywordMatcher {
    by_first: HashMap<String, Vec<Vec<String>>>,
}

impl KeywordMatcher {
    pub fn new<I, S>(keywords: I) -> Result<Self, EvalError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut by_first: HashMap<String, Vec<Vec<String>>> = HashMap::new();
        for keyword in keywords {
            let tokens = tokenize(keyword.as_ref());
            let Some(first) = tokens.first().cloned() else {
                return Err(EvalError::InvalidKeyword(keyword.as_ref().to_string()));
            };
            by_first.entry(first).or_default().push(tokens);
        }
        if by_first.is_empty() {
            return Err(EvalError::NoKeywords);
        }
        Ok(KeywordMatcher { by_first })
    }

    pub fn matches(&self, document: &str) -> bool {
        let tokens = tokenize(document);
        tokens.iter().enumerate().any(|(i, t)| {
            self.by_first.get(t).is_some_and(|seqs| {
                seqs.iter()
                    .any(|seq| tokens.len() - i >= seq.len() && tokens[i..i + seq.len()] == seq[..])
            })
        })
    }
}

const LINES_PER_CHUNK: usize = 16 * 1024;

/// Number of lines (documents) containing at least one keyword.
pub fn retrieval_count<R: BufRead>(corpus: R, matcher: &KeywordMatcher) -> Result<u64, EvalError> {
    let mut total = 0u64;
    let mut chunk = Vec::with_capacity(LINES_PER_CHUNK);
    let mut lines = corpus.lines();
    loop {
        chunk.clear();
        for line in lines.by_ref().take(LINES_PER_CHUNK) {
            chunk.push(line?);
        }
        if chunk.is_empty() {
            break;
        }
        total += count_chunk(&chunk, matcher);
    }
    Ok(total)
}

#[cfg(feature = "parallel")]
fn count_chunk(chunk: &[String], matcher: &KeywordMatcher) -> u64 {
    use rayon::prelude::*;
    chunk.par_iter().filter(|doc| matcher.matches(doc)).count() as u64
}

#[cfg(not(feature = "parallel"))]
fn count_chunk(chunk: &[String], matcher: &KeywordMatcher) -> u64 {
    chunk.iter().filter(|doc| matcher.matches(doc)).count() as u64
}

/// Fractional increase `(expanded - base) / base`.
pub fn retrieval_gain(base_count: u64, expanded_count: u64) -> Result<f64, EvalError> {
    if base_count == 0 {
        return Err(EvalError::ZeroBaseCount);
    }
    Ok((expanded_count as f64 - base_count as f64) / base_count as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RetrievalReport {
    pub base_keywords: usize,
    pub expanded_keywords: usize,
    pub base_count: u64,
    pub expanded_count: u64,
    pub gain: f64,
}

/// Count matches for `base` keywords and for `base` plus `extra`, in one pass.
pub fn retrieval_report<R, S, T>(corpus: R, base: &[S], extra: &[T]) -> Result<RetrievalReport, EvalError>
where
    R: BufRead,
    S: AsRef<str>,
    T: AsRef<str>,
{
    let base_set: BTreeSet<String> = base.iter().map(|k| k.as_ref().to_lowercase()).collect();
    let mut expanded_set = base_set.clone();
    expanded_set.extend(extra.iter().map(|k| k.as_ref().to_lowercase()));
    let base_matcher = KeywordMatcher::new(&base_set)?;
    let expanded_matcher = KeywordMatcher::new(&expanded_set)?;

    let (mut base_count, mut expanded_count) = (0u64, 0u64);
    for line in corpus.lines() {
        let line = line?;
        if base_matcher.matches(&line) {
            base_count += 1;
            expanded_count += 1;
        } else if expanded_matcher.matches(&line) {
            expanded_count += 1;
        }
    }
    Ok(RetrievalReport {
        base_keywords: base_set.len(),
        expanded_keywords: expanded_set.len(),
        base_count,
        expanded_count,
        gain: retrieval_gain(base_count, expanded_count)?,
    })
}
