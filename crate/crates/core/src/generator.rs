//! Recursive spelling-variant generation.
//!
//! Starting from a seed, each expanded term contributes its `ssl` nearest
//! neighbours in embedding space; neighbours whose lexical ratio against the
//! *seed* reaches `lt` are accepted and expanded in turn. Because acceptance
//! only depends on the seed, the process reaches a fixpoint once every
//! reachable qualifying token has been seen.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::lexical::{ratio_chars, weighted_ratio_chars, RatioConvention, WeightProfile};
use crate::vector_model::VectorModel;

#[derive(Debug, Error, PartialEq)]
pub enum GenerateError {
    #[error(
        "seed '{0}' is not in the model vocabulary; try `candidates` for a fuzzy vocabulary search"
    )]
    OutOfVocabulary(String),
    #[error("invalid generation config: {0}")]
    Config(String),
    #[error("no seeds given")]
    NoSeeds,
    #[error("none of the {} seeds are in the model vocabulary: {}", .0.len(), .0.join(", "))]
    AllOutOfVocabulary(Vec<String>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Plain Levenshtein ratio.
    #[default]
    Default,
    /// Position-weighted ratio from a learned profile.
    Weighted,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Default => f.write_str("default"),
            Mode::Weighted => f.write_str("weighted"),
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "default" | "plain" => Ok(Mode::Default),
            "weighted" => Ok(Mode::Weighted),
            other => Err(format!("unknown mode '{other}' (expected default or weighted)")),
        }
    }
}

/// Seed-independent generation parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationConfig {
    /// Neighbours fetched per expanded term.
    pub ssl: usize,
    /// Minimum ratio against the seed.
    pub lt: f64,
    pub mode: Mode,
    /// Required when `mode` is [`Mode::Weighted`].
    pub profile: Option<WeightProfile>,
    pub convention: RatioConvention,
    /// Lowercase seeds before lookup.
    pub case_fold: bool,
}

impl Default for GenerationConfig {
    fn default() -> Self {
        GenerationConfig {
            ssl: 4000,
            lt: 0.75,
            mode: Mode::Default,
            profile: None,
            convention: RatioConvention::LengthSum,
            case_fold: true,
        }
    }
}

impl GenerationConfig {
    pub fn weighted(profile: WeightProfile) -> Self {
        GenerationConfig {
            mode: Mode::Weighted,
            profile: Some(profile),
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<(), GenerateError> {
        if self.ssl == 0 {
            return Err(GenerateError::Config("ssl must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.lt) {
            return Err(GenerateError::Config(format!("lt {} outside [0, 1]", self.lt)));
        }
        match (&self.mode, &self.profile) {
            (Mode::Weighted, None) => Err(GenerateError::Config(
                "weighted mode requires a weight profile".into(),
            )),
            (Mode::Weighted, Some(p)) => p
                .validate()
                .map_err(|e| GenerateError::Config(e.to_string())),
            (Mode::Default, _) => Ok(()),
        }
    }

    /// Serialisable summary of the configuration for output provenance.
    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            ssl: self.ssl,
            lt: self.lt,
            mode: self.mode,
            convention: self.convention,
            case_fold: self.case_fold,
            profile_digest: match self.mode {
                Mode::Weighted => self.profile.as_ref().map(WeightProfile::digest),
                Mode::Default => None,
            },
        }
    }

    fn normalise_seed(&self, seed: &str) -> String {
        if self.case_fold {
            seed.to_lowercase()
        } else {
            seed.to_string()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub ssl: usize,
    pub lt: f64,
    pub mode: Mode,
    pub convention: RatioConvention,
    pub case_fold: bool,
    pub profile_digest: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Variant {
    pub token: String,
    /// Lexical ratio against the seed.
    pub ratio: f64,
    /// Cosine similarity to the seed.
    pub cosine: f64,
}

/// Variants of one seed, sorted by ratio descending then token ascending.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariantSet {
    pub seed: String,
    pub variants: Vec<Variant>,
}

impl VariantSet {
    pub fn tokens(&self) -> impl Iterator<Item = &str> {
        self.variants.iter().map(|v| v.token.as_str())
    }

    pub fn len(&self) -> usize {
        self.variants.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variants.is_empty()
    }
}

/// One popped frontier term and the variants it newly discovered.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Expansion {
    pub term: String,
    pub discovered: Vec<String>,
}

pub fn generate_variants(
    seed: &str,
    model: &VectorModel,
    config: &GenerationConfig,
) -> Result<VariantSet, GenerateError> {
    run(seed, model, config, None)
}

/// Like [`generate_variants`], also returning the order in which terms were
/// expanded and what each expansion discovered.
pub fn generate_with_trace(
    seed: &str,
    model: &VectorModel,
    config: &GenerationConfig,
) -> Result<(VariantSet, Vec<Expansion>), GenerateError> {
    let mut trace = Vec::new();
    let set = run(seed, model, config, Some(&mut trace))?;
    Ok((set, trace))
}

fn run(
    seed: &str,
    model: &VectorModel,
    config: &GenerationConfig,
    mut trace: Option<&mut Vec<Expansion>>,
) -> Result<VariantSet, GenerateError> {
    config.validate()?;
    let seed = config.normalise_seed(seed);
    let seed_id = model
        .id(&seed)
        .ok_or_else(|| GenerateError::OutOfVocabulary(seed.clone()))?;
    let seed_chars: Vec<char> = seed.chars().collect();

    let mut ratios: HashMap<usize, f64> = HashMap::new();
    let mut ratio_to_seed = |id: usize| -> f64 {
        *ratios.entry(id).or_insert_with(|| {
            let token: Vec<char> = model.token(id).chars().collect();
            let r = match (config.mode, &config.profile) {
                (Mode::Weighted, Some(profile)) => {
                    weighted_ratio_chars(&seed_chars, &token, profile, config.convention)
                }
                _ => ratio_chars(&seed_chars, &token, config.convention),
            };
            // vocabulary tokens are never empty, so the ratio is defined
            r.unwrap_or(0.0)
        })
    };

    let mut frontier = vec![seed_id];
    let mut seen: HashSet<usize> = HashSet::from([seed_id]);
    let mut accepted: Vec<(usize, f64)> = Vec::new();

    while let Some(term) = frontier.pop() {
        let mut discovered = Vec::new();
        for (neighbor, _) in model.most_similar_ids(term, config.ssl) {
            if seen.contains(&neighbor) {
                continue;
            }
            let ratio = ratio_to_seed(neighbor);
            if ratio >= config.lt {
                seen.insert(neighbor);
                accepted.push((neighbor, ratio));
                frontier.push(neighbor);
                discovered.push(neighbor);
            }
        }
        if let Some(trace) = trace.as_deref_mut() {
            trace.push(Expansion {
                term: model.token(term).to_string(),
                discovered: discovered.iter().map(|&id| model.token(id).to_string()).collect(),
            });
        }
    }

    let mut variants: Vec<Variant> = accepted
        .into_iter()
        .map(|(id, ratio)| Variant {
            token: model.token(id).to_string(),
            ratio,
            cosine: model.cosine_ids(seed_id, id),
        })
        .collect();
    variants.sort_by(|a, b| b.ratio.total_cmp(&a.ratio).then_with(|| a.token.cmp(&b.token)));
    Ok(VariantSet { seed, variants })
}

/// Results of a multi-seed run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatchOutput {
    pub results: BTreeMap<String, VariantSet>,
    /// Seeds missing from the vocabulary, as given.
    pub skipped: Vec<String>,
}

pub fn generate_batch<S: AsRef<str> + Sync>(
    seeds: &[S],
    model: &VectorModel,
    config: &GenerationConfig,
) -> Result<BatchOutput, GenerateError> {
    if seeds.is_empty() {
        return Err(GenerateError::NoSeeds);
    }
    config.validate()?;

    let one = |seed: &S| (seed.as_ref().to_string(), generate_variants(seed.as_ref(), model, config));
    #[cfg(feature = "parallel")]
    let outcomes: Vec<_> = {
        use rayon::prelude::*;
        seeds.par_iter().map(one).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let outcomes: Vec<_> = seeds.iter().map(one).collect();

    let mut results = BTreeMap::new();
    let mut skipped = Vec::new();
    for (seed, outcome) in outcomes {
        match outcome {
            Ok(set) => {
                results.insert(set.seed.clone(), set);
            }
            Err(GenerateError::OutOfVocabulary(_)) => skipped.push(seed),
            Err(e) => return Err(e),
        }
    }
    if results.is_empty() {
        return Err(GenerateError::AllOutOfVocabulary(skipped));
    }
    Ok(BatchOutput { results, skipped })
}

/// Tab-separated `seed, variant, ratio, cosine` with a header row.
pub fn write_flat<'a, W, I>(mut writer: W, sets: I) -> io::Result<()>
where
    W: Write,
    I: IntoIterator<Item = &'a VariantSet>,
{
    writeln!(writer, "seed\tvariant\tratio\tcosine")?;
    for set in sets {
        for v in &set.variants {
            writeln!(writer, "{}\t{}\t{}\t{}", set.seed, v.token, v.ratio, v.cosine)?;
        }
    }
    writer.flush()
}
