//! Browser demo over the bundled toy data.
//!
//! Each operation is a plain function returning a JSON string so it can be
//! tested natively; the `#[wasm_bindgen]` exports are thin wrappers.

use std::sync::OnceLock;

use serde_json::{json, Value};
use spellvar::evaluate::{self, threshold_sweep, GoldStandard};
use spellvar::lexical::{
    edit_distance, lev_ratio_with, weighted_lev_ratio, window_breakdown, EditCosts,
    RatioConvention, WeightProfile, WindowSize,
};
use spellvar::weights::{estimate_distributions, learn_profile, read_labeled_pairs};
use spellvar::{generator, GenerationConfig, Mode, VectorModel};
use wasm_bindgen::prelude::*;

const TOY_MODEL: &str = include_str!("../../../data/toy/toy_model.txt");
const TOY_PAIRS: &str = include_str!("../../../data/toy/toy_pairs.tsv");
const TOY_GOLD: &str = include_str!("../../../data/toy/toy_gold.tsv");

fn model() -> &'static VectorModel {
    static MODEL: OnceLock<VectorModel> = OnceLock::new();
    MODEL.get_or_init(|| VectorModel::read_text(TOY_MODEL.as_bytes()).expect("bundled model parses"))
}

/// Profile learned from the bundled labelled pairs.
fn toy_profile() -> &'static WeightProfile {
    static PROFILE: OnceLock<WeightProfile> = OnceLock::new();
    PROFILE.get_or_init(|| {
        let pairs = read_labeled_pairs(TOY_PAIRS.as_bytes()).expect("bundled pairs parse");
        let dist = estimate_distributions(&pairs, WindowSize::Auto, 0.2, &EditCosts::RATIO)
            .expect("bundled pairs cover every bucket");
        learn_profile(&dist, 0.05).expect("bundled pairs give a profile")
    })
}

fn gold() -> &'static GoldStandard {
    static GOLD: OnceLock<GoldStandard> = OnceLock::new();
    GOLD.get_or_init(|| GoldStandard::read(TOY_GOLD.as_bytes()).expect("bundled gold parses"))
}

fn error(message: impl ToString) -> String {
    json!({ "error": message.to_string() }).to_string()
}

/// Profile used by weighted operations: `profile_text` if non-empty, else the toy profile.
fn profile_from(profile_text: &str) -> Result<WeightProfile, String> {
    if profile_text.trim().is_empty() {
        Ok(toy_profile().clone())
    } else {
        WeightProfile::from_text(profile_text).map_err(|e| e.to_string())
    }
}

pub fn toy_info_json() -> String {
    let m = model();
    json!({
        "vocab_size": m.len(),
        "dim": m.dim(),
        "keywords": gold().keywords().collect::<Vec<_>>(),
        "profile": toy_profile().to_text(),
    })
    .to_string()
}

/// Plain, max-length and weighted ratios of `a` and `b`, with the per-window breakdown.
pub fn compare_json(a: &str, b: &str, profile_text: &str) -> String {
    let run = || -> Result<Value, String> {
        let profile = profile_from(profile_text)?;
        let err = |e: spellvar::lexical::LexicalError| e.to_string();
        Ok(json!({
            "distance_unit": edit_distance(a, b, &EditCosts::UNIT),
            "distance_ratio": edit_distance(a, b, &EditCosts::RATIO),
            "ratio": lev_ratio_with(a, b, RatioConvention::LengthSum).map_err(err)?,
            "ratio_max": lev_ratio_with(a, b, RatioConvention::MaxLength).map_err(err)?,
            "weighted": weighted_lev_ratio(a, b, &profile).map_err(err)?,
            "window": profile.window().resolve(a.chars().count()),
            "windows": window_breakdown(a, b, &profile, RatioConvention::LengthSum).map_err(err)?,
        }))
    };
    run().map_or_else(error, |v| v.to_string())
}

fn demo_config(lt: f64, ssl: usize, weighted: bool, profile_text: &str) -> Result<GenerationConfig, String> {
    let mut config = if weighted {
        GenerationConfig::weighted(profile_from(profile_text)?)
    } else {
        GenerationConfig::default()
    };
    config.lt = lt;
    config.ssl = ssl;
    config.validate().map_err(|e| e.to_string())?;
    Ok(config)
}

/// Variants of `seed` in the toy model, with the expansion trace.
pub fn generate_json(seed: &str, lt: f64, ssl: usize, weighted: bool, profile_text: &str) -> String {
    let run = || -> Result<Value, String> {
        let config = demo_config(lt, ssl, weighted, profile_text)?;
        let (set, trace) =
            generator::generate_with_trace(seed, model(), &config).map_err(|e| e.to_string())?;
        let gold_set = gold().misspellings(&set.seed);
        let variants: Vec<Value> = set
            .variants
            .iter()
            .map(|v| {
                json!({
                    "token": v.token,
                    "ratio": v.ratio,
                    "cosine": v.cosine,
                    "gold": gold_set.map(|g| g.contains(&v.token)),
                })
            })
            .collect();
        Ok(json!({ "seed": set.seed, "variants": variants, "trace": trace }))
    };
    run().map_or_else(error, |v| v.to_string())
}

/// Precision, recall and F scores on the toy gold over the default threshold grid.
pub fn sweep_json(ssl: usize, weighted: bool, profile_text: &str) -> String {
    let run = || -> Result<Value, String> {
        let template = demo_config(0.75, ssl, weighted, profile_text)?;
        let seeds: Vec<&str> = gold().keywords().collect();
        let rows = threshold_sweep(
            &seeds,
            model(),
            &template,
            gold(),
            &evaluate::default_lt_grid(),
            &[1.0, 0.25],
        )
        .map_err(|e| e.to_string())?;
        let mode = if template.mode == Mode::Weighted { "weighted" } else { "default" };
        Ok(json!({ "mode": mode, "rows": rows }))
    };
    run().map_or_else(error, |v| v.to_string())
}

#[wasm_bindgen]
pub fn toy_info() -> String {
    toy_info_json()
}

#[wasm_bindgen]
pub fn compare(a: &str, b: &str, profile_text: &str) -> String {
    compare_json(a, b, profile_text)
}

#[wasm_bindgen]
pub fn generate(seed: &str, lt: f64, ssl: usize, weighted: bool, profile_text: &str) -> String {
    generate_json(seed, lt, ssl, weighted, profile_text)
}

#[wasm_bindgen]
pub fn sweep(ssl: usize, weighted: bool, profile_text: &str) -> String {
    sweep_json(ssl, weighted, profile_text)
}
