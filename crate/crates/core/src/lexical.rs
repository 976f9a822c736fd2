//! Edit distances and similarity ratios over Unicode scalar values.
//!
//! Two ratio flavours are provided: the plain Levenshtein ratio, and a
//! position-weighted variant that slides a window over both strings and
//! combines the per-window ratios with the weights of a [`WeightProfile`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

/// Slack used when mapping a relative position onto a bucket, so that values
/// such as `0.6 / 0.2` land in bucket 3 rather than 2.
const BUCKET_EPS: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum LexicalError {
    #[error("similarity ratio is undefined for two empty strings")]
    BothEmpty,
    #[error("invalid weight profile: {0}")]
    InvalidProfile(String),
    #[error("cannot parse weight profile: {0}")]
    ProfileParse(String),
}

/// Per-operation costs for [`edit_distance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EditCosts {
    pub insertion: u32,
    pub deletion: u32,
    pub substitution: u32,
}

impl EditCosts {
    /// Unit costs for every operation; used for fuzzy candidate search.
    pub const UNIT: EditCosts = EditCosts {
        insertion: 1,
        deletion: 1,
        substitution: 1,
    };

    /// Substitution counts as two edits; the convention behind the ratio.
    pub const RATIO: EditCosts = EditCosts {
        insertion: 1,
        deletion: 1,
        substitution: 2,
    };

    /// True when a substitution costs more than a deletion plus an insertion,
    /// in which case the distance degenerates to indel distance.
    pub fn substitution_unused(&self) -> bool {
        self.substitution > self.insertion + self.deletion
    }
}

impl Default for EditCosts {
    fn default() -> Self {
        EditCosts::RATIO
    }
}

/// Cheapest cost of transforming `a` into `b` under `costs`.
pub fn edit_distance(a: &str, b: &str, costs: &EditCosts) -> u32 {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    edit_distance_chars(&a, &b, costs)
}

/// Two-row Wagner-Fischer over character slices.
pub fn edit_distance_chars(a: &[char], b: &[char], costs: &EditCosts) -> u32 {
    if a.is_empty() {
        return b.len() as u32 * costs.insertion;
    }
    if b.is_empty() {
        return a.len() as u32 * costs.deletion;
    }

    // prev[j] = distance between a[..i] and b[..j]
    let mut prev: Vec<u32> = (0..=b.len() as u32).map(|j| j * costs.insertion).collect();
    let mut cur = vec![0u32; b.len() + 1];

    for (i, &ca) in a.iter().enumerate() {
        cur[0] = (i as u32 + 1) * costs.deletion;
        for (j, &cb) in b.iter().enumerate() {
            let sub = if ca == cb { 0 } else { costs.substitution };
            cur[j + 1] = (prev[j] + sub)
                .min(prev[j + 1] + costs.deletion)
                .min(cur[j] + costs.insertion);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// How the edit distance is normalised into a ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RatioConvention {
    /// `(len(a) + len(b) - d) / (len(a) + len(b))` with substitution cost 2.
    #[default]
    LengthSum,
    /// `1 - d / max(len(a), len(b))` with substitution cost 2, floored at 0.
    MaxLength,
}

impl fmt::Display for RatioConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RatioConvention::LengthSum => f.write_str("length-sum"),
            RatioConvention::MaxLength => f.write_str("max-length"),
        }
    }
}

impl FromStr for RatioConvention {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "length-sum" | "sum" => Ok(RatioConvention::LengthSum),
            "max-length" | "max" => Ok(RatioConvention::MaxLength),
            other => Err(format!("unknown ratio convention '{other}'")),
        }
    }
}

/// Levenshtein ratio under the default (length-sum) convention.
pub fn lev_ratio(a: &str, b: &str) -> Result<f64, LexicalError> {
    lev_ratio_with(a, b, RatioConvention::LengthSum)
}

pub fn lev_ratio_with(a: &str, b: &str, convention: RatioConvention) -> Result<f64, LexicalError> {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    ratio_chars(&a, &b, convention)
}

pub(crate) fn ratio_chars(
    a: &[char],
    b: &[char],
    convention: RatioConvention,
) -> Result<f64, LexicalError> {
    if a.is_empty() && b.is_empty() {
        return Err(LexicalError::BothEmpty);
    }
    let dist = f64::from(edit_distance_chars(a, b, &EditCosts::RATIO));
    let ratio = match convention {
        RatioConvention::LengthSum => {
            let total = (a.len() + b.len()) as f64;
            (total - dist) / total
        }
        RatioConvention::MaxLength => {
            let longest = a.len().max(b.len()) as f64;
            (1.0 - dist / longest).max(0.0)
        }
    };
    Ok(ratio)
}

/// Number of buckets covering `[0, 1]` at the given width.
pub fn bucket_count(bucket_width: f64) -> usize {
    ((1.0 / bucket_width) - BUCKET_EPS).ceil().max(1.0) as usize
}

/// Bucket index of window start `p` out of `count` window positions.
///
/// The relative position is `p / (count - 1)`; a single window (and `p = 0`)
/// maps to bucket 0, relative position 1 to the last bucket.
pub fn relative_position_bucket(p: usize, count: usize, bucket_width: f64) -> usize {
    debug_assert!(p < count.max(1));
    let buckets = bucket_count(bucket_width);
    if count <= 1 {
        return 0;
    }
    let relative = p as f64 / (count - 1) as f64;
    let idx = (relative / bucket_width + BUCKET_EPS).floor() as usize;
    idx.min(buckets - 1)
}

/// Sliding-window length, either fixed or derived from the keyword length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WindowSize {
    /// `max(3, len(keyword) / 2)` characters.
    #[default]
    Auto,
    Fixed(usize),
}

impl WindowSize {
    pub fn resolve(self, keyword_len: usize) -> usize {
        match self {
            WindowSize::Auto => (keyword_len / 2).max(3),
            WindowSize::Fixed(n) => n,
        }
    }
}

impl fmt::Display for WindowSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WindowSize::Auto => f.write_str("auto"),
            WindowSize::Fixed(n) => write!(f, "{n}"),
        }
    }
}

impl FromStr for WindowSize {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(WindowSize::Auto);
        }
        match s.parse::<usize>() {
            Ok(0) => Err("window length must be at least 1".to_string()),
            Ok(n) => Ok(WindowSize::Fixed(n)),
            Err(_) => Err(format!("invalid window length '{s}'")),
        }
    }
}

// serialized as an integer or the string "auto"
impl Serialize for WindowSize {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            WindowSize::Auto => serializer.serialize_str("auto"),
            WindowSize::Fixed(n) => serializer.serialize_u64(*n as u64),
        }
    }
}

impl<'de> Deserialize<'de> for WindowSize {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(u64),
            Str(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Int(0) => Err(serde::de::Error::custom("window length must be at least 1")),
            Raw::Int(n) => Ok(WindowSize::Fixed(n as usize)),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Learned per-bucket weights for the windowed ratio.
///
/// Weights are indexed by relative-position bucket and lie in
/// `[1 - scale, 1 + scale]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightProfile {
    bucket_width: f64,
    window: WindowSize,
    scale: f64,
    weights: Vec<f64>,
}

impl WeightProfile {
    pub const DEFAULT_BUCKET_WIDTH: f64 = 0.2;

    pub fn new(
        bucket_width: f64,
        window: WindowSize,
        scale: f64,
        weights: Vec<f64>,
    ) -> Result<Self, LexicalError> {
        let profile = WeightProfile {
            bucket_width,
            window,
            scale,
            weights,
        };
        profile.validate()?;
        Ok(profile)
    }

    /// All weights equal to one.
    pub fn uniform(window: WindowSize, bucket_width: f64) -> Result<Self, LexicalError> {
        check_bucket_width(bucket_width)?;
        Self::new(bucket_width, window, 0.0, vec![1.0; bucket_count(bucket_width)])
    }

    pub fn bucket_width(&self) -> f64 {
        self.bucket_width
    }

    pub fn window(&self) -> WindowSize {
        self.window
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn validate(&self) -> Result<(), LexicalError> {
        check_bucket_width(self.bucket_width)?;
        if let WindowSize::Fixed(0) = self.window {
            return Err(LexicalError::InvalidProfile("window length must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.scale) {
            return Err(LexicalError::InvalidProfile(format!(
                "scale {} outside [0, 1]",
                self.scale
            )));
        }
        let expected = bucket_count(self.bucket_width);
        if self.weights.len() != expected {
            return Err(LexicalError::InvalidProfile(format!(
                "expected {expected} weights for bucket width {}, found {}",
                self.bucket_width,
                self.weights.len()
            )));
        }
        let (lo, hi) = (1.0 - self.scale - 1e-9, 1.0 + self.scale + 1e-9);
        for (i, &w) in self.weights.iter().enumerate() {
            if !w.is_finite() || w <= 0.0 {
                return Err(LexicalError::InvalidProfile(format!(
                    "weight {i} must be strictly positive, found {w}"
                )));
            }
            if w < lo || w > hi {
                return Err(LexicalError::InvalidProfile(format!(
                    "weight {i} = {w} outside [1 - scale, 1 + scale]"
                )));
            }
        }
        Ok(())
    }

    /// Serialise as a flat `key = value` document.
    pub fn to_text(&self) -> String {
        toml::to_string(self).expect("weight profile is always serialisable")
    }

    pub fn from_text(text: &str) -> Result<Self, LexicalError> {
        let profile: WeightProfile =
            toml::from_str(text).map_err(|e| LexicalError::ProfileParse(e.to_string()))?;
        profile.validate()?;
        Ok(profile)
    }

    /// Hex SHA-256 of the serialised profile.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_text().as_bytes()))
    }
}

fn check_bucket_width(bucket_width: f64) -> Result<(), LexicalError> {
    if bucket_width.is_finite() && bucket_width > 0.0 && bucket_width <= 1.0 {
        Ok(())
    } else {
        Err(LexicalError::InvalidProfile(format!(
            "bucket width {bucket_width} outside (0, 1]"
        )))
    }
}

/// Window start positions shared by two strings: `max(1, L - n + 1)` where
/// `L` is the longer length.
pub(crate) fn window_count(a_len: usize, b_len: usize, window: usize) -> usize {
    let longest = a_len.max(b_len);
    (longest + 1).saturating_sub(window).max(1)
}

/// Window of `s` starting at `p`, clamped at the end of the string.
pub(crate) fn window_slice(s: &[char], p: usize, window: usize) -> &[char] {
    let start = p.min(s.len());
    let end = (p + window).min(s.len());
    &s[start..end]
}

/// Position-weighted ratio: the weighted mean of per-window ratios.
///
/// `a` is taken as the keyword when the profile's window is [`WindowSize::Auto`].
pub fn weighted_lev_ratio(a: &str, b: &str, profile: &WeightProfile) -> Result<f64, LexicalError> {
    weighted_lev_ratio_with(a, b, profile, RatioConvention::LengthSum)
}

pub fn weighted_lev_ratio_with(
    a: &str,
    b: &str,
    profile: &WeightProfile,
    convention: RatioConvention,
) -> Result<f64, LexicalError> {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    weighted_ratio_chars(&a, &b, profile, convention)
}

pub(crate) fn weighted_ratio_chars(
    a: &[char],
    b: &[char],
    profile: &WeightProfile,
    convention: RatioConvention,
) -> Result<f64, LexicalError> {
    if a.is_empty() && b.is_empty() {
        return Err(LexicalError::BothEmpty);
    }
    let n = profile.window.resolve(a.len());
    let count = window_count(a.len(), b.len(), n);
    let mut num = 0.0;
    let mut den = 0.0;
    for p in 0..count {
        let ratio = ratio_chars(window_slice(a, p, n), window_slice(b, p, n), convention)?;
        let w = profile.weights[relative_position_bucket(p, count, profile.bucket_width)];
        num += w * ratio;
        den += w;
    }
    Ok(num / den)
}

/// One window's contribution to a weighted ratio.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WindowScore {
    pub start: usize,
    pub bucket: usize,
    pub weight: f64,
    pub left: String,
    pub right: String,
    pub ratio: f64,
}

/// Per-window breakdown of [`weighted_lev_ratio_with`], in window order.
pub fn window_breakdown(
    a: &str,
    b: &str,
    profile: &WeightProfile,
    convention: RatioConvention,
) -> Result<Vec<WindowScore>, LexicalError> {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() && b.is_empty() {
        return Err(LexicalError::BothEmpty);
    }
    let n = profile.window.resolve(a.len());
    let count = window_count(a.len(), b.len(), n);
    (0..count)
        .map(|p| {
            let (left, right) = (window_slice(&a, p, n), window_slice(&b, p, n));
            let bucket = relative_position_bucket(p, count, profile.bucket_width);
            Ok(WindowScore {
                start: p,
                bucket,
                weight: profile.weights[bucket],
                left: left.iter().collect(),
                right: right.iter().collect(),
                ratio: ratio_chars(left, right, convention)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit() -> EditCosts {
        EditCosts::UNIT
    }

    #[test]
    fn distance_examples() {
        assert_eq!(edit_distance("diazepam", "diazapam", &unit()), 1);
        assert_eq!(edit_distance("diazepam", "diazapam", &EditCosts::RATIO), 2);
        assert_eq!(edit_distance("xanax", "xanax", &EditCosts::RATIO), 0);
        assert_eq!(edit_distance("xanax", "xanax", &unit()), 0);
        assert_eq!(edit_distance("klonopin", "klonodine", &EditCosts::RATIO), 3);
    }

    #[test]
    fn distance_empty_strings() {
        assert_eq!(edit_distance("", "", &unit()), 0);
        assert_eq!(edit_distance("", "abc", &unit()), 3);
        let costs = EditCosts {
            insertion: 2,
            deletion: 3,
            substitution: 1,
        };
        assert_eq!(edit_distance("", "ab", &costs), 4);
        assert_eq!(edit_distance("ab", "", &costs), 6);
    }

    #[test]
    fn asymmetric_costs_are_directional() {
        let costs = EditCosts {
            insertion: 1,
            deletion: 5,
            substitution: 10,
        };
        assert_eq!(edit_distance("a", "ab", &costs), 1);
        assert_eq!(edit_distance("ab", "a", &costs), 5);
    }

    #[test]
    fn unicode_counts_scalar_values() {
        assert_eq!(edit_distance("café", "cafe", &unit()), 1);
        assert_eq!(lev_ratio("naïve", "naïve").unwrap(), 1.0);
    }

    #[test]
    fn substitution_unused_flag() {
        assert!(!EditCosts::RATIO.substitution_unused());
        assert!(EditCosts {
            insertion: 1,
            deletion: 1,
            substitution: 3
        }
        .substitution_unused());
    }

    #[test]
    fn ratio_anchors() {
        assert_eq!(lev_ratio("klonopin", "klonipin").unwrap(), 0.875);
        assert!((lev_ratio("klonopin", "klonodine").unwrap() - 14.0 / 17.0).abs() < 1e-12);
        assert_eq!(lev_ratio("xanax", "xanax").unwrap(), 1.0);
        // zanax: one substitution, cost 2 over a length sum of 10
        assert_eq!(lev_ratio("xanax", "zanax").unwrap(), 0.8);
    }

    #[test]
    fn max_length_convention() {
        let r = lev_ratio_with("klonopin", "klonodine", RatioConvention::MaxLength).unwrap();
        assert!((r - (1.0 - 3.0 / 9.0)).abs() < 1e-12);
        // distance 2*3 over length 3 would go negative
        assert_eq!(lev_ratio_with("abc", "xyz", RatioConvention::MaxLength).unwrap(), 0.0);
    }

    #[test]
    fn ratio_of_two_empty_strings_is_an_error() {
        assert_eq!(lev_ratio("", ""), Err(LexicalError::BothEmpty));
        assert_eq!(lev_ratio("", "a").unwrap(), 0.0);
    }

    #[test]
    fn bucket_examples() {
        assert_eq!(relative_position_bucket(0, 10, 0.2), 0);
        assert_eq!(relative_position_bucket(9, 10, 0.2), 4);
        assert_eq!(relative_position_bucket(4, 10, 0.2), 2);
        assert_eq!(relative_position_bucket(0, 1, 0.2), 0);
        // 6/10 = 0.6 sits on a bucket boundary
        assert_eq!(relative_position_bucket(6, 11, 0.2), 3);
        assert_eq!(bucket_count(0.2), 5);
        assert_eq!(bucket_count(0.3), 4);
        assert_eq!(bucket_count(1.0), 1);
    }

    #[test]
    fn window_resolution() {
        assert_eq!(WindowSize::Auto.resolve(10), 5);
        assert_eq!(WindowSize::Auto.resolve(5), 3);
        assert_eq!(WindowSize::Fixed(4).resolve(100), 4);
        assert_eq!("auto".parse::<WindowSize>().unwrap(), WindowSize::Auto);
        assert!("0".parse::<WindowSize>().is_err());
    }

    #[test]
    fn clamped_windows_pair_empty_with_nonempty() {
        let profile = WeightProfile::uniform(WindowSize::Fixed(3), 0.2).unwrap();
        let rows = window_breakdown("abc", "abcdefg", &profile, RatioConvention::LengthSum).unwrap();
        assert_eq!(rows.len(), 5);
        assert_eq!(rows[0].ratio, 1.0);
        assert_eq!(rows[3].left, "");
        assert_eq!(rows[3].right, "def");
        assert_eq!(rows[3].ratio, 0.0);
        assert_eq!(rows[4].bucket, 4);
    }

    #[test]
    fn weighted_identical_strings_score_one() {
        let profile =
            WeightProfile::new(0.2, WindowSize::Fixed(3), 0.5, vec![1.5, 0.5, 1.0, 1.2, 0.7]).unwrap();
        assert!((weighted_lev_ratio("paroxetine", "paroxetine", &profile).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn front_loaded_profile_penalises_shared_suffix() {
        let front = WeightProfile::new(
            0.2,
            WindowSize::Fixed(5),
            0.05,
            vec![1.05, 1.025, 1.0, 0.975, 0.95],
        )
        .unwrap();
        let uniform = WeightProfile::uniform(WindowSize::Fixed(5), 0.2).unwrap();
        let weighted = weighted_lev_ratio("paroxetine", "duloxetine", &front).unwrap();
        let plain = weighted_lev_ratio("paroxetine", "duloxetine", &uniform).unwrap();
        assert!(weighted < plain, "{weighted} !< {plain}");
    }

    #[test]
    fn profile_validation() {
        assert!(WeightProfile::new(0.2, WindowSize::Auto, 0.05, vec![1.0; 4]).is_err());
        assert!(WeightProfile::new(0.2, WindowSize::Auto, 0.05, vec![1.1, 1.0, 1.0, 1.0, 1.0]).is_err());
        assert!(WeightProfile::new(0.0, WindowSize::Auto, 0.05, vec![]).is_err());
        assert!(WeightProfile::new(0.2, WindowSize::Fixed(0), 0.05, vec![1.0; 5]).is_err());
        assert!(WeightProfile::new(0.2, WindowSize::Auto, 1.5, vec![1.0; 5]).is_err());
        assert!(WeightProfile::new(0.2, WindowSize::Auto, 1.0, vec![0.0, 1.0, 1.0, 1.0, 2.0]).is_err());
    }

    #[test]
    fn profile_text_format() {
        let profile =
            WeightProfile::new(0.2, WindowSize::Fixed(4), 0.05, vec![1.05, 1.0, 1.0, 1.0, 0.95]).unwrap();
        let text = profile.to_text();
        assert_eq!(
            text,
            "bucket_width = 0.2\nwindow = 4\nscale = 0.05\nweights = [1.05, 1.0, 1.0, 1.0, 0.95]\n"
        );
        assert_eq!(WeightProfile::from_text(&text).unwrap(), profile);

        let auto = WeightProfile::uniform(WindowSize::Auto, 0.2).unwrap();
        assert!(auto.to_text().contains("window = \"auto\""));
        assert_eq!(WeightProfile::from_text(&auto.to_text()).unwrap(), auto);
        assert_ne!(auto.digest(), profile.digest());
    }

    #[test]
    fn profile_parse_errors() {
        assert!(matches!(
            WeightProfile::from_text("bucket_width = 0.2\n"),
            Err(LexicalError::ProfileParse(_))
        ));
        assert!(matches!(
            WeightProfile::from_text("bucket_width = 0.2\nwindow = 3\nscale = 0.05\nweights = [1.0]\n"),
            Err(LexicalError::InvalidProfile(_))
        ));
    }

    proptest! {
        #[test]
        fn ratios_stay_in_unit_interval(a in "[a-e]{0,10}", b in "[a-e]{1,10}", n in 1usize..6) {
            let r = lev_ratio(&a, &b).unwrap();
            prop_assert!((0.0..=1.0).contains(&r));
            let m = lev_ratio_with(&a, &b, RatioConvention::MaxLength).unwrap();
            prop_assert!((0.0..=1.0).contains(&m));
            let profile = WeightProfile::new(0.2, WindowSize::Fixed(n), 0.3, vec![1.3, 0.7, 1.0, 1.1, 0.9]).unwrap();
            let w = weighted_lev_ratio(&a, &b, &profile).unwrap();
            prop_assert!((0.0..=1.0 + 1e-12).contains(&w));
        }

        #[test]
        fn ratio_is_one_iff_equal(a in "[ab]{0,6}", b in "[ab]{1,6}") {
            let r = lev_ratio(&a, &b).unwrap();
            prop_assert_eq!(r == 1.0, a == b);
        }

        #[test]
        fn symmetric_under_equal_indel_costs(a in "[abc]{0,8}", b in "[abc]{1,8}", sub in 0u32..4, n in 1usize..5) {
            let costs = EditCosts { insertion: 2, deletion: 2, substitution: sub };
            prop_assert_eq!(edit_distance(&a, &b, &costs), edit_distance(&b, &a, &costs));
            prop_assert_eq!(lev_ratio(&a, &b).unwrap(), lev_ratio(&b, &a).unwrap());
            let profile = WeightProfile::new(0.2, WindowSize::Fixed(n), 0.2, vec![1.2, 0.8, 1.0, 1.1, 0.9]).unwrap();
            let ab = weighted_lev_ratio(&a, &b, &profile).unwrap();
            let ba = weighted_lev_ratio(&b, &a, &profile).unwrap();
            prop_assert!((ab - ba).abs() < 1e-12);
        }

        #[test]
        fn triangle_inequality(a in "[abc]{0,7}", b in "[abc]{0,7}", c in "[abc]{0,7}") {
            let d = |x: &str, y: &str| edit_distance(x, y, &EditCosts::UNIT);
            prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c));
        }

        #[test]
        fn profile_text_round_trips(
            w in proptest::collection::vec(0.5f64..1.5, 5),
            n in proptest::option::of(1usize..20),
        ) {
            let window = n.map_or(WindowSize::Auto, WindowSize::Fixed);
            let profile = WeightProfile::new(0.2, window, 0.5, w).unwrap();
            prop_assert_eq!(WeightProfile::from_text(&profile.to_text()).unwrap(), profile);
        }
    }
}
