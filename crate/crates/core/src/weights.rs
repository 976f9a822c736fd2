//! Learning a [`WeightProfile`] from labelled keyword/candidate pairs.
//!
//! For every pair, a window slides over both strings and the edit distance
//! of each window is accumulated into the bucket of its relative position,
//! separately for true misspellings and false positives. The per-bucket
//! ratio `false mean / true mean` is normalised by its median and mapped into
//! the `[1 - k, 1 + k]` band.

use std::io::Read;

use thiserror::Error;

use crate::lexical::{
    bucket_count, edit_distance_chars, relative_position_bucket, window_count, window_slice,
    EditCosts, LexicalError, WeightProfile, WindowSize,
};

/// Smallest weight a learned profile may carry; keeps the weighted mean
/// defined when `k = 1`.
pub const MIN_WEIGHT: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum LearnError {
    #[error("labelled pair {index}: {message}")]
    InvalidPair { index: usize, message: String },
    #[error("no {0} pairs in the training data; both classes are required")]
    MissingClass(Class),
    #[error(
        "bucket {bucket} has no {class} windows; use a larger dataset or a wider bucket width"
    )]
    EmptyBucket { bucket: usize, class: Class },
    #[error(
        "bucket {bucket} has zero mean distance for true misspellings; use a larger dataset or a wider bucket width"
    )]
    ZeroTrueDistance { bucket: usize },
    #[error("median distance ratio is zero; the false-positive distances carry no signal")]
    ZeroMedian,
    #[error("scale must lie in (0, 1], got {0}")]
    InvalidScale(f64),
    #[error(transparent)]
    Profile(#[from] LexicalError),
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("cannot read labelled pairs: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Class {
    TrueMisspelling,
    FalsePositive,
}

impl std::fmt::Display for Class {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Class::TrueMisspelling => f.write_str("true-misspelling"),
            Class::FalsePositive => f.write_str("false-positive"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledPair {
    pub keyword: String,
    pub candidate: String,
    pub is_misspelling: bool,
}

impl LabeledPair {
    pub fn new(keyword: impl Into<String>, candidate: impl Into<String>, is_misspelling: bool) -> Self {
        LabeledPair {
            keyword: keyword.into(),
            candidate: candidate.into(),
            is_misspelling,
        }
    }

    fn check(&self, index: usize) -> Result<(), LearnError> {
        let message = if self.keyword.is_empty() || self.candidate.is_empty() {
            "keyword and candidate must be non-empty"
        } else if self.keyword == self.candidate {
            "candidate equals the keyword"
        } else {
            return Ok(());
        };
        Err(LearnError::InvalidPair {
            index,
            message: message.to_string(),
        })
    }
}

/// Tab-separated `keyword, candidate, label` lines with label `1`/`0`
/// (or `true`/`false`). Lines starting with `#` are skipped.
pub fn read_labeled_pairs<R: Read>(reader: R) -> Result<Vec<LabeledPair>, LearnError> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .quoting(false)
        .from_reader(reader);
    let mut pairs = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => LearnError::Io(io),
            other => LearnError::Parse {
                line: 0,
                message: format!("{other:?}"),
            },
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() == 1 && record[0].trim().is_empty() {
            continue;
        }
        if record.len() != 3 {
            return Err(LearnError::Parse {
                line,
                message: format!("expected 3 tab-separated fields, found {}", record.len()),
            });
        }
        let is_misspelling = match record[2].trim() {
            "1" | "true" => true,
            "0" | "false" => false,
            other => {
                return Err(LearnError::Parse {
                    line,
                    message: format!("label must be 1 or 0, found '{other}'"),
                })
            }
        };
        pairs.push(LabeledPair::new(record[0].trim(), record[1].trim(), is_misspelling));
    }
    Ok(pairs)
}

/// Per-bucket accumulated window distances for one class.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BucketTotals {
    pub sums: Vec<u64>,
    pub counts: Vec<u64>,
}

impl BucketTotals {
    fn new(buckets: usize) -> Self {
        BucketTotals {
            sums: vec![0; buckets],
            counts: vec![0; buckets],
        }
    }

    #[cfg(feature = "parallel")]
    fn merge(mut self, other: &BucketTotals) -> Self {
        for (a, b) in self.sums.iter_mut().zip(&other.sums) {
            *a += b;
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self
    }

    /// Mean distance per bucket; empty buckets report 0.
    pub fn means(&self) -> Vec<f64> {
        self.sums
            .iter()
            .zip(&self.counts)
            .map(|(&s, &c)| if c == 0 { 0.0 } else { s as f64 / c as f64 })
            .collect()
    }
}

/// Average window edit distance per relative-position bucket, per class.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionDistributions {
    pub window: WindowSize,
    pub bucket_width: f64,
    pub true_misspellings: BucketTotals,
    pub false_positives: BucketTotals,
}

impl PositionDistributions {
    pub fn tpldist(&self) -> Vec<f64> {
        self.true_misspellings.means()
    }

    pub fn fpldist(&self) -> Vec<f64> {
        self.false_positives.means()
    }
}

pub fn estimate_distributions(
    pairs: &[LabeledPair],
    window: WindowSize,
    bucket_width: f64,
    costs: &EditCosts,
) -> Result<PositionDistributions, LearnError> {
    // validates bucket width and window
    WeightProfile::uniform(window, bucket_width)?;
    for (i, pair) in pairs.iter().enumerate() {
        pair.check(i)?;
    }
    if !pairs.iter().any(|p| p.is_misspelling) {
        return Err(LearnError::MissingClass(Class::TrueMisspelling));
    }
    if !pairs.iter().any(|p| !p.is_misspelling) {
        return Err(LearnError::MissingClass(Class::FalsePositive));
    }

    let buckets = bucket_count(bucket_width);
    let accumulate = |(mut t, mut f): (BucketTotals, BucketTotals), pair: &LabeledPair| {
        let totals = if pair.is_misspelling { &mut t } else { &mut f };
        accumulate_pair(totals, pair, window, bucket_width, costs);
        (t, f)
    };
    let empty = || (BucketTotals::new(buckets), BucketTotals::new(buckets));

    #[cfg(feature = "parallel")]
    let (true_misspellings, false_positives) = {
        use rayon::prelude::*;
        pairs
            .par_iter()
            .fold(empty, accumulate)
            .reduce(empty, |(t1, f1), (t2, f2)| (t1.merge(&t2), f1.merge(&f2)))
    };
    #[cfg(not(feature = "parallel"))]
    let (true_misspellings, false_positives) = pairs.iter().fold(empty(), accumulate);

    Ok(PositionDistributions {
        window,
        bucket_width,
        true_misspellings,
        false_positives,
    })
}

fn accumulate_pair(
    totals: &mut BucketTotals,
    pair: &LabeledPair,
    window: WindowSize,
    bucket_width: f64,
    costs: &EditCosts,
) {
    let a: Vec<char> = pair.keyword.chars().collect();
    let b: Vec<char> = pair.candidate.chars().collect();
    let n = window.resolve(a.len());
    let count = window_count(a.len(), b.len(), n);
    for p in 0..count {
        let d = edit_distance_chars(window_slice(&a, p, n), window_slice(&b, p, n), costs);
        let bucket = relative_position_bucket(p, count, bucket_width);
        totals.sums[bucket] += u64::from(d);
        totals.counts[bucket] += 1;
    }
}

/// Turn class distributions into a weight profile with reward/penalty up to `scale`.
///
/// Deviations of the median-normalised ratios from 1 are rescaled separately
/// above and below 1, so the largest ratio maps to `1 + scale`, the smallest
/// to `1 - scale` and the median to exactly 1.
pub fn learn_profile(dist: &PositionDistributions, scale: f64) -> Result<WeightProfile, LearnError> {
    if !(scale > 0.0 && scale <= 1.0) {
        return Err(LearnError::InvalidScale(scale));
    }
    let tp = dist.tpldist();
    let fp = dist.fpldist();
    for (bucket, &mean) in tp.iter().enumerate() {
        if dist.true_misspellings.counts[bucket] == 0 {
            return Err(LearnError::EmptyBucket {
                bucket,
                class: Class::TrueMisspelling,
            });
        }
        if dist.false_positives.counts[bucket] == 0 {
            return Err(LearnError::EmptyBucket {
                bucket,
                class: Class::FalsePositive,
            });
        }
        if mean == 0.0 {
            return Err(LearnError::ZeroTrueDistance { bucket });
        }
    }

    let raw: Vec<f64> = fp.iter().zip(&tp).map(|(f, t)| f / t).collect();
    let mid = median(&raw);
    if mid == 0.0 {
        return Err(LearnError::ZeroMedian);
    }
    let deviations: Vec<f64> = raw.iter().map(|r| r / mid - 1.0).collect();
    let above = deviations.iter().copied().fold(0.0, f64::max);
    let below = deviations.iter().map(|d| -d).fold(0.0, f64::max);

    let weights = deviations
        .iter()
        .map(|&d| {
            let w = if d > 0.0 {
                1.0 + scale * d / above
            } else if d < 0.0 {
                1.0 + scale * d / below
            } else {
                1.0
            };
            w.max(MIN_WEIGHT)
        })
        .collect();
    Ok(WeightProfile::new(dist.bucket_width, dist.window, scale, weights)?)
}

fn median(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist_from(tp: &[u64], fp: &[u64]) -> PositionDistributions {
        PositionDistributions {
            window: WindowSize::Fixed(3),
            bucket_width: 0.2,
            true_misspellings: BucketTotals {
                sums: tp.to_vec(),
                counts: vec![1; tp.len()],
            },
            false_positives: BucketTotals {
                sums: fp.to_vec(),
                counts: vec![1; fp.len()],
            },
        }
    }

    #[test]
    fn equal_distributions_give_unit_weights() {
        let p = learn_profile(&dist_from(&[3, 1, 4, 1, 5], &[3, 1, 4, 1, 5]), 0.05).unwrap();
        assert_eq!(p.weights(), &[1.0; 5]);
    }

    #[test]
    fn extremes_map_to_plus_minus_scale() {
        // raw ratios (2, 1, 1, 1, 0.5)
        let p = learn_profile(&dist_from(&[2, 2, 2, 2, 2], &[4, 2, 2, 2, 1]), 0.05).unwrap();
        let expected = [1.05, 1.0, 1.0, 1.0, 0.95];
        for (w, e) in p.weights().iter().zip(expected) {
            assert!((w - e).abs() < 1e-12, "{:?}", p.weights());
        }
    }

    #[test]
    fn full_scale_stays_positive() {
        let p = learn_profile(&dist_from(&[2, 2, 2, 2, 2], &[4, 2, 2, 2, 1]), 1.0).unwrap();
        assert_eq!(p.weights()[0], 2.0);
        assert_eq!(p.weights()[4], MIN_WEIGHT);
        assert!(p.weights().iter().all(|&w| w > 0.0 && w <= 2.0));
    }

    #[test]
    fn scale_precondition() {
        let d = dist_from(&[1; 5], &[1; 5]);
        assert!(matches!(learn_profile(&d, 0.0), Err(LearnError::InvalidScale(_))));
        assert!(matches!(learn_profile(&d, 1.5), Err(LearnError::InvalidScale(_))));
    }

    #[test]
    fn zero_true_distance_is_rejected() {
        let err = learn_profile(&dist_from(&[1, 1, 0, 1, 1], &[1; 5]), 0.05).unwrap_err();
        assert!(matches!(err, LearnError::ZeroTrueDistance { bucket: 2 }));
    }

    #[test]
    fn empty_bucket_is_rejected() {
        let mut d = dist_from(&[1; 5], &[1; 5]);
        d.false_positives.counts[3] = 0;
        let err = learn_profile(&d, 0.05).unwrap_err();
        assert!(matches!(
            err,
            LearnError::EmptyBucket {
                bucket: 3,
                class: Class::FalsePositive
            }
        ));
        assert!(err.to_string().contains("wider bucket width"));
    }

    #[test]
    fn distances_land_in_their_position_bucket() {
        let pairs = [
            LabeledPair::new("abcdef", "abcdeg", true),
            LabeledPair::new("abcdef", "xbcdef", false),
        ];
        let d = estimate_distributions(&pairs, WindowSize::Fixed(2), 0.2, &EditCosts::RATIO).unwrap();
        // true pair only differs in the last window
        assert_eq!(d.tpldist(), vec![0.0, 0.0, 0.0, 0.0, 2.0]);
        assert_eq!(d.fpldist(), vec![2.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn single_class_is_rejected() {
        let pairs = [LabeledPair::new("abc", "abd", true)];
        let err = estimate_distributions(&pairs, WindowSize::Auto, 0.2, &EditCosts::RATIO).unwrap_err();
        assert!(matches!(err, LearnError::MissingClass(Class::FalsePositive)));
    }

    #[test]
    fn invalid_pairs_are_rejected() {
        let pairs = [LabeledPair::new("abc", "abc", true)];
        assert!(matches!(
            estimate_distributions(&pairs, WindowSize::Auto, 0.2, &EditCosts::RATIO),
            Err(LearnError::InvalidPair { index: 0, .. })
        ));
    }

    #[test]
    fn parse_labeled_pairs() {
        let text = "# keyword\tcandidate\tlabel\nxanax\tzanax\t1\n\nxanax\txanadu\t0\n";
        let pairs = read_labeled_pairs(text.as_bytes()).unwrap();
        assert_eq!(
            pairs,
            vec![
                LabeledPair::new("xanax", "zanax", true),
                LabeledPair::new("xanax", "xanadu", false)
            ]
        );
        assert!(matches!(
            read_labeled_pairs("a\tb\tyes\n".as_bytes()),
            Err(LearnError::Parse { line: 1, .. })
        ));
        assert!(read_labeled_pairs("a\tb\n".as_bytes()).is_err());
    }

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
