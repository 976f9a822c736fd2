//! Independent oracles and randomized fixtures shared by the integration
//! tests and the acceptance suite.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spellvar::VectorModel;

pub fn toy_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data/toy")
        .join(name)
}

/// Memoised recursion over suffix pairs; no tabulation order shared with the DP.
pub fn oracle_distance(a: &str, b: &str, ins: u32, del: u32, sub: u32) -> u32 {
    fn go(
        a: &[char],
        b: &[char],
        i: usize,
        j: usize,
        costs: (u32, u32, u32),
        memo: &mut Vec<Vec<Option<u32>>>,
    ) -> u32 {
        if let Some(v) = memo[i][j] {
            return v;
        }
        let (ins, del, sub) = costs;
        let v = if i == a.len() {
            (b.len() - j) as u32 * ins
        } else if j == b.len() {
            (a.len() - i) as u32 * del
        } else {
            let keep = if a[i] == b[j] {
                go(a, b, i + 1, j + 1, costs, memo)
            } else {
                sub + go(a, b, i + 1, j + 1, costs, memo)
            };
            let delete = del + go(a, b, i + 1, j, costs, memo);
            let insert = ins + go(a, b, i, j + 1, costs, memo);
            keep.min(delete).min(insert)
        };
        memo[i][j] = Some(v);
        v
    }
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut memo = vec![vec![None; b.len() + 1]; a.len() + 1];
    go(&a, &b, 0, 0, (ins, del, sub), &mut memo)
}

/// Length-sum ratio computed from the oracle distance.
pub fn oracle_ratio(a: &str, b: &str) -> f64 {
    let total = (a.chars().count() + b.chars().count()) as f64;
    (total - f64::from(oracle_distance(a, b, 1, 1, 2))) / total
}

/// Every string over `alphabet` of length `0..=max_len`.
pub fn all_strings(alphabet: &[char], max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut frontier = vec![String::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(frontier.len() * alphabet.len());
        for s in &frontier {
            for &c in alphabet {
                let mut t = s.clone();
                t.push(c);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Top-`k` rows by naive scoring of every other row and a full sort.
pub fn naive_neighbors(model: &VectorModel, id: usize, k: usize) -> Vec<(usize, f64)> {
    let query = model.row(id);
    let mut all: Vec<(usize, f64)> = (0..model.len())
        .filter(|&other| other != id)
        .map(|other| {
            let s: f64 = query
                .iter()
                .zip(model.row(other))
                .map(|(&x, &y)| f64::from(x) * f64::from(y))
                .sum();
            (other, s)
        })
        .collect();
    all.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    all.truncate(k);
    all
}

/// Order-independent closure: repeatedly add every token that is within the
/// top-`ssl` neighbours of any member and passes `lt` against the seed.
pub fn brute_force_closure(
    model: &VectorModel,
    seed: &str,
    ssl: usize,
    lt: f64,
    ratio: &dyn Fn(&str, &str) -> f64,
) -> BTreeSet<String> {
    let seed_id = model.id(seed).expect("seed in vocabulary");
    let neighbors: Vec<Vec<usize>> = (0..model.len())
        .map(|id| naive_neighbors(model, id, ssl).into_iter().map(|(n, _)| n).collect())
        .collect();
    let mut members: BTreeSet<usize> = BTreeSet::from([seed_id]);
    loop {
        let mut added = false;
        let current: Vec<usize> = members.iter().copied().collect();
        for m in current {
            for &n in &neighbors[m] {
                if !members.contains(&n) && ratio(seed, model.token(n)) >= lt {
                    members.insert(n);
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
    }
    members.remove(&seed_id);
    members.into_iter().map(|id| model.token(id).to_string()).collect()
}

/// A randomized embedding fixture with spelling families and mutual-nearest pairs.
pub struct Fixture {
    pub model: VectorModel,
    pub seeds: Vec<String>,
}

fn mutate(rng: &mut ChaCha8Rng, word: &str, alphabet: &[char]) -> String {
    let mut chars: Vec<char> = word.chars().collect();
    let edits = rng.gen_range(1..=2);
    for _ in 0..edits {
        let pos = rng.gen_range(0..chars.len().max(1));
        match rng.gen_range(0..3) {
            0 if chars.len() > 3 => {
                chars.remove(pos);
            }
            1 => chars.insert(pos, *alphabet.choose(rng).unwrap()),
            _ => {
                if !chars.is_empty() {
                    chars[pos] = *alphabet.choose(rng).unwrap();
                }
            }
        }
    }
    chars.into_iter().collect()
}

fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / n).collect()
}

fn jitter(rng: &mut ChaCha8Rng, base: &[f64], amount: f64) -> Vec<f64> {
    let noise = random_unit(rng, base.len());
    base.iter().zip(noise).map(|(b, n)| b + amount * n).collect()
}

/// Deterministic fixture number `index`, at most 200 tokens.
pub fn random_fixture(index: u64) -> Fixture {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 + index);
    let alphabet: Vec<char> = "abcdefg".chars().collect();
    let dim = rng.gen_range(4..10);
    let mut rows: Vec<(String, Vec<f64>)> = Vec::new();
    let mut seen = BTreeSet::new();
    let mut seeds = Vec::new();
    let mut push = |rows: &mut Vec<(String, Vec<f64>)>, token: String, v: Vec<f64>| {
        if rows.len() < 200 && seen.insert(token.clone()) {
            rows.push((token, v));
            true
        } else {
            false
        }
    };

    let families = rng.gen_range(2..6);
    for _ in 0..families {
        let len = rng.gen_range(5..9);
        let seed: String = (0..len).map(|_| *alphabet.choose(&mut rng).unwrap()).collect();
        let base = random_unit(&mut rng, dim);
        if !push(&mut rows, seed.clone(), base.clone()) {
            continue;
        }
        seeds.push(seed.clone());
        // chains of variants drifting away from the seed in embedding space
        let mut parents = vec![(seed.clone(), base.clone())];
        for _ in 0..rng.gen_range(3..15) {
            let (parent, pv) = parents.choose(&mut rng).unwrap().clone();
            let token = mutate(&mut rng, &parent, &alphabet);
            let amount = rng.gen_range(0.1..0.8);
            let v = jitter(&mut rng, &pv, amount);
            if push(&mut rows, token.clone(), v.clone()) {
                parents.push((token.clone(), v.clone()));
                // a near-duplicate partner: the two are each other's nearest neighbour
                if rng.gen_bool(0.3) {
                    let twin = mutate(&mut rng, &token, &alphabet);
                    let tv = jitter(&mut rng, &v, 0.01);
                    push(&mut rows, twin, tv);
                }
            }
        }
    }
    // unrelated tokens, some lexically close to a seed
    for _ in 0..rng.gen_range(10..60) {
        let token = if rng.gen_bool(0.3) && !seeds.is_empty() {
            let seed = seeds.choose(&mut rng).unwrap().clone();
            mutate(&mut rng, &seed, &alphabet)
        } else {
            let len = rng.gen_range(3..9);
            (0..len).map(|_| *alphabet.choose(&mut rng).unwrap()).collect()
        };
        let v = random_unit(&mut rng, dim);
        push(&mut rows, token, v);
    }

    let model = VectorModel::from_rows(
        dim,
        rows.into_iter()
            .map(|(t, v)| (t, v.into_iter().map(|x| x as f32).collect::<Vec<f32>>())),
    )
    .expect("fixture rows are valid");
    Fixture { model, seeds }
}

/// Applies `count` edits that substitute or insert characters absent from
/// `word`, never touching an already-edited position. The common subsequence
/// with `word` can only shrink while the total length never drops, so the
/// length-sum ratio can only fall. Deletions are excluded: removing one of a
/// repeated letter may keep the common subsequence and raise the ratio.
pub fn fresh_edit_chain(rng: &mut ChaCha8Rng, word: &str, count: usize) -> Vec<String> {
    let fresh = ['#', '%', '@'];
    // (char, is_original)
    let mut chars: Vec<(char, bool)> = word.chars().map(|c| (c, true)).collect();
    let mut out = Vec::new();
    for _ in 0..count {
        let originals: Vec<usize> = (0..chars.len()).filter(|&i| chars[i].1).collect();
        match rng.gen_range(0..2) {
            0 if !originals.is_empty() => {
                let i = *originals.choose(rng).unwrap();
                chars[i] = (*fresh.choose(rng).unwrap(), false);
            }
            _ => {
                let i = rng.gen_range(0..=chars.len());
                chars.insert(i, (*fresh.choose(rng).unwrap(), false));
            }
        }
        out.push(chars.iter().map(|c| c.0).collect());
    }
    out
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
