//! Brute-force oracles over `Z`, written without the library's search code.
#![allow(dead_code)]

use rand::Rng;
use shiftlab_core::{Alphabet, GroupElement, GroupSpec, Pattern, Rule, SubshiftSpec, Symbol};

pub fn z(i: i64) -> GroupElement {
    GroupElement::Lattice(vec![i])
}

pub fn zset(sites: &[i64]) -> shiftlab_core::FiniteSubset {
    sites.iter().map(|&i| z(i)).collect()
}

/// A `Z` subshift forbidding each word at positions `0..len`.
pub fn sft(k: usize, words: &[Vec<Symbol>]) -> SubshiftSpec {
    let pats = words
        .iter()
        .map(|w| Pattern::from_pairs(w.iter().enumerate().map(|(i, &s)| (z(i as i64), s))).unwrap())
        .collect();
    SubshiftSpec::new(
        GroupSpec::Lattice { dim: 1 },
        Alphabet::numbered(k).unwrap(),
        Rule::Forbidden(pats),
    )
    .unwrap()
}

/// Up to three forbidden words of length 1 to 3 over `k` symbols.
pub fn random_words(rng: &mut impl Rng, k: usize) -> Vec<Vec<Symbol>> {
    let n = rng.gen_range(1..=3);
    (0..n)
        .map(|_| {
            let len = rng.gen_range(1..=3);
            (0..len).map(|_| rng.gen_range(0..k) as Symbol).collect()
        })
        .collect()
}

/// Whether some word occurs entirely inside the assigned sites.
fn has_occurrence(
    words: &[Vec<Symbol>],
    x: &dyn Fn(i64) -> Option<Symbol>,
    lo: i64,
    hi: i64,
) -> bool {
    (lo..=hi).any(|start| {
        words.iter().any(|w| {
            w.iter()
                .enumerate()
                .all(|(j, &s)| x(start + j as i64) == Some(s))
        })
    })
}

/// Assignments of `sites` with no complete forbidden occurrence.
pub fn brute_local(k: usize, words: &[Vec<Symbol>], sites: &[i64]) -> Vec<Vec<Symbol>> {
    let n = sites.len();
    let total = k.pow(n as u32);
    let (lo, hi) = (
        sites.iter().min().copied().unwrap_or(0) - 3,
        sites.iter().max().copied().unwrap_or(0),
    );
    let mut out = Vec::new();
    for mut code in 0..total {
        let mut vals = vec![0 as Symbol; n];
        for slot in vals.iter_mut().rev() {
            *slot = (code % k) as Symbol;
            code /= k;
        }
        let get = |i: i64| sites.iter().position(|&s| s == i).map(|p| vals[p]);
        if !has_occurrence(words, &get, lo, hi) {
            out.push(vals);
        }
    }
    out
}

/// Assignments of `sites` extending to an admissible assignment of
/// `sites + [-r, r]`, by filtering every assignment of the larger set.
pub fn brute_margin(
    k: usize,
    words: &[Vec<Symbol>],
    sites: &[i64],
    r: i64,
) -> std::collections::BTreeSet<Vec<Symbol>> {
    let mut grown: Vec<i64> = sites.iter().flat_map(|&s| (s - r)..=(s + r)).collect();
    grown.sort();
    grown.dedup();
    let pos: Vec<usize> = sites
        .iter()
        .map(|s| grown.iter().position(|g| g == s).unwrap())
        .collect();
    brute_local(k, words, &grown)
        .into_iter()
        .map(|v| pos.iter().map(|&p| v[p]).collect())
        .collect()
}

/// Whether the word `w` extends `steps` symbols in both directions
/// avoiding every forbidden word; depth-first over appended symbols.
pub fn extends_both_ways(k: usize, words: &[Vec<Symbol>], w: &[Symbol], steps: usize) -> bool {
    fn clean(words: &[Vec<Symbol>], x: &[Symbol]) -> bool {
        !words
            .iter()
            .any(|f| x.windows(f.len()).any(|win| win == f.as_slice()))
    }
    fn right(k: usize, words: &[Vec<Symbol>], x: &mut Vec<Symbol>, steps: usize) -> bool {
        if !clean(words, x) {
            return false;
        }
        if steps == 0 {
            return true;
        }
        (0..k).any(|a| {
            x.push(a as Symbol);
            let ok = right(k, words, x, steps - 1);
            x.pop();
            ok
        })
    }
    let reversed: Vec<Vec<Symbol>> = words
        .iter()
        .map(|f| f.iter().rev().copied().collect())
        .collect();
    let mut fwd = w.to_vec();
    let mut back: Vec<Symbol> = w.iter().rev().copied().collect();
    right(k, words, &mut fwd, steps) && right(k, &reversed, &mut back, steps)
}

/// Globally admissible words of length `n`. For memory-2 shifts a word that
/// extends `k^2 + 2` steps each way passes through a repeated 2-block on
/// each side, so it extends forever.
pub fn brute_exact(k: usize, words: &[Vec<Symbol>], n: usize) -> u64 {
    let sites: Vec<i64> = (0..n as i64).collect();
    brute_local(k, words, &sites)
        .into_iter()
        .filter(|w| extends_both_ways(k, words, w, k * k + 2))
        .count() as u64
}

/// Cyclic words of length `n` with at most `beta` violation start positions.
pub fn brute_cyclic(k: usize, words: &[Vec<Symbol>], n: usize, beta: usize) -> u64 {
    let total = (k as u64).pow(n as u32);
    let mut count = 0;
    for mut code in 0..total {
        let mut x = vec![0 as Symbol; n];
        for slot in x.iter_mut() {
            *slot = (code % k as u64) as Symbol;
            code /= k as u64;
        }
        let bad = (0..n)
            .filter(|&i| {
                words
                    .iter()
                    .any(|w| w.iter().enumerate().all(|(j, &s)| x[(i + j) % n] == s))
            })
            .count();
        if bad <= beta {
            count += 1;
        }
    }
    count
}
