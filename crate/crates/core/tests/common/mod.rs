//! Shared brute-force oracles and instance generators for the integration
//! suites.  Everything here is independent of the library's counting and
//! volume paths: permutations are enumerated directly and bucketed.

// Each integration test binary compiles this module and uses a subset.
#![allow(dead_code)]

use std::collections::BTreeMap;

use matroid_volume::descent::BinarySequence;
use matroid_volume::matroid::{elements_from_mask, greedy_hyperplane_family, Matroid};

/// Descent sequence of a one-line permutation, computed from scratch.
pub fn descent_bits(word: &[usize]) -> Vec<bool> {
    let n = word.len();
    let mut bits = vec![false; n + 1];
    bits[0] = true;
    for i in 1..n {
        bits[i] = word[i - 1] > word[i];
    }
    bits
}

/// Bucket all n! permutations of [n] by descent sequence.
pub fn descent_buckets(n: usize) -> BTreeMap<Vec<bool>, u64> {
    let mut buckets = BTreeMap::new();
    let mut word: Vec<usize> = (1..=n).collect();
    permute(&mut word, 0, &mut |w| {
        *buckets.entry(descent_bits(w)).or_insert(0) += 1;
    });
    buckets
}

fn permute(word: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == word.len() {
        f(word);
        return;
    }
    for i in k..word.len() {
        word.swap(k, i);
        permute(word, k + 1, f);
        word.swap(k, i);
    }
}

pub fn k4() -> Matroid {
    Matroid::graphic(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
}

/// Connected sparse paving instances for (n, d): all prefixes of the
/// lex-greedy admissible circuit-hyperplane family whose matroid is
/// connected, as (alpha, matroid, hyperplane masks).
pub fn connected_sparse_paving_instances(n: usize, d: usize) -> Vec<(usize, Matroid, Vec<u32>)> {
    let family = greedy_hyperplane_family(n, d);
    let mut out = Vec::new();
    for alpha in 0..=family.len() {
        let sets: Vec<Vec<usize>> = family[..alpha].iter().map(|&h| elements_from_mask(h)).collect();
        let Ok(m) = Matroid::sparse_paving(n, d, &sets) else {
            continue;
        };
        if m.is_connected() {
            out.push((alpha, m, family[..alpha].to_vec()));
        }
    }
    out
}

/// Relabel the ground set through a permutation (`perm[old] = new`).
pub fn relabel(m: &Matroid, perm: &[usize]) -> Matroid {
    let masks: Vec<u32> = m
        .bases()
        .iter()
        .map(|&b| {
            elements_from_mask(b)
                .into_iter()
                .fold(0u32, |acc, e| acc | 1 << perm[e])
        })
        .collect();
    Matroid::from_basis_masks(m.ground_size(), masks).unwrap()
}

/// All sequences of `L(n, d)` for every d, flattened.
pub fn all_sequences(n: usize) -> Vec<BinarySequence> {
    (0..n)
        .flat_map(|d| matroid_volume::descent::enumerate_sequences(n, d))
        .collect()
}
