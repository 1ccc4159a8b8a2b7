//! Binary descent sequences, the prefix-dominance order on them, and the
//! permutation-counting statistics built on top.
//!
//! `L(n, d)` is the set of 0/1 sequences of length `n + 1` with exactly
//! `d + 1` ones that start with a 1 and end with a 0, ordered by prefix-sum
//! dominance.  `delta(b)` counts permutations of `[n]` whose descent sequence
//! is exactly `b`; `delta_leq(b)` sums `delta` over the order ideal below `b`.
//! All counts are exact big integers.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SequenceError {
    #[error("sequence must have length at least 2, got {0}")]
    TooShort(usize),
    #[error("sequence has no 1s")]
    AllZeros,
    #[error("sequence has no 0s")]
    AllOnes,
    #[error("sequence must start with 1")]
    LeadingZero,
    #[error("sequence must end with 0")]
    TrailingOne,
    #[error("invalid character {0:?}, expected '0' or '1'")]
    BadChar(char),
    #[error("sequences lie in different posets: L({d0}, {n0}) vs L({d1}, {n1})")]
    MismatchedPoset { n0: usize, d0: usize, n1: usize, d1: usize },
    #[error("permutation word is not a bijection on 1..={0}")]
    NotAPermutation(usize),
    #[error("partition does not fit in the {rows}x{width} box")]
    PartitionOutOfBox { rows: usize, width: usize },
    #[error("partition parts must be positive and weakly decreasing")]
    PartitionNotDecreasing,
}

/// An element of `L(n, d)`: bits `b_0 .. b_n` with `b_0 = 1`, `b_n = 0` and
/// `d + 1` ones in total.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinarySequence {
    bits: Vec<bool>,
}

impl BinarySequence {
    pub fn new(bits: Vec<bool>) -> Result<Self, SequenceError> {
        if bits.len() < 2 {
            return Err(SequenceError::TooShort(bits.len()));
        }
        let ones = bits.iter().filter(|&&b| b).count();
        if ones == 0 {
            return Err(SequenceError::AllZeros);
        }
        if ones == bits.len() {
            return Err(SequenceError::AllOnes);
        }
        if !bits[0] {
            return Err(SequenceError::LeadingZero);
        }
        if *bits.last().unwrap() {
            return Err(SequenceError::TrailingOne);
        }
        Ok(BinarySequence { bits })
    }

    /// Top element `1^{d+1} 0^{n-d}` of `L(n, d)`.
    pub fn top(n: usize, d: usize) -> Self {
        assert!(n >= 1 && d < n, "top requires 0 <= d < n");
        let bits = (0..=n).map(|i| i <= d).collect();
        BinarySequence { bits }
    }

    /// Bottom element `1 0^{n-d-1} 1^d 0` of `L(n, d)`.
    pub fn bottom(n: usize, d: usize) -> Self {
        assert!(n >= 1 && d < n, "bottom requires 0 <= d < n");
        let bits = (0..=n).map(|i| i == 0 || (i >= n - d && i < n)).collect();
        BinarySequence { bits }
    }

    pub fn n(&self) -> usize {
        self.bits.len() - 1
    }

    pub fn d(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count() - 1
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    fn same_poset(&self, other: &Self) -> Result<(), SequenceError> {
        if self.n() != other.n() || self.d() != other.d() {
            return Err(SequenceError::MismatchedPoset {
                n0: self.n(),
                d0: self.d(),
                n1: other.n(),
                d1: other.d(),
            });
        }
        Ok(())
    }

    /// Prefix-dominance comparison: `self ⪯ other` iff every prefix sum of
    /// `self` is at most the corresponding prefix sum of `other`.
    pub fn leq(&self, other: &Self) -> Result<bool, SequenceError> {
        self.same_poset(other)?;
        let mut sa = 0usize;
        let mut sb = 0usize;
        for (&a, &b) in self.bits.iter().zip(&other.bits) {
            sa += a as usize;
            sb += b as usize;
            if sa > sb {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The involution `b ↦ b*` that fixes the endpoints and reverses the
    /// interior `b_1 .. b_{n-1}`.
    pub fn dual(&self) -> Self {
        let n = self.n();
        let mut bits = self.bits.clone();
        bits[1..n].reverse();
        BinarySequence { bits }
    }

    /// Positions `0 < i < n` with `b_i = 1`, ascending.
    fn support(&self) -> Vec<usize> {
        (1..self.n()).filter(|&i| self.bits[i]).collect()
    }

    /// Image in the Young lattice of partitions inside the `d x (n-d-1)`
    /// box: the j-th part counts zeros strictly between the j-th interior
    /// one and position n.
    pub fn to_partition(&self) -> PartitionInBox {
        let n = self.n();
        let d = self.d();
        let mut parts: Vec<usize> = self
            .support()
            .iter()
            .map(|&i| (i + 1..n).filter(|&k| !self.bits[k]).count())
            .collect();
        while parts.last() == Some(&0) {
            parts.pop();
        }
        PartitionInBox {
            parts,
            rows: d,
            width: n.saturating_sub(d + 1),
        }
    }

    /// Inverse of [`to_partition`](Self::to_partition) for the box
    /// `d x (n-d-1)`.
    pub fn from_partition(parts: &[usize], n: usize, d: usize) -> Result<Self, SequenceError> {
        assert!(n >= 1 && d < n, "from_partition requires 0 <= d < n");
        let width = n - d - 1;
        if parts.len() > d {
            return Err(SequenceError::PartitionOutOfBox { rows: d, width });
        }
        for w in parts.windows(2) {
            if w[0] < w[1] {
                return Err(SequenceError::PartitionNotDecreasing);
            }
        }
        if parts.iter().any(|&p| p == 0) {
            return Err(SequenceError::PartitionNotDecreasing);
        }
        if parts.first().is_some_and(|&p| p > width) {
            return Err(SequenceError::PartitionOutOfBox { rows: d, width });
        }
        let mut bits = vec![false; n + 1];
        bits[0] = true;
        for j in 0..d {
            let lambda = parts.get(j).copied().unwrap_or(0);
            // The (j+1)-th interior one sits after all interior zeros except
            // the `lambda` that must remain to its right.
            bits[(j + 1) + (width - lambda)] = true;
        }
        BinarySequence::new(bits)
    }
}

impl fmt::Display for BinarySequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinarySequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinarySequence({self})")
    }
}

impl FromStr for BinarySequence {
    type Err = SequenceError;

    fn from_str(s: &str) -> Result<Self, SequenceError> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(SequenceError::BadChar(other)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        BinarySequence::new(bits)
    }
}

/// A permutation of `[n]` in one-line notation `w_1 .. w_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    word: Vec<usize>,
}

impl Permutation {
    pub fn new(word: Vec<usize>) -> Result<Self, SequenceError> {
        let n = word.len();
        let mut seen = vec![false; n + 1];
        for &w in &word {
            if w == 0 || w > n || seen[w] {
                return Err(SequenceError::NotAPermutation(n));
            }
            seen[w] = true;
        }
        if n == 0 {
            return Err(SequenceError::NotAPermutation(0));
        }
        Ok(Permutation { word })
    }

    pub fn n(&self) -> usize {
        self.word.len()
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    /// Descent sequence `(d_0, .., d_n)` with `d_0 = 1`, `d_n = 0` and
    /// `d_i = 1` iff `w_i > w_{i+1}`.
    pub fn descent_sequence(&self) -> BinarySequence {
        let n = self.n();
        let mut bits = vec![false; n + 1];
        bits[0] = true;
        for i in 1..n {
            bits[i] = self.word[i - 1] > self.word[i];
        }
        BinarySequence { bits }
    }
}

/// Number of permutations of `[n]` with descent sequence exactly `b`.
///
/// Standard insertion dynamic program over prefixes, tracking the relative
/// rank of the last entry; exact for any `n`.
pub fn delta(b: &BinarySequence) -> BigUint {
    let n = b.n();
    // f[j] = ways to arrange a prefix of length i whose last entry has rank
    // j+1 among the prefix, with the required exact descent pattern so far.
    let mut f = vec![BigUint::one()];
    for i in 1..n {
        let descent = b.bits()[i];
        let mut g = vec![BigUint::zero(); i + 1];
        if descent {
            // new last entry must sit below the old one: g[k] = sum_{j>=k} f[j]
            let mut acc = BigUint::zero();
            for k in (0..i).rev() {
                acc += &f[k];
                g[k] = acc.clone();
            }
        } else {
            // new last entry must sit above the old one: g[k] = sum_{j<k} f[j]
            let mut acc = BigUint::zero();
            for k in 0..i {
                acc += &f[k];
                g[k + 1] = acc.clone();
            }
        }
        f = g;
    }
    f.into_iter().sum()
}

/// All elements of `L(n, d)` in lexicographic order on the bit strings.
pub fn enumerate_sequences(n: usize, d: usize) -> Vec<BinarySequence> {
    assert!(n >= 1 && d < n, "enumerate_sequences requires 0 <= d < n");
    let mut out = Vec::new();
    let interior: Vec<usize> = (1..n).collect();
    let mut choice = Vec::with_capacity(d);
    fn rec(interior: &[usize], start: usize, left: usize, choice: &mut Vec<usize>, n: usize, out: &mut Vec<BinarySequence>) {
        if left == 0 {
            let mut bits = vec![false; n + 1];
            bits[0] = true;
            for &i in choice.iter() {
                bits[i] = true;
            }
            out.push(BinarySequence { bits });
            return;
        }
        for k in start..=interior.len() - left {
            choice.push(interior[k]);
            rec(interior, k + 1, left - 1, choice, n, out);
            choice.pop();
        }
    }
    rec(&interior, 0, d, &mut choice, n, &mut out);
    out.sort_by(|a, b| a.bits.cmp(&b.bits));
    out
}

/// The order ideal `{a : a ⪯ b}`, `b` included, in lexicographic order.
pub fn down_set(b: &BinarySequence) -> Vec<BinarySequence> {
    enumerate_sequences(b.n(), b.d())
        .into_iter()
        .filter(|a| a.leq(b).unwrap())
        .collect()
}

/// `delta` summed over the order ideal below `b` (inclusive).
pub fn delta_leq(b: &BinarySequence) -> BigUint {
    down_set(b).iter().map(delta).sum()
}

/// Eulerian number: permutations of `[n]` with exactly `d` descents.
pub fn eulerian(n: usize, d: usize) -> BigUint {
    assert!(n >= 1 && d < n, "eulerian requires 0 <= d < n");
    let mut row = vec![BigUint::one()];
    for i in 2..=n {
        let mut next = vec![BigUint::zero(); row.len() + 1];
        for (j, v) in row.iter().enumerate() {
            next[j] += v * BigUint::from(j + 1);
            next[j + 1] += v * BigUint::from(i - j - 1);
        }
        row = next;
        row.truncate(i);
    }
    row.swap_remove(d)
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut res = BigUint::one();
    for i in 0..k.min(n - k) {
        res = res * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    res
}

/// A partition drawn inside a `rows x width` rectangle; trailing zero parts
/// are suppressed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionInBox {
    parts: Vec<usize>,
    rows: usize,
    width: usize,
}

impl PartitionInBox {
    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Componentwise containment (`other` fits inside `self`).
    pub fn contains(&self, other: &PartitionInBox) -> bool {
        (0..self.rows.max(other.parts.len())).all(|j| {
            other.parts.get(j).copied().unwrap_or(0) <= self.parts.get(j).copied().unwrap_or(0)
        })
    }
}
