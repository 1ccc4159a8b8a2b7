//! Anchored chains of cyclic flats, the dictionary between chains and
//! binary sequences, and the refinement poset with its Möbius weights.
//!
//! A chain stores only its proper cyclic flats; the anchors `∅` and the
//! full ground set are implicit.  The poset `Γ` of all such chains is
//! ordered by refinement (finer chains below), its top element is the empty
//! chain, and the weight attached to a chain `F` is `-μ(0̂, F)` computed in
//! `Γ` with an artificial bottom adjoined.

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::descent::BinarySequence;
use crate::matroid::{elements_from_mask, Matroid, MatroidError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChainError {
    #[error("matroid has loops; delete them before chain analysis")]
    HasLoops,
    #[error("matroid is disconnected; decompose into components first")]
    NotConnected,
    #[error("rank must be between 1 and ground_size-1, got rank {rank} on {ground_size} elements")]
    RankOutOfRange { rank: usize, ground_size: usize },
    #[error("{0:?} is not a proper cyclic flat of the matroid")]
    NotProperCyclicFlat(Vec<usize>),
    #[error("chain is not strictly increasing under inclusion")]
    NotAChain,
    #[error("chain does not embed: rank or nullity fails to increase strictly at step {0}")]
    BadIncrements(usize),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
}

/// A chain `F_1 ⊊ … ⊊ F_k` of proper cyclic flats (possibly empty).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclicFlatChain {
    flats: Vec<u32>,
}

impl CyclicFlatChain {
    /// The empty chain (just the anchors).
    pub fn empty() -> Self {
        CyclicFlatChain { flats: Vec::new() }
    }

    /// Validate that `flats` is a strictly increasing chain of proper
    /// cyclic flats of `m`.
    pub fn new(m: &Matroid, flats: Vec<u32>) -> Result<Self, ChainError> {
        let full = m.full_mask();
        let cyclic: Vec<u32> = m.cyclic_flats().iter().map(|f| f.elements).collect();
        for &f in &flats {
            if f == 0 || f == full || !cyclic.contains(&f) {
                return Err(ChainError::NotProperCyclicFlat(elements_from_mask(f)));
            }
        }
        for w in flats.windows(2) {
            if w[0] & w[1] != w[0] || w[0] == w[1] {
                return Err(ChainError::NotAChain);
            }
        }
        Ok(CyclicFlatChain { flats })
    }

    pub(crate) fn from_flats_unchecked(flats: Vec<u32>) -> Self {
        CyclicFlatChain { flats }
    }

    pub fn flats(&self) -> &[u32] {
        &self.flats
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    pub fn flat_sets(&self) -> Vec<Vec<usize>> {
        self.flats.iter().map(|&f| elements_from_mask(f)).collect()
    }

    /// `self` refines `other`: every flat of `other` appears in `self`.
    pub fn refines(&self, other: &CyclicFlatChain) -> bool {
        // Both lists ascend by inclusion, hence by mask-as-set uniqueness a
        // merge walk suffices.
        let mut it = self.flats.iter();
        other.flats.iter().all(|f| it.any(|g| g == f))
    }
}

/// Binary sequence of an anchored chain: for each step of the chain
/// (anchors included) emit a block of ones for the rank increment followed
/// by a block of zeros for the nullity increment.
pub fn chain_to_sequence(m: &Matroid, chain: &CyclicFlatChain) -> Result<BinarySequence, ChainError> {
    let full = m.full_mask();
    let mut bits = Vec::with_capacity(m.ground_size());
    let mut prev_rank = 0usize;
    let mut prev_nullity = 0usize;
    for (step, &f) in chain.flats().iter().chain(std::iter::once(&full)).enumerate() {
        let rank = m.rank_of(f);
        let nullity = f.count_ones() as usize - rank;
        if rank <= prev_rank || nullity <= prev_nullity {
            return Err(ChainError::BadIncrements(step + 1));
        }
        bits.extend(std::iter::repeat(true).take(rank - prev_rank));
        bits.extend(std::iter::repeat(false).take(nullity - prev_nullity));
        prev_rank = rank;
        prev_nullity = nullity;
    }
    Ok(BinarySequence::new(bits).expect("block word is a valid sequence"))
}

/// Chain of initial segments read off a binary sequence: one flat
/// `{0, .., i}` for every position `i` holding a 0 followed by a 1.
pub fn sequence_to_chain(b: &BinarySequence) -> Vec<u32> {
    let bits = b.bits();
    (0..b.n())
        .filter(|&i| !bits[i] && bits[i + 1])
        .map(|i| (1u32 << (i + 1)) - 1)
        .collect()
}

/// A chain of the poset `Γ` with its Möbius weight.
#[derive(Debug, Clone)]
pub struct WeightedChain {
    pub chain: CyclicFlatChain,
    pub mobius: BigInt,
}

/// The poset of all chains of proper cyclic flats, with Möbius weights.
#[derive(Debug, Clone)]
pub struct ChainPoset {
    entries: Vec<WeightedChain>,
}

impl ChainPoset {
    pub fn entries(&self) -> &[WeightedChain] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn mobius_sum(&self) -> BigInt {
        self.entries.iter().map(|e| &e.mobius).sum()
    }
}

/// Enumerate every chain of proper cyclic flats of a loopless connected
/// matroid (the empty chain included) and attach Möbius weights.
///
/// Chains are listed in lexicographic order on their flat masks, shorter
/// prefixes first.  Weights come from the recursion
/// `μ(0̂, x) = -Σ_{y < x} μ(0̂, y)` over the refinement order with an
/// artificial bottom `0̂` adjoined; the stored weight is `-μ(0̂, x)`.
pub fn build_chain_poset(m: &Matroid) -> Result<ChainPoset, ChainError> {
    if m.loops() != 0 {
        return Err(ChainError::HasLoops);
    }
    if !m.is_connected() {
        return Err(ChainError::NotConnected);
    }
    if m.rank() == 0 || m.rank() >= m.ground_size() {
        return Err(ChainError::RankOutOfRange {
            rank: m.rank(),
            ground_size: m.ground_size(),
        });
    }
    let full = m.full_mask();
    let proper: Vec<u32> = m
        .cyclic_flats()
        .iter()
        .map(|f| f.elements)
        .filter(|&f| f != 0 && f != full)
        .collect();
    let mut sorted = proper;
    sorted.sort_unstable();

    let mut chains: Vec<Vec<u32>> = vec![Vec::new()];
    let mut stack: Vec<u32> = Vec::new();
    fn extend(sorted: &[u32], from: usize, stack: &mut Vec<u32>, chains: &mut Vec<Vec<u32>>) {
        for i in from..sorted.len() {
            let f = sorted[i];
            if let Some(&last) = stack.last() {
                if last & f != last || last == f {
                    continue;
                }
            }
            stack.push(f);
            chains.push(stack.clone());
            extend(sorted, i + 1, stack, chains);
            stack.pop();
        }
    }
    extend(&sorted, 0, &mut stack, &mut chains);

    // Linear extension from the minimal elements of Γ (the longest chains)
    // upward; ties broken by the enumeration order.
    let mut order: Vec<usize> = (0..chains.len()).collect();
    order.sort_by(|&a, &b| {
        chains[b]
            .len()
            .cmp(&chains[a].len())
            .then_with(|| chains[a].cmp(&chains[b]))
    });
    let mut mu = vec![BigInt::from(0); chains.len()];
    for (pos, &i) in order.iter().enumerate() {
        // μ(0̂, x) = -(μ(0̂, 0̂) + Σ_{y ∈ Γ, y < x} μ(0̂, y)), where y < x
        // means y strictly refines x, i.e. x ⊂ y as flat sets.
        let mut acc = BigInt::one();
        for &j in &order[..pos] {
            if chains[j].len() > chains[i].len() && is_subchain(&chains[i], &chains[j]) {
                acc += &mu[j];
            }
        }
        mu[i] = -acc;
    }

    let entries = chains
        .into_iter()
        .zip(mu)
        .map(|(flats, mobius)| WeightedChain {
            chain: CyclicFlatChain::from_flats_unchecked(flats),
            mobius: -mobius,
        })
        .collect();
    Ok(ChainPoset { entries })
}

/// Is `a` a subset of `b` (both ascending flat lists)?
fn is_subchain(a: &[u32], b: &[u32]) -> bool {
    let mut it = b.iter();
    a.iter().all(|f| it.any(|g| g == f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descent::enumerate_sequences;
    use crate::matroid::mask_from_elements;
    use num_traits::Zero;

    fn k4() -> Matroid {
        Matroid::graphic(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn empty_chain_maps_to_top() {
        for (r, m) in [(1usize, 2usize), (2, 4), (3, 6)] {
            let u = Matroid::uniform(r, m).unwrap();
            let b = chain_to_sequence(&u, &CyclicFlatChain::empty()).unwrap();
            assert_eq!(b, BinarySequence::top(m - 1, r - 1));
        }
    }

    #[test]
    fn triangle_chain_sequence() {
        let m = k4();
        let triangle = mask_from_elements(&[0, 1, 3], 6).unwrap();
        let chain = CyclicFlatChain::new(&m, vec![triangle]).unwrap();
        assert_eq!(chain_to_sequence(&m, &chain).unwrap().to_string(), "110100");
    }

    #[test]
    fn sequence_to_chain_prefixes() {
        let b: BinarySequence = "11010".parse().unwrap();
        assert_eq!(sequence_to_chain(&b), vec![0b111]);
        let top = BinarySequence::top(5, 2);
        assert!(sequence_to_chain(&top).is_empty());
        let b: BinarySequence = "101010".parse().unwrap();
        assert_eq!(sequence_to_chain(&b), vec![0b11, 0b1111]);
    }

    #[test]
    fn chain_validation() {
        let m = k4();
        let triangle = mask_from_elements(&[0, 1, 3], 6).unwrap();
        let other = mask_from_elements(&[3, 4, 5], 6).unwrap();
        assert!(CyclicFlatChain::new(&m, vec![triangle]).is_ok());
        assert!(matches!(
            CyclicFlatChain::new(&m, vec![0b11]),
            Err(ChainError::NotProperCyclicFlat(_))
        ));
        assert!(matches!(
            CyclicFlatChain::new(&m, vec![triangle, other]),
            Err(ChainError::NotAChain)
        ));
    }

    #[test]
    fn schubert_round_trip() {
        for n in 2..=6 {
            for d in 0..n {
                for b in enumerate_sequences(n, d) {
                    let s = Matroid::schubert(&b).unwrap();
                    let full = s.full_mask();
                    let proper: Vec<u32> = s
                        .cyclic_flats()
                        .iter()
                        .map(|f| f.elements)
                        .filter(|&f| f != 0 && f != full)
                        .collect();
                    assert_eq!(proper, sequence_to_chain(&b), "cyclic flats of S({b})");
                    let chain = CyclicFlatChain::new(&s, proper).unwrap();
                    assert_eq!(chain_to_sequence(&s, &chain).unwrap(), b);
                }
            }
        }
    }

    #[test]
    fn mobius_weights_single_hyperplane() {
        let sp = Matroid::sparse_paving(5, 2, &[vec![0, 1, 2]]).unwrap();
        let poset = build_chain_poset(&sp).unwrap();
        assert_eq!(poset.len(), 2);
        for e in poset.entries() {
            if e.chain.is_empty() {
                assert!(e.mobius.is_zero());
            } else {
                assert_eq!(e.mobius, BigInt::one());
            }
        }
    }

    #[test]
    fn mobius_weights_sparse_paving() {
        let m = k4();
        let poset = build_chain_poset(&m).unwrap();
        assert_eq!(poset.len(), 5);
        for e in poset.entries() {
            if e.chain.is_empty() {
                assert_eq!(e.mobius, BigInt::from(-3));
            } else {
                assert_eq!(e.mobius, BigInt::one());
            }
        }
        assert_eq!(poset.mobius_sum(), BigInt::one());
    }

    #[test]
    fn mobius_sum_is_one() {
        let mut cases = vec![k4(), Matroid::uniform(2, 5).unwrap()];
        for b in enumerate_sequences(5, 2) {
            cases.push(Matroid::schubert(&b).unwrap());
        }
        for m in cases {
            assert_eq!(build_chain_poset(&m).unwrap().mobius_sum(), BigInt::one());
        }
    }

    #[test]
    fn poset_rejects_bad_inputs() {
        let two = Matroid::uniform(1, 2)
            .unwrap()
            .direct_sum(&Matroid::uniform(1, 2).unwrap())
            .unwrap();
        assert!(matches!(build_chain_poset(&two), Err(ChainError::NotConnected)));
        let loopy = Matroid::from_bases(2, &[vec![0]]).unwrap();
        assert!(matches!(build_chain_poset(&loopy), Err(ChainError::HasLoops)));
        // A single coloop is connected but has full rank.
        let coloop = Matroid::from_bases(1, &[vec![0]]).unwrap();
        assert!(matches!(build_chain_poset(&coloop), Err(ChainError::RankOutOfRange { .. })));
    }
}
