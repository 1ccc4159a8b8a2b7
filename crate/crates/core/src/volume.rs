//! Exact normalized volumes of matroid base polytopes.
//!
//! The core computation expands the volume of a connected loopless matroid
//! as a Möbius-weighted sum of `delta_leq` values over all anchored chains
//! of cyclic flats, divided by `n!`.  Closed-form fast paths cover Schubert
//! matroids, sparse paving matroids, and circuit-hyperplane relaxations.
//! Loops are stripped and connected components multiply.

use std::collections::HashMap;
use std::fmt;
use std::ops::Mul;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::chains::{build_chain_poset, chain_to_sequence, ChainError, CyclicFlatChain};
use crate::descent::{self, BinarySequence};
use crate::matroid::{elements_from_mask, Matroid, MatroidError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VolumeError {
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error("the Schubert matroid of {0} is disconnected; the ideal-count formula does not apply")]
    DisconnectedSchubert(String),
    #[error("no connected sparse paving matroid exists with these parameters: the closed form is negative ({0})")]
    NegativeSparsePaving(BigInt),
    #[error("relaxation requires a connected matroid")]
    RelaxationNotConnected,
    #[error("{0:?} is not a circuit-hyperplane")]
    NotCircuitHyperplane(Vec<usize>),
}

/// A normalized volume: an exact non-negative rational.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExactVolume {
    value: BigRational,
}

impl ExactVolume {
    pub fn new(value: BigRational) -> Self {
        ExactVolume { value }
    }

    pub fn one() -> Self {
        ExactVolume { value: BigRational::one() }
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn numerator(&self) -> &BigInt {
        self.value.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.value.denom()
    }

    /// `n! * Vol` when that is an integer (it is for every connected
    /// matroid on `n+1` elements).
    pub fn scaled_by_factorial(&self, n: usize) -> Option<BigInt> {
        let scaled = &self.value * BigRational::from(BigInt::from(descent::factorial(n)));
        scaled.is_integer().then(|| scaled.to_integer())
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for ExactVolume {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl fmt::Debug for ExactVolume {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactVolume({})", self.value)
    }
}

impl Mul for ExactVolume {
    type Output = ExactVolume;

    fn mul(self, rhs: ExactVolume) -> ExactVolume {
        ExactVolume { value: self.value * rhs.value }
    }
}

/// One row of the chain expansion: a chain, its sequence, its Möbius
/// weight, and the ideal count it contributes.
#[derive(Debug, Clone)]
pub struct ChainTraceRow {
    pub chain: CyclicFlatChain,
    pub sequence: BinarySequence,
    pub mobius: BigInt,
    pub delta_leq: BigUint,
}

/// Volume of a connected loopless matroid by the cyclic-flat chain
/// expansion, together with the full per-chain ledger.
pub fn volume_connected_trace(m: &Matroid) -> Result<(ExactVolume, Vec<ChainTraceRow>), VolumeError> {
    let poset = build_chain_poset(m)?;
    let n = m.ground_size() - 1;
    let mut memo: HashMap<BinarySequence, BigUint> = HashMap::new();
    let mut rows = Vec::with_capacity(poset.len());
    let mut sum = BigInt::zero();
    for entry in poset.entries() {
        let sequence = chain_to_sequence(m, &entry.chain)?;
        let count = memo
            .entry(sequence.clone())
            .or_insert_with(|| descent::delta_leq(&sequence))
            .clone();
        sum += &entry.mobius * BigInt::from(count.clone());
        rows.push(ChainTraceRow {
            chain: entry.chain.clone(),
            sequence,
            mobius: entry.mobius.clone(),
            delta_leq: count,
        });
    }
    debug_assert!(sum.is_positive(), "chain expansion must be positive");
    let value = BigRational::new(sum, BigInt::from(descent::factorial(n)));
    Ok((ExactVolume::new(value), rows))
}

/// Volume of a connected loopless matroid with `1 <= rank <= n`.
pub fn volume_connected(m: &Matroid) -> Result<ExactVolume, VolumeError> {
    volume_connected_trace(m).map(|(v, _)| v)
}

/// Volume of an arbitrary matroid: loops are deleted (they pin coordinates
/// to zero), coloop components contribute a factor 1, and the remaining
/// connected components multiply.
pub fn volume(m: &Matroid) -> Result<ExactVolume, VolumeError> {
    if m.rank() == 0 {
        // Every element is a loop; the polytope is the origin.
        return Ok(ExactVolume::one());
    }
    let loops = m.loops();
    let stripped;
    let work = if loops != 0 {
        stripped = m.deletion(loops).0;
        &stripped
    } else {
        m
    };
    let mut result = ExactVolume::one();
    for comp in work.connected_components() {
        if comp.count_ones() == 1 {
            continue; // coloop: a point factor
        }
        let (restricted, _) = work.restriction(comp);
        result = result * volume_connected(&restricted)?;
    }
    Ok(result)
}

/// Volume of the Schubert matroid of `b` without building the chain poset:
/// the ideal count below `b` over `n!`.
pub fn schubert_volume(b: &BinarySequence) -> Result<ExactVolume, VolumeError> {
    let s = Matroid::schubert(b)?;
    if !s.is_connected() {
        return Err(VolumeError::DisconnectedSchubert(b.to_string()));
    }
    let value = BigRational::new(
        BigInt::from(descent::delta_leq(b)),
        BigInt::from(descent::factorial(b.n())),
    );
    Ok(ExactVolume::new(value))
}

/// Closed form for a connected sparse paving matroid on `{0..n}` of rank
/// `d+1` with `alpha` circuit-hyperplanes.
pub fn sparse_paving_volume(n: usize, d: usize, alpha: usize) -> Result<ExactVolume, VolumeError> {
    assert!(n >= 1 && d < n, "sparse_paving_volume requires 0 <= d < n");
    let numerator = BigInt::from(descent::eulerian(n, d))
        - BigInt::from(alpha) * BigInt::from(descent::binomial(n - 1, d));
    if numerator.is_negative() {
        return Err(VolumeError::NegativeSparsePaving(numerator));
    }
    let value = BigRational::new(numerator, BigInt::from(descent::factorial(n)));
    Ok(ExactVolume::new(value))
}

/// Volume of the relaxation of connected `m` at circuit-hyperplane `h`:
/// the volume of `m` plus `binom(n-1, d) / n!`.
pub fn relaxation_volume(m: &Matroid, h: u32) -> Result<ExactVolume, VolumeError> {
    if !m.is_connected() {
        return Err(VolumeError::RelaxationNotConnected);
    }
    if !m.is_circuit_hyperplane(h) {
        return Err(VolumeError::NotCircuitHyperplane(elements_from_mask(h)));
    }
    let n = m.ground_size() - 1;
    let d = m.rank() - 1;
    let increment = BigRational::new(
        BigInt::from(descent::binomial(n - 1, d)),
        BigInt::from(descent::factorial(n)),
    );
    let base = volume(m)?;
    Ok(ExactVolume::new(base.value + increment))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descent::{delta_leq, enumerate_sequences, eulerian, factorial};
    use crate::matroid::mask_from_elements;

    fn k4() -> Matroid {
        Matroid::graphic(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn ratio(num: u64, den: u64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    #[test]
    fn hypersimplex_volumes() {
        for n in 1..=6usize {
            for d in 0..n {
                let u = Matroid::uniform(d + 1, n + 1).unwrap();
                let v = volume_connected(&u).unwrap();
                let expected = BigRational::new(
                    BigInt::from(eulerian(n, d)),
                    BigInt::from(factorial(n)),
                );
                assert_eq!(v.value(), &expected, "U_{{{}, {}}}", d + 1, n + 1);
            }
        }
        let v = volume_connected(&Matroid::uniform(3, 6).unwrap()).unwrap();
        assert_eq!(v.value(), &ratio(66, 120));
    }

    #[test]
    fn k4_headline() {
        let v = volume_connected(&k4()).unwrap();
        assert_eq!(v.value(), &ratio(42, 120));
        assert_eq!(v.scaled_by_factorial(5), Some(BigInt::from(42)));
        assert_eq!(v.to_string(), "7/20");
    }

    #[test]
    fn trace_ledger_sums() {
        let (v, rows) = volume_connected_trace(&k4()).unwrap();
        assert_eq!(rows.len(), 5);
        let total: BigInt = rows
            .iter()
            .map(|r| &r.mobius * BigInt::from(r.delta_leq.clone()))
            .sum();
        assert_eq!(total, BigInt::from(42));
        assert_eq!(v.scaled_by_factorial(5).unwrap(), total);
        for r in &rows {
            if r.chain.is_empty() {
                assert_eq!(r.sequence.to_string(), "111000");
                assert_eq!(r.delta_leq, BigUint::from(66u32));
            } else {
                assert_eq!(r.sequence.to_string(), "110100");
                assert_eq!(r.delta_leq, BigUint::from(60u32));
            }
        }
    }

    #[test]
    fn product_rule() {
        let free = Matroid::from_bases(3, &[vec![0, 1, 2]]).unwrap();
        assert_eq!(volume(&free).unwrap(), ExactVolume::one());
        let u24 = Matroid::uniform(2, 4).unwrap();
        let sum = u24.direct_sum(&u24).unwrap();
        assert_eq!(volume(&sum).unwrap().value(), &(ratio(4, 6) * ratio(4, 6)));
        // Loops do not change the volume: same bases, one extra element.
        let with_loop = Matroid::from_bases(7, &k4().basis_sets()).unwrap();
        assert_eq!(with_loop.loops(), 1 << 6);
        assert_eq!(volume(&with_loop).unwrap().value(), &ratio(42, 120));
    }

    #[test]
    fn schubert_fast_path() {
        let b: BinarySequence = "11010".parse().unwrap();
        let v = schubert_volume(&b).unwrap();
        assert_eq!(v.value(), &ratio(8, 24));
        for n in 1..=6usize {
            for d in 0..n {
                let top = BinarySequence::top(n, d);
                assert_eq!(
                    schubert_volume(&top).unwrap().value(),
                    &BigRational::new(BigInt::from(eulerian(n, d)), BigInt::from(factorial(n)))
                );
            }
        }
    }

    #[test]
    fn schubert_fast_path_matches_engine() {
        for n in 1..=5usize {
            for d in 0..n {
                for b in enumerate_sequences(n, d) {
                    let s = Matroid::schubert(&b).unwrap();
                    assert_eq!(
                        volume_connected(&s).unwrap(),
                        schubert_volume(&b).unwrap(),
                        "b={b}"
                    );
                }
            }
        }
    }

    #[test]
    fn schubert_boolean_collapse() {
        // For Schubert matroids the Möbius weight concentrates on the full
        // maximal chain.
        for b in enumerate_sequences(5, 2) {
            let s = Matroid::schubert(&b).unwrap();
            let (_, rows) = volume_connected_trace(&s).unwrap();
            let max_len = rows.iter().map(|r| r.chain.len()).max().unwrap();
            for r in &rows {
                if r.chain.len() == max_len {
                    assert_eq!(r.mobius, BigInt::one());
                    assert_eq!(r.sequence, b);
                } else {
                    assert!(r.mobius.is_zero());
                }
            }
        }
    }

    #[test]
    fn sparse_paving_closed_form() {
        assert_eq!(sparse_paving_volume(5, 2, 4).unwrap().value(), &ratio(42, 120));
        assert_eq!(sparse_paving_volume(5, 2, 1).unwrap().value(), &ratio(60, 120));
        assert_eq!(
            sparse_paving_volume(5, 2, 0).unwrap().value(),
            &BigRational::new(BigInt::from(eulerian(5, 2)), BigInt::from(factorial(5)))
        );
        assert!(matches!(
            sparse_paving_volume(5, 2, 100),
            Err(VolumeError::NegativeSparsePaving(_))
        ));
        // Matches the chain engine on a constructed instance.
        let sp = Matroid::sparse_paving(5, 2, &[vec![0, 1, 2]]).unwrap();
        assert_eq!(volume_connected(&sp).unwrap(), sparse_paving_volume(5, 2, 1).unwrap());
    }

    #[test]
    fn relaxation_ladder() {
        let mut m = k4();
        let mut expected = 42u64;
        loop {
            let v = volume(&m).unwrap();
            assert_eq!(v.value(), &ratio(expected, 120));
            let Some(&h) = m.circuit_hyperplanes().first() else {
                break;
            };
            let predicted = relaxation_volume(&m, h).unwrap();
            m = m.relax(h).unwrap();
            expected += 6;
            assert_eq!(predicted.value(), &ratio(expected, 120));
            assert_eq!(volume(&m).unwrap(), predicted);
        }
        assert_eq!(expected, 66);
        assert_eq!(m, Matroid::uniform(3, 6).unwrap());
    }

    #[test]
    fn relaxation_errors() {
        let m = k4();
        let not_ch = mask_from_elements(&[0, 1], 6).unwrap();
        assert!(matches!(
            relaxation_volume(&m, not_ch),
            Err(VolumeError::NotCircuitHyperplane(_))
        ));
        let two = Matroid::uniform(1, 2)
            .unwrap()
            .direct_sum(&Matroid::uniform(1, 2).unwrap())
            .unwrap();
        assert!(matches!(
            relaxation_volume(&two, 0b11),
            Err(VolumeError::RelaxationNotConnected)
        ));
    }

    #[test]
    fn volume_equals_dual_volume() {
        let cases = vec![
            k4(),
            Matroid::uniform(2, 5).unwrap(),
            Matroid::sparse_paving(5, 2, &[vec![0, 1, 2], vec![0, 3, 4]]).unwrap(),
            Matroid::schubert(&"110100".parse().unwrap()).unwrap(),
        ];
        for m in cases {
            assert_eq!(volume(&m).unwrap(), volume(&m.dual()).unwrap());
        }
    }

    #[test]
    fn positivity_and_hypersimplex_bound() {
        for b in enumerate_sequences(5, 2) {
            let s = Matroid::schubert(&b).unwrap();
            let v = volume_connected(&s).unwrap();
            assert!(v.value() > &BigRational::zero());
            assert!(v.value() <= &ratio(66, 120));
        }
    }

    #[test]
    fn delta_leq_memoized_matches_direct() {
        // The engine memoizes ideal counts per sequence; both paths agree.
        let (_, rows) = volume_connected_trace(&k4()).unwrap();
        for r in &rows {
            assert_eq!(r.delta_leq, delta_leq(&r.sequence));
        }
    }
}
