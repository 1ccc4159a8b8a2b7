//! Independent volume oracle: lattice-point counting and Ehrhart finite
//! differences.
//!
//! Shares nothing with the chain engine.  The base polytope is cut out by
//! `sum x_i = rank`, the unit box, and one half-space `x(F) <= rank(F)` per
//! subset `F` of the ground set; counting integer points of the dilations
//! `t = 0..D` and taking the `D`-th finite difference recovers the
//! normalized volume, where `D` is the polytope dimension
//! `ground_size - #components`.  Exponential in the ground size by design,
//! hence the hard budget.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::descent::{binomial, factorial};
use crate::matroid::Matroid;
use crate::volume::ExactVolume;

/// Default cap on the ground size accepted by [`oracle_volume`].
pub const DEFAULT_ORACLE_BUDGET: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("ground size {ground_size} exceeds the oracle budget {budget}")]
    BudgetExceeded { ground_size: usize, budget: usize },
}

/// Membership test for the `t`-th dilation of the base polytope: the
/// coordinate box, the total sum, and every subset rank constraint.
pub fn contains_lattice_point(m: &Matroid, x: &[i64], t: u32) -> bool {
    assert_eq!(x.len(), m.ground_size(), "point has the wrong dimension");
    assert!(m.ground_size() <= 24, "membership test is limited to 24 elements");
    let t = i64::from(t);
    if x.iter().any(|&v| v < 0 || v > t) {
        return false;
    }
    if x.iter().sum::<i64>() != t * m.rank() as i64 {
        return false;
    }
    let size = 1usize << m.ground_size();
    let mut sums = vec![0i64; size];
    for mask in 1..size {
        let low = mask & mask.wrapping_neg();
        sums[mask] = sums[mask ^ low] + x[low.trailing_zeros() as usize];
        if sums[mask] > t * m.rank_of(mask as u32) as i64 {
            return false;
        }
    }
    true
}

/// Number of integer points in the `t`-th dilation of the base polytope.
pub fn ehrhart_count(m: &Matroid, t: u32) -> u64 {
    if t == 0 {
        return 1;
    }
    let size = m.ground_size();
    assert!(size <= 24, "oracle point enumeration is limited to 24 elements");
    let target = t * m.rank() as u32;
    let ranks: Vec<u32> = (0..1u64 << size).map(|s| m.rank_of(s as u32) as u32).collect();
    let full = (1u32 << size) - 1;

    // First coordinate splits into independent jobs; integer sums make the
    // result identical for any thread count.
    let (lo, hi) = coordinate_bounds(0, 0, t, target, full, &ranks, size);
    if lo > hi {
        return 0;
    }
    (lo..=hi)
        .into_par_iter()
        .map(|v0| {
            let mut sums = vec![0u32; 1usize << size];
            sums[1] = v0;
            if sums[1] > t * ranks[1] {
                return 0;
            }
            count_from(0, v0, t, target, full, &ranks, size, &mut sums)
        })
        .sum()
}

/// Admissible values for coordinate `depth` given the partial sum: the
/// remaining coordinates can absorb at most `t * min(#remaining,
/// rank(suffix))`, and at least 0.
fn coordinate_bounds(
    depth: usize,
    partial: u32,
    t: u32,
    target: u32,
    full: u32,
    ranks: &[u32],
    size: usize,
) -> (u32, u32) {
    let suffix = full & !((1u32 << (depth + 1)) - 1);
    let remaining = (size - depth - 1) as u32;
    let cap = t * remaining.min(ranks[suffix as usize]);
    let needed = target - partial; // callers keep partial <= target
    let lo = needed.saturating_sub(cap);
    let hi = needed.min(t);
    (lo, hi)
}

/// Count completions given that coordinates `0..=last` are assigned, their
/// subset sums are in `sums`, and their total is `partial`.
#[allow(clippy::too_many_arguments)]
fn count_from(
    last: usize,
    partial: u32,
    t: u32,
    target: u32,
    full: u32,
    ranks: &[u32],
    size: usize,
    sums: &mut [u32],
) -> u64 {
    if last == size - 1 {
        return 1; // the final coordinate was forced and checked by the caller
    }
    let next = last + 1;
    let (lo, hi) = coordinate_bounds(next, partial, t, target, full, ranks, size);
    if lo > hi {
        return 0;
    }
    let bit = 1usize << next;
    let mut total = 0u64;
    for v in lo..=hi {
        // Extend the subset-sum table to every subset whose top element is
        // `next`; each is checked against its rank constraint.  Larger `v`
        // only increases the sums, so the first violation ends the loop.
        let mut ok = true;
        for prefix in 0..bit {
            let s = sums[prefix] + v;
            if s > t * ranks[bit | prefix] {
                ok = false;
                break;
            }
            sums[bit | prefix] = s;
        }
        if !ok {
            break;
        }
        total += count_from(next, partial + v, t, target, full, ranks, size, sums);
    }
    total
}

/// Result of the finite-difference oracle.
#[derive(Debug, Clone)]
pub struct OracleVolume {
    /// Dimension of the base polytope: `ground_size - #components`.
    pub dimension: usize,
    /// Lattice point counts of the dilations `t = 0..=dimension`.
    pub counts: Vec<u64>,
    /// The `dimension`-th finite difference: `dimension! * volume`.
    pub lattice_volume: BigInt,
    /// Normalized volume `lattice_volume / dimension!`.
    pub volume: ExactVolume,
}

/// Normalized volume from first principles, for ground sizes within the
/// budget.
pub fn oracle_volume(m: &Matroid, budget: usize) -> Result<OracleVolume, OracleError> {
    let ground_size = m.ground_size();
    if ground_size > budget {
        return Err(OracleError::BudgetExceeded { ground_size, budget });
    }
    let dimension = ground_size - m.connected_components().len();
    let counts: Vec<u64> = (0..=dimension as u32).map(|t| ehrhart_count(m, t)).collect();
    let mut lattice_volume = BigInt::zero();
    for (j, &c) in counts.iter().rev().enumerate() {
        let term = BigInt::from(binomial(dimension, j)) * BigInt::from(c);
        if j % 2 == 0 {
            lattice_volume += term;
        } else {
            lattice_volume -= term;
        }
    }
    let volume = ExactVolume::new(BigRational::new(
        lattice_volume.clone(),
        BigInt::from(factorial(dimension)),
    ));
    Ok(OracleVolume { dimension, counts, lattice_volume, volume })
}

/// Vertices of the base polytope: exactly the 0/1 incidence vectors of the
/// bases.
pub fn vertices(m: &Matroid) -> Vec<Vec<u8>> {
    m.bases()
        .iter()
        .map(|&b| (0..m.ground_size()).map(|i| (b >> i & 1) as u8).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn k4() -> Matroid {
        Matroid::graphic(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn membership() {
        let m = k4();
        for b in m.bases() {
            let x: Vec<i64> = (0..6).map(|i| i64::from(b >> i & 1)).collect();
            assert!(contains_lattice_point(&m, &x, 1));
        }
        // A circuit-hyperplane incidence vector violates its own rank cut.
        let sp = Matroid::sparse_paving(5, 2, &[vec![0, 1, 2]]).unwrap();
        assert!(!contains_lattice_point(&sp, &[1, 1, 1, 0, 0, 0], 1));
        assert!(contains_lattice_point(&sp, &[1, 1, 0, 1, 0, 0], 1));
        // Barycenter of the second dilation of U_{2,4}: (1,1,1,1).
        let u = Matroid::uniform(2, 4).unwrap();
        assert!(contains_lattice_point(&u, &[1, 1, 1, 1], 2));
        assert!(contains_lattice_point(&u, &[2, 1, 1, 0], 2));
        assert!(!contains_lattice_point(&u, &[3, 1, 0, 0], 2));
        assert!(!contains_lattice_point(&u, &[2, 1, 1, 1], 2));
        assert!(!contains_lattice_point(&u, &[-1, 2, 2, 1], 2));
    }

    #[test]
    fn ehrhart_counts_frozen() {
        // Values frozen from an independent implementation.
        let m = k4();
        let counts: Vec<u64> = (0..=6).map(|t| ehrhart_count(&m, t)).collect();
        assert_eq!(counts, vec![1, 16, 101, 396, 1167, 2848, 6083]);
        let u36 = Matroid::uniform(3, 6).unwrap();
        let counts: Vec<u64> = (0..=6).map(|t| ehrhart_count(&u36, t)).collect();
        assert_eq!(counts, vec![1, 20, 141, 580, 1751, 4332, 9331]);
        let u24 = Matroid::uniform(2, 4).unwrap();
        let counts: Vec<u64> = (0..=4).map(|t| ehrhart_count(&u24, t)).collect();
        assert_eq!(counts, vec![1, 6, 19, 44, 85]);
        let sp = Matroid::sparse_paving(5, 2, &[vec![0, 1, 2]]).unwrap();
        let counts: Vec<u64> = (0..=5).map(|t| ehrhart_count(&sp, t)).collect();
        assert_eq!(counts, vec![1, 19, 131, 534, 1605, 3961]);
        let s = Matroid::schubert(&"11010".parse().unwrap()).unwrap();
        let counts: Vec<u64> = (0..=5).map(|t| ehrhart_count(&s, t)).collect();
        assert_eq!(counts, vec![1, 9, 38, 110, 255, 511]);
    }

    #[test]
    fn dilation_one_counts_bases_for_uniform() {
        for (r, m) in [(1usize, 3usize), (2, 4), (3, 6), (2, 5)] {
            let u = Matroid::uniform(r, m).unwrap();
            assert_eq!(ehrhart_count(&u, 1), u.bases().len() as u64);
        }
        assert_eq!(ehrhart_count(&k4(), 1), 16);
    }

    #[test]
    fn oracle_volumes() {
        let v = oracle_volume(&k4(), DEFAULT_ORACLE_BUDGET).unwrap();
        assert_eq!(v.dimension, 5);
        assert_eq!(v.lattice_volume, BigInt::from(42));
        assert_eq!(v.volume.to_string(), "7/20");
        let v = oracle_volume(&Matroid::uniform(3, 6).unwrap(), DEFAULT_ORACLE_BUDGET).unwrap();
        assert_eq!(v.lattice_volume, BigInt::from(66));
        let free = Matroid::from_bases(3, &[vec![0, 1, 2]]).unwrap();
        let v = oracle_volume(&free, DEFAULT_ORACLE_BUDGET).unwrap();
        assert_eq!(v.dimension, 0);
        assert_eq!(v.lattice_volume, BigInt::from(1));
    }

    #[test]
    fn budget_is_enforced() {
        let m = k4();
        assert!(matches!(
            oracle_volume(&m, 5),
            Err(OracleError::BudgetExceeded { ground_size: 6, budget: 5 })
        ));
    }

    #[test]
    fn ehrhart_degree_bound() {
        // The (D+1)-st finite difference of a degree-D polynomial vanishes.
        for m in [k4(), Matroid::uniform(2, 4).unwrap()] {
            let d = m.ground_size() - m.connected_components().len();
            let counts: Vec<i128> = (0..=(d + 1) as u32)
                .map(|t| ehrhart_count(&m, t) as i128)
                .collect();
            let mut diff = counts;
            for _ in 0..=d {
                diff = diff.windows(2).map(|w| w[1] - w[0]).collect();
            }
            assert_eq!(diff, vec![0]);
        }
    }

    #[test]
    fn oracle_respects_duality() {
        for m in [
            k4(),
            Matroid::uniform(2, 5).unwrap(),
            Matroid::sparse_paving(4, 1, &[vec![0, 1]]).unwrap(),
        ] {
            let a = oracle_volume(&m, DEFAULT_ORACLE_BUDGET).unwrap();
            let b = oracle_volume(&m.dual(), DEFAULT_ORACLE_BUDGET).unwrap();
            assert_eq!(a.volume, b.volume);
        }
    }

    #[test]
    fn removing_a_basis_never_increases_counts() {
        let u = Matroid::uniform(3, 6).unwrap();
        let sp = Matroid::sparse_paving(5, 2, &[vec![0, 1, 2]]).unwrap();
        for t in 0..=5 {
            assert!(ehrhart_count(&sp, t) <= ehrhart_count(&u, t));
        }
    }

    #[test]
    fn vertex_list() {
        let u = Matroid::uniform(2, 3).unwrap();
        assert_eq!(vertices(&u), vec![vec![1, 1, 0], vec![1, 0, 1], vec![0, 1, 1]]);
        let m = k4();
        let vs = vertices(&m);
        assert_eq!(vs.len(), m.bases().len());
        for v in vs {
            let x: Vec<i64> = v.iter().map(|&b| i64::from(b)).collect();
            assert!(contains_lattice_point(&m, &x, 1));
        }
    }
}
