//! Property tests over randomly sampled sequences and matroids.

mod common;

use proptest::prelude::*;

use matroid_volume::chains::{chain_to_sequence, sequence_to_chain, CyclicFlatChain};
use matroid_volume::descent::{delta, delta_leq, down_set, BinarySequence};
use matroid_volume::matroid::{elements_from_mask, greedy_hyperplane_family, Matroid};
use matroid_volume::oracle::{oracle_volume, DEFAULT_ORACLE_BUDGET};
use matroid_volume::volume::volume;

use common::relabel;

fn sequence_in(n: usize, d: usize) -> impl Strategy<Value = BinarySequence> {
    let interior: Vec<usize> = (1..n).collect();
    proptest::sample::subsequence(interior, d).prop_map(move |ones| {
        let mut bits = vec![false; n + 1];
        bits[0] = true;
        for i in ones {
            bits[i] = true;
        }
        BinarySequence::new(bits).unwrap()
    })
}

fn any_sequence(max_n: usize) -> impl Strategy<Value = BinarySequence> {
    (2..=max_n)
        .prop_flat_map(|n| (Just(n), 0..n))
        .prop_flat_map(|(n, d)| sequence_in(n, d))
}

fn sequence_pair(max_n: usize) -> impl Strategy<Value = (BinarySequence, BinarySequence)> {
    (2..=max_n)
        .prop_flat_map(|n| (Just(n), 0..n))
        .prop_flat_map(|(n, d)| (sequence_in(n, d), sequence_in(n, d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn duality_is_an_involution_preserving_delta(b in any_sequence(8)) {
        prop_assert_eq!(b.dual().dual(), b.clone());
        prop_assert_eq!(delta(&b), delta(&b.dual()));
    }

    #[test]
    fn partition_round_trip(b in any_sequence(8)) {
        let p = b.to_partition();
        prop_assert!(p.parts().len() <= b.d());
        prop_assert!(p.parts().first().is_none_or(|&x| x <= b.n() - b.d() - 1));
        let back = BinarySequence::from_partition(p.parts(), b.n(), b.d()).unwrap();
        prop_assert_eq!(back, b);
    }

    #[test]
    fn order_matches_partition_containment(pair in sequence_pair(7)) {
        let (a, b) = pair;
        prop_assert_eq!(
            a.leq(&b).unwrap(),
            b.to_partition().contains(&a.to_partition())
        );
    }

    #[test]
    fn prefix_order_is_a_partial_order(pair in sequence_pair(7)) {
        let (a, b) = pair;
        prop_assert!(a.leq(&a).unwrap());
        if a.leq(&b).unwrap() && b.leq(&a).unwrap() {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn down_set_is_an_order_ideal(b in any_sequence(7)) {
        let ideal = down_set(&b);
        prop_assert!(ideal.contains(&b));
        // Closed downward: anything below a member is a member.
        for x in &ideal {
            for y in down_set(x) {
                prop_assert!(ideal.contains(&y));
            }
        }
        let total: num_bigint::BigUint = ideal.iter().map(delta).sum();
        prop_assert_eq!(total, delta_leq(&b));
    }

    #[test]
    fn schubert_chain_dictionary_round_trips(b in any_sequence(6)) {
        let s = Matroid::schubert(&b).unwrap();
        let full = s.full_mask();
        let proper: Vec<u32> = s
            .cyclic_flats()
            .iter()
            .map(|f| f.elements)
            .filter(|&f| f != 0 && f != full)
            .collect();
        prop_assert_eq!(&proper, &sequence_to_chain(&b));
        let chain = CyclicFlatChain::new(&s, proper).unwrap();
        prop_assert_eq!(chain_to_sequence(&s, &chain).unwrap(), b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn engine_matches_oracle_on_random_sparse_paving(
        (n, d, picks) in (3usize..=5)
            .prop_flat_map(|n| (Just(n), 1..n))
            .prop_flat_map(|(n, d)| {
                let family = greedy_hyperplane_family(n, d);
                let len = family.len();
                (Just(n), Just(d), proptest::sample::subsequence(family, 0..=len))
            })
    ) {
        // Any subset of an admissible family is admissible.
        let sets: Vec<Vec<usize>> = picks.iter().map(|&h| elements_from_mask(h)).collect();
        let m = Matroid::sparse_paving(n, d, &sets).unwrap();
        let engine = volume(&m).unwrap();
        let oracle = oracle_volume(&m, DEFAULT_ORACLE_BUDGET).unwrap();
        prop_assert_eq!(&engine, &oracle.volume);
    }

    #[test]
    fn volume_is_relabeling_and_dual_invariant(
        (b, seed) in (any_sequence(5), any::<u64>())
    ) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let s = Matroid::schubert(&b).unwrap();
        let v = volume(&s).unwrap();
        prop_assert_eq!(&v, &volume(&s.dual()).unwrap());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut perm: Vec<usize> = (0..s.ground_size()).collect();
        perm.shuffle(&mut rng);
        prop_assert_eq!(&v, &volume(&relabel(&s, &perm)).unwrap());
    }
}
