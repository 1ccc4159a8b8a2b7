//! Built-in invariant suites for the `selftest` verb.
//!
//! Each suite re-derives a structural identity at desk scale and reports
//! one `ok`/`FAIL` line.  Sizes are bounded so the whole run stays within
//! a few seconds.

use std::io::Write;

use num_bigint::{BigInt, BigUint};
use num_traits::One;

use matroid_volume::chains::{build_chain_poset, chain_to_sequence, sequence_to_chain, CyclicFlatChain};
use matroid_volume::descent::{
    binomial, delta, delta_leq, enumerate_sequences, eulerian, factorial, BinarySequence,
};
use matroid_volume::matroid::{elements_from_mask, greedy_hyperplane_family, Matroid};
use matroid_volume::oracle::{self, DEFAULT_ORACLE_BUDGET};
use matroid_volume::volume;

fn k4() -> Matroid {
    Matroid::graphic(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
}

fn descent_partition(max_n: usize) -> Result<(), String> {
    for n in 1..=max_n {
        let mut total = BigUint::ZERO;
        for d in 0..n {
            let row: BigUint = enumerate_sequences(n, d).iter().map(delta).sum();
            if row != eulerian(n, d) {
                return Err(format!("sum of delta over L({n},{d}) != eulerian"));
            }
            total += row;
        }
        if total != factorial(n) {
            return Err(format!("descent classes of [{n}] do not partition n!"));
        }
    }
    Ok(())
}

fn descent_duality(max_n: usize) -> Result<(), String> {
    for n in 1..=max_n {
        for d in 0..n {
            for b in enumerate_sequences(n, d) {
                if delta(&b) != delta(&b.dual()) {
                    return Err(format!("delta({b}) != delta({})", b.dual()));
                }
            }
        }
    }
    Ok(())
}

fn top_element_identities(max_n: usize) -> Result<(), String> {
    for n in 1..=max_n {
        for d in 0..n {
            let top = BinarySequence::top(n, d);
            if delta(&top) != binomial(n - 1, d) {
                return Err(format!("delta(top of L({n},{d})) != binom(n-1,d)"));
            }
            if delta_leq(&top) != eulerian(n, d) {
                return Err(format!("delta_leq(top of L({n},{d})) != eulerian"));
            }
        }
    }
    Ok(())
}

fn young_isomorphism(max_n: usize) -> Result<(), String> {
    for n in 2..=max_n {
        for d in 1..n {
            let all = enumerate_sequences(n, d);
            for a in &all {
                let p = a.to_partition();
                let back = BinarySequence::from_partition(p.parts(), n, d)
                    .map_err(|e| format!("partition round trip failed for {a}: {e}"))?;
                if &back != a {
                    return Err(format!("partition round trip changed {a} into {back}"));
                }
                for b in &all {
                    let order = a.leq(b).unwrap();
                    let contained = b.to_partition().contains(&a.to_partition());
                    if order != contained {
                        return Err(format!("order mismatch between {a} and {b}"));
                    }
                }
            }
        }
    }
    Ok(())
}

fn schubert_chain_round_trip(max_n: usize) -> Result<(), String> {
    for n in 2..=max_n.min(6) {
        for d in 0..n {
            for b in enumerate_sequences(n, d) {
                let s = Matroid::schubert(&b).map_err(|e| e.to_string())?;
                let full = s.full_mask();
                let proper: Vec<u32> = s
                    .cyclic_flats()
                    .iter()
                    .map(|f| f.elements)
                    .filter(|&f| f != 0 && f != full)
                    .collect();
                if proper != sequence_to_chain(&b) {
                    return Err(format!("cyclic flats of S({b}) are not the expected chain"));
                }
                let chain = CyclicFlatChain::new(&s, proper).map_err(|e| e.to_string())?;
                let back = chain_to_sequence(&s, &chain).map_err(|e| e.to_string())?;
                if back != b {
                    return Err(format!("chain of S({b}) maps back to {back}"));
                }
            }
        }
    }
    Ok(())
}

fn test_matroids(max_n: usize) -> Vec<Matroid> {
    let mut out = vec![k4()];
    for m in 2..=max_n + 1 {
        for r in 1..m {
            out.push(Matroid::uniform(r, m).unwrap());
        }
    }
    for n in 2..=max_n.min(5) {
        for d in 1..n {
            let family = greedy_hyperplane_family(n, d);
            for alpha in 1..=family.len() {
                let sets: Vec<Vec<usize>> =
                    family[..alpha].iter().map(|&h| elements_from_mask(h)).collect();
                if let Ok(sp) = Matroid::sparse_paving(n, d, &sets) {
                    if sp.is_connected() {
                        out.push(sp);
                    }
                }
            }
        }
    }
    for b in enumerate_sequences(4, 2) {
        out.push(Matroid::schubert(&b).unwrap());
    }
    out
}

fn mobius_normalization(max_n: usize) -> Result<(), String> {
    for m in test_matroids(max_n.min(5)) {
        let poset = build_chain_poset(&m).map_err(|e| e.to_string())?;
        if poset.mobius_sum() != BigInt::one() {
            return Err(format!(
                "Mobius weights sum to {} on a {}-element matroid",
                poset.mobius_sum(),
                m.ground_size()
            ));
        }
    }
    Ok(())
}

fn engine_matches_oracle(max_n: usize) -> Result<(), String> {
    for m in test_matroids(max_n.min(4)) {
        if m.ground_size() > 6 {
            continue;
        }
        let engine = volume::volume(&m).map_err(|e| e.to_string())?;
        let oracle = oracle::oracle_volume(&m, DEFAULT_ORACLE_BUDGET).map_err(|e| e.to_string())?;
        if &engine != &oracle.volume {
            return Err(format!(
                "engine {} vs oracle {} on a {}-element matroid",
                engine, oracle.volume, m.ground_size()
            ));
        }
    }
    Ok(())
}

fn relaxation_ladder() -> Result<(), String> {
    let mut m = k4();
    let mut expected = BigInt::from(42);
    loop {
        let v = volume::volume(&m).map_err(|e| e.to_string())?;
        if v.scaled_by_factorial(5) != Some(expected.clone()) {
            return Err(format!("ladder volume {v} != {expected}/120"));
        }
        let Some(&h) = m.circuit_hyperplanes().first() else {
            break;
        };
        let predicted = volume::relaxation_volume(&m, h).map_err(|e| e.to_string())?;
        m = m.relax(h).map_err(|e| e.to_string())?;
        expected += 6;
        if volume::volume(&m).map_err(|e| e.to_string())? != predicted {
            return Err("relaxation prediction missed".into());
        }
    }
    if expected != BigInt::from(66) {
        return Err("ladder did not end at the hypersimplex".into());
    }
    Ok(())
}

fn volume_duality(max_n: usize) -> Result<(), String> {
    for m in test_matroids(max_n.min(4)) {
        let v = volume::volume(&m).map_err(|e| e.to_string())?;
        let vd = volume::volume(&m.dual()).map_err(|e| e.to_string())?;
        if v != vd {
            return Err(format!("volume {v} != dual volume {vd}"));
        }
    }
    Ok(())
}

/// Run every suite, writing one line per suite; returns overall success.
pub fn run_suites(max_n: usize, out: &mut dyn Write) -> bool {
    let suites: Vec<(&str, Box<dyn Fn() -> Result<(), String>>)> = vec![
        ("descent-partition", Box::new(move || descent_partition(max_n))),
        ("descent-duality", Box::new(move || descent_duality(max_n))),
        ("top-element-identities", Box::new(move || top_element_identities(max_n))),
        ("young-isomorphism", Box::new(move || young_isomorphism(max_n))),
        ("schubert-chain-round-trip", Box::new(move || schubert_chain_round_trip(max_n))),
        ("mobius-normalization", Box::new(move || mobius_normalization(max_n))),
        ("engine-matches-oracle", Box::new(move || engine_matches_oracle(max_n))),
        ("relaxation-ladder", Box::new(relaxation_ladder)),
        ("volume-duality", Box::new(move || volume_duality(max_n))),
    ];
    let mut failures = 0usize;
    let total = suites.len();
    for (name, suite) in suites {
        match suite() {
            Ok(()) => {
                let _ = writeln!(out, "ok   {name}");
            }
            Err(detail) => {
                failures += 1;
                let _ = writeln!(out, "FAIL {name}: {detail}");
            }
        }
    }
    let _ = writeln!(out, "selftest: {}/{} suites passed", total - failures, total);
    failures == 0
}
