use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;

use ultraseq::debruijn::enumerate_sequences_with_frequency;
use ultraseq::lowering::binary_block_coefficients;
use ultraseq::seqcore::enumerate_necklaces;
use ultraseq::{count_members, lower, project, Alphabet, CyclicSequence, FrequencyVector};

/// Level-`p` vector to the set of level-`(p+1)` vectors realized under it.
fn preimages(necklaces: &[CyclicSequence], p: usize) -> BTreeMap<FrequencyVector, BTreeSet<FrequencyVector>> {
    let mut out: BTreeMap<_, BTreeSet<_>> = BTreeMap::new();
    for s in necklaces {
        out.entry(project(s, p).unwrap()).or_default().insert(project(s, p + 1).unwrap());
    }
    out
}

#[test]
fn lowering_equals_brute_force_preimage() {
    for (l, max_n) in [(2usize, 10usize), (3, 6), (4, 4)] {
        let alphabet = Alphabet::new(l).unwrap();
        for n in 1..=max_n {
            let necklaces = enumerate_necklaces(n, alphabet).unwrap();
            for p in 0..n {
                for (y, expected) in preimages(&necklaces, p) {
                    let got: BTreeSet<_> = lower(&y).unwrap().into_iter().collect();
                    assert_eq!(got, expected, "l={l} n={n} p={p} y={:?}", y.to_dense());
                }
            }
        }
    }
}

#[test]
fn member_counts_and_enumeration_match_grouping() {
    for (l, max_n) in [(2usize, 10usize), (3, 6)] {
        let alphabet = Alphabet::new(l).unwrap();
        for n in 1..=max_n {
            let necklaces = enumerate_necklaces(n, alphabet).unwrap();
            for p in [1, n / 2, n] {
                let mut groups: BTreeMap<FrequencyVector, Vec<CyclicSequence>> = BTreeMap::new();
                for s in &necklaces {
                    groups.entry(project(s, p).unwrap()).or_default().push(s.clone());
                }
                for (z, members) in groups {
                    if p >= 1 {
                        assert_eq!(count_members(&z).unwrap(), BigUint::from(members.len()));
                        let listed: BTreeSet<_> =
                            enumerate_sequences_with_frequency(&z).unwrap().into_iter().collect();
                        assert_eq!(listed, members.into_iter().collect::<BTreeSet<_>>());
                    }
                }
            }
        }
    }
}

#[test]
fn level1_branching_equals_minority_count() {
    for n in 2..=15u64 {
        for z in 1..=n / 2 {
            let y = FrequencyVector::from_dense(1, Alphabet::BINARY, &[n - z, z]).unwrap();
            assert_eq!(lower(&y).unwrap().len() as u64, z, "n={n} z={z}");
        }
    }
}

#[test]
fn binary_block_coefficients_follow_from_the_vector() {
    let s = CyclicSequence::parse("00101101", Alphabet::BINARY).unwrap();
    let y = project(&s, 2).unwrap();
    let z = project(&s, 3).unwrap();
    let c = binary_block_coefficients(&z).unwrap();
    // middle words u are single letters: Z̄[0u0] has rank 2u, Z̄[1u0] rank 4+2u
    assert_eq!(c.len(), 2);
    for (u, &(c0, c1)) in c.iter().enumerate() {
        let u = u as u64;
        assert_eq!(c0, z.get(2 * u) as f64 - y.get(u) as f64 / 2.0);
        assert_eq!(c1, z.get(4 + 2 * u) as f64 - y.get(2 + u) as f64 / 2.0);
    }
}

#[test]
fn unrealizable_vectors_lower_to_nothing() {
    // 01 without 10 is unbalanced.
    let y = FrequencyVector::from_dense(2, Alphabet::BINARY, &[1, 1, 0, 1]).unwrap();
    assert!(lower(&y).unwrap().is_empty());
}
