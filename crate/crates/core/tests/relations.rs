use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use pirlab::relations::{
    build_hierarchy, power_sum, ptm_sequence, verify_hierarchy, Blockage, IntegerAssignment, SignSequence,
};

/// Direct evaluation with nothing shared with the library's power sums.
fn oracle_sum(signs: &[i8], ints: &[i64], k: u32) -> BigInt {
    let mut total = BigInt::zero();
    for (s, a) in signs.iter().zip(ints) {
        let mut term = BigInt::from(1);
        for _ in 0..k {
            term *= BigInt::from(*a);
        }
        total += BigInt::from(*s) * term;
    }
    total
}

/// Highest level reached by brute force over every aligned block and order.
fn oracle_level(signs: &[i8], ints: &[i64]) -> usize {
    let len = signs.len();
    let mut level = 0;
    loop {
        let size = 1usize << (level + 1);
        if size > len || !len.is_multiple_of(size) {
            return level;
        }
        let ok = (0..len / size).all(|b| {
            let r = b * size..(b + 1) * size;
            (0..=level as u32).all(|k| oracle_sum(&signs[r.clone()], &ints[r.clone()], k).is_zero())
        });
        if !ok {
            return level;
        }
        level += 1;
    }
}

#[test]
fn ptm16_order_sums() {
    let s = ptm_sequence(16).unwrap();
    let a = IntegerAssignment::descending(16);
    for k in 0..4 {
        assert!(power_sum(&s, &a, k, 0..16).unwrap().is_zero(), "order {k}");
    }
    let order4 = oracle_sum(s.as_slice(), a.as_slice(), 4);
    // 4! * 2^(4*3/2) for the PTM prefix of length 16
    assert_eq!(order4, BigInt::from(1536));
    assert_eq!(power_sum(&s, &a, 4, 0..16).unwrap(), order4);
}

#[test]
fn ptm16_hierarchy_levels() {
    let h = build_hierarchy(&ptm_sequence(16).unwrap(), &IntegerAssignment::descending(16)).unwrap();
    assert_eq!(h.structural_level, 4);
    assert_eq!((1..=4).map(|l| h.nodes(l).len()).collect::<Vec<_>>(), vec![8, 4, 2, 1]);
    assert!(h.levels.iter().flatten().all(|n| n.is_prime));
    assert_eq!(h.next_order_sums(), vec![BigInt::from(1536)]);
    assert_eq!(h.blockage(), Blockage::Incomplete { level: 5 });
    let report = verify_hierarchy(&h);
    assert!(report.passed());
    assert_eq!(report.nodes.len(), 15);
}

#[test]
fn ptm8_reaches_level_three() {
    let s = ptm_sequence(8).unwrap();
    let a = IntegerAssignment::descending(8);
    assert_eq!(oracle_level(s.as_slice(), a.as_slice()), 3);
    assert_eq!(build_hierarchy(&s, &a).unwrap().structural_level, 3);
}

#[test]
fn tampered_sum_is_reported() {
    let mut h = build_hierarchy(&ptm_sequence(16).unwrap(), &IntegerAssignment::descending(16)).unwrap();
    h.levels[1][2].power_sums[1] = BigInt::from(1);
    let report = verify_hierarchy(&h);
    assert!(!report.passed());
    let failed: Vec<_> = report.failed_nodes().collect();
    assert_eq!(failed.len(), 1);
    assert_eq!((failed[0].level, failed[0].block.clone()), (2, 8..12));
}

#[test]
fn overstated_level_is_reported() {
    let mut h = build_hierarchy(&ptm_sequence(8).unwrap(), &IntegerAssignment::descending(8)).unwrap();
    h.levels.pop();
    h.structural_level = 2;
    let report = verify_hierarchy(&h);
    // nodes are fine, but level 3 is reachable so the claim is not maximal
    assert!(report.nodes.iter().all(|n| n.passed));
    assert!(report.blockage.is_none());
    assert!(!report.passed());
}

#[test]
fn random_length16_sequences_match_brute_force() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(16);
    let a = IntegerAssignment::descending(16);
    for _ in 0..100 {
        let signs: Vec<i8> = (0..16).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
        let s = SignSequence::new(signs.clone()).unwrap();
        let h = build_hierarchy(&s, &a).unwrap();
        assert_eq!(h.structural_level, oracle_level(&signs, a.as_slice()));
        let report = verify_hierarchy(&h);
        assert!(report.passed());
        for check in &report.nodes {
            let r = check.block.clone();
            for (k, v) in check.recomputed.iter().enumerate() {
                assert_eq!(*v, oracle_sum(&signs[r.clone()], &a.as_slice()[r.clone()], k as u32));
            }
        }
    }
}

fn signs_strategy(max_log: u32) -> impl Strategy<Value = Vec<i8>> {
    (0..=max_log).prop_flat_map(|m| prop::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], 1usize << m))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ptm_over_progressions(m in 1u32..=10, start in -1000i64..1000, step in prop_oneof![-7i64..=-1, 1i64..=7]) {
        let len = 1usize << m;
        let s = ptm_sequence(len).unwrap();
        let a = IntegerAssignment::new((0..len as i64).map(|i| start + step * i).collect()).unwrap();
        for k in 0..m {
            prop_assert!(power_sum(&s, &a, k, 0..len).unwrap().is_zero());
        }
        prop_assert_eq!(build_hierarchy(&s, &a).unwrap().structural_level, m as usize);
    }

    #[test]
    fn global_flip_keeps_structure(signs in signs_strategy(6)) {
        let s = SignSequence::new(signs).unwrap();
        let a = IntegerAssignment::descending(s.len());
        let h = build_hierarchy(&s, &a).unwrap();
        let f = build_hierarchy(&s.negated(), &a).unwrap();
        prop_assert_eq!(h.structural_level, f.structural_level);
        for (x, y) in h.levels.iter().flatten().zip(f.levels.iter().flatten()) {
            prop_assert_eq!(&x.block, &y.block);
            prop_assert_eq!(x.is_prime, y.is_prime);
        }
        for (x, y) in h.next_order_sums().iter().zip(f.next_order_sums()) {
            prop_assert_eq!(x.abs(), y.abs());
            prop_assert_eq!(x, &-y);
        }
    }

    #[test]
    fn level_bounded_by_log_length(signs in prop::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], 1..200)) {
        let s = SignSequence::new(signs).unwrap();
        let h = build_hierarchy(&s, &IntegerAssignment::descending(s.len())).unwrap();
        prop_assert!(1usize << h.structural_level <= s.len());
    }

    #[test]
    fn verify_accepts_every_build(
        signs in signs_strategy(5),
        seed in any::<u64>(),
    ) {
        use rand::{seq::SliceRandom, SeedableRng};
        let mut ints: Vec<i64> = (1..=signs.len() as i64 * 3).collect();
        ints.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        ints.truncate(signs.len());
        let s = SignSequence::new(signs).unwrap();
        let a = IntegerAssignment::new(ints).unwrap();
        let h = build_hierarchy(&s, &a).unwrap();
        prop_assert!(verify_hierarchy(&h).passed());
        prop_assert_eq!(h.structural_level, oracle_level(s.as_slice(), a.as_slice()));
    }
}
