use super::*;
use alloc::vec;

fn fam(s: &str) -> FamilyHandle {
    FamilyHandle::load(&s.parse().unwrap()).unwrap()
}

#[test]
fn spec_round_trip() {
    for s in [
        "prefix-multiples:period=100",
        "rationals-truth:max_den=50,tau=1/3",
        "divisibility",
    ] {
        let spec: FamilySpec = s.parse().unwrap();
        assert_eq!(spec.to_string(), s);
    }
    let short: FamilySpec = "marker-intervals(5)".parse().unwrap();
    assert_eq!(short.to_string(), "marker-intervals:base=5");
    assert!(matches!(
        "nope".parse::<FamilySpec>(),
        Err(FamilyError::UnknownKind(_))
    ));
    assert!(matches!(
        "divisibility:period=3".parse::<FamilySpec>(),
        Err(FamilyError::UnknownParam { .. })
    ));
    assert!(matches!(
        FamilyHandle::load(&"prefix-multiples(1)".parse().unwrap()),
        Err(FamilyError::ParamOutOfRange { .. })
    ));
}

#[test]
fn prefix_multiples_queries() {
    let f = fam("prefix-multiples(100)");
    assert!(f.member(120, 117).unwrap());
    assert!(!f.member(1, 50).unwrap());
    assert_eq!(f.nth_string(1, 2).unwrap(), 100);
    assert_eq!(f.rank_in(1, 200).unwrap(), 3);
    assert_eq!(f.succ_in(1, 100).unwrap(), 200);
    assert_eq!(f.compare(1, 120).unwrap(), Relation::ProperSubset);
    assert_eq!(f.compare(99, 100).unwrap(), Relation::Equal);
    assert_eq!(f.compare(0, 7).unwrap(), Relation::ProperSuperset);
    assert_eq!(f.nth_string(0, 7).unwrap(), 7);
    assert!(matches!(
        f.rank_in(1, 50),
        Err(FamilyError::NotMember { .. })
    ));
}

#[test]
fn marker_queries_both_variants() {
    let a0 = fam("marker-intervals:base=3,marker_start=0");
    let a1 = fam("marker-intervals:base=3,marker_start=1");
    for f in [&a0, &a1] {
        assert_eq!(f.nth_string(1, 5).unwrap(), 9);
        assert_eq!(f.rank_in(1, 9).unwrap(), 5);
    }
    assert_eq!(a0.succ_in(1, 1).unwrap(), 3);
    assert_eq!(a1.succ_in(1, 1).unwrap(), 2);
}

#[test]
fn divisibility_queries() {
    let f = fam("divisibility");
    assert!(f.member(3, 9).unwrap());
    assert_eq!(f.compare(2, 3).unwrap(), Relation::Incomparable);
    assert_eq!(f.compare(2, 4).unwrap(), Relation::ProperSuperset);
    assert!(matches!(
        f.member(0, 1),
        Err(FamilyError::IndexOutOfRange(0))
    ));
}

#[test]
fn demo_family() {
    let f = fam("naturals-evens-demo");
    assert_eq!(f.last_index(), Some(3));
    assert_eq!(f.nth_string(1, 7).unwrap(), 7);
    assert_eq!(f.lang(3).iter().take(3).collect::<Vec<_>>(), vec![4, 8, 12]);
    assert_eq!(f.compare(3, 1).unwrap(), Relation::ProperSubset);
}

fn all_builtins() -> Vec<FamilyHandle> {
    [
        "prefix-multiples(7)",
        "prefix-multiples(100)",
        "marker-intervals:base=3,marker_start=0",
        "marker-intervals:base=2,marker_start=1",
        "recursive-tree(2)",
        "recursive-tree:depth=3,base=2",
        "divisibility",
        "cofinite-gaps",
        "rationals-truth:tau=1/2,max_den=60",
        "naturals-evens-demo",
    ]
    .iter()
    .map(|s| fam(s))
    .collect()
}

/// Membership, enumeration and counting agree with each other.
#[test]
fn enumeration_membership_coherence() {
    for f in all_builtins() {
        let last = f.last_index().unwrap_or(50).min(50);
        for i in f.first_index()..=last {
            let mut prev = None;
            for n in 1..=2000u64 {
                let Some(x) = f.nth(i, n) else { break };
                assert!(f.contains(i, x), "{} i={i} n={n}", f.spec());
                assert_eq!(f.count_le(i, x), n, "{} i={i} x={x}", f.spec());
                if x > 0 {
                    assert_eq!(f.count_le(i, x - 1), n - 1);
                }
                if let Some(p) = prev {
                    assert!(x > p);
                    for y in (p + 1..x).take(300) {
                        assert!(!f.contains(i, y), "{} i={i} gap {y}", f.spec());
                    }
                }
                prev = Some(x);
            }
        }
    }
}

/// Comparators agree with membership on a prefix of each language.
#[test]
fn comparator_soundness_sampled() {
    for f in all_builtins() {
        let last = f.last_index().unwrap_or(14).min(14);
        let bound = f.universe_bound().unwrap_or(20_000).min(20_000);
        let members: Vec<Vec<u64>> = (0..=last)
            .map(|i| {
                if f.is_valid_index(i) {
                    (0..bound).filter(|&x| f.contains(i, x)).collect()
                } else {
                    vec![]
                }
            })
            .collect();
        for i in f.first_index()..=last {
            for j in f.first_index()..=last {
                let rel = f.relation(i, j);
                assert_eq!(rel.mirror(), f.relation(j, i));
                let i_in_j = members[i as usize].iter().all(|&x| f.contains(j, x));
                let j_in_i = members[j as usize].iter().all(|&x| f.contains(i, x));
                match rel {
                    Relation::Equal => assert!(i_in_j && j_in_i, "{} {i} {j}", f.spec()),
                    Relation::ProperSubset => assert!(i_in_j && !j_in_i, "{} {i} {j}", f.spec()),
                    Relation::ProperSuperset => assert!(!i_in_j && j_in_i, "{} {i} {j}", f.spec()),
                    Relation::Incomparable => assert!(!i_in_j && !j_in_i, "{} {i} {j}", f.spec()),
                }
            }
        }
    }
}

#[test]
fn declared_ell_is_strict_along_inclusion() {
    for f in all_builtins() {
        let last = f.last_index().unwrap_or(40).min(40);
        for i in f.first_index()..=last {
            for j in f.first_index()..=last {
                if f.relation(i, j) == Relation::ProperSubset {
                    assert!(
                        f.declared_ell(i).unwrap() < f.declared_ell(j).unwrap(),
                        "{} {i} {j}",
                        f.spec()
                    );
                }
            }
        }
    }
}

#[test]
fn tower_fix_matches_blocks() {
    // x ∈ B_k  ⇔  x ∈ Λ_j for all j ≥ k and x ∉ Λ_{k-1}
    for s in [
        "prefix-multiples(10)",
        "marker-intervals(3)",
        "cofinite-gaps",
        "recursive-tree(2)",
    ] {
        let f = fam(s);
        for x in 1..200u64 {
            let k = f.tower_fix(x).unwrap();
            let lam = |j: u64| f.tower_member(j).unwrap();
            for j in k..k + 30 {
                assert!(f.contains(lam(j), x), "{s} x={x} k={k} j={j}");
            }
            if k > 1 {
                assert!(!f.contains(lam(k - 1), x), "{s} x={x} k={k}");
            }
        }
    }
}

#[test]
fn terminal_count_at_u64_max() {
    for s in [
        "prefix-multiples(100)",
        "marker-intervals",
        "recursive-tree(2)",
        "cofinite-gaps",
        "rationals-truth",
    ] {
        let f = fam(s);
        assert!(f.count_le(0, u64::MAX) >= f.count_le(0, 1000), "{s}");
    }
}
