use std::collections::BTreeSet;

use genlimit_core::chain::{critical_chain, ChainTracker, Sample};
use genlimit_core::game::{run_game, GameConfig};
use genlimit_core::topology::{self, Restriction};
use genlimit_core::{FamilyHandle, FamilySpec, LanguageIndex, Relation};
use proptest::prelude::*;

const SPECS: [&str; 6] = [
    "naturals-evens-demo",
    "prefix-multiples(10)",
    "marker-intervals",
    "recursive-tree(2)",
    "divisibility",
    "cofinite-gaps",
];

fn load(spec: &str) -> FamilyHandle {
    FamilyHandle::load(&spec.parse::<FamilySpec>().unwrap()).unwrap()
}

/// A valid true index taken from the first few languages.
fn pick_k(f: &FamilyHandle, seed: u64) -> LanguageIndex {
    let first = f.first_index();
    let span = f.last_index().map_or(8, |l| (l - first + 1).min(8));
    first + seed % span
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tracker_matches_reference(fam in 0..SPECS.len(), kseed in 0u64..64, picks in prop::collection::vec(0usize..40, 1..30)) {
        let f = load(SPECS[fam]);
        let k = pick_k(&f, kseed);
        let members: Vec<u64> = f.lang(k).iter().take(40).collect();
        let mut seen = BTreeSet::new();
        let mut tracker = ChainTracker::new(&f);
        let mut sample = Sample::new();
        for p in picks {
            let Some(&w) = members.get(p) else { continue };
            if !seen.insert(w) {
                continue;
            }
            sample.push(w).unwrap();
            let live = tracker.observe(w).unwrap().clone();
            prop_assert_eq!(live, critical_chain(&f, &sample, sample.t()));
        }
    }

    #[test]
    fn outputs_never_repeat(
        fam in 0..SPECS.len(),
        kseed in 0u64..64,
        adv in prop::sample::select(vec!["straight", "greedy-lowest", "shuffle:seed=3", "shuffle:seed=11"]),
        gen in prop::sample::select(vec!["km", "acc", "lazy", "fallback-general"]),
    ) {
        let spec: FamilySpec = SPECS[fam].parse().unwrap();
        let f = FamilyHandle::load(&spec).unwrap();
        let k = pick_k(&f, kseed);
        let cfg = GameConfig::new(spec, k, adv.parse().unwrap(), gen.parse().unwrap(), 120);
        // finite true languages may run dry; only completed games are checked
        if let Ok(tr) = run_game(&cfg, &f, None) {
            let mut outs = BTreeSet::new();
            let mut sample = BTreeSet::new();
            for r in &tr.records {
                sample.insert(r.w);
                prop_assert!(!sample.contains(&r.o), "output {} is in the sample", r.o);
                prop_assert!(outs.insert(r.o), "output {} repeats", r.o);
            }
        }
    }

    #[test]
    fn linear_extension_respects_inclusion(fam in 0..SPECS.len(), n in 2u64..25) {
        let f = load(SPECS[fam]);
        let r = Restriction::prefix(&f, n, 1000).unwrap();
        let ell = topology::linear_extension(&f, &r).unwrap();
        for &a in &r.indices {
            for &b in &r.indices {
                if f.relation(a, b) == Relation::ProperSubset {
                    prop_assert!(ell[&a] < ell[&b], "ell(L_{a}) >= ell(L_{b})");
                }
            }
        }
    }

    #[test]
    fn tower_blocks_are_disjoint(
        fam in prop::sample::select(vec!["prefix-multiples(10)", "marker-intervals", "cofinite-gaps", "recursive-tree(2)"]),
        depth in 2u64..12,
        horizon in 50u64..3000,
        skip in prop::collection::vec(any::<bool>(), 12),
    ) {
        let f = load(fam);
        // the declared prefix and a thinned subsequence of it
        let full: Vec<LanguageIndex> = (1..=depth).map(|k| f.tower_member(k).unwrap()).collect();
        let thin: Vec<LanguageIndex> =
            full.iter().zip(&skip).filter(|(_, &s)| !s).map(|(&i, _)| i).collect();
        for seq in [full, thin] {
            if seq.len() < 2 {
                continue;
            }
            let rep = topology::verify_tower(&f, &seq, 0, horizon).unwrap();
            let mut all = BTreeSet::new();
            for b in &rep.b_sets {
                for &x in b {
                    prop_assert!(all.insert(x), "{x} lies in two blocks");
                    prop_assert!(x <= horizon && f.contains(0, x));
                }
            }
        }
    }
}
