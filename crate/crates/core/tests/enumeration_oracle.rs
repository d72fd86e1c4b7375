use std::collections::{HashMap, HashSet};

use num_bigint::BigUint;
use psl2z::codec::emit;
use psl2z::count::{balanced_types, rooted_types, CountCache};
use psl2z::enumerate::{enum_cyclically_reduced, enum_rooted};
use psl2z::CombType;

const CYCLIC_TOTALS: [u64; 6] = [1, 5, 20, 144, 1320, 15120];
const ROOTED_TOTALS: [u64; 6] = [3, 16, 96, 816, 9120, 120240];

#[test]
fn tallies_match_counts_up_to_six() {
    let cache = CountCache::global();
    for n in 1..=6u32 {
        let mut tally: HashMap<CombType, u64> = HashMap::new();
        let mut texts = HashSet::new();
        for g in enum_cyclically_reduced(n as usize) {
            *tally.entry(g.comb_type()).or_default() += 1;
            assert!(texts.insert(emit(&g)));
        }
        assert_eq!(tally.values().sum::<u64>(), CYCLIC_TOTALS[n as usize - 1]);
        for t in balanced_types(n) {
            let got = BigUint::from(tally.remove(&t).unwrap_or(0));
            assert_eq!(cache.s(&t).unwrap(), got, "{t}");
        }
        assert!(tally.is_empty(), "unbalanced types seen: {tally:?}");

        let mut tally: HashMap<CombType, u64> = HashMap::new();
        for g in enum_rooted(n as usize, false) {
            *tally.entry(g.comb_type()).or_default() += 1;
        }
        assert_eq!(tally.values().sum::<u64>(), ROOTED_TOTALS[n as usize - 1]);
        for t in rooted_types(n) {
            let got = BigUint::from(tally.remove(&t).unwrap_or(0));
            assert_eq!(cache.l_count(&t).unwrap(), got, "{t}");
        }
        assert!(tally.is_empty());
    }
}

#[test]
fn loop_free_six_vertex_graphs() {
    let c = enum_cyclically_reduced(6).filter(|g| g.is_silhouette_shaped()).count();
    assert_eq!(c, 600);
}
