use std::collections::BTreeSet;

use holboard_core::index::{subterm_at, TermIndex};
use holboard_core::normalize::is_normal_eta_long;
use holboard_core::{Head, Kernel};
use holboard_testkit::gen::{GenConfig, TermGen};
use holboard_testkit::{rng, scan};
use proptest::prelude::*;
use rand::seq::SliceRandom;

proptest! {
    #![proptest_config(ProptestConfig { cases: 20, ..ProptestConfig::default() })]

    #[test]
    fn queries_match_brute_force(seed in any::<u64>()) {
        let k = Kernel::new();
        let mut g = TermGen::new(&k, rng(seed), GenConfig::default());
        let idx = TermIndex::new();
        for _ in 0..100 {
            let t = g.term();
            idx.insert(&k, &t).unwrap();
        }
        let terms = idx.terms();
        prop_assert!(terms.iter().all(is_normal_eta_long));
        let (subs, heads) = scan::universe(&terms);
        for _ in 0..30 {
            let h: Head = heads.choose(g.rng()).unwrap().clone();
            let got: BTreeSet<_> = idx.by_head(&h).into_iter().collect();
            prop_assert_eq!(got, scan::by_head(&terms, &h));
            let s = subs.choose(g.rng()).unwrap().clone();
            let occ = idx.occurrences(&s);
            for (parent, pos) in &occ {
                prop_assert_eq!(subterm_at(parent, pos), Some(s.clone()));
            }
            let got: BTreeSet<_> = occ.into_iter().collect();
            prop_assert_eq!(got, scan::occurrences(&terms, &s));
        }
    }
}

#[test]
fn absent_queries_are_empty() {
    let k = Kernel::new();
    let idx = TermIndex::new();
    let c = k.declare("c", k.types().individual()).unwrap();
    assert!(idx.occurrences(&c).is_empty());
    assert!(idx.is_empty());
    assert_eq!(idx.stats().terms, 0);
}
