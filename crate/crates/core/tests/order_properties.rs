mod common;

use std::collections::HashSet;

use btorders_core::json::{order_from_json, order_report};
use btorders_core::lattice::trace_dual;
use btorders_core::orders::{branch_oracle, BranchTarget};
use btorders_core::selftest::superorders;
use btorders_core::tree::Vertex;
use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn closure_round_trip(p in prime(), a in entries(), b in entries(), s in 0u64..3) {
        let Some(o) = small_order(p, a, b) else { return Ok(()); };
        let o = o.scale(s);
        let (r, c) = o.closure();
        prop_assert!(r >= s);
        prop_assert_eq!(c.scale(r), o.clone());
        prop_assert_eq!(c.closure().0, 0);
        prop_assert_eq!(c.lattice().index_valuation(o.lattice()).unwrap(), 3 * r as i64);
        prop_assert_eq!(o.is_gorenstein(), r == 0);
    }

    #[test]
    fn codifferent_contains_order(p in prime(), a in entries(), b in entries()) {
        let Some(o) = small_order(p, a, b) else { return Ok(()); };
        prop_assert!(trace_dual(o.lattice()).unwrap().contains(o.lattice()));
        prop_assert!(o.codifferent().contains(o.lattice()));
    }

    #[test]
    fn report_round_trips(p in prime(), a in entries(), b in entries()) {
        let Some(o) = small_order(p, a, b) else { return Ok(()); };
        let json = order_report(&o).unwrap();
        let text = serde_json::to_string(&json).unwrap();
        let back = order_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(back, o);
    }

    #[test]
    fn descriptor_matches_oracle(p in prime(), a in entries(), b in entries()) {
        let Some(o) = small_order(p, a, b) else { return Ok(()); };
        let k = o.field().clone();
        let s = Vertex::standard(&k);
        let d = o.branch();
        let found: HashSet<Vertex> = branch_oracle(&BranchTarget::Order(&o), &s, 2, 2).into_iter().collect();
        for v in s.ball(2) {
            prop_assert_eq!(d.contains(&v), found.contains(&v));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// The r-neighborhood of a branch is the branch of the scaled order.
    #[test]
    fn scaling_thickens_branches(a in entries(), b in entries(), r in 1u64..3) {
        let Some(h) = small_order(2, a, b) else { return Ok(()); };
        let k = h.field().clone();
        let s = Vertex::standard(&k);
        let bh = branch_oracle(&BranchTarget::Order(&h), &s, 3 + r, 1);
        let hr = h.scale(r);
        let got: HashSet<Vertex> = branch_oracle(&BranchTarget::Order(&hr), &s, 3, 1).into_iter().collect();
        let want: HashSet<Vertex> = s
            .ball(3)
            .into_iter()
            .filter(|v| bh.iter().any(|w| v.distance(w).unwrap() <= r))
            .collect();
        prop_assert_eq!(got, want);
    }

    /// Bass means every superorder is Gorenstein. With disc ≤ 4 every
    /// superorder has index at most 2^4, so the enumeration is complete.
    #[test]
    fn bass_agrees_with_superorders(a in entries(), b in entries(), s in 0u64..2) {
        let Some(o) = small_order(2, a, b) else { return Ok(()); };
        let o = o.scale(s);
        prop_assume!(o.disc_valuation() <= 4);
        let all_gorenstein = superorders(&o, 4).iter().all(|m| m.is_gorenstein());
        prop_assert_eq!(o.is_bass(), all_gorenstein);
    }
}
