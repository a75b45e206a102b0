mod common;

use planar3::equivalence::linear_equivalent;
use planar3::equivalence::orbits::right_orbits;
use planar3::fixtures;
use planar3::isotopy::{split_check, SplitVerdict};
use planar3::semifield::nuclei_orders;

#[test]
fn split_partners_are_symmetric() {
    let t6 = fixtures::table(6).unwrap();
    for id in ["6.6", "6.13", "6.15"] {
        let f = &t6.get(id).unwrap().representative;
        let r = split_check(f).unwrap();
        assert_eq!(r.verdict, SplitVerdict::Splits, "{id}");
        let g = r.partner.unwrap();
        assert_eq!(nuclei_orders(f).unwrap(), nuclei_orders(&g).unwrap(), "{id}");
        let back = split_check(&g).unwrap();
        assert_eq!(back.verdict, SplitVerdict::Splits, "{id}");
        assert!(linear_equivalent(f, &back.partner.unwrap()).unwrap().is_some(), "{id}");
    }
}

#[test]
fn split_pairs_differ_in_orbits() {
    let t6 = fixtures::table(6).unwrap();
    let a = right_orbits(&t6.get("6.6").unwrap().representative).unwrap().multiset;
    let b = right_orbits(&t6.get("6.7").unwrap().representative).unwrap().multiset;
    assert_eq!(a.to_string(), "104,312^2");
    assert_eq!(b.to_string(), "52^2,312^2");
}

#[test]
fn sporadic_partners_match_the_table() {
    let t6 = fixtures::table(6).unwrap();
    for (id, partner) in [("6.13", "6.14"), ("6.15", "6.16")] {
        let g = split_check(&t6.get(id).unwrap().representative).unwrap().partner.unwrap();
        let other = &t6.get(partner).unwrap().representative;
        assert!(linear_equivalent(&g, other).unwrap().is_some(), "{id}");
    }
}

#[test]
fn odd_degrees_never_split() {
    for n in [3, 5, 7, 9, 11] {
        for r in fixtures::table(n).unwrap().records {
            let f = &r.representative;
            if !f.is_do() {
                continue;
            }
            let v = split_check(f).unwrap().verdict;
            assert_eq!(v, SplitVerdict::NoSplitOddIndex, "{}", r.id);
        }
    }
}
