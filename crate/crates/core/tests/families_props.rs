mod common;

use planar3::equivalence::linear_equivalent;
use planar3::families::{self, admissible_for, FamilyId, FamilySpec};
use planar3::field::gcd;
use planar3::isotopy::{split_check, SplitVerdict};
use planar3::semifield::nuclei_orders;

fn spec(n: usize, text: &str) -> FamilySpec {
    FamilySpec::parse(n, text).unwrap()
}

#[test]
fn instances_are_planar_with_expected_nuclei() {
    for n in 7..=10 {
        for (spec, f) in families::instances(n).unwrap() {
            assert!(f.is_planar().unwrap(), "{spec} over n = {n}");
            if let Some(expected) = families::expected_nuclei(&spec).unwrap() {
                assert_eq!(nuclei_orders(&f).unwrap(), expected, "{spec} over n = {n}");
            }
        }
    }
}

#[test]
fn degree_twelve_instances_are_planar() {
    for (spec, f) in families::instances(12).unwrap() {
        assert!(f.is_planar().unwrap(), "{spec}");
    }
}

#[test]
fn bh_nuclei_follow_gcd_of_m_and_s() {
    for n in [4, 6, 8, 10] {
        let m = n / 2;
        let specs = admissible_for(FamilyId::BH, n);
        assert!(!specs.is_empty() || n == 4, "n = {n}");
        for sp in specs {
            let s: u64 = sp.to_string().rsplit("s=").next().unwrap().parse().unwrap();
            let g = gcd(m as u64, s) as u32;
            let f = families::generate(&sp).unwrap();
            assert_eq!(nuclei_orders(&f).unwrap(), (3u64.pow(g), 3u64.pow(2 * g)), "{sp} over n = {n}");
        }
    }
}

#[test]
fn zp_with_k_zero_is_dickson() {
    for n in [4, 6, 8] {
        for i in 1..=n / 4 {
            let zp = families::generate(&spec(n, &format!("ZP i={i} k=0"))).unwrap();
            let d = families::generate(&spec(n, &format!("D i={i}"))).unwrap();
            assert!(linear_equivalent(&zp, &d).unwrap().is_some(), "i = {i}, n = {n}");
        }
    }
}

#[test]
fn bh_splits_for_odd_m() {
    let bh = families::generate(&spec(6, "BH s=2")).unwrap();
    let r = split_check(&bh).unwrap();
    assert_eq!(r.verdict, SplitVerdict::Splits);
    let partner = r.partner.unwrap();
    assert!(partner.is_planar().unwrap());
    assert!(linear_equivalent(&bh, &partner).unwrap().is_none());

    let bh = families::generate(&spec(10, "BH s=2")).unwrap();
    assert_eq!(split_check(&bh).unwrap().verdict, SplitVerdict::Splits);
}

#[test]
fn generated_families_are_tagged() {
    let d = families::generate(&spec(4, "D-quad i=1")).unwrap();
    assert_eq!(d.to_string(), "x^54 + 2*x^30 + x^10 + x^2");
    assert_eq!(FamilyId::DQuad.tag(), "D");
}
