use planar3::fixtures::{self, Check, FixtureSet, VerifyOptions};
use planar3::PlanarFn;

#[test]
fn representatives_round_trip() {
    let set = FixtureSet::load().unwrap();
    for r in &set.catalog.records {
        let f = &r.representative;
        let text = f.to_string();
        assert_eq!(PlanarFn::parse(f.ctx().clone(), &text).unwrap(), *f, "{}", r.id);
        assert_eq!(r.to_line().split(" | ").nth(2), Some(text.as_str()), "{}", r.id);
    }
}

#[test]
fn tables_reproduce_through_degree_seven() {
    let mut mismatches = Vec::new();
    for n in 2..=7 {
        for r in fixtures::verify(&fixtures::table(n).unwrap(), VerifyOptions::for_degree(n)).unwrap() {
            if !r.ok {
                mismatches.push(r);
            }
        }
    }
    // x^14 over GF(3^6) is printed as a class representative but is not planar
    assert_eq!(mismatches.len(), 1, "{mismatches:?}");
    assert_eq!((mismatches[0].id.as_str(), mismatches[0].check), ("6.3", Check::Planar));
}
