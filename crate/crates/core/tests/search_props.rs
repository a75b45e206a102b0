mod common;

use std::fs;

use planar3::equivalence::catalog::{Catalog, ClassRecord};
use planar3::search::{dedupe, expand_search, run_search, SearchConfig};
use planar3::{PlanarFn, Term};

use common::*;

fn in_pool(pool_len: usize, t: usize) -> Vec<Vec<usize>> {
    // all subsets of size <= t, by plain bitmask enumeration
    (0u32..1 << pool_len)
        .filter(|m| m.count_ones() as usize <= t)
        .map(|m| (0..pool_len).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

#[test]
fn exhaustive_against_derivative_oracle() {
    let cfg = SearchConfig::new(4, 2, 2, 4);
    let ctx = field(4);
    let pool = cfg.exponent_pool();
    let coeffs: Vec<_> = ctx.nonzero().collect();
    let mut expect = Vec::new();
    for subset in in_pool(pool.len(), 2) {
        let k = subset.len();
        for code in 0..coeffs.len().pow(k as u32) {
            let mut terms = vec![Term { coeff: planar3::Fe::ONE, exp: 2 }];
            let mut c = code;
            for &i in &subset {
                terms.push(Term { coeff: coeffs[c % coeffs.len()], exp: pool[i] });
                c /= coeffs.len();
            }
            let f = PlanarFn::new(ctx.clone(), terms).unwrap();
            if f.is_planar_general() {
                expect.push(f.to_string());
            }
        }
    }
    let mut got: Vec<String> = expand_search(&cfg).unwrap().iter().map(|f| f.to_string()).collect();
    assert_eq!(got.len(), expect.len());
    got.sort();
    expect.sort();
    assert_eq!(got, expect);
}

#[test]
fn identical_output_for_any_worker_count() {
    let cfgs = [SearchConfig::new(5, 2, 3, 1), SearchConfig::new(6, 10, 2, 2)];
    for cfg in cfgs {
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| expand_search(&cfg).unwrap())
        };
        let one = run(1);
        assert!(!one.is_empty());
        assert_eq!(one, run(4));
        assert_eq!(one, run(7));
    }
}

#[test]
fn no_pruning_on_non_planar_prefixes() {
    let prefix = parse(6, "x^10 + x^2");
    assert!(!prefix.is_planar_general());
    let f1 = parse(6, "g^91*x^30 + x^10 + x^2");
    assert!(f1.is_planar_general());
    let hits = expand_search(&SearchConfig::new(6, 2, 2, 2)).unwrap();
    assert!(hits.contains(&f1));
    assert!(!hits.contains(&prefix));
}

#[test]
fn resumes_from_a_partial_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("search.ckpt");
    let cfg = SearchConfig::new(5, 2, 3, 1).with_checkpoint(&path);
    let full = run_search(&cfg).unwrap();
    assert_eq!(full.resumed_units, 0);
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# search n=5 base=2 terms=3 m=1"));

    // keep the header and the first half of the records, cut after a `done`
    let lines: Vec<&str> = text.lines().collect();
    let mut cut = lines.len() / 2;
    while !lines[cut - 1].starts_with("done") {
        cut -= 1;
    }
    fs::write(&path, lines[..cut].join("\n") + "\n").unwrap();
    let kept = lines[..cut].iter().filter(|l| l.starts_with("done")).count();

    let resumed = run_search(&cfg).unwrap();
    assert_eq!(resumed.resumed_units, kept);
    assert_eq!(resumed.hits, full.hits);
    assert_eq!(resumed.units, full.units);
    // the file is complete again
    let again = run_search(&cfg).unwrap();
    assert_eq!(again.resumed_units, full.units);
    assert_eq!(again.hits, full.hits);

    let other = SearchConfig::new(5, 2, 2, 1).with_checkpoint(&path);
    assert!(run_search(&other).is_err());
}

#[test]
fn scalings_are_not_new() {
    let mut catalog = Catalog::new();
    catalog.records.push(ClassRecord::new("5.1", parse(5, "x^2"), vec!["FF".into()]));
    let hits = [parse(5, "x^2"), parse(5, "2*x^2")];
    let d = dedupe(&hits, &catalog).unwrap();
    assert!(d.new_classes.is_empty());
    assert_eq!(d.matches.len(), 2);
    assert!(d.matches.iter().all(|m| m.class_id == "5.1"));
}

#[test]
fn rediscovers_degree_nine_sporadics() {
    use planar3::equivalence::linear_equivalent;
    let table = planar3::fixtures::table(9).unwrap();
    let mut seed = Catalog::new();
    seed.records = table.records[..9].to_vec();
    let hits = expand_search(&SearchConfig::new(9, 2, 4, 1)).unwrap();
    let d = dedupe(&hits, &seed).unwrap();
    assert_eq!(d.new_classes.len(), 2);
    let mut matched: Vec<&str> = d
        .new_classes
        .iter()
        .map(|c| {
            let f = c.representative.ea_normal();
            ["9.10", "9.11"]
                .into_iter()
                .find(|id| linear_equivalent(&table.get(id).unwrap().representative, &f).unwrap().is_some())
                .expect("matches a sporadic row")
        })
        .collect();
    matched.sort();
    assert_eq!(matched, ["9.10", "9.11"]);
}
