use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_planar3")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn planar_verdicts_and_exit_codes() {
    let o = run(&["planar", "--n", "5", "x^90 + x^2"]);
    assert_eq!(stdout(&o), "planar: yes\n");
    assert_eq!(o.status.code(), Some(0));

    let o = run(&["planar", "--n", "4", "x^4"]);
    assert_eq!(stdout(&o), "planar: no\n");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_and_parse_errors_exit_two() {
    assert_eq!(run(&["planar", "x^2"]).status.code(), Some(2));
    assert_eq!(run(&["planar", "--n", "5", "x^^2"]).status.code(), Some(2));
    assert_eq!(run(&["planar", "--n", "13", "x^2"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["families", "gen", "--n", "6", "A i=1"]).status.code(), Some(2));
}

#[test]
fn equiv_on_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    fs::write(&a, "n=6\nx^14  # 6.3\n").unwrap();
    fs::write(&b, "n=6\nx^122\n").unwrap();
    let o = run(&["equiv", "--n", "6", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(stdout(&o), "inequivalent (cyclotomic)\n");
    assert_eq!(o.status.code(), Some(1));

    // a body without an n= line takes --n
    fs::write(&a, "x^90 + x^2\n").unwrap();
    let o = run(&["equiv", "--n", "5", a.to_str().unwrap(), "x^28 + x^6"]);
    assert!(stdout(&o).starts_with("equivalent (witness)\n"), "{}", stdout(&o));
    assert_eq!(o.status.code(), Some(0));

    let o = run(&["equiv", "--n", "4", "x^2", "x^36 + 2*x^10 + 2*x^4"]);
    assert_eq!(stdout(&o), "inequivalent (nuclei)\n");
}

#[test]
fn nuclei_orbits_and_splits() {
    let o = run(&["nuclei", "--n", "6", "g^455*x^270 + x^28 + g^273*x^10"]);
    assert_eq!(stdout(&o), "N: 3\nNm: 9\n");

    let o = run(&["orbits", "--n", "5", "x^10 + x^6 + 2*x^2"]);
    assert!(stdout(&o).starts_with("orbits: 2,10^24\nrepresentatives: 0,1,2,4,"), "{}", stdout(&o));

    let o = run(&["split-check", "--n", "6", "g^455*x^270 + x^28 + g^273*x^10"]);
    let s = stdout(&o);
    assert!(s.starts_with("verdict: Splits\n"), "{s}");
    assert!(s.contains("cosets: 3\n") && s.contains("partner: "), "{s}");

    let o = run(&["split-check", "--n", "4", "x^36 + 2*x^10 + 2*x^4"]);
    assert!(stdout(&o).starts_with("verdict: NoSplit-AllEquivalent\n"), "{}", stdout(&o));
}

#[test]
fn fixture_verify_degree_four() {
    let o = run(&["fixture-verify", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("n=4: 15 checks, 0 mismatches\n"), "{}", stdout(&o));

    let o = run(&["fixture-verify", "--n", "6"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("6.3 planar MISMATCH (not planar)\n"));
}

#[test]
fn search_report_and_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("ck");
    let args = [
        "--jobs",
        "2",
        "search",
        "--n",
        "5",
        "--base",
        "2",
        "--terms",
        "1",
        "--coeff-subfield",
        "1",
        "--checkpoint",
        ckpt.to_str().unwrap(),
    ];
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("  5 | x^2      |     1 |  1 |         28 |      5 |"), "{s}");
    assert!(s.contains("new classes: 0"), "{s}");
    assert!(fs::read_to_string(&ckpt).unwrap().starts_with("# search n=5 base=2 terms=1 m=1"));
    // second run resumes everything and reports the same hits
    let again = stdout(&run(&args));
    assert!(again.contains("planar hits: 6"), "{again}");

    let o = run(&["search", "--n", "5", "--base", "2", "--terms", "1", "--no-dedupe"]);
    assert!(stdout(&o).contains("x^90 + x^2\n"));
}

#[test]
fn classify_and_families() {
    let o = run(&["classify", "--n", "5"]);
    let s = stdout(&o);
    assert!(s.ends_with("# 9 candidates, 8 classes\n"), "{s}");
    assert!(s.contains("| x^90 + x^2 | ACW |"), "{s}");

    let o = run(&["families", "list", "--n", "4"]);
    assert!(stdout(&o).contains("D i=1 | 3, 9\n"), "{}", stdout(&o));
    let o = run(&["families", "gen", "--n", "4", "D-quad i=1"]);
    assert_eq!(stdout(&o), "x^54 + 2*x^30 + x^10 + x^2\n");
}

#[test]
fn output_is_deterministic_across_job_counts() {
    let args = |j: &'static str| ["--jobs", j, "search", "--n", "5", "--base", "2,10", "--terms", "2", "--no-dedupe"];
    assert_eq!(stdout(&run(&args("1"))), stdout(&run(&args("3"))));
}
