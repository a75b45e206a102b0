//! Bundled class tables for n = 2..=11 and the checks that reproduce them.

use std::collections::BTreeMap;
use std::fmt;

use log::info;

use crate::equivalence::catalog::{Catalog, ClassRecord, Splits};
use crate::equivalence::classify::same_class;
use crate::equivalence::linear_equivalent;
use crate::equivalence::orbits::right_orbits;
use crate::equivalence::profile::{invariant_profile, ProfileOptions, ORBIT_GATE_DEGREE};
use crate::error::{Error, Result};
use crate::isotopy::{split_check, SplitVerdict};
use crate::semifield::nuclei_orders;

const TABLES: [(usize, &str); 10] = [
    (2, include_str!("../fixtures/table_n2.txt")),
    (3, include_str!("../fixtures/table_n3.txt")),
    (4, include_str!("../fixtures/table_n4.txt")),
    (5, include_str!("../fixtures/table_n5.txt")),
    (6, include_str!("../fixtures/table_n6.txt")),
    (7, include_str!("../fixtures/table_n7.txt")),
    (8, include_str!("../fixtures/table_n8.txt")),
    (9, include_str!("../fixtures/table_n9.txt")),
    (10, include_str!("../fixtures/table_n10.txt")),
    (11, include_str!("../fixtures/table_n11.txt")),
];

const ORBIT_REPS: &str = include_str!("../fixtures/orbit_reps.txt");

pub fn degrees() -> impl Iterator<Item = usize> {
    TABLES.iter().map(|&(n, _)| n)
}

/// The class table over GF(3^n).
pub fn table(n: usize) -> Result<Catalog> {
    let (_, text) = TABLES
        .iter()
        .find(|&&(m, _)| m == n)
        .ok_or_else(|| Error::Unknown(format!("no fixture table for n = {n}")))?;
    Catalog::parse(text)
}

#[derive(Clone, Debug)]
pub struct FixtureSet {
    pub catalog: Catalog,
    /// Least discrete log in each right orbit, by class id.
    pub orbit_reps: BTreeMap<String, Vec<u32>>,
}

impl FixtureSet {
    pub fn load() -> Result<Self> {
        let mut catalog = Catalog::new();
        for n in degrees() {
            catalog.records.extend(table(n)?.records);
        }
        let mut orbit_reps = BTreeMap::new();
        for line in ORBIT_REPS.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (id, logs) = line
                .split_once('|')
                .ok_or_else(|| Error::Parse(format!("bad orbit line `{line}`")))?;
            let logs = logs
                .split(',')
                .map(|s| s.trim().parse().map_err(|_| Error::Parse(format!("bad log `{s}`"))))
                .collect::<Result<Vec<u32>>>()?;
            orbit_reps.insert(id.trim().to_string(), logs);
        }
        Ok(FixtureSet { catalog, orbit_reps })
    }

    pub fn get(&self, id: &str) -> Option<&ClassRecord> {
        self.catalog.get(id)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    Planar,
    Nuclei,
    Orbits,
    Inequivalent,
    Splits,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Check::Planar => "planar",
            Check::Nuclei => "nuclei",
            Check::Orbits => "orbits",
            Check::Inequivalent => "inequivalent",
            Check::Splits => "splits",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub id: String,
    pub check: Check,
    pub ok: bool,
    pub detail: String,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.ok { "ok" } else { "MISMATCH" };
        write!(f, "{} {} {verdict}", self.id, self.check)?;
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub nuclei: bool,
    pub orbits: bool,
    pub pairwise: bool,
    pub splits: bool,
}

impl VerifyOptions {
    /// Everything that runs in minutes at this degree.
    pub fn for_degree(n: usize) -> Self {
        VerifyOptions {
            nuclei: true,
            orbits: n < ORBIT_GATE_DEGREE,
            pairwise: n <= 7,
            splits: n <= 6,
        }
    }

    pub fn planarity_only() -> Self {
        VerifyOptions {
            nuclei: false,
            orbits: false,
            pairwise: false,
            splits: false,
        }
    }
}

fn result(id: &str, check: Check, ok: bool, detail: impl Into<String>) -> CheckResult {
    CheckResult {
        id: id.to_string(),
        check,
        ok,
        detail: detail.into(),
    }
}

/// Recomputes the columns of `catalog` selected by `opts`.
pub fn verify(catalog: &Catalog, opts: VerifyOptions) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let mut planar = Vec::with_capacity(catalog.len());
    for r in &catalog.records {
        let f = &r.representative;
        let p = f.is_planar()?;
        planar.push(p);
        out.push(result(&r.id, Check::Planar, p, if p { "" } else { "not planar" }));
        if opts.nuclei {
            let got = if f.is_do() && p { Some(nuclei_orders(f)?) } else { None };
            let ok = got == r.nuclei;
            let detail = match got {
                Some((a, b)) => format!("{a}, {b}"),
                None => "NA".to_string(),
            };
            out.push(result(&r.id, Check::Nuclei, ok, detail));
        }
        if opts.orbits && (p || f.is_monomial()) {
            if let Some(expected) = &r.orbits {
                let got = right_orbits(f)?.multiset;
                out.push(result(&r.id, Check::Orbits, &got == expected, got.to_string()));
            }
        }
        info!("fixture {} checked", r.id);
    }
    if opts.pairwise {
        let idx: Vec<usize> = (0..catalog.len()).filter(|&i| planar[i]).collect();
        let reps: Vec<_> = idx.iter().map(|&i| catalog.records[i].representative.ea_normal()).collect();
        let profiles = reps
            .iter()
            .map(|f| invariant_profile(f, ProfileOptions::default()))
            .collect::<Result<Vec<_>>>()?;
        let mut twins = vec![Vec::new(); reps.len()];
        for a in 0..reps.len() {
            for b in a + 1..reps.len() {
                if same_class(&reps[a], &profiles[a], &reps[b], &profiles[b])?.is_some() {
                    twins[a].push(catalog.records[idx[b]].id.clone());
                    twins[b].push(catalog.records[idx[a]].id.clone());
                }
            }
        }
        for (a, twins) in twins.iter().enumerate() {
            let detail = if twins.is_empty() {
                String::new()
            } else {
                format!("equivalent to {}", twins.join(", "))
            };
            out.push(result(&catalog.records[idx[a]].id, Check::Inequivalent, twins.is_empty(), detail));
        }
    }
    if opts.splits {
        for (r, &p) in catalog.records.iter().zip(&planar) {
            let f = &r.representative;
            if !f.is_do() {
                out.push(result(&r.id, Check::Splits, r.splits == Splits::NotApplicable, "NA"));
                continue;
            }
            if !p {
                continue;
            }
            let s = split_check(f)?;
            let (ok, detail) = match (&s.verdict, &r.splits, &s.partner) {
                (SplitVerdict::Splits, Splits::Partner(id), Some(g)) => match catalog.get(id) {
                    Some(other) => {
                        let hit = linear_equivalent(g, &other.representative.ea_normal())?.is_some();
                        (hit, format!("partner {} {id}", if hit { "matches" } else { "does not match" }))
                    }
                    None => (false, format!("partner row {id} missing")),
                },
                (SplitVerdict::Splits, _, _) => (false, "splits".to_string()),
                (v, expected, _) => (*expected == Splits::No, v.to_string()),
            };
            out.push(result(&r.id, Check::Splits, ok, detail));
        }
    }
    Ok(out)
}
