//! Expansion search: add up to `t` DO terms `c x^e` with `c` in GF(3^m)^* to
//! a base monomial `x^d`, keep the planar results and sort them into classes.
//!
//! Work units are exponent subsets, numbered in lexicographic order of their
//! sorted exponent lists. Within a unit the coefficient tuples run as an
//! odometer in ascending discrete-log order, and the bilinear form on basis
//! pairs is maintained as a running sum of per-term tables, so moving to the
//! next tuple touches only the terms whose coefficient changed.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::PathBuf;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use log::info;
use rayon::prelude::*;

use crate::equivalence::catalog::{Catalog, ClassRecord};
use crate::equivalence::classify::{classify, Candidate, MatchKind};
use crate::equivalence::profile::ProfileOptions;
use crate::error::{Error, Result};
use crate::field::{digit_sum, gcd, make_field, Fe, FieldCtx};
use crate::gf3::{independent, Trits};
use crate::planarfn::{leading_digit_one, mod_inverse, PlanarFn, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub n: usize,
    /// Base exponent `d`; the base term is `x^d` with coefficient 1.
    pub base: u64,
    /// Maximum number of extra terms.
    pub terms: usize,
    /// Coefficients range over GF(3^m)^*.
    pub coeff_degree: usize,
    /// Extra exponents; `None` means every `3^j + 3^i` other than `d`.
    pub pool: Option<Vec<u64>>,
    pub checkpoint: Option<PathBuf>,
}

impl SearchConfig {
    pub fn new(n: usize, base: u64, terms: usize, coeff_degree: usize) -> Self {
        SearchConfig {
            n,
            base,
            terms,
            coeff_degree,
            pool: None,
            checkpoint: None,
        }
    }

    pub fn with_pool(mut self, pool: Vec<u64>) -> Self {
        self.pool = Some(pool);
        self
    }

    pub fn with_checkpoint(mut self, path: impl Into<PathBuf>) -> Self {
        self.checkpoint = Some(path.into());
        self
    }

    fn is_quadratic(&self, e: u64) -> bool {
        e > 0 && e < 3u64.pow(self.n as u32) - 1 && digit_sum(e) == 2
    }

    /// The sorted exponent pool.
    pub fn exponent_pool(&self) -> Vec<u64> {
        let pool: BTreeSet<u64> = match &self.pool {
            Some(p) => p.iter().copied().filter(|&e| e != self.base).collect(),
            None => (0..self.n)
                .flat_map(|j| (0..=j).map(move |i| 3u64.pow(j as u32) + 3u64.pow(i as u32)))
                .filter(|&e| e != self.base)
                .collect(),
        };
        pool.into_iter().collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > 12 {
            return Err(Error::DegreeOutOfRange(self.n));
        }
        if self.coeff_degree == 0 || self.n % self.coeff_degree != 0 {
            return Err(Error::NotADivisor(self.coeff_degree, self.n));
        }
        if !self.is_quadratic(self.base) {
            return Err(Error::Constraint(format!("base exponent {} is not of the form 3^j + 3^i", self.base)));
        }
        if let Some(p) = &self.pool {
            if let Some(&e) = p.iter().find(|&&e| !self.is_quadratic(e)) {
                return Err(Error::Constraint(format!("pool exponent {e} is not of the form 3^j + 3^i")));
            }
        }
        Ok(())
    }

    fn header(&self) -> String {
        let pool: Vec<String> = self.exponent_pool().iter().map(u64::to_string).collect();
        format!(
            "# search n={} base={} terms={} m={} pool={}",
            self.n,
            self.base,
            self.terms,
            self.coeff_degree,
            pool.join(",")
        )
    }
}

/// Exponent-index subsets of size `0..=t` in lexicographic order of the
/// sorted lists, i.e. depth-first preorder.
pub fn exponent_subsets(pool_len: usize, t: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, len: usize, t: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        if cur.len() == t {
            return;
        }
        for i in start..len {
            cur.push(i);
            rec(i + 1, len, t, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, pool_len, t, &mut Vec::new(), &mut out);
    out
}

/// `B(e_i, e_j)` of `c x^e` for every coefficient `c`, as `n * n` tables.
fn term_tables(ctx: &FieldCtx, e: u64, coeffs: &[Fe]) -> Vec<Vec<Trits>> {
    let n = ctx.n();
    let raw: Vec<Fe> = (0..n * n)
        .map(|k| {
            let (x, y) = (ctx.basis(k / n), ctx.basis(k % n));
            let s = ctx.pow(ctx.add(x, y), e);
            ctx.sub(ctx.sub(s, ctx.pow(x, e)), ctx.pow(y, e))
        })
        .collect();
    coeffs
        .iter()
        .map(|&c| raw.iter().map(|&v| ctx.trits(ctx.mul(c, v))).collect())
        .collect()
}

/// Rank test on a basis-pair table of a bilinear form, run sequentially.
pub(crate) struct SliceTester {
    n: usize,
    directions: Vec<Trits>,
}

impl SliceTester {
    pub fn new(ctx: &FieldCtx) -> Self {
        let directions = (1..ctx.q())
            .filter(|&a| leading_digit_one(a))
            .map(|a| ctx.trits(Fe(a)))
            .collect();
        SliceTester { n: ctx.n(), directions }
    }

    pub fn planar(&self, basis: &[Trits]) -> bool {
        let n = self.n;
        let mut cols = [Trits::ZERO; 12];
        self.directions.iter().all(|&a| {
            for (i, col) in cols[..n].iter_mut().enumerate() {
                let row = &basis[i * n..(i + 1) * n];
                let mut acc = Trits::ZERO;
                let mut ones = a.ones;
                while ones != 0 {
                    acc += row[ones.trailing_zeros() as usize];
                    ones &= ones - 1;
                }
                let mut twos = a.twos;
                while twos != 0 {
                    acc -= row[twos.trailing_zeros() as usize];
                    twos &= twos - 1;
                }
                *col = acc;
            }
            independent(&cols[..n])
        })
    }
}

/// Per term-count totals; one row of the report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchRow {
    pub n: usize,
    pub base: u64,
    pub terms: usize,
    pub m: usize,
    pub candidates: u64,
    pub hits: usize,
    /// Summed over work units, so it is CPU time rather than wall time.
    pub time: Duration,
}

#[derive(Clone, Debug)]
pub struct SearchRun {
    pub config: SearchConfig,
    pub hits: Vec<PlanarFn>,
    pub rows: Vec<SearchRow>,
    pub units: usize,
    pub resumed_units: usize,
    pub elapsed: Duration,
}

struct UnitResult {
    index: usize,
    hits: Vec<PlanarFn>,
    candidates: u64,
    time: Duration,
}

struct Checkpoint {
    file: Mutex<File>,
    done: HashMap<usize, Vec<PlanarFn>>,
}

impl Checkpoint {
    fn open(cfg: &SearchConfig, ctx: &Arc<FieldCtx>, path: &PathBuf) -> Result<Self> {
        let io = |e: std::io::Error| Error::Checkpoint(format!("{}: {e}", path.display()));
        let header = cfg.header();
        let mut done = HashMap::new();
        let mut pending: HashMap<usize, Vec<PlanarFn>> = HashMap::new();
        let mut fresh = true;
        if path.exists() {
            let reader = BufReader::new(File::open(path).map_err(io)?);
            for (k, line) in reader.lines().enumerate() {
                let line = line.map_err(io)?;
                if k == 0 {
                    fresh = false;
                    if line != header {
                        return Err(Error::Checkpoint(format!("{} belongs to another search", path.display())));
                    }
                    continue;
                }
                let bad = || Error::Checkpoint(format!("bad line {} in {}: `{line}`", k + 1, path.display()));
                let (tag, rest) = line.split_once(' ').ok_or_else(bad)?;
                let (idx, rest) = rest.split_once(' ').unwrap_or((rest, ""));
                let idx: usize = idx.parse().map_err(|_| bad())?;
                match tag {
                    "hit" => pending.entry(idx).or_default().push(PlanarFn::parse(ctx.clone(), rest)?),
                    "done" => {
                        done.insert(idx, pending.remove(&idx).unwrap_or_default());
                    }
                    _ => return Err(bad()),
                }
            }
        }
        let mut file = OpenOptions::new().create(true).append(true).open(path).map_err(io)?;
        if fresh {
            writeln!(file, "{header}").map_err(io)?;
        }
        Ok(Checkpoint {
            file: Mutex::new(file),
            done,
        })
    }

    fn record(&self, unit: &UnitResult) -> Result<()> {
        let mut text = String::new();
        for h in &unit.hits {
            text += &format!("hit {} {h}\n", unit.index);
        }
        text += &format!("done {}\n", unit.index);
        let mut file = self.file.lock().expect("checkpoint writer poisoned");
        file.write_all(text.as_bytes())
            .and_then(|_| file.flush())
            .map_err(|e| Error::Checkpoint(e.to_string()))
    }
}

pub fn expand_search(cfg: &SearchConfig) -> Result<Vec<PlanarFn>> {
    Ok(run_search(cfg)?.hits)
}

pub fn run_search(cfg: &SearchConfig) -> Result<SearchRun> {
    cfg.validate()?;
    let start = Instant::now();
    let ctx = make_field(cfg.n)?;
    let n = cfg.n;
    let pool = cfg.exponent_pool();
    let coeffs: Vec<Fe> = ctx.subfield_elements(cfg.coeff_degree)?[1..].to_vec();
    let tables: Vec<Vec<Vec<Trits>>> = pool.par_iter().map(|&e| term_tables(&ctx, e, &coeffs)).collect();
    let base = &term_tables(&ctx, cfg.base, &[Fe::ONE])[0];
    let tester = SliceTester::new(&ctx);
    let subsets = exponent_subsets(pool.len(), cfg.terms);
    let checkpoint = match &cfg.checkpoint {
        Some(p) => Some(Checkpoint::open(cfg, &ctx, p)?),
        None => None,
    };
    let resumed_units = checkpoint.as_ref().map_or(0, |c| c.done.len());
    info!(
        "search n={n} d={} t={} m={}: {} exponents, {} units ({} resumed)",
        cfg.base,
        cfg.terms,
        cfg.coeff_degree,
        pool.len(),
        subsets.len(),
        resumed_units
    );

    let run_unit = |index: usize| -> Result<UnitResult> {
        let t0 = Instant::now();
        let subset = &subsets[index];
        let k = subset.len();
        let mut digits = vec![0usize; k];
        let mut acc = base.clone();
        for &e in subset {
            add_into(&mut acc, &tables[e][0]);
        }
        let mut hits = Vec::new();
        let mut candidates = 0u64;
        loop {
            candidates += 1;
            if tester.planar(&acc) {
                let mut terms = vec![Term { coeff: Fe::ONE, exp: cfg.base }];
                terms.extend(subset.iter().zip(&digits).map(|(&e, &c)| Term {
                    coeff: coeffs[c],
                    exp: pool[e],
                }));
                hits.push(PlanarFn::new(ctx.clone(), terms)?);
            }
            // odometer step, last position fastest
            let mut p = k;
            loop {
                if p == 0 {
                    let unit = UnitResult {
                        index,
                        hits,
                        candidates,
                        time: t0.elapsed(),
                    };
                    if let Some(c) = &checkpoint {
                        c.record(&unit)?;
                    }
                    return Ok(unit);
                }
                p -= 1;
                let e = subset[p];
                sub_into(&mut acc, &tables[e][digits[p]]);
                digits[p] = (digits[p] + 1) % coeffs.len();
                add_into(&mut acc, &tables[e][digits[p]]);
                if digits[p] != 0 {
                    break;
                }
            }
        }
    };

    let todo: Vec<usize> = (0..subsets.len())
        .filter(|i| checkpoint.as_ref().map_or(true, |c| !c.done.contains_key(i)))
        .collect();
    let computed: Vec<UnitResult> = todo.into_par_iter().map(run_unit).collect::<Result<_>>()?;

    let mut units: Vec<UnitResult> = computed;
    if let Some(c) = checkpoint {
        units.extend(c.done.into_iter().map(|(index, hits)| UnitResult {
            index,
            hits,
            candidates: 0,
            time: Duration::ZERO,
        }));
    }
    units.sort_by_key(|u| u.index);

    let mut rows: Vec<SearchRow> = (0..=cfg.terms.min(pool.len()))
        .map(|t| SearchRow {
            n,
            base: cfg.base,
            terms: t,
            m: cfg.coeff_degree,
            candidates: 0,
            hits: 0,
            time: Duration::ZERO,
        })
        .collect();
    let mut hits = Vec::new();
    for u in units {
        let row = &mut rows[subsets[u.index].len()];
        row.candidates += u.candidates;
        row.hits += u.hits.len();
        row.time += u.time;
        hits.extend(u.hits);
    }
    Ok(SearchRun {
        config: cfg.clone(),
        hits,
        rows,
        units: subsets.len(),
        resumed_units,
        elapsed: start.elapsed(),
    })
}

fn add_into(acc: &mut [Trits], t: &[Trits]) {
    for (a, &b) in acc.iter_mut().zip(t) {
        *a += b;
    }
}

fn sub_into(acc: &mut [Trits], t: &[Trits]) {
    for (a, &b) in acc.iter_mut().zip(t) {
        *a -= b;
    }
}

/// Canonical form of a polynomial under `x ↦ x^3` on inputs, Frobenius on
/// coefficients and the scalings `μ F(λ x)`. Two functions with the same key
/// are linearly equivalent.
pub fn symmetry_key(f: &PlanarFn) -> Vec<(u64, u64)> {
    let ctx = f.ctx();
    let n = ctx.n();
    let ord = (ctx.q() - 1) as u64;
    let base: Vec<(u64, u64)> = f
        .terms()
        .iter()
        .map(|t| (t.exp, ctx.log(t.coeff).expect("nonzero coefficient") as u64))
        .collect();
    let mut best: Option<Vec<(u64, u64)>> = None;
    let mut consider = |cand: Vec<(u64, u64)>| {
        if best.as_ref().map_or(true, |b| cand < *b) {
            best = Some(cand);
        }
    };
    for s in 0..n {
        let shift = 3u64.pow(s as u32) % ord;
        let mut terms: Vec<(u64, u64)> = base.iter().map(|&(e, l)| (e * shift % ord, l)).collect();
        terms.sort_unstable();
        let (e0, _) = terms[0];
        for r in 0..n {
            let frob = 3u64.pow(r as u32) % ord;
            let logs: Vec<u64> = terms.iter().map(|&(_, l)| l * frob % ord).collect();
            let l0 = logs[0];
            // log of the k-th coefficient after μ F(λ x), μ chosen to make the first one 1
            let at = |k: usize, lam: u64| (logs[k] + ord - l0 + (terms[k].0 - e0) % ord * lam) % ord;
            let lambdas: Vec<u64> = if terms.len() < 2 {
                vec![0]
            } else {
                // λ minimizing the second coefficient: a coset of the kernel of λ ↦ λ^δ
                let delta = (terms[1].0 - e0) % ord;
                let g = gcd(delta, ord);
                let a = at(1, 0);
                let sub = ord / g;
                let l0 = ((a % g + ord - a) / g % sub) * mod_inverse(delta / g % sub, sub).unwrap_or(0) % sub;
                (0..g).map(|j| l0 + j * sub).collect()
            };
            for lam in lambdas {
                consider(terms.iter().enumerate().map(|(k, &(e, _))| (e, at(k, lam))).collect());
            }
        }
    }
    best.expect("at least one term")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HitOrigin {
    /// Same symmetry key as an earlier hit.
    Symmetry(usize),
    Cyclotomic,
    Witness,
    New,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HitMatch {
    pub hit: usize,
    pub class_id: String,
    pub origin: HitOrigin,
}

#[derive(Clone, Debug)]
pub struct Dedupe {
    pub new_classes: Vec<ClassRecord>,
    pub matches: Vec<HitMatch>,
    /// Hits left after the symmetry quotient.
    pub survivors: usize,
}

/// Sorts planar hits into the classes of `catalog` (restricted to the hits'
/// degree) and appends the new ones.
pub fn dedupe(hits: &[PlanarFn], catalog: &Catalog) -> Result<Dedupe> {
    let Some(first) = hits.first() else {
        return Ok(Dedupe {
            new_classes: Vec::new(),
            matches: Vec::new(),
            survivors: 0,
        });
    };
    let n = first.n();
    if let Some(h) = hits.iter().find(|h| h.n() != n) {
        return Err(Error::ContextMismatch(n, h.n()));
    }
    let keys: Vec<Vec<(u64, u64)>> = hits.par_iter().map(|h| symmetry_key(&h.ea_normal())).collect();
    let mut first_with: HashMap<&[(u64, u64)], usize> = HashMap::new();
    let mut survivors = Vec::new();
    let mut alias = vec![None; hits.len()];
    for (i, k) in keys.iter().enumerate() {
        match first_with.get(k.as_slice()) {
            Some(&j) => alias[i] = Some(j),
            None => {
                first_with.insert(k, i);
                survivors.push(i);
            }
        }
    }
    info!("dedupe: {} hits, {} after symmetry quotient", hits.len(), survivors.len());
    let seed = catalog.restricted(n);
    let seed_len = seed.len();
    let cands: Vec<Candidate> = survivors
        .iter()
        .map(|&i| Candidate::new(hits[i].clone(), Vec::<String>::new()))
        .collect();
    let out = classify(&cands, seed, ProfileOptions::default())?;
    let mut class_of = vec![String::new(); hits.len()];
    let mut matches = Vec::with_capacity(hits.len());
    for (ev, &i) in out.events.iter().zip(&survivors) {
        class_of[i] = ev.class_id.clone();
    }
    let mut events = out.events.iter();
    for i in 0..hits.len() {
        let (class_id, origin) = match alias[i] {
            Some(j) => (class_of[j].clone(), HitOrigin::Symmetry(j)),
            None => {
                let ev = events.next().expect("one event per survivor");
                let origin = match ev.kind {
                    MatchKind::Cyclotomic => HitOrigin::Cyclotomic,
                    MatchKind::Witness => HitOrigin::Witness,
                    MatchKind::New => HitOrigin::New,
                };
                (ev.class_id.clone(), origin)
            }
        };
        matches.push(HitMatch { hit: i, class_id, origin });
    }
    Ok(Dedupe {
        new_classes: out.catalog.records[seed_len..].to_vec(),
        matches,
        survivors: survivors.len(),
    })
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub rows: Vec<SearchRow>,
    pub candidates: u64,
    pub hits: usize,
    pub new_classes: Vec<ClassRecord>,
    pub search_time: Duration,
    pub dedupe_time: Duration,
}

impl SearchReport {
    pub fn new(runs: &[SearchRun], dedupe: &Dedupe, dedupe_time: Duration) -> Self {
        let rows: Vec<SearchRow> = runs.iter().flat_map(|r| r.rows.iter().filter(|row| row.terms > 0).cloned()).collect();
        SearchReport {
            candidates: runs.iter().flat_map(|r| &r.rows).map(|r| r.candidates).sum(),
            hits: runs.iter().map(|r| r.hits.len()).sum(),
            rows,
            new_classes: dedupe.new_classes.clone(),
            search_time: runs.iter().map(|r| r.elapsed).sum(),
            dedupe_time,
        }
    }
}

fn fmt_duration(d: Duration) -> String {
    let s = d.as_secs_f64();
    if s < 1.0 {
        format!("{}ms", d.as_millis())
    } else if s < 120.0 {
        format!("{s:.1}s")
    } else if s < 7200.0 {
        format!("{:.1}m", s / 60.0)
    } else {
        format!("{:.1}h", s / 3600.0)
    }
}

impl fmt::Display for SearchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>3} | {:<8} | {:>5} | {:>2} | {:>10} | {:>6} | {:>8}", "n", "M", "terms", "m", "candidates", "planar", "time")?;
        for r in &self.rows {
            writeln!(
                f,
                "{:>3} | {:<8} | {:>5} | {:>2} | {:>10} | {:>6} | {:>8}",
                r.n,
                format!("x^{}", r.base),
                r.terms,
                r.m,
                r.candidates,
                r.hits,
                fmt_duration(r.time)
            )?;
        }
        writeln!(f, "candidates tested: {}", self.candidates)?;
        writeln!(f, "planar hits: {}", self.hits)?;
        writeln!(f, "new classes: {}", self.new_classes.len())?;
        for rec in &self.new_classes {
            writeln!(f, "  {}", rec.to_line())?;
        }
        write!(
            f,
            "time: search {}, dedupe {}",
            fmt_duration(self.search_time),
            fmt_duration(self.dedupe_time)
        )
    }
}
