//! Right orbits: orbits of the L2-components of the self-equivalence group.
//!
//! Generators of the group are collected with a stabilizer chain along base
//! points read off the identity self-equivalence. At level `i` the search
//! looks for self-equivalences fixing the first `i` base points and moving
//! base point `i` to each orbit not yet reached; working from the deepest
//! level up makes the collected generators generate the whole group.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field::Fe;
use crate::planarfn::PlanarFn;

use super::engine::{DoView, Flow, Matcher};
use super::symmetry::GammaSymmetry;
use super::LinearMap;

/// Multiset of orbit sizes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct OrbitMultiset(pub BTreeMap<u64, u64>);

impl OrbitMultiset {
    pub fn from_sizes(sizes: impl IntoIterator<Item = u64>) -> Self {
        let mut m = BTreeMap::new();
        for s in sizes {
            *m.entry(s).or_insert(0) += 1;
        }
        OrbitMultiset(m)
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|(k, v)| k * v).sum()
    }

    pub fn count(&self) -> u64 {
        self.0.values().sum()
    }
}

impl fmt::Display for OrbitMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(k, v)| if *v == 1 { k.to_string() } else { format!("{k}^{v}") })
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for OrbitMultiset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad orbit multiset `{s}`"));
        let mut m = BTreeMap::new();
        for part in s.split(',').map(str::trim) {
            let (k, v) = match part.split_once('^') {
                Some((k, v)) => (k.trim(), v.trim().parse::<u64>().map_err(|_| bad())?),
                None => (part, 1),
            };
            *m.entry(k.parse::<u64>().map_err(|_| bad())?).or_insert(0) += v;
        }
        Ok(OrbitMultiset(m))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RightOrbits {
    /// Each orbit sorted by code; orbits ordered by their least element.
    pub orbits: Vec<Vec<Fe>>,
    pub multiset: OrbitMultiset,
    /// Order of the L2-component group, when the stabilizer chain was run.
    pub group_order: Option<u128>,
}

impl RightOrbits {
    /// Least element of each orbit, as discrete logs (the form of published tables).
    pub fn representative_logs(&self, ctx: &crate::field::FieldCtx) -> Vec<u32> {
        let mut v: Vec<u32> = self
            .orbits
            .iter()
            .map(|o| o.iter().map(|&x| ctx.log(x).expect("nonzero")).min().expect("nonempty"))
            .collect();
        v.sort_unstable();
        v
    }
}

struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
    rejected: Vec<bool>,
}

impl UnionFind {
    fn new(q: usize) -> Self {
        UnionFind {
            parent: (0..q as u32).collect(),
            size: vec![1; q],
            rejected: vec![false; q],
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        let (big, small) = if self.size[ra as usize] >= self.size[rb as usize] { (ra, rb) } else { (rb, ra) };
        self.parent[small as usize] = big;
        self.size[big as usize] += self.size[small as usize];
        self.rejected[big as usize] |= self.rejected[small as usize];
    }

    fn absorb(&mut self, map: &LinearMap) {
        for x in 1..self.parent.len() as u32 {
            self.union(x, map.apply(Fe(x)).0);
        }
    }
}

fn partition(uf: &mut UnionFind) -> Vec<Vec<Fe>> {
    let q = uf.parent.len();
    let mut by_root: BTreeMap<u32, Vec<Fe>> = BTreeMap::new();
    let mut first: BTreeMap<u32, u32> = BTreeMap::new();
    for x in 1..q as u32 {
        let r = uf.find(x);
        first.entry(r).or_insert(x);
        by_root.entry(r).or_default().push(Fe(x));
    }
    let mut orbits: Vec<Vec<Fe>> = by_root.into_values().collect();
    orbits.sort_by_key(|o| o[0]);
    orbits
}

/// Right orbits of a planar DO polynomial or of a monomial.
pub fn right_orbits(f: &PlanarFn) -> Result<RightOrbits> {
    let ctx = f.ctx().clone();
    let q = ctx.q() as usize;
    // x ↦ λx is a self-equivalence of every monomial
    let single = f.is_monomial() && f.terms()[0].exp > 0;
    if !single {
        super::check_pair(f, f)?;
    }
    let sym = if single { None } else { Some(GammaSymmetry::of(f)) };
    if sym.as_ref().map_or(true, |s| s.reps.len() == 1) {
        return Ok(RightOrbits {
            orbits: vec![ctx.nonzero().collect()],
            multiset: OrbitMultiset::from_sizes([q as u64 - 1]),
            group_order: None,
        });
    }

    let view = DoView::new(f);
    let mut base: Vec<u32> = Vec::new();
    loop {
        let mut m = Matcher::new(&ctx, &view, &view);
        let pairs: Vec<(u32, u32)> = base.iter().map(|&b| (b, b)).collect();
        assert!(m.force(&pairs), "identity is a self-equivalence");
        if m.is_complete() {
            break;
        }
        base.push(m.branch_point().expect("incomplete"));
    }

    let fixed_prefix = |map: &LinearMap| base.iter().take_while(|&&b| map.apply(Fe(b)).0 == b).count();
    let sym = sym.expect("non-monomial");
    let mut gens: Vec<(usize, LinearMap)> = sym.gens.iter().map(|g| (fixed_prefix(g), g.clone())).collect();
    let mut group_order: Option<u128> = Some(1);

    for level in (0..base.len()).rev() {
        let mut uf = UnionFind::new(q);
        for (fix, g) in &gens {
            if *fix >= level {
                uf.absorb(g);
            }
        }
        let b = base[level];
        let prefix: Vec<(u32, u32)> = base[..level].iter().map(|&p| (p, p)).collect();
        let mut m = Matcher::new(&ctx, &view, &view);
        assert!(m.force(&prefix), "identity is a self-equivalence");
        for y in 1..q as u32 {
            let (ry, rb) = (uf.find(y), uf.find(b));
            if ry == rb || uf.rejected[ry as usize] {
                continue;
            }
            let cp = m.checkpoint();
            let mut found = None;
            if m.guess(b, y) {
                m.search(None, &mut |s| {
                    found = Some(s.l2_table().to_vec());
                    Flow::Stop
                });
            }
            m.restore(cp);
            match found {
                Some(table) => {
                    let imgs = (0..ctx.n()).map(|i| Fe(table[ctx.basis(i).idx()])).collect();
                    let g = LinearMap::from_images(&ctx, imgs);
                    uf.absorb(&g);
                    gens.push((fixed_prefix(&g), g));
                }
                None => {
                    let r = uf.find(y);
                    uf.rejected[r as usize] = true;
                }
            }
        }
        let rb = uf.find(b);
        let size = uf.size[rb as usize] as u128;
        group_order = group_order.and_then(|o| o.checked_mul(size));
    }

    let mut uf = UnionFind::new(q);
    for (_, g) in &gens {
        uf.absorb(g);
    }
    let orbits = partition(&mut uf);
    let multiset = OrbitMultiset::from_sizes(orbits.iter().map(|o| o.len() as u64));
    Ok(RightOrbits {
        orbits,
        multiset,
        group_order,
    })
}
