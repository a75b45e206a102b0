//! Linear equivalence of planar DO polynomials, right orbits, invariant
//! profiles and the classification catalog.

pub mod catalog;
pub mod classify;
pub(crate) mod engine;
pub mod orbits;
pub mod profile;
pub(crate) mod symmetry;

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Fe, FieldCtx};
use crate::gf3::{independent, Mat, Trits};
use crate::planarfn::PlanarFn;

use engine::{DoView, Flow, Matcher};

/// A GF(3)-linear map of GF(3^n), given by basis images, with its full table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    images: Vec<Fe>,
    table: Vec<Fe>,
}

impl LinearMap {
    pub fn from_images(ctx: &FieldCtx, images: Vec<Fe>) -> Self {
        assert_eq!(images.len(), ctx.n());
        let q = ctx.q() as usize;
        let mut table = vec![Fe::ZERO; q];
        let mut block = 1usize;
        for &img in &images {
            let twice = ctx.scale(img, 2);
            for p in 0..block {
                table[p + block] = ctx.add(table[p], img);
                table[p + 2 * block] = ctx.add(table[p], twice);
            }
            block *= 3;
        }
        LinearMap { images, table }
    }

    pub fn from_matrix(ctx: &FieldCtx, m: &Mat) -> Self {
        Self::from_images(ctx, m.cols().iter().map(|&c| ctx.from_trits(c)).collect())
    }

    /// Reads basis images off a table and checks the table is additive.
    pub fn from_table(ctx: &FieldCtx, table: &[Fe]) -> Result<Self> {
        let images = (0..ctx.n()).map(|i| table[ctx.basis(i).idx()]).collect();
        let map = Self::from_images(ctx, images);
        if map.table != table {
            return Err(Error::Constraint("table is not additive".into()));
        }
        Ok(map)
    }

    pub fn identity(ctx: &FieldCtx) -> Self {
        Self::from_images(ctx, (0..ctx.n()).map(|i| ctx.basis(i)).collect())
    }

    /// `x ↦ c x^{3^j}`.
    pub fn scaled_frobenius(ctx: &FieldCtx, c: Fe, j: usize) -> Self {
        Self::from_images(ctx, (0..ctx.n()).map(|i| ctx.mul(c, ctx.frobenius(ctx.basis(i), j))).collect())
    }

    #[inline]
    pub fn apply(&self, x: Fe) -> Fe {
        self.table[x.idx()]
    }

    pub fn images(&self) -> &[Fe] {
        &self.images
    }

    pub fn table(&self) -> &[Fe] {
        &self.table
    }

    pub fn matrix(&self, ctx: &FieldCtx) -> Mat {
        Mat::from_cols(self.images.iter().map(|&x| ctx.trits(x)).collect())
    }

    pub fn is_permutation(&self, ctx: &FieldCtx) -> bool {
        let v: Vec<Trits> = self.images.iter().map(|&x| ctx.trits(x)).collect();
        independent(&v)
    }

    /// `self ∘ other`.
    pub fn compose(&self, ctx: &FieldCtx, other: &LinearMap) -> LinearMap {
        Self::from_images(ctx, other.images.iter().map(|&x| self.apply(x)).collect())
    }

    pub fn inverse(&self, ctx: &FieldCtx) -> Option<LinearMap> {
        self.matrix(ctx).inverse().map(|m| Self::from_matrix(ctx, &m))
    }
}

/// `G = L1 ∘ F ∘ L2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub l1: LinearMap,
    pub l2: LinearMap,
}

impl Witness {
    /// Replays the relation on every input.
    pub fn verify(&self, f: &PlanarFn, g: &PlanarFn) -> bool {
        let (ft, gt) = (f.table(), g.table());
        f.ctx()
            .elements()
            .all(|x| self.l1.apply(ft[self.l2.apply(x).idx()]) == gt[x.idx()])
    }
}

/// Table of `L1 ∘ F ∘ L2` as a function.
pub fn transform(f: &PlanarFn, l1: &LinearMap, l2: &LinearMap) -> PlanarFn {
    let ctx = f.ctx();
    let t = f.table();
    let table = ctx.elements().map(|x| l1.apply(t[l2.apply(x).idx()])).collect();
    PlanarFn::from_table(ctx.clone(), table).expect("composition of polynomials")
}

fn check_pair(f: &PlanarFn, g: &PlanarFn) -> Result<()> {
    if f.n() != g.n() {
        return Err(Error::ContextMismatch(f.n(), g.n()));
    }
    for h in [f, g] {
        if !h.is_do() {
            return Err(Error::NotDo);
        }
        if !h.is_planar_do()? {
            return Err(Error::NotPlanar);
        }
    }
    Ok(())
}

/// Searches for linear permutations with `G = L1 ∘ F ∘ L2`. The search is
/// exhaustive: `None` means no such pair exists.
pub fn linear_equivalent(f: &PlanarFn, g: &PlanarFn) -> Result<Option<Witness>> {
    check_pair(f, g)?;
    let sf = symmetry::GammaSymmetry::of(f);
    let sg = symmetry::GammaSymmetry::of(g);
    // Root guesses range over orbit representatives of the source's
    // symmetry group, so the source should be the more symmetric one.
    if sg.reps.len() < sf.reps.len() {
        let ctx = f.ctx();
        return Ok(search_pair(g, f, &sg)?.map(|w| Witness {
            l1: w.l1.inverse(ctx).expect("permutation"),
            l2: w.l2.inverse(ctx).expect("permutation"),
        }));
    }
    search_pair(f, g, &sf)
}

fn search_pair(f: &PlanarFn, g: &PlanarFn, sym: &symmetry::GammaSymmetry) -> Result<Option<Witness>> {
    let ctx = f.ctx().clone();
    let fv = DoView::new(f);
    let gv = DoView::new(g);
    let mut root = Matcher::new(&ctx, &fv, &gv);
    let Some((x, cands)) = root.root_split(Some(&sym.reps)) else {
        return Ok(None);
    };
    let found = cands.par_iter().find_map_first(|&y| {
        let mut m = root.clone();
        if !m.guess(x, y) {
            return None;
        }
        let mut out = None;
        m.search(None, &mut |s| {
            out = Some(witness_from(&ctx, s));
            Flow::Stop
        });
        out
    });
    if let Some(w) = &found {
        assert!(w.verify(f, g), "witness failed replay");
    }
    Ok(found)
}

fn witness_from(ctx: &Arc<FieldCtx>, s: &Matcher) -> Witness {
    let l2 = s.l2_table();
    let l1 = s.l1_table();
    let img = |t: &[u32]| (0..ctx.n()).map(|i| Fe(t[ctx.basis(i).idx()])).collect();
    Witness {
        l1: LinearMap::from_images(ctx, img(l1)),
        l2: LinearMap::from_images(ctx, img(l2)),
    }
}

/// Every self-equivalence `(L1, L2)` of `F`; exponential, for small fields only.
pub fn self_equivalences(f: &PlanarFn) -> Result<Vec<Witness>> {
    check_pair(f, f)?;
    let ctx = f.ctx().clone();
    let fv = DoView::new(f);
    let mut m = Matcher::new(&ctx, &fv, &fv);
    let mut out = Vec::new();
    m.search(None, &mut |s| {
        out.push(witness_from(&ctx, s));
        Flow::Continue
    });
    Ok(out)
}
