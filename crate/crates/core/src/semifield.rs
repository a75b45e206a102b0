//! Commutative (pre)semifields attached to planar DO polynomials.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::field::{Fe, FieldCtx};
use crate::gf3::{common_kernel, span, Mat, Trits};
use crate::planarfn::{BilinearSlices, PlanarFn};
use std::sync::Arc;

/// `x ⋆ y = F(x+y) - F(x) - F(y)` for a planar DO polynomial `F`.
#[derive(Clone, Debug)]
pub struct Presemifield {
    source: PlanarFn,
    slices: BilinearSlices,
    // left[i] is y ↦ e_i ⋆ y
    left: Vec<Mat>,
}

impl Presemifield {
    pub fn from_planar(f: &PlanarFn) -> Result<Self> {
        let slices = f.bilinear_slices()?;
        if !slices.is_planar() {
            return Err(Error::NotPlanar);
        }
        Ok(Self::from_slices(f.clone(), slices))
    }

    fn from_slices(source: PlanarFn, slices: BilinearSlices) -> Self {
        let n = slices.n();
        let left = (0..n)
            .map(|i| Mat::from_cols((0..n).map(|j| slices.on_basis(i, j)).collect()))
            .collect();
        Presemifield { source, slices, left }
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        self.source.ctx()
    }

    pub fn source(&self) -> &PlanarFn {
        &self.source
    }

    pub fn slices(&self) -> &BilinearSlices {
        &self.slices
    }

    /// Matrix of `y ↦ w ⋆ y`.
    pub fn left_matrix(&self, w: Trits) -> Mat {
        let n = self.left.len();
        let mut m = Mat::zero(n);
        for (k, l) in self.left.iter().enumerate() {
            match w.get(k) {
                0 => {}
                c => m = m.add(&l.scale(c)),
            }
        }
        m
    }

    pub fn product_trits(&self, x: Trits, y: Trits) -> Trits {
        self.slices.eval(x, y)
    }

    pub fn product(&self, x: Fe, y: Fe) -> Fe {
        let ctx = self.ctx();
        ctx.from_trits(self.product_trits(ctx.trits(x), ctx.trits(y)))
    }
}

/// A presemifield turned into a semifield by `(x ⋆ a) ∗ (y ⋆ a) = x ⋆ y`.
#[derive(Clone, Debug)]
pub struct Semifield {
    base: Presemifield,
    a: Fe,
    unit: Fe,
    translate: Mat,
    translate_inv: Mat,
    // left[i] is v ↦ e_i ∗ v
    left: Vec<Mat>,
}

impl Semifield {
    pub fn unitalize(base: Presemifield, a: Fe) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::ZeroArgument);
        }
        let ctx = base.ctx().clone();
        let n = ctx.n();
        let at = ctx.trits(a);
        let translate = Mat::from_cols((0..n).map(|j| base.product_trits(Trits::unit(j), at)).collect());
        let translate_inv = translate.inverse().ok_or(Error::NotPlanar)?;
        let left = (0..n)
            .map(|i| base.left_matrix(translate_inv.col(i)).mul(&translate_inv))
            .collect();
        let unit = base.product(a, a);
        Ok(Semifield {
            base,
            a,
            unit,
            translate,
            translate_inv,
            left,
        })
    }

    /// The semifield of `F`, unitalized at `a = 1`.
    pub fn from_planar(f: &PlanarFn) -> Result<Self> {
        Self::unitalize(Presemifield::from_planar(f)?, Fe::ONE)
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        self.base.ctx()
    }

    pub fn base(&self) -> &Presemifield {
        &self.base
    }

    pub fn a(&self) -> Fe {
        self.a
    }

    pub fn unit(&self) -> Fe {
        self.unit
    }

    /// `x ↦ x ⋆ a` and its inverse.
    pub fn translations(&self) -> (&Mat, &Mat) {
        (&self.translate, &self.translate_inv)
    }

    pub fn left_matrices(&self) -> &[Mat] {
        &self.left
    }

    /// Matrix of `v ↦ w ∗ v`.
    pub fn mult_matrix(&self, w: Trits) -> Mat {
        let n = self.left.len();
        let mut m = Mat::zero(n);
        for (k, l) in self.left.iter().enumerate() {
            match w.get(k) {
                0 => {}
                c => m = m.add(&l.scale(c)),
            }
        }
        m
    }

    pub fn product_trits(&self, x: Trits, y: Trits) -> Trits {
        let mut acc = Trits::ZERO;
        for (k, l) in self.left.iter().enumerate() {
            match x.get(k) {
                0 => {}
                c => acc += l.apply(y).scale(c),
            }
        }
        acc
    }

    pub fn product(&self, x: Fe, y: Fe) -> Fe {
        let ctx = self.ctx();
        ctx.from_trits(self.product_trits(ctx.trits(x), ctx.trits(y)))
    }

    /// Middle nucleus and nucleus, as kernels of linear conditions on basis pairs.
    pub fn nuclei(&self) -> NucleiProfile {
        let ctx = self.ctx();
        let n = ctx.n();
        let m = &self.left;
        let mut comm = Vec::new();
        let mut assoc = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let mjmi = m[j].mul(&m[i]);
                if j > i {
                    comm.push(mjmi.sub(&m[i].mul(&m[j])));
                }
                let c = m[i].apply(Trits::unit(j));
                assoc.push(mjmi.sub(&self.mult_matrix(c)));
            }
        }
        let middle = common_kernel(n, &comm);
        let nucleus = common_kernel(n, &assoc);
        let to_set = |basis: &[Trits]| -> Vec<Fe> {
            let mut v: Vec<Fe> = span(basis).into_iter().map(|t| ctx.from_trits(t)).collect();
            v.sort();
            v
        };
        NucleiProfile {
            nucleus_dim: nucleus.len(),
            middle_dim: middle.len(),
            nucleus_set: to_set(&nucleus),
            middle_set: to_set(&middle),
        }
    }

    /// Squares of `N_m` and one representative per `N^*`-coset of `N_m \ N`,
    /// taken in ascending discrete-log order.
    pub fn nm_structure(&self, nuclei: &NucleiProfile) -> NmStructure {
        let ctx = self.ctx();
        let squares: BTreeSet<Fe> = nuclei.middle_set.iter().map(|&x| self.product(x, x)).collect();
        let nucleus: BTreeSet<Fe> = nuclei.nucleus_set.iter().copied().collect();
        let mut outside: Vec<Fe> = nuclei
            .middle_set
            .iter()
            .copied()
            .filter(|x| !nucleus.contains(x))
            .collect();
        outside.sort_by_key(|&x| ctx.log(x));
        let mut covered = BTreeSet::new();
        let mut coset_reps = Vec::new();
        for b in outside {
            if covered.contains(&b) {
                continue;
            }
            coset_reps.push(b);
            for &g in nuclei.nucleus_set.iter().filter(|g| !g.is_zero()) {
                covered.insert(self.product(g, b));
            }
        }
        NmStructure {
            squares: squares.into_iter().collect(),
            coset_reps,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NucleiProfile {
    pub nucleus_dim: usize,
    pub middle_dim: usize,
    pub nucleus_set: Vec<Fe>,
    pub middle_set: Vec<Fe>,
}

impl NucleiProfile {
    pub fn nucleus_order(&self) -> u64 {
        3u64.pow(self.nucleus_dim as u32)
    }

    pub fn middle_order(&self) -> u64 {
        3u64.pow(self.middle_dim as u32)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NmStructure {
    pub squares: Vec<Fe>,
    pub coset_reps: Vec<Fe>,
}

impl NmStructure {
    pub fn is_square(&self, x: Fe) -> bool {
        self.squares.binary_search(&x).is_ok()
    }
}

/// Nuclei orders `(|N|, |N_m|)` of the semifield of `F`.
pub fn nuclei_orders(f: &PlanarFn) -> Result<(u64, u64)> {
    let nu = Semifield::from_planar(f)?.nuclei();
    Ok((nu.nucleus_order(), nu.middle_order()))
}
