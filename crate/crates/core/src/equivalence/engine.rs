//! Backtracking search for linear maps with `G = L1 ∘ F ∘ L2`, where `F` and
//! `G` are planar DO polynomials.
//!
//! The search keeps two partial linear maps, both closed under spans:
//! `L2` (G-domain to F-domain) and `M = L1^{-1}` (G-outputs to F-outputs).
//! A new `L2` point `x` forces `M(G(x)) = F(L2(x))`. A new `M` point `w`
//! in the image of `G` forces `L2(±b) = ±a` where `G(b) = w` and
//! `F(a) = M(w)`, because a planar DO polynomial is exactly 2-to-1 on
//! nonzero inputs. The sign is read off the bilinear forms when possible,
//! otherwise both signs are tried. Branching only picks `L2` images of
//! points outside the current domain, so the search is complete.

use std::sync::Arc;

use crate::field::{Fe, FieldCtx};
use crate::planarfn::PlanarFn;

pub(crate) const NONE: u32 = u32::MAX;

/// Value table and a preimage table of a DO polynomial.
pub(crate) struct DoView {
    pub table: Arc<Vec<Fe>>,
    pub pre: Vec<u32>,
}

impl DoView {
    pub fn new(f: &PlanarFn) -> Self {
        let table = f.shared_table();
        let mut pre = vec![NONE; table.len()];
        for (x, v) in table.iter().enumerate() {
            if pre[v.idx()] == NONE {
                pre[v.idx()] = x as u32;
            }
        }
        DoView { table, pre }
    }

    #[inline]
    pub fn val(&self, x: u32) -> u32 {
        self.table[x as usize].0
    }
}

pub(crate) enum Flow {
    Continue,
    Stop,
}

enum Sign {
    Unknown,
    Conflict,
    Known(u32),
}

#[derive(Clone)]
pub(crate) struct Checkpoint {
    d2: usize,
    d2_basis: usize,
    dm: usize,
    l2_cursor: usize,
    m_cursor: usize,
    pending: Vec<(u32, u32)>,
}

#[derive(Clone)]
pub(crate) struct Matcher<'a> {
    ctx: &'a FieldCtx,
    f: &'a DoView,
    g: &'a DoView,
    l2: Vec<u32>,
    l2_inv: Vec<u32>,
    m: Vec<u32>,
    m_inv: Vec<u32>,
    d2: Vec<u32>,
    d2_basis: Vec<u32>,
    dm: Vec<u32>,
    l2_cursor: usize,
    m_cursor: usize,
    pending: Vec<(u32, u32)>,
    pub nodes: u64,
}

impl<'a> Matcher<'a> {
    pub fn new(ctx: &'a FieldCtx, f: &'a DoView, g: &'a DoView) -> Self {
        let q = ctx.q() as usize;
        let mut s = Matcher {
            ctx,
            f,
            g,
            l2: vec![NONE; q],
            l2_inv: vec![NONE; q],
            m: vec![NONE; q],
            m_inv: vec![NONE; q],
            d2: vec![0],
            d2_basis: Vec::new(),
            dm: vec![0],
            l2_cursor: 1,
            m_cursor: 1,
            pending: Vec::new(),
            nodes: 0,
        };
        s.l2[0] = 0;
        s.l2_inv[0] = 0;
        s.m[0] = 0;
        s.m_inv[0] = 0;
        s
    }

    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        self.ctx.add(Fe(a), Fe(b)).0
    }

    #[inline]
    fn neg(&self, a: u32) -> u32 {
        self.ctx.neg(Fe(a)).0
    }

    #[inline]
    fn sub(&self, a: u32, b: u32) -> u32 {
        self.ctx.sub(Fe(a), Fe(b)).0
    }

    fn bil(&self, h: &DoView, x: u32, y: u32) -> u32 {
        self.sub(self.sub(h.val(self.add(x, y)), h.val(x)), h.val(y))
    }

    pub fn is_complete(&self) -> bool {
        self.d2.len() == self.l2.len()
    }

    pub fn l2_table(&self) -> &[u32] {
        &self.l2
    }

    /// `L1 = M^{-1}` on F-outputs.
    pub fn l1_table(&self) -> &[u32] {
        &self.m_inv
    }

    /// Adds `x -> y` with `x` outside the domain span and `y` outside the image span.
    fn add_l2(&mut self, x: u32, y: u32) -> bool {
        if self.l2[x as usize] != NONE || self.l2_inv[y as usize] != NONE {
            return false;
        }
        self.d2_basis.push(x);
        let len = self.d2.len();
        for c in 0..2 {
            let (dx, dy) = if c == 0 { (x, y) } else { (self.neg(x), self.neg(y)) };
            for i in 0..len {
                let p = self.d2[i];
                let np = self.add(p, dx);
                let ny = self.add(self.l2[p as usize], dy);
                self.l2[np as usize] = ny;
                self.l2_inv[ny as usize] = np;
                self.d2.push(np);
            }
        }
        true
    }

    fn add_m(&mut self, w: u32, u: u32) -> bool {
        if self.m[w as usize] != NONE || self.m_inv[u as usize] != NONE {
            return false;
        }
        let len = self.dm.len();
        for c in 0..2 {
            let (dw, du) = if c == 0 { (w, u) } else { (self.neg(w), self.neg(u)) };
            for i in 0..len {
                let p = self.dm[i];
                let np = self.add(p, dw);
                let nu = self.add(self.m[p as usize], du);
                self.m[np as usize] = nu;
                self.m_inv[nu as usize] = np;
                self.dm.push(np);
            }
        }
        true
    }

    fn sign(&self, b: u32, a: u32) -> Sign {
        for &d in &self.d2_basis {
            let w = self.bil(self.g, b, d);
            let mw = self.m[w as usize];
            if mw == NONE {
                continue;
            }
            let v = self.bil(self.f, a, self.l2[d as usize]);
            return if mw == v {
                Sign::Known(a)
            } else if mw == self.neg(v) {
                Sign::Known(self.neg(a))
            } else {
                Sign::Conflict
            };
        }
        Sign::Unknown
    }

    fn propagate(&mut self) -> bool {
        loop {
            while self.l2_cursor < self.d2.len() || self.m_cursor < self.dm.len() {
                while self.l2_cursor < self.d2.len() {
                    let x = self.d2[self.l2_cursor];
                    self.l2_cursor += 1;
                    let gx = self.g.val(x);
                    let fy = self.f.val(self.l2[x as usize]);
                    let cur = self.m[gx as usize];
                    if cur == NONE {
                        if !self.add_m(gx, fy) {
                            return false;
                        }
                    } else if cur != fy {
                        return false;
                    }
                }
                while self.m_cursor < self.dm.len() {
                    let w = self.dm[self.m_cursor];
                    self.m_cursor += 1;
                    let u = self.m[w as usize];
                    let b = self.g.pre[w as usize];
                    let a = self.f.pre[u as usize];
                    if (b == NONE) != (a == NONE) {
                        return false;
                    }
                    if b == NONE {
                        continue;
                    }
                    let cur = self.l2[b as usize];
                    if cur == NONE {
                        if self.l2_inv[a as usize] != NONE {
                            return false;
                        }
                        self.pending.push((b, a));
                    } else if cur != a && cur != self.neg(a) {
                        return false;
                    }
                }
            }
            let mut progressed = false;
            let mut i = 0;
            while i < self.pending.len() {
                let (b, a) = self.pending[i];
                let cur = self.l2[b as usize];
                if cur != NONE {
                    if cur != a && cur != self.neg(a) {
                        return false;
                    }
                    self.pending.swap_remove(i);
                    continue;
                }
                if self.l2_inv[a as usize] != NONE {
                    return false;
                }
                match self.sign(b, a) {
                    Sign::Unknown => i += 1,
                    Sign::Conflict => return false,
                    Sign::Known(y) => {
                        self.pending.swap_remove(i);
                        if !self.add_l2(b, y) {
                            return false;
                        }
                        progressed = true;
                        break;
                    }
                }
            }
            if !progressed {
                return true;
            }
        }
    }

    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint {
            d2: self.d2.len(),
            d2_basis: self.d2_basis.len(),
            dm: self.dm.len(),
            l2_cursor: self.l2_cursor,
            m_cursor: self.m_cursor,
            pending: self.pending.clone(),
        }
    }

    pub fn restore(&mut self, cp: Checkpoint) {
        for &x in &self.d2[cp.d2..] {
            let y = self.l2[x as usize];
            self.l2_inv[y as usize] = NONE;
            self.l2[x as usize] = NONE;
        }
        self.d2.truncate(cp.d2);
        self.d2_basis.truncate(cp.d2_basis);
        for &w in &self.dm[cp.dm..] {
            let u = self.m[w as usize];
            self.m_inv[u as usize] = NONE;
            self.m[w as usize] = NONE;
        }
        self.dm.truncate(cp.dm);
        self.l2_cursor = cp.l2_cursor;
        self.m_cursor = cp.m_cursor;
        self.pending = cp.pending;
    }

    /// Imposes `L2(x) = y` for every pair and propagates.
    pub fn force(&mut self, pairs: &[(u32, u32)]) -> bool {
        for &(x, y) in pairs {
            let cur = self.l2[x as usize];
            if cur != NONE {
                if cur != y {
                    return false;
                }
                continue;
            }
            if !self.add_l2(x, y) || !self.propagate() {
                return false;
            }
        }
        self.propagate()
    }

    /// Next point whose `L2` image is not yet determined.
    pub fn branch_point(&self) -> Option<u32> {
        if let Some(&(b, _)) = self.pending.first() {
            return Some(b);
        }
        (1..self.l2.len() as u32).find(|&x| self.l2[x as usize] == NONE)
    }

    /// Candidate images for the free branch point `x`.
    fn candidates(&self) -> Vec<u32> {
        (1..self.l2.len() as u32)
            .filter(|&y| self.l2_inv[y as usize] == NONE && self.m_inv[self.f.val(y) as usize] == NONE)
            .collect()
    }

    /// Depth-first search from the current (propagated) state. When `root` is
    /// given, the first free branch is restricted to those images.
    pub fn search(&mut self, root: Option<&[u32]>, visit: &mut dyn FnMut(&Self) -> Flow) -> Flow {
        self.nodes += 1;
        if !self.propagate() {
            return Flow::Continue;
        }
        if self.is_complete() {
            return visit(self);
        }
        if let Some(&(b, a)) = self.pending.first() {
            for y in [a, self.neg(a)] {
                let cp = self.checkpoint();
                self.pending.remove(0);
                if self.add_l2(b, y) {
                    if let Flow::Stop = self.search(None, visit) {
                        self.restore(cp);
                        return Flow::Stop;
                    }
                }
                self.restore(cp);
            }
            return Flow::Continue;
        }
        let x = self.branch_point().expect("incomplete state has a free point");
        let cands = match root {
            Some(r) => r.to_vec(),
            None => self.candidates(),
        };
        for y in cands {
            if self.l2_inv[y as usize] != NONE || self.m_inv[self.f.val(y) as usize] != NONE {
                continue;
            }
            let cp = self.checkpoint();
            self.add_l2(x, y);
            let flow = self.search(None, visit);
            self.restore(cp);
            if let Flow::Stop = flow {
                return Flow::Stop;
            }
        }
        Flow::Continue
    }

    /// Root branch point and candidate images, for splitting a search
    /// across workers. `None` when the state is already complete or dead.
    pub fn root_split(&mut self, root: Option<&[u32]>) -> Option<(u32, Vec<u32>)> {
        if !self.propagate() || self.is_complete() || !self.pending.is_empty() {
            return None;
        }
        let x = self.branch_point()?;
        let cands = match root {
            Some(r) => r
                .iter()
                .copied()
                .filter(|&y| self.l2_inv[y as usize] == NONE && self.m_inv[self.f.val(y) as usize] == NONE)
                .collect(),
            None => self.candidates(),
        };
        Some((x, cands))
    }

    /// Adds a root guess; used together with [`Matcher::root_split`].
    pub fn guess(&mut self, x: u32, y: u32) -> bool {
        self.add_l2(x, y)
    }
}
