//! Self-equivalences of the form `x ↦ c x^{3^j}`.
//!
//! These are found in O(n^3) per candidate by checking the bilinear form,
//! and give a subgroup of the right-orbit group that is used to prune the
//! first branch of equivalence searches.

use crate::field::{Fe, FieldCtx};
use crate::gf3::PairEchelon;
use crate::planarfn::PlanarFn;

use super::LinearMap;

pub(crate) struct GammaSymmetry {
    /// Generator tables of the group.
    pub gens: Vec<LinearMap>,
    /// Smallest code of every orbit on nonzero elements, ascending.
    pub reps: Vec<u32>,
}

/// Whether some linear `A` satisfies `F(B(x)) = A(F(x))`.
pub(crate) fn is_self_equivalence(ctx: &FieldCtx, table: &[Fe], b: &LinearMap) -> bool {
    let n = ctx.n();
    let bil = |x: Fe, y: Fe| {
        let s = ctx.sub(table[ctx.add(x, y).idx()], table[x.idx()]);
        ctx.trits(ctx.sub(s, table[y.idx()]))
    };
    let e: Vec<Fe> = (0..n).map(|i| ctx.basis(i)).collect();
    let be: Vec<Fe> = e.iter().map(|&x| b.apply(x)).collect();
    let mut pe = PairEchelon::new();
    for i in 0..n {
        for j in i..n {
            if !pe.insert(bil(e[i], e[j]), bil(be[i], be[j])) {
                return false;
            }
        }
    }
    true
}

fn divisors(m: u64) -> Vec<u64> {
    (1..=m).filter(|d| m % d == 0).collect()
}

impl GammaSymmetry {
    pub fn of(f: &PlanarFn) -> Self {
        let ctx = f.ctx();
        let n = ctx.n();
        let ord = ctx.order() as u64;
        let table = f.table();
        let valid = |c: Fe, j: usize| is_self_equivalence(ctx, table, &LinearMap::scaled_frobenius(ctx, c, j));
        // the scalars form a cyclic subgroup, generated by its least log
        let d = divisors(ord)
            .into_iter()
            .find(|&d| valid(ctx.gen_pow(d), 0))
            .expect("the full group order always qualifies");
        let mut gens = vec![LinearMap::scaled_frobenius(ctx, ctx.gen_pow(d), 0)];
        // valid scalars for a fixed twist form a coset of that subgroup
        'twist: for j in divisors(n as u64).into_iter().filter(|&j| j < n as u64) {
            for k in 0..d {
                if valid(ctx.gen_pow(k), j as usize) {
                    gens.push(LinearMap::scaled_frobenius(ctx, ctx.gen_pow(k), j as usize));
                    break 'twist;
                }
            }
        }
        let reps = orbit_reps(ctx, &gens);
        GammaSymmetry { gens, reps }
    }
}

/// Least element of every orbit of the group generated by `gens` on nonzero codes.
pub(crate) fn orbit_reps(ctx: &FieldCtx, gens: &[LinearMap]) -> Vec<u32> {
    let q = ctx.q() as usize;
    let mut seen = vec![false; q];
    let mut reps = Vec::new();
    let mut stack = Vec::new();
    for x in 1..q {
        if seen[x] {
            continue;
        }
        reps.push(x as u32);
        seen[x] = true;
        stack.push(x);
        while let Some(y) = stack.pop() {
            for g in gens {
                let z = g.apply(Fe(y as u32)).idx();
                if !seen[z] {
                    seen[z] = true;
                    stack.push(z);
                }
            }
        }
    }
    reps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn monomial_is_transitive() {
        let f = PlanarFn::parse(make_field(5).unwrap(), "x^4").unwrap();
        assert_eq!(GammaSymmetry::of(&f).reps, vec![1]);
    }

    #[test]
    fn binomial_has_small_group() {
        let f = PlanarFn::parse(make_field(5).unwrap(), "x^90 + x^2").unwrap();
        let s = GammaSymmetry::of(&f);
        // orbits of the full right-orbit group are {22, 110, 110}, so at least 3
        assert!(s.reps.len() >= 3);
        assert!(s.reps.len() < 242);
    }
}
