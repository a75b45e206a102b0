//! Whether the isotopy class of a commutative semifield splits into two
//! strong isotopy (CCZ) classes.
//!
//! With `|N| = 3^k` and `|N_m| = 3^m`, an odd `m / k` rules out splitting.
//! Otherwise every candidate partner has the form `G_β(x) = 2 (β ∗ x) ∗ x`
//! for `β` in `N_m \ N`, one `β` per coset of `N^*`.

use std::fmt;

use crate::equivalence::linear_equivalent;
use crate::error::{Error, Result};
use crate::field::Fe;
use crate::gf3::Trits;
use crate::planarfn::PlanarFn;
use crate::semifield::Semifield;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitVerdict {
    NoSplitOddIndex,
    NoSplitAllEquivalent,
    Splits,
}

impl fmt::Display for SplitVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SplitVerdict::NoSplitOddIndex => "NoSplit-OddIndex",
            SplitVerdict::NoSplitAllEquivalent => "NoSplit-AllEquivalent",
            SplitVerdict::Splits => "Splits",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaOutcome {
    pub beta: Fe,
    /// `β` is a square of `N_m` under the semifield product.
    pub is_square: bool,
    pub equivalent: bool,
}

#[derive(Clone, Debug)]
pub struct SplitResult {
    pub verdict: SplitVerdict,
    pub partner: Option<PlanarFn>,
    pub tested: Vec<BetaOutcome>,
    pub coset_count: usize,
    pub nucleus_order: u64,
    pub middle_order: u64,
}

/// `G_β(x) = 2 (β ∗ x) ∗ x`, EA-normalized.
pub fn twisted(s: &Semifield, beta: Fe) -> Result<PlanarFn> {
    let ctx = s.ctx();
    let n = ctx.n();
    let lb = s.mult_matrix(ctx.trits(beta));
    for i in 0..n {
        for j in 0..i {
            let (ei, ej) = (Trits::unit(i), Trits::unit(j));
            if s.product_trits(lb.apply(ei), ej) != s.product_trits(lb.apply(ej), ei) {
                return Err(Error::Constraint(format!(
                    "(β ∗ x) ∗ y is not commutative for β = {}",
                    ctx.format_elem(beta)
                )));
            }
        }
    }
    let table = ctx
        .elements()
        .map(|x| {
            let t = ctx.trits(x);
            ctx.from_trits(s.product_trits(lb.apply(t), t).scale(2))
        })
        .collect();
    Ok(PlanarFn::from_table(ctx.clone(), table)?.ea_normal())
}

pub fn split_check(f: &PlanarFn) -> Result<SplitResult> {
    let f = f.ea_normal();
    let s = Semifield::from_planar(&f)?;
    let nu = s.nuclei();
    let (k, m) = (nu.nucleus_dim, nu.middle_dim);
    assert!(k > 0 && m % k == 0, "nucleus dimension divides middle nucleus dimension");
    let structure = s.nm_structure(&nu);
    let mut result = SplitResult {
        verdict: SplitVerdict::NoSplitOddIndex,
        partner: None,
        tested: Vec::new(),
        coset_count: structure.coset_reps.len(),
        nucleus_order: nu.nucleus_order(),
        middle_order: nu.middle_order(),
    };
    if (m / k) % 2 == 1 {
        return Ok(result);
    }
    result.verdict = SplitVerdict::NoSplitAllEquivalent;
    for &beta in &structure.coset_reps {
        let g = twisted(&s, beta)?;
        let equivalent = linear_equivalent(&f, &g)?.is_some();
        result.tested.push(BetaOutcome {
            beta,
            is_square: structure.is_square(beta),
            equivalent,
        });
        if !equivalent {
            result.verdict = SplitVerdict::Splits;
            result.partner = Some(g);
            break;
        }
    }
    Ok(result)
}
