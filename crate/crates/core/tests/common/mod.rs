#![allow(dead_code)]

use std::sync::Arc;

use planar3::equivalence::LinearMap;
use planar3::{make_field, Fe, FieldCtx, PlanarFn};
use rand::Rng;

pub fn field(n: usize) -> Arc<FieldCtx> {
    make_field(n).unwrap()
}

pub fn parse(n: usize, text: &str) -> PlanarFn {
    PlanarFn::parse(field(n), text).unwrap()
}

pub fn random_linear_map(ctx: &FieldCtx, rng: &mut impl Rng) -> LinearMap {
    loop {
        let images = (0..ctx.n()).map(|_| Fe(rng.gen_range(0..ctx.q()))).collect();
        let m = LinearMap::from_images(ctx, images);
        if m.is_permutation(ctx) {
            return m;
        }
    }
}

fn digits(x: u32, n: usize) -> Vec<u8> {
    let mut x = x;
    (0..n)
        .map(|_| {
            let d = (x % 3) as u8;
            x /= 3;
            d
        })
        .collect()
}

fn combine(ctx: &FieldCtx, coords: &[u8], vecs: &[Fe]) -> Fe {
    coords
        .iter()
        .zip(vecs)
        .fold(Fe::ZERO, |acc, (&c, &v)| ctx.add(acc, ctx.scale(v, c)))
}

/// Span of `vecs` as a membership table over all codes.
fn span_mask(ctx: &FieldCtx, vecs: &[Fe]) -> Vec<bool> {
    let mut mask = vec![false; ctx.q() as usize];
    for c in 0..3u32.pow(vecs.len() as u32) {
        mask[combine(ctx, &digits(c, vecs.len()), vecs).idx()] = true;
    }
    mask
}

fn independent(ctx: &FieldCtx, vecs: &[Fe]) -> bool {
    span_mask(ctx, vecs).iter().filter(|&&b| b).count() == 3usize.pow(vecs.len() as u32)
}

/// Brute force over GL(n, 3) for `L2`: is there an invertible linear `L1`
/// with `L1 ∘ F = G ∘ L2`? Only practical for n ≤ 4.
pub fn brute_force_equivalent(f: &PlanarFn, g: &PlanarFn) -> bool {
    let ctx = f.ctx().clone();
    let n = ctx.n();
    assert!(n <= 4);
    let (ft, gt) = (f.table().to_vec(), g.table().to_vec());

    // inputs whose F-values form a basis; every F(x) in those coordinates
    let mut xs = Vec::new();
    let mut fx = Vec::new();
    for x in ctx.nonzero() {
        let mut trial = fx.clone();
        trial.push(ft[x.idx()]);
        if independent(&ctx, &trial) {
            xs.push(x);
            fx = trial;
        }
        if xs.len() == n {
            break;
        }
    }
    assert_eq!(xs.len(), n, "F values span the field");
    let mut coords = vec![Vec::new(); ctx.q() as usize];
    for c in 0..ctx.q() {
        let d = digits(c, n);
        let v = combine(&ctx, &d, &fx);
        coords[v.idx()] = d;
    }
    let input_digits: Vec<Vec<u8>> = (0..ctx.q()).map(|x| digits(x, n)).collect();

    let mut images = Vec::with_capacity(n);
    rec(&ctx, &ft, &gt, &xs, &coords, &input_digits, &mut images)
}

fn rec(
    ctx: &FieldCtx,
    ft: &[Fe],
    gt: &[Fe],
    xs: &[Fe],
    coords: &[Vec<u8>],
    input_digits: &[Vec<u8>],
    images: &mut Vec<Fe>,
) -> bool {
    let n = ctx.n();
    if images.len() < n {
        let mask = span_mask(ctx, images);
        for b in ctx.nonzero() {
            if mask[b.idx()] {
                continue;
            }
            images.push(b);
            let found = rec(ctx, ft, gt, xs, coords, input_digits, images);
            images.pop();
            if found {
                return true;
            }
        }
        return false;
    }
    let l2 = |x: Fe| combine(ctx, &input_digits[x.idx()], images);
    let ys: Vec<Fe> = xs.iter().map(|&x| gt[l2(x).idx()]).collect();
    ctx.nonzero()
        .all(|x| combine(ctx, &coords[ft[x.idx()].idx()], &ys) == gt[l2(x).idx()])
        && independent(ctx, &ys)
}

/// Planar DO representatives from the bundled tables up to degree `max_n`.
pub fn planar_do_reps(max_n: usize) -> Vec<(String, PlanarFn)> {
    planar3::fixtures::degrees()
        .filter(|&n| n <= max_n)
        .flat_map(|n| planar3::fixtures::table(n).unwrap().records)
        .filter(|r| r.representative.is_do() && r.representative.is_planar().unwrap())
        .map(|r| (r.id, r.representative))
        .collect()
}

/// A random DO polynomial with up to `max_terms` terms.
pub fn random_do(n: usize, max_terms: usize, rng: &mut impl Rng) -> PlanarFn {
    let ctx = field(n);
    let mut exps: Vec<u64> = Vec::new();
    for j in 0..n {
        for i in 0..=j {
            exps.push(3u64.pow(j as u32) + 3u64.pow(i as u32));
        }
    }
    let k = rng.gen_range(1..=max_terms.min(exps.len()));
    let mut terms = Vec::new();
    while terms.len() < k {
        let exp = exps[rng.gen_range(0..exps.len())];
        if terms.iter().all(|t: &planar3::Term| t.exp != exp) {
            let coeff = Fe(rng.gen_range(1..ctx.q()));
            terms.push(planar3::Term { coeff, exp });
        }
    }
    PlanarFn::new(ctx, terms).unwrap()
}

pub fn random_transform(f: &PlanarFn, rng: &mut impl Rng) -> PlanarFn {
    let ctx = f.ctx();
    let l1 = random_linear_map(ctx, rng);
    let l2 = random_linear_map(ctx, rng);
    planar3::equivalence::transform(f, &l1, &l2)
}

pub fn planarity_invariant(f: &PlanarFn, rng: &mut impl Rng) -> bool {
    f.is_planar().unwrap() == random_transform(f, rng).is_planar().unwrap()
}

pub fn rank_test_agrees(f: &PlanarFn) -> bool {
    f.is_planar_do().unwrap() == f.is_planar_general()
}

pub fn nuclei_invariant(f: &PlanarFn, rng: &mut impl Rng) -> bool {
    let g = random_transform(f, rng);
    planar3::semifield::nuclei_orders(f).unwrap() == planar3::semifield::nuclei_orders(&g).unwrap()
}

pub fn orbits_invariant(f: &PlanarFn, rng: &mut impl Rng) -> bool {
    use planar3::equivalence::orbits::right_orbits;
    let g = random_transform(f, rng);
    right_orbits(f).unwrap().multiset == right_orbits(&g).unwrap().multiset
}

/// `N ⊆ N_m`, both closed under + and the semifield product and holding the
/// unit, and `N_m \ N` splits into `N^*`-cosets of size `|N| - 1`.
pub fn nuclei_sets_consistent(f: &PlanarFn) -> bool {
    let s = planar3::Semifield::from_planar(f).unwrap();
    let ctx = s.ctx().clone();
    let nu = s.nuclei();
    let closed = |set: &[Fe]| {
        set.contains(&s.unit())
            && set.len() as u64 == 3u64.pow(set.len().ilog(3))
            && set.iter().all(|&x| {
                set.iter()
                    .all(|&y| set.binary_search(&ctx.add(x, y)).is_ok() && set.binary_search(&s.product(x, y)).is_ok())
            })
    };
    let nested = nu.nucleus_set.iter().all(|x| nu.middle_set.binary_search(x).is_ok());
    let st = s.nm_structure(&nu);
    let (a, b) = (nu.nucleus_order(), nu.middle_order());
    nested
        && closed(&nu.nucleus_set)
        && closed(&nu.middle_set)
        && nu.nucleus_set.len() as u64 == a
        && nu.middle_set.len() as u64 == b
        && st.coset_reps.len() as u64 * (a - 1) == b - a
}
