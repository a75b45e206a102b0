mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

#[test]
fn rank_test_matches_derivatives_on_random_do() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in 2..=5 {
        let mut planar = 0;
        for _ in 0..200 {
            let f = random_do(n, 3, &mut rng);
            assert!(rank_test_agrees(&f), "{f} over n = {n}");
            planar += f.is_planar_do().unwrap() as usize;
        }
        assert!(planar > 0, "n = {n}");
    }
}

#[test]
fn rank_test_matches_derivatives_on_fixtures() {
    for (id, f) in planar_do_reps(6) {
        assert!(rank_test_agrees(&f), "{id}");
    }
}

#[test]
fn bilinear_form_exhaustive() {
    for (id, f) in planar_do_reps(4) {
        let ctx = f.ctx();
        let b = f.bilinear_slices().unwrap();
        for x in ctx.elements() {
            let tx = ctx.trits(x);
            for a in ctx.elements() {
                let ta = ctx.trits(a);
                assert_eq!(b.eval(tx, ta), b.eval(ta, tx), "{id}");
                let direct = ctx.sub(ctx.sub(f.eval(ctx.add(x, a)), f.eval(x)), f.eval(a));
                assert_eq!(ctx.from_trits(b.eval(tx, ta)), direct, "{id}");
                for y in ctx.elements().step_by(7) {
                    let ty = ctx.trits(y);
                    assert_eq!(b.eval(tx + ty, ta), b.eval(tx, ta) + b.eval(ty, ta), "{id}");
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn planarity_survives_linear_composition(k in 0usize..200, seed in any::<u64>()) {
        let reps = planar_do_reps(6);
        let (id, f) = &reps[k % reps.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        prop_assert!(planarity_invariant(f, &mut rng), "{}", id);
    }

    #[test]
    fn non_planarity_survives_linear_composition(n in 2usize..=5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_do(n, 3, &mut rng);
        prop_assert!(planarity_invariant(&f, &mut rng), "{}", f);
    }

    #[test]
    fn degree_survives_linear_composition(k in 0usize..200, seed in any::<u64>()) {
        let reps = planar_do_reps(6);
        let (id, f) = &reps[k % reps.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_transform(f, &mut rng);
        prop_assert_eq!(g.algebraic_degree().unwrap(), 2, "{}", id);
        prop_assert!(g.is_do());
    }

    #[test]
    fn bilinear_form_sampled(k in 0usize..200, x in any::<u32>(), y in any::<u32>(), a in any::<u32>()) {
        let reps = planar_do_reps(8);
        let (id, f) = &reps[k % reps.len()];
        let ctx = f.ctx();
        let [x, y, a] = [x, y, a].map(|v| ctx.trits(planar3::Fe(v % ctx.q())));
        let b = f.bilinear_slices().unwrap();
        prop_assert_eq!(b.eval(x, a), b.eval(a, x), "{}", id);
        prop_assert_eq!(b.eval(x + y, a), b.eval(x, a) + b.eval(y, a), "{}", id);
    }
}
