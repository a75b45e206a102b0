mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use planar3::Semifield;

use common::*;

#[test]
fn nuclei_sets_nest_and_close() {
    for (id, f) in planar_do_reps(6) {
        assert!(nuclei_sets_consistent(&f), "{id}");
    }
}

#[test]
fn coset_count_of_degree_eight_dickson() {
    let f = parse(8, "x^1458 + 2*x^738 + x^82 + x^2");
    let s = Semifield::from_planar(&f).unwrap();
    let nu = s.nuclei();
    assert_eq!((nu.nucleus_order(), nu.middle_order()), (9, 81));
    assert_eq!(s.nm_structure(&nu).coset_reps.len(), 9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn nuclei_orders_survive_linear_transforms(k in 0usize..200, seed in any::<u64>()) {
        let reps = planar_do_reps(6);
        let (id, f) = &reps[k % reps.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        prop_assert!(nuclei_invariant(f, &mut rng), "{}", id);
    }

    #[test]
    fn nuclei_sets_of_transformed_functions(k in 0usize..200, seed in any::<u64>()) {
        let reps = planar_do_reps(5);
        let (id, f) = &reps[k % reps.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        prop_assert!(nuclei_sets_consistent(&random_transform(f, &mut rng)), "{}", id);
    }

    #[test]
    fn unitalized_product_is_commutative_with_unit(k in 0usize..200, x in any::<u32>(), y in any::<u32>()) {
        let reps = planar_do_reps(6);
        let (id, f) = &reps[k % reps.len()];
        let s = Semifield::from_planar(f).unwrap();
        let q = f.ctx().q();
        let (x, y) = (planar3::Fe(x % q), planar3::Fe(y % q));
        prop_assert_eq!(s.product(x, y), s.product(y, x), "{}", id);
        prop_assert_eq!(s.product(s.unit(), x), x, "{}", id);
    }
}
