mod common;

use planar3::Fe;
use proptest::prelude::*;

use common::field;

#[test]
fn unit_group_order_small_fields() {
    for n in 1..=6 {
        let ctx = field(n);
        let order = (ctx.q() - 1) as u64;
        assert!(ctx.nonzero().all(|x| ctx.pow(x, order) == Fe::ONE), "n = {n}");
    }
}

#[test]
fn squares_are_half_the_units() {
    for n in 1..=8 {
        let ctx = field(n);
        let squares = ctx.nonzero().filter(|&x| ctx.is_square(x)).count();
        assert_eq!(squares as u32, (ctx.q() - 1) / 2, "n = {n}");
    }
}

#[test]
fn frobenius_is_an_automorphism() {
    for n in 1..=5 {
        let ctx = field(n);
        for i in 0..n {
            for x in ctx.elements() {
                for y in ctx.elements() {
                    let (fx, fy) = (ctx.frobenius(x, i), ctx.frobenius(y, i));
                    assert_eq!(ctx.frobenius(ctx.mul(x, y), i), ctx.mul(fx, fy));
                    assert_eq!(ctx.frobenius(ctx.add(x, y), i), ctx.add(fx, fy));
                }
            }
        }
    }
}

#[test]
fn trace_is_transitive() {
    for n in 1..=8 {
        let ctx = field(n);
        for k in (1..=n).filter(|k| n % k == 0) {
            for x in ctx.elements().step_by(1 + ctx.q() as usize / 500) {
                let t = ctx.trace(x, k).unwrap();
                assert!(ctx.in_subfield(t, k));
                // absolute trace of t taken inside GF(3^k)
                let inner = (0..k).fold(Fe::ZERO, |acc, j| ctx.add(acc, ctx.frobenius(t, j)));
                assert_eq!(inner, ctx.trace(x, 1).unwrap(), "n = {n}, k = {k}");
            }
        }
    }
}

proptest! {
    #[test]
    fn unit_group_order_large_fields(n in 7usize..=12, seed in any::<u32>()) {
        let ctx = field(n);
        let x = Fe(1 + seed % (ctx.q() - 1));
        prop_assert_eq!(ctx.pow(x, (ctx.q() - 1) as u64), Fe::ONE);
    }

    #[test]
    fn inverse_and_log(n in 1usize..=12, seed in any::<u32>()) {
        let ctx = field(n);
        let x = Fe(1 + seed % (ctx.q() - 1));
        prop_assert_eq!(ctx.mul(x, ctx.inv(x).unwrap()), Fe::ONE);
        prop_assert_eq!(ctx.gen_pow(ctx.log(x).unwrap() as u64), x);
    }
}
