use proptest::prelude::*;

use sdmds::census::Census;
use sdmds::constructions::{closed_form_locator, code_length, valid_params};
use sdmds::grs::locator;
use sdmds::verify::self_dual_matrix;
use sdmds::{check_self_dual, construct, make_field, FieldCtx, FieldElement};

const FIELDS: [(u64, u32); 9] = [
    (3, 1),
    (7, 1),
    (3, 2),
    (5, 2),
    (7, 2),
    (3, 3),
    (3, 4),
    (11, 2),
    (13, 2),
];

fn field() -> impl Strategy<Value = FieldCtx> {
    proptest::sample::select(&FIELDS[..]).prop_map(|(p, d)| make_field(p, d).unwrap())
}

fn field_and_elements() -> impl Strategy<Value = (FieldCtx, u64, u64, u64)> {
    field().prop_flat_map(|ctx| {
        let q = ctx.order();
        (Just(ctx), 0..q, 0..q, 0..q)
    })
}

proptest! {
    #[test]
    fn ring_axioms((ctx, a, b, c) in field_and_elements()) {
        let [a, b, c] = [a, b, c].map(|v| ctx.element(v).unwrap());
        prop_assert_eq!(ctx.mul(a, ctx.add(b, c)), ctx.add(ctx.mul(a, b), ctx.mul(a, c)));
        prop_assert_eq!(ctx.mul(ctx.mul(a, b), c), ctx.mul(a, ctx.mul(b, c)));
        prop_assert_eq!(ctx.add(ctx.sub(a, b), b), a);
        if !a.is_zero() {
            prop_assert_eq!(ctx.mul(a, ctx.inv(a).unwrap()), FieldElement::ONE);
        }
    }

    #[test]
    fn quadratic_character_is_multiplicative((ctx, a, b, _) in field_and_elements()) {
        prop_assume!(a != 0 && b != 0);
        let [a, b] = [a, b].map(|v| ctx.element(v).unwrap());
        let lhs = ctx.quadratic_character(ctx.mul(a, b));
        prop_assert_eq!(lhs, ctx.quadratic_character(a) * ctx.quadratic_character(b));
    }

    #[test]
    fn sqrt_round_trips((ctx, a, _, _) in field_and_elements()) {
        let a = ctx.element(a).unwrap();
        let sq = ctx.mul(a, a);
        let r = ctx.sqrt(sq).unwrap();
        prop_assert_eq!(ctx.mul(r, r), sq);
        if !a.is_zero() && !ctx.is_square(a) {
            prop_assert!(ctx.sqrt(a).is_err());
        }
    }

    #[test]
    fn element_orders_divide_group_order((ctx, a, _, _) in field_and_elements()) {
        prop_assume!(a != 0);
        let a = ctx.element(a).unwrap();
        let ord = ctx.element_order(a).unwrap();
        prop_assert_eq!((ctx.order() - 1) % ord, 0);
        prop_assert_eq!(ctx.pow_u(a, ord), FieldElement::ONE);
        prop_assert_eq!(ctx.element_order(ctx.generator()).unwrap(), ctx.order() - 1);
    }

    /// Negating any set of columns keeps G G^T = 0.
    #[test]
    fn column_sign_flips_keep_self_duality(idx in 0usize..64, mask in any::<u64>()) {
        let (p, d) = (7, 2);
        let ctx = make_field(p, d).unwrap();
        let all = valid_params(p, d, 50);
        let params = &all[idx % all.len()];
        let (art, _) = construct(&ctx, params).unwrap();
        let mut g = art.generator().clone();
        for c in (0..g.cols()).filter(|c| mask >> (c % 64) & 1 == 1) {
            for r in 0..g.rows() {
                g.set(r, c, ctx.neg(g.get(r, c)));
            }
        }
        prop_assert!(self_dual_matrix(&ctx, &g).unwrap());
    }

    #[test]
    fn constructions_are_self_dual_and_deterministic(fi in 0usize..FIELDS.len(), idx in any::<usize>()) {
        let (p, d) = FIELDS[fi];
        let ctx = make_field(p, d).unwrap();
        let all = valid_params(p, d, 60);
        prop_assume!(!all.is_empty());
        let params = &all[idx % all.len()];
        let (art, trace) = construct(&ctx, params).unwrap();
        prop_assert_eq!(art.length() as u64, code_length(params, p, d).unwrap());
        prop_assert!(check_self_dual(&art).unwrap());
        for i in 0..art.eval_vector().points().len() {
            prop_assert_eq!(
                closed_form_locator(&ctx, params, &trace, i).unwrap(),
                locator(&ctx, art.eval_vector(), i).unwrap()
            );
        }
        let (again, trace2) = construct(&ctx, params).unwrap();
        prop_assert_eq!(art.generator(), again.generator());
        prop_assert_eq!(trace, trace2);
    }

    #[test]
    fn census_lengths_are_even_and_bounded(fi in 0usize..FIELDS.len()) {
        let (p, d) = FIELDS[fi];
        let q = p.pow(d);
        let c = Census::new(q).unwrap();
        for n in c.union() {
            prop_assert!(n % 2 == 0 && n >= 2 && n <= q + 1, "q={} n={}", q, n);
        }
        for n in c.beyond_ceiling(None) {
            prop_assert!(n > q + 1);
        }
    }
}
