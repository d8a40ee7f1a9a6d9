use proptest::prelude::*;

use vinoslice_core::algebra::{MultiPoly, VarOrder};
use vinoslice_core::classification::root_bound_check;
use vinoslice_core::counting::{
    brute_force_oracle, count_aux, count_lifted, count_sliced, count_vmvt, CountConfig, CountParams, PowerKey,
};
use vinoslice_core::identities::{shift_direct, shift_poly_coeffs, theta_factor, vandermonde};
use vinoslice_core::systems::{omega, validate_tuple, UniPoly, WellConditionedTuple};
use vinoslice_core::BigInt;

fn cfg() -> CountConfig {
    CountConfig::default()
}

fn poly_in(vars: VarOrder, max_deg: u32, max_terms: usize) -> impl Strategy<Value = MultiPoly> {
    let n = vars.len();
    prop::collection::vec((prop::collection::vec(0..=max_deg, n), -9i64..=9), 0..=max_terms).prop_map(move |terms| {
        MultiPoly::from_terms(&vars, terms.into_iter().map(|(e, c)| (e, BigInt::from(c)))).unwrap()
    })
}

fn three_vars() -> VarOrder {
    VarOrder::new(["a", "b", "c"])
}

/// Tuples with strictly decreasing degrees and a nonzero top coefficient.
fn tuple_strategy(max_len: usize) -> impl Strategy<Value = WellConditionedTuple> {
    prop::collection::btree_set(0u32..6, 1..=max_len)
        .prop_flat_map(|degs| {
            let degs: Vec<u32> = degs.into_iter().rev().collect();
            let polys: Vec<_> = degs
                .iter()
                .map(|&d| (prop::collection::vec(-4i64..=4, d as usize), prop_oneof![-3i64..=-1, 1i64..=3]))
                .collect();
            polys
        })
        .prop_filter_map("common positive root", |rows| {
            let polys = rows
                .into_iter()
                .map(|(mut low, top)| {
                    low.push(top);
                    UniPoly::from_i64s(&low)
                })
                .collect();
            validate_tuple(polys).ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mitm_matches_oracle_sliced(s in 1u32..=2, k in 2u32..=4, r_off in 0u32..3, x in 1u64..=6) {
        let r = 1 + r_off % (k - 1);
        let fast = count_sliced(s, k, r, x, &cfg()).unwrap().count;
        let slow = brute_force_oracle(&CountParams::Sliced { s, k, r, x }, &cfg()).unwrap().count;
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn mitm_matches_oracle_aux(f in tuple_strategy(3), s in 1u32..=2, r in 1u32..=2, x in 1u64..=4, h in 1u64..=3) {
        let fast = count_aux(&f, s, r, x, Some(h), &cfg()).unwrap().count;
        let slow = brute_force_oracle(&CountParams::Aux { f, s, r, x, h }, &cfg()).unwrap().count;
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn mitm_matches_oracle_vmvt(sigma in 1u32..=2, d in 1u32..=4, x in 1u64..=6) {
        let fast = count_vmvt(sigma, d, x, &cfg()).unwrap().count;
        let slow = brute_force_oracle(&CountParams::Vmvt { sigma, d, x }, &cfg()).unwrap().count;
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn mitm_matches_oracle_lifted(k in 2u32..=3, r_off in 0u32..2, x in 1u64..=3, h in 0u64..=3) {
        let r = 1 + r_off % (k - 1);
        let fast = count_lifted(1, k, r, x, Some(h), &cfg()).unwrap().count;
        let slow = brute_force_oracle(&CountParams::Lifted { s: 1, k, r, x, h }, &cfg()).unwrap().count;
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn lifted_dominates_sliced(s in 1u32..=2, k in 2u32..=4, r_off in 0u32..3, x in 1u64..=4) {
        let r = 1 + r_off % (k - 1);
        let i = count_sliced(s, k, r, x, &cfg()).unwrap().count;
        let n = count_lifted(s, k, r, x, None, &cfg()).unwrap().count;
        prop_assert!(BigInt::from(x) * i <= n);
    }

    #[test]
    fn counts_grow_with_box(s in 1u32..=2, k in 2u32..=4, r_off in 0u32..3, x in 1u64..=8) {
        let r = 1 + r_off % (k - 1);
        let a = count_sliced(s, k, r, x, &cfg()).unwrap().count;
        let b = count_sliced(s, k, r, x + 1, &cfg()).unwrap().count;
        prop_assert!(a <= b);
        // diagonal solutions alone give at least X^s
        prop_assert!(a >= BigInt::from(x).pow(s));
    }

    #[test]
    fn aux_grows_with_height(f in tuple_strategy(3), x in 1u64..=4, h in 1u64..=4) {
        let a = count_aux(&f, 1, 1, x, Some(h), &cfg()).unwrap().count;
        let b = count_aux(&f, 1, 1, x, Some(h + 1), &cfg()).unwrap().count;
        prop_assert!(a <= b);
    }

    #[test]
    fn evaluation_is_a_ring_map(
        p in poly_in(three_vars(), 3, 5),
        q in poly_in(three_vars(), 3, 5),
        pt in prop::collection::vec(-20i64..=20, 3),
    ) {
        let (pp, qq) = (p.eval_i64(&pt).unwrap(), q.eval_i64(&pt).unwrap());
        prop_assert_eq!((&p * &q).eval_i64(&pt).unwrap(), &pp * &qq);
        prop_assert_eq!((&p + &q).eval_i64(&pt).unwrap(), &pp + &qq);
        prop_assert_eq!((&p - &q).eval_i64(&pt).unwrap(), pp - qq);
    }

    #[test]
    fn multiplication_commutes(p in poly_in(three_vars(), 3, 5), q in poly_in(three_vars(), 3, 5)) {
        prop_assert_eq!(&p * &q, &q * &p);
    }

    #[test]
    fn exact_division_round_trip(p in poly_in(three_vars(), 3, 5), q in poly_in(three_vars(), 2, 4)) {
        prop_assume!(!q.is_zero());
        prop_assert_eq!((&p * &q).divide_exact(&q).unwrap(), p);
    }

    #[test]
    fn text_round_trip(p in poly_in(three_vars(), 4, 6)) {
        prop_assert_eq!(MultiPoly::parse(&p.to_string(), &three_vars()).unwrap(), p);
    }

    #[test]
    fn omega_satisfies_pascal(j in 1u32..40, r in 1u32..40) {
        prop_assert_eq!(omega(j, r), omega(j - 1, r) + omega(j - 1, r - 1));
    }

    #[test]
    fn power_key_round_trip(v in prop::collection::vec(any::<i128>(), 0..6)) {
        let k = PowerKey(v.into_iter().map(BigInt::from).collect());
        prop_assert_eq!(PowerKey::decode(&k.encode().unwrap()), Some(k));
    }

    #[test]
    fn theta_recombines(f in tuple_strategy(4)) {
        let m = f.t();
        let th = theta_factor(&f, m).unwrap();
        let idx: Vec<usize> = (0..m).collect();
        prop_assert_eq!(&th.theta * &vandermonde(th.theta.vars(), &idx), th.determinant);
    }

    #[test]
    fn shift_formula_matches_direct(
        c in prop::collection::vec(-5i64..=5, 2..=6),
        pairs in prop::collection::btree_map(-6i64..=6, -4i64..=4, 1..=3),
    ) {
        let f = UniPoly::from_i64s(&c);
        let deg = f.degree().unwrap_or(0);
        prop_assume!(pairs.len() <= deg && pairs.values().any(|&h| h != 0));
        let a: Vec<BigInt> = pairs.keys().map(|&v| BigInt::from(v)).collect();
        let h: Vec<BigInt> = pairs.values().map(|&v| BigInt::from(v)).collect();
        let g = shift_poly_coeffs(&f, &h, &a).unwrap();
        prop_assert_eq!(&g, &shift_direct(&f, &h, &a));
        prop_assert!(g.degree().unwrap_or(0) >= 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn bivariate_root_bound(p in poly_in(VarOrder::new(["z", "h"]), 4, 6), x in 1u64..=20, r in 1u32..=2) {
        prop_assume!(!p.is_zero() && p.total_degree().unwrap_or(0) <= 4);
        let c = root_bound_check(&p, x, r).unwrap();
        prop_assert!(c.ok, "{} at X={} r={}: {} > {}", p, x, r, c.count, c.bound);
    }
}
