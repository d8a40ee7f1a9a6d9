use vinoslice_core::counting::{
    aux_solutions, brute_force_oracle, count_aux, count_lifted, count_sliced, count_vmvt, rep_power_sums, CountConfig,
    CountParams, Method, PowerKey,
};
use vinoslice_core::systems::{monomial_tuple, validate_tuple, UniPoly};
use vinoslice_core::{BigInt, Error};

fn cfg() -> CountConfig {
    CountConfig::default()
}

fn oracle(p: CountParams) -> BigInt {
    brute_force_oracle(&p, &cfg()).unwrap().count
}

#[test]
fn representation_maps() {
    let m = rep_power_sums(1, 2, 1, 3, &cfg()).unwrap();
    let got: Vec<(Vec<BigInt>, BigInt)> = m.iter().map(|(k, c)| (k.0.clone(), c.clone())).collect();
    let want: Vec<(Vec<BigInt>, BigInt)> =
        [(1, 1), (4, 1), (9, 1)].iter().map(|&(k, c)| (vec![BigInt::from(k)], BigInt::from(c))).collect();
    assert_eq!(got, want);

    let m = rep_power_sums(2, 3, 1, 2, &cfg()).unwrap();
    assert_eq!(m.len(), 3);
    assert_eq!(m.get(&[2, 2]), BigInt::from(1));
    assert_eq!(m.get(&[5, 9]), BigInt::from(2));
    assert_eq!(m.get(&[8, 16]), BigInt::from(1));

    let m = rep_power_sums(1, 3, 2, 2, &cfg()).unwrap();
    assert_eq!(m.get(&[1, 1]), BigInt::from(1));
    assert_eq!(m.get(&[2, 8]), BigInt::from(1));
}

#[test]
fn rep_map_mass_and_squares() {
    let m = rep_power_sums(3, 3, 2, 5, &cfg()).unwrap();
    assert_eq!(m.total_mass(), BigInt::from(125));
    assert_eq!(m.sum_of_squares(), count_sliced(3, 3, 2, 5, &cfg()).unwrap().count);
    assert!(m.iter().all(|(_, c)| *c >= BigInt::from(1)));
}

#[test]
fn power_key_bytes() {
    let k = PowerKey(vec![BigInt::from(-1), BigInt::from(300)]);
    let bytes = k.encode().unwrap();
    assert_eq!(&bytes[..4], &2u32.to_le_bytes());
    assert_eq!(&bytes[4..20], &(-1i128).to_le_bytes());
    assert_eq!(PowerKey::decode(&bytes).unwrap(), k);
    assert_eq!(PowerKey::decode(&bytes[..10]), None);
}

#[test]
fn sliced_counts() {
    assert_eq!(count_sliced(1, 2, 1, 10, &cfg()).unwrap().count, BigInt::from(10));
    assert_eq!(count_sliced(1, 3, 2, 7, &cfg()).unwrap().count, BigInt::from(7));
    let r = count_sliced(2, 3, 1, 5, &cfg()).unwrap();
    assert_eq!(r.count, oracle(CountParams::Sliced { s: 2, k: 3, r: 1, x: 5 }));
    assert_eq!(r.count, BigInt::from(2 * 25 - 5));
    assert_eq!(r.method, Method::Mitm);
    assert_eq!(r.params.experiment(), "count-i");
}

#[test]
fn aux_counts() {
    let one = validate_tuple(vec![UniPoly::from_i64s(&[1])]).unwrap();
    assert_eq!(count_aux(&one, 1, 1, 3, Some(3), &cfg()).unwrap().count, BigInt::from(63));
    let lin = monomial_tuple(2, 1).unwrap();
    // X^2 + 2HX at X = H = 3
    assert_eq!(count_aux(&lin, 1, 1, 3, Some(3), &cfg()).unwrap().count, BigInt::from(27));
    let quad = monomial_tuple(3, 1).unwrap();
    let fast = count_aux(&quad, 2, 1, 2, Some(2), &cfg()).unwrap().count;
    let listed = aux_solutions(&quad, 4, 2, 2, &cfg()).unwrap().len();
    assert_eq!(fast, BigInt::from(listed));
    assert_eq!(fast, oracle(CountParams::Aux { f: quad, s: 2, r: 1, x: 2, h: 2 }));
}

#[test]
fn aux_default_h_is_x_to_the_r() {
    let f = monomial_tuple(3, 2).unwrap();
    let r = count_aux(&f, 1, 2, 3, None, &cfg()).unwrap();
    assert_eq!(r.params, CountParams::Aux { f: f.clone(), s: 1, r: 2, x: 3, h: 9 });
}

#[test]
fn vmvt_counts() {
    for d in 1..=5 {
        assert_eq!(count_vmvt(1, d, 6, &cfg()).unwrap().count, BigInt::from(6));
    }
    assert_eq!(count_vmvt(2, 1, 3, &cfg()).unwrap().count, BigInt::from(19));
    assert_eq!(oracle(CountParams::Vmvt { sigma: 2, d: 1, x: 3 }), BigInt::from(19));
    assert_eq!(count_vmvt(2, 2, 3, &cfg()).unwrap().count, BigInt::from(15));
}

#[test]
fn lifted_counts() {
    let r = count_lifted(1, 2, 1, 2, Some(2), &cfg()).unwrap();
    assert_eq!(r.count, BigInt::from(10));
    assert_eq!(r.count, oracle(CountParams::Lifted { s: 1, k: 2, r: 1, x: 2, h: 2 }));
    let n = count_lifted(1, 3, 1, 2, Some(2), &cfg()).unwrap().count;
    assert_eq!(n, oracle(CountParams::Lifted { s: 1, k: 3, r: 1, x: 2, h: 2 }));
    // u = v with h = 0 and z free
    for (s, x) in [(1u32, 3u64), (2, 3)] {
        let n = count_lifted(s, 3, 1, x, None, &cfg()).unwrap().count;
        assert!(n >= BigInt::from(x) * BigInt::from(2 * x).pow(s));
    }
}

#[test]
fn oracle_examples() {
    assert_eq!(oracle(CountParams::Sliced { s: 1, k: 2, r: 1, x: 10 }), BigInt::from(10));
    let one = validate_tuple(vec![UniPoly::from_i64s(&[1])]).unwrap();
    assert_eq!(oracle(CountParams::Aux { f: one, s: 1, r: 1, x: 3, h: 3 }), BigInt::from(63));
    let r = brute_force_oracle(&CountParams::Vmvt { sigma: 2, d: 1, x: 3 }, &cfg()).unwrap();
    assert_eq!(r.method, Method::Naive);
}

#[test]
fn errors() {
    let tight = CountConfig { oracle_ceiling: 10, ..cfg() };
    assert!(matches!(
        brute_force_oracle(&CountParams::Sliced { s: 2, k: 3, r: 1, x: 4 }, &tight),
        Err(Error::CeilingExceeded { size: 256, ceiling: 10 })
    ));
    let tiny = CountConfig { max_keys: 2, ..cfg() };
    assert_eq!(count_sliced(2, 3, 1, 10, &tiny).unwrap_err(), Error::CapacityExceeded { limit: 2 });
    assert!(count_sliced(1, 3, 3, 5, &cfg()).is_err());
    assert!(count_aux(&monomial_tuple(2, 1).unwrap(), 1, 1, 3, Some(0), &cfg()).is_err());
}

#[test]
fn diagonal_lower_bound() {
    // permutation pairs: s! X^s minus the overcount of repeated entries
    let perms = |s: u32, x: u64| -> BigInt {
        let mut total = BigInt::from(0);
        let n = (x as usize).pow(s);
        for i in 0..n {
            let mut a: Vec<u64> = (0..s).map(|d| (i / (x as usize).pow(d) % x as usize) as u64).collect();
            a.sort_unstable();
            for j in 0..n {
                let mut b: Vec<u64> = (0..s).map(|d| (j / (x as usize).pow(d) % x as usize) as u64).collect();
                b.sort_unstable();
                if a == b {
                    total += 1;
                }
            }
        }
        total
    };
    for (s, k, r, x) in [(2, 3, 1, 6), (3, 4, 2, 4), (2, 4, 3, 7), (3, 3, 1, 5)] {
        assert!(count_sliced(s, k, r, x, &cfg()).unwrap().count >= perms(s, x));
    }
}

#[test]
fn monotone_in_x_and_h() {
    let f = monomial_tuple(3, 1).unwrap();
    let mut last = BigInt::from(0);
    for x in 1..=6 {
        let c = count_sliced(2, 3, 2, x, &cfg()).unwrap().count;
        assert!(c >= last);
        last = c;
    }
    let mut last = BigInt::from(0);
    for h in 1..=6 {
        let c = count_aux(&f, 2, 1, 4, Some(h), &cfg()).unwrap().count;
        assert!(c >= last);
        last = c;
    }
}

#[test]
fn shifted_system_dominates() {
    for (s, k, r) in [(1, 2, 1), (1, 3, 1), (2, 3, 1), (2, 3, 2), (2, 4, 2)] {
        for x in [2, 3, 5] {
            let i = count_sliced(s, k, r, x, &cfg()).unwrap().count;
            let n = count_lifted(s, k, r, x, None, &cfg()).unwrap().count;
            assert!(BigInt::from(x) * i <= n, "s={s} k={k} r={r} X={x}");
        }
    }
}
