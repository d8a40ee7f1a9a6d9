//! End-to-end acceptance checks. Prints one line per criterion and fails
//! the target if any criterion fails.

use std::collections::BTreeMap;
use std::process::{Command as Proc, ExitCode};
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use vinoslice::args::{Command, Format, Grid, TupleSource};
use vinoslice::config::Settings;
use vinoslice::execute;
use vinoslice::fit::fit_exponent;
use vinoslice::report::Entry;
use vinoslice_core::algebra::{MultiPoly, VarOrder};
use vinoslice_core::classification::{root_bound_check, Classifier};
use vinoslice_core::counting::{
    aux_solutions, brute_force_oracle, count_aux, count_lifted, count_sliced, count_vmvt, CountConfig, CountReport,
};
use vinoslice_core::identities::{
    builtin_identities_check, check_nonvanishing, check_vanishing, default_degree_cap, det_block, extract_phi,
    find_psi, psi_expansion, recombine_phi, theta_factor, vandermonde, PsiOptions,
};
use vinoslice_core::systems::{monomial_tuple, validate_tuple, UniPoly, WellConditionedTuple};
use vinoslice_core::BigInt;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn oracle_cfg() -> CountConfig {
    CountConfig { oracle_ceiling: 1_000_000_000, ..CountConfig::default() }
}

fn agree(fast: CountReport, cfg: &CountConfig) -> Result<(), String> {
    let slow = brute_force_oracle(&fast.params, cfg).map_err(err)?;
    ensure(fast.count == slow.count, || format!("{:?}: tables {} vs oracle {}", fast.params, fast.count, slow.count))
}

fn oracle_equivalence() -> Outcome {
    let cfg = oracle_cfg();
    let mut checked = 0;
    for s in 1..=2u32 {
        for k in 2..=4u32 {
            for r in 1..k {
                let f = monomial_tuple(k, r).map_err(err)?;
                for x in 1..=12u64 {
                    agree(count_sliced(s, k, r, x, &cfg).map_err(err)?, &cfg)?;
                    agree(count_aux(&f, s, r, x, None, &cfg).map_err(err)?, &cfg)?;
                    agree(count_lifted(s, k, r, x, None, &cfg).map_err(err)?, &cfg)?;
                    checked += 3;
                }
            }
        }
    }
    for sigma in 1..=2u32 {
        for d in 1..=4u32 {
            for x in 1..=12u64 {
                agree(count_vmvt(sigma, d, x, &cfg).map_err(err)?, &cfg)?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} grid points"))
}

fn identities() -> Outcome {
    let r = builtin_identities_check().map_err(err)?;
    ensure(r.quadratic_identity, || "quadratic identity does not expand to zero".into())?;
    ensure(r.sextic_vanishes, || "sextic does not vanish on two atoms".into())?;
    ensure(r.sextic_divisible, || "sextic not divisible by h1h2h3 times the squared Vandermonde".into())?;
    ensure(r.f63_bidegree == (6, 3), || format!("quotient bidegree {:?}", r.f63_bidegree))?;
    Ok(format!("F bidegree {:?}", r.f63_bidegree))
}

fn psi_pipeline() -> Outcome {
    let opts = PsiOptions::default();
    let quad = monomial_tuple(3, 1).map_err(err)?;
    let p1 = find_psi(&quad, 1, default_degree_cap(1), &opts).map_err(err)?;
    let want = MultiPoly::parse("w1*w3 - w2^2", &VarOrder::w(3)).map_err(err)?;
    ensure(p1.psi == want, || format!("level 1 relation {}", p1.psi))?;
    let phi = extract_phi(&p1, &quad).map_err(err)?;
    let want = MultiPoly::parse("z1 - z2", &VarOrder::zh(2)).map_err(err)?;
    ensure(phi.phi == want, || format!("level 1 cofactor {}", phi.phi))?;

    let quartic = monomial_tuple(5, 1).map_err(err)?;
    let p2 = find_psi(&quartic, 2, default_degree_cap(2), &opts).map_err(err)?;
    ensure(check_vanishing(&p2.psi, &quartic, 2).map_err(err)?, || "level 2 relation does not vanish".into())?;
    ensure(check_nonvanishing(&p2.psi, &quartic, 2).map_err(err)?, || "level 2 relation vanishes one level up".into())?;
    let phi2 = extract_phi(&p2, &quartic).map_err(err)?;
    let lhs = recombine_phi(&phi2).map_err(err)?;
    let rhs = psi_expansion(&p2.psi, &quartic, 3).map_err(err)?;
    ensure(lhs == rhs, || "cofactor does not recombine to the expansion".into())?;
    Ok(format!("level 2 relation of degree {}: {}", p2.total_degree, p2.psi))
}

fn slope_of(points: &[(u64, BigInt)]) -> Result<f64, String> {
    fit_exponent(points).map(|f| f.slope).map_err(err)
}

fn aux_growth_and_lift() -> Outcome {
    let cfg = CountConfig::default();
    let grid = [8u64, 12, 16, 24, 32];
    let f = monomial_tuple(3, 1).map_err(err)?;
    let mut pts = Vec::new();
    for &x in &grid {
        pts.push((x, count_aux(&f, 2, 1, x, None, &cfg).map_err(err)?.count));
    }
    let slope = slope_of(&pts)?;
    ensure(slope <= 4.5, || format!("aux slope {slope:.3} > 4.5"))?;
    for (s, k, r) in [(1, 2, 1), (1, 3, 1), (2, 3, 1)] {
        for &x in &grid {
            let i = count_sliced(s, k, r, x, &cfg).map_err(err)?.count;
            let n = count_lifted(s, k, r, x, None, &cfg).map_err(err)?.count;
            ensure(BigInt::from(x) * &i < n, || format!("(s,k,r)=({s},{k},{r}) X={x}: X*I={} N={n}", x * i.clone()))?;
        }
    }
    Ok(format!("aux slope {slope:.3}; lift strict at 15 points"))
}

fn diagonal_slopes() -> Outcome {
    let cfg = CountConfig::default();
    let mut out = Vec::new();
    for s in 1..=4u32 {
        let mut pts = Vec::new();
        for x in [8u64, 12, 16, 24, 32, 40] {
            pts.push((x, count_sliced(s, 3, 1, x, &cfg).map_err(err)?.count));
        }
        let slope = slope_of(&pts)?;
        ensure(slope <= s as f64 + 0.5, || format!("s={s}: slope {slope:.3}"))?;
        out.push(format!("s={s}:{slope:.3}"));
    }
    Ok(out.join(" "))
}

fn classification_totality() -> Outcome {
    let cfg = CountConfig::default();
    let f = monomial_tuple(3, 1).map_err(err)?;
    let c = Classifier::new(&f, 2, &PsiOptions::default()).map_err(err)?;
    let sols = aux_solutions(&f, 4, 4, 4, &cfg).map_err(err)?;
    let total = count_aux(&f, 2, 1, 4, Some(4), &cfg).map_err(err)?.count;
    ensure(BigInt::from(sols.len()) == total, || format!("{} listed vs {total} counted", sols.len()))?;
    let mut seen = std::collections::HashSet::new();
    for s in &sols {
        ensure(seen.insert((s.z.clone(), s.h.clone())), || format!("duplicate solution {s:?}"))?;
    }
    let labels = c.classify_all(&sols).map_err(err)?;
    let mut hist: BTreeMap<String, u64> = BTreeMap::new();
    for (sol, l) in sols.iter().zip(&labels) {
        ensure(c.verify_witnesses(sol, l).map_err(err)?, || format!("witness fails for {sol:?} as {}", l.kind))?;
        *hist.entry(l.kind.to_string()).or_default() += 1;
    }
    ensure(labels.len() == sols.len(), || "not every solution labeled".into())?;
    ensure(hist.values().sum::<u64>() == sols.len() as u64, || "label classes do not sum to the total".into())?;
    Ok(format!("{} solutions {hist:?}", sols.len()))
}

fn root_bounds() -> Outcome {
    let mut rng = StdRng::seed_from_u64(41);
    let vars = VarOrder::new(["z", "h"]);
    let mut cases = 0;
    while cases < 100 {
        let terms: Vec<(Vec<u32>, BigInt)> = (0..rng.gen_range(1..=6))
            .map(|_| {
                let a = rng.gen_range(0..=4u32);
                let b = rng.gen_range(0..=4 - a);
                (vec![a, b], BigInt::from(rng.gen_range(-9i64..=9)))
            })
            .collect();
        let p = MultiPoly::from_terms(&vars, terms).map_err(err)?;
        if p.is_zero() {
            continue;
        }
        let x = rng.gen_range(1..=20u64);
        let r = rng.gen_range(1..=2u32);
        let c = root_bound_check(&p, x, r).map_err(err)?;
        ensure(c.ok, || format!("{p} at X={x} r={r}: {} > {}", c.count, c.bound))?;
        cases += 1;
    }
    Ok(format!("{cases} random polynomials"))
}

fn tuple(rows: &[&[i64]]) -> Result<WellConditionedTuple, String> {
    validate_tuple(rows.iter().map(|r| UniPoly::from_i64s(r)).collect()).map_err(err)
}

fn determinants() -> Outcome {
    let lin = tuple(&[&[-3, 2]])?;
    let d0 = det_block(&lin, 0).map_err(err)?;
    let f1 = MultiPoly::parse("2*z1 - 3", &VarOrder::zh(1)).map_err(err)?;
    ensure(d0.det == f1, || format!("D_0 determinant {}", d0.det))?;
    let quad = monomial_tuple(3, 1).map_err(err)?;
    let d1 = det_block(&quad, 1).map_err(err)?;
    let want = MultiPoly::parse("h1*z1^2 - 2*h1*z1*z2 + h1*z2^2", &VarOrder::zh(2)).map_err(err)?;
    ensure(d1.det == want, || format!("D_1 determinant {}", d1.det))?;

    let tuples = [
        monomial_tuple(5, 1).map_err(err)?,
        tuple(&[&[0, 1, 0, 0, 0, 1], &[0, 0, -2, 1], &[1, 0, 1], &[0, 1], &[1]])?,
        tuple(&[&[0, -1, 0, 0, 2], &[3, 0, 0, 1], &[0, -1, 1], &[2, 1], &[1]])?,
    ];
    let mut minors = 0;
    for f in &tuples {
        for n in 0..=2 {
            let d = det_block(f, n).map_err(err)?;
            if n > 0 {
                ensure(d.expansion() == d.det, || format!("expansion differs for {} at n={n}", f.describe()))?;
                minors += d.minors.len();
            }
        }
    }
    let mut thetas = 0;
    for k in 2..=5 {
        let f = monomial_tuple(k, 1).map_err(err)?;
        for m in 1..=f.t() {
            let th = theta_factor(&f, m).map_err(err)?;
            let idx: Vec<usize> = (0..m).collect();
            let back = &th.theta * &vandermonde(th.theta.vars(), &idx);
            ensure(back == th.determinant, || format!("theta does not recombine for {} m={m}", f.describe()))?;
            let least = th.min_abs_sample().unwrap_or_default();
            ensure(least >= BigInt::from(1), || format!("|theta| = {least} for {} m={m}", f.describe()))?;
            thetas += 1;
        }
    }
    Ok(format!("{minors} minors, {thetas} theta quotients"))
}

fn settings(threads: usize) -> Settings {
    Settings {
        threads: Some(threads),
        format: Format::Csv,
        out: None,
        seed: None,
        time_budget_s: None,
        max_keys: None,
        oracle_ceiling: None,
    }
}

fn grid(x: &[u64]) -> Grid {
    Grid { x: x.to_vec() }
}

fn monomial(k: u32, r: u32) -> TupleSource {
    TupleSource { tuple_file: None, k: Some(k), r: Some(r) }
}

fn strip_elapsed(mut entries: Vec<Entry>) -> Vec<Entry> {
    for e in &mut entries {
        if let Entry::Count(row) = e {
            row.elapsed_s = 0.0;
        }
    }
    entries
}

fn csv_without_elapsed(text: &str) -> String {
    text.lines().map(|l| l.rsplit_once(',').map_or(l, |(head, _)| head)).collect::<Vec<_>>().join("\n")
}

fn determinism() -> Outcome {
    let commands = [
        Command::CountI { s: 3, k: 3, r: 1, grid: grid(&[8, 12, 16, 24]), naive: false },
        Command::CountI { s: 2, k: 4, r: 2, grid: grid(&[4, 6]), naive: true },
        Command::CountA { s: 2, tuple: monomial(3, 1), grid: grid(&[8, 12, 16]), h: None, naive: false },
        Command::CountJ { sigma: 3, d: 3, grid: grid(&[6, 10]), naive: false },
        Command::CountLifted { s: 2, k: 3, r: 1, grid: grid(&[8, 12]), h: None, naive: false },
        Command::Classify { s: 2, tuple: monomial(3, 1), grid: grid(&[3, 4]), h: None },
    ];
    let wide = std::thread::available_parallelism().map_or(4, |n| n.get().max(4));
    for c in &commands {
        let one = strip_elapsed(execute(c, &settings(1)).map_err(err)?);
        let many = strip_elapsed(execute(c, &settings(wide)).map_err(err)?);
        ensure(one == many, || format!("{c:?} differs between 1 and {wide} threads"))?;
    }

    let bin = env!("CARGO_BIN_EXE_vinoslice");
    let runs: [&[&str]; 4] = [
        &["count-i", "--s", "3", "--k", "4", "--r", "2", "--X", "6,9,12"],
        &["count-a", "--s", "2", "--k", "3", "--r", "1", "--X", "6,10"],
        &["count-j", "--sigma", "2", "--d", "3", "--X", "8,16"],
        &["count-lifted", "--s", "1", "--k", "3", "--r", "2", "--X", "5,10"],
    ];
    for args in runs {
        let mut outs = Vec::new();
        for t in [1, wide] {
            let o = Proc::new(bin)
                .args(["--format", "csv", "--threads", &t.to_string()])
                .args(args)
                .output()
                .map_err(err)?;
            ensure(o.status.success(), || format!("{args:?} failed: {}", String::from_utf8_lossy(&o.stderr)))?;
            outs.push(csv_without_elapsed(&String::from_utf8_lossy(&o.stdout)));
        }
        ensure(outs[0] == outs[1], || format!("{args:?}: CSV differs between thread counts"))?;
    }
    Ok(format!("{} in-process runs, {} binary runs at 1 and {wide} threads", commands.len(), runs.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("oracle equivalence", oracle_equivalence),
        ("moment identities", identities),
        ("relation pipeline", psi_pipeline),
        ("auxiliary growth and lift inequality", aux_growth_and_lift),
        ("diagonal slopes", diagonal_slopes),
        ("classification totality", classification_totality),
        ("bivariate root bound", root_bounds),
        ("determinant suite", determinants),
        ("thread determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} {name} ... PASS ({secs:.1}s) {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} {name} ... FAIL ({secs:.1}s) {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
