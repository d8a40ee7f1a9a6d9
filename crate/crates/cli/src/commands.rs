use std::collections::BTreeMap;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use num_bigint::BigInt;
use vinoslice_core::bounds::{bound_calculator, format_rational};
use vinoslice_core::classification::{Classifier, LabelKind};
use vinoslice_core::counting::{
    aux_solutions, brute_force_oracle, count_aux, count_lifted, count_sliced, count_vmvt, CountConfig, CountParams,
    CountReport,
};
use vinoslice_core::identities::{
    builtin_identities_check, check_nonvanishing, check_vanishing, default_degree_cap, det_block, extract_phi,
    find_psi, psi_expansion, recombine_phi, theta_factor, vandermonde, PsiOptions,
};
use vinoslice_core::systems::{monomial_tuple, parse_tuple_text, WellConditionedTuple};

use crate::args::{Cli, Command, Grid, TupleSource};
use crate::config::{resolve, Settings};
use crate::fit::fit_exponent;
use crate::report::{
    emit_report, read_count_csv, BoundsRow, ClassifyRow, CountRow, DetRow, Entry, FitRow, IdentitiesRow, PsiRow,
    ThetaRow,
};

pub const DEFAULT_GRID: [u64; 6] = [8, 12, 16, 24, 32, 48];

/// Resolves settings, runs the command on a dedicated thread pool and
/// writes the report.
pub fn run(cli: Cli) -> Result<()> {
    let settings = resolve(&cli.global)?;
    let entries = execute(&cli.command, &settings)?;
    let text = emit_report(&entries, settings.format)?;
    match &settings.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Runs one command and returns its results without serializing them.
pub fn execute(command: &Command, settings: &Settings) -> Result<Vec<Entry>> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = settings.threads {
        if n == 0 {
            bail!("--threads must be positive");
        }
        builder = builder.num_threads(n);
    }
    let pool = builder.build()?;
    pool.install(|| dispatch(command, settings))
}

struct Ctx<'a> {
    settings: &'a Settings,
    cfg: CountConfig,
    start: Instant,
}

impl Ctx<'_> {
    fn new(settings: &Settings) -> Ctx<'_> {
        let mut cfg = CountConfig::default();
        if let Some(k) = settings.max_keys {
            cfg.max_keys = k;
        }
        if let Some(c) = settings.oracle_ceiling {
            cfg.oracle_ceiling = c;
        }
        Ctx { settings, cfg, start: Instant::now() }
    }

    fn psi_options(&self, allow_high_level: bool) -> PsiOptions {
        let mut opts = PsiOptions { allow_high_level, ..PsiOptions::default() };
        if let Some(seed) = self.settings.seed {
            opts.dependency.seed = seed;
        }
        opts
    }

    fn over_budget(&self) -> bool {
        self.settings.time_budget_s.is_some_and(|b| self.start.elapsed().as_secs_f64() >= b)
    }

    /// Grid points in increasing order; later points are skipped once the
    /// time budget is spent, but the first always runs.
    fn sweep<T>(&self, grid: &Grid, mut f: impl FnMut(u64) -> Result<T>) -> Result<Vec<T>> {
        let mut xs = if grid.x.is_empty() { DEFAULT_GRID.to_vec() } else { grid.x.clone() };
        xs.sort_unstable();
        xs.dedup();
        let mut out = Vec::new();
        for (i, x) in xs.into_iter().enumerate() {
            if i > 0 && self.over_budget() {
                break;
            }
            out.push(f(x)?);
        }
        Ok(out)
    }
}

fn load_tuple(src: &TupleSource) -> Result<(WellConditionedTuple, Option<u32>)> {
    match (&src.tuple_file, src.k) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            Ok((parse_tuple_text(&text)?, src.r))
        }
        (None, Some(k)) => {
            let r = src.r.ok_or_else(|| anyhow!("--r is required with --k"))?;
            Ok((monomial_tuple(k, r)?, Some(r)))
        }
        (None, None) => bail!("give --tuple-file or --k and --r"),
    }
}

fn pow_h(scale: u64, r: u32, x: u64) -> Result<u64> {
    x.checked_pow(r)
        .and_then(|p| p.checked_mul(scale))
        .ok_or_else(|| anyhow!("default H = {scale}*X^{r} overflows at X={x}"))
}

/// `H` for the auxiliary system: explicit, or `X^r`.
fn aux_h(h: Option<u64>, r: Option<u32>, x: u64) -> Result<(u64, u32)> {
    match (h, r) {
        (Some(h), r) => Ok((h, r.unwrap_or(0))),
        (None, Some(r)) => Ok((pow_h(1, r, x)?, r)),
        (None, None) => bail!("give --H or --r for a tuple file"),
    }
}

fn count_entries(reports: Vec<CountReport>) -> Vec<Entry> {
    reports.iter().map(|r| Entry::Count(CountRow::from(r))).collect()
}

fn with_fit(mut entries: Vec<Entry>, series: &str) -> Vec<Entry> {
    let points: Vec<(u64, BigInt)> = entries
        .iter()
        .filter_map(|e| match e {
            Entry::Count(c) => Some((c.x, c.count.parse().ok()?)),
            _ => None,
        })
        .collect();
    if let Ok(fit) = fit_exponent(&points) {
        entries.push(Entry::Fit(FitRow { series: series.to_string(), fit, target: None, within_target: None }));
    }
    entries
}

fn dispatch(command: &Command, settings: &Settings) -> Result<Vec<Entry>> {
    let ctx = Ctx::new(settings);
    let cfg = &ctx.cfg;
    Ok(match command {
        Command::CountI { s, k, r, grid, naive } => {
            let reps = ctx.sweep(grid, |x| {
                Ok(if *naive {
                    brute_force_oracle(&CountParams::Sliced { s: *s, k: *k, r: *r, x }, cfg)?
                } else {
                    count_sliced(*s, *k, *r, x, cfg)?
                })
            })?;
            with_fit(count_entries(reps), "count-i")
        }
        Command::CountA { s, tuple, grid, h, naive } => {
            let (f, r) = load_tuple(tuple)?;
            let reps = ctx.sweep(grid, |x| {
                let (h, r) = aux_h(*h, r, x)?;
                Ok(if *naive {
                    brute_force_oracle(&CountParams::Aux { f: f.clone(), s: *s, r, x, h }, cfg)?
                } else {
                    count_aux(&f, *s, r, x, Some(h), cfg)?
                })
            })?;
            with_fit(count_entries(reps), "count-a")
        }
        Command::CountJ { sigma, d, grid, naive } => {
            let reps = ctx.sweep(grid, |x| {
                Ok(if *naive {
                    brute_force_oracle(&CountParams::Vmvt { sigma: *sigma, d: *d, x }, cfg)?
                } else {
                    count_vmvt(*sigma, *d, x, cfg)?
                })
            })?;
            with_fit(count_entries(reps), "count-j")
        }
        Command::CountLifted { s, k, r, grid, h, naive } => {
            let reps = ctx.sweep(grid, |x| {
                let h = match h {
                    Some(h) => *h,
                    None => pow_h(*s as u64, *r, x)?,
                };
                Ok(if *naive {
                    brute_force_oracle(&CountParams::Lifted { s: *s, k: *k, r: *r, x, h }, cfg)?
                } else {
                    count_lifted(*s, *k, *r, x, Some(h), cfg)?
                })
            })?;
            with_fit(count_entries(reps), "count-lifted")
        }
        Command::FindPsi { tuple, n, cap, allow_high_level } => {
            let (f, _) = load_tuple(tuple)?;
            let opts = ctx.psi_options(*allow_high_level);
            let psi = find_psi(&f, *n, cap.unwrap_or_else(|| default_degree_cap(*n)), &opts)?;
            let phi = extract_phi(&psi, &f)?;
            let recombination = recombine_phi(&phi)? == psi_expansion(&psi.psi, &f, n + 1)?;
            vec![Entry::Psi(PsiRow {
                n: *n,
                tuple: f.describe(),
                psi: psi.psi.to_string(),
                total_degree: psi.total_degree,
                certified: psi.certified,
                vanishing: check_vanishing(&psi.psi, &f, *n)?,
                nonvanishing: check_nonvanishing(&psi.psi, &f, *n)?,
                phi: phi.phi.to_string(),
                recombination,
            })]
        }
        Command::VerifyIdentities => {
            let rep = builtin_identities_check()?;
            vec![Entry::Identities(IdentitiesRow {
                quadratic_identity: rep.quadratic_identity,
                sextic_vanishes: rep.sextic_vanishes,
                sextic_divisible: rep.sextic_divisible,
                f63: rep.f63.to_string(),
                f63_bidegree: rep.f63_bidegree,
            })]
        }
        Command::DetCheck { tuple, n } => {
            let (f, _) = load_tuple(tuple)?;
            let d = det_block(&f, *n)?;
            vec![Entry::Det(DetRow {
                n: *n,
                tuple: f.describe(),
                det: d.det.to_string(),
                minors: d.minors.len(),
                expansion_matches: d.expansion() == d.det,
            })]
        }
        Command::Theta { tuple, m } => {
            let (f, _) = load_tuple(tuple)?;
            let th = theta_factor(&f, *m)?;
            let vand = vandermonde(th.theta.vars(), &(0..*m).collect::<Vec<_>>());
            vec![Entry::Theta(ThetaRow {
                m: *m,
                tuple: f.describe(),
                theta: th.theta.to_string(),
                recombination: &th.theta * &vand == th.determinant,
                samples: th
                    .samples
                    .iter()
                    .map(|(pt, v)| (pt.iter().map(ToString::to_string).collect(), v.to_string()))
                    .collect(),
                min_abs_sample: th.min_abs_sample().map(|v| v.to_string()).unwrap_or_default(),
            })]
        }
        Command::Classify { s, tuple, grid, h } => classify(&ctx, *s, tuple, grid, *h)?,
        Command::Fit { input, target, tolerance } => {
            let text = std::fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
            let fit = fit_exponent(&read_count_csv(&text)?)?;
            let within_target = target.map(|t| fit.slope <= t + tolerance);
            vec![Entry::Fit(FitRow { series: input.display().to_string(), fit, target: *target, within_target })]
        }
        Command::Bounds { s, k, r, kappa, degrees } => {
            let b = bound_calculator(*s, *k, *r, *kappa, degrees)?;
            vec![Entry::Bounds(BoundsRow {
                s: b.s,
                k: b.k,
                r: b.r,
                kappa: b.kappa,
                t: b.t,
                degrees: b.degrees.clone(),
                u: format_rational(&b.u),
                v: format_rational(&b.v),
                w: format_rational(&b.w),
                delta: format_rational(&b.delta),
                kappa_in_range: b.kappa_in_range,
                s_in_range: b.s_in_range,
                aux_constraint: b.aux_constraint,
                targets: b.targets.iter().map(|(n, q)| (n.to_string(), format_rational(q))).collect(),
            })]
        }
    })
}

fn classify(ctx: &Ctx, s: u32, tuple: &TupleSource, grid: &Grid, h: Option<u64>) -> Result<Vec<Entry>> {
    let (f, r) = load_tuple(tuple)?;
    let t = 2 * s as usize - 1;
    if s == 0 || f.t() < t {
        bail!("classification with s={s} needs at least {t} polynomials, tuple has {}", f.t());
    }
    let f = f.prefix(t)?;
    let classifier = Classifier::new(&f, s, &ctx.psi_options(false))?;
    let rows = ctx.sweep(grid, |x| {
        let (h, _) = aux_h(h, r, x)?;
        let sols = aux_solutions(&f, 2 * s as usize, x, h, &ctx.cfg)?;
        let labels = classifier.classify_all(&sols)?;
        let mut histogram: BTreeMap<LabelKind, u64> = BTreeMap::new();
        let mut witnesses_verified = true;
        let mut divisibility_holds = true;
        for (sol, label) in sols.iter().zip(&labels) {
            *histogram.entry(label.kind).or_default() += 1;
            witnesses_verified &= classifier.verify_witnesses(sol, label)?;
            if let Some((_, divides)) = classifier.divisibility_diagnostic(sol, label)? {
                divisibility_holds &= divides;
            }
        }
        Ok(ClassifyRow {
            s,
            tuple: f.describe(),
            x,
            h,
            total: sols.len() as u64,
            histogram: histogram.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            witnesses_verified,
            divisibility_holds,
        })
    })?;

    let mut series: BTreeMap<String, Vec<(u64, BigInt)>> = BTreeMap::new();
    for row in &rows {
        for (label, n) in &row.histogram {
            series.entry(label.clone()).or_default().push((row.x, BigInt::from(*n)));
        }
    }
    let mut out: Vec<Entry> = rows.into_iter().map(Entry::Classify).collect();
    for (label, points) in series {
        if let Ok(fit) = fit_exponent(&points) {
            out.push(Entry::Fit(FitRow { series: label, fit, target: None, within_target: None }));
        }
    }
    Ok(out)
}
