//! Acceptance criteria, one pass/fail line each. Runs without the libtest
//! harness so the lines come out in order; exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use incidence_workbench::flecnode::{
    cayley_salmon_test, flecnode_poly, vanishes_on_line, RuledVerdict,
};
use incidence_workbench::geometry::{
    klein_form, line_from_points, line_plane_intersection, line_plane_intersection_parametric,
    lines_non_coplanar, AffPoint, GeomError, HyperplaneH, ProjLine,
};
use incidence_workbench::incidence::{
    count_incidences, derivative_chain_assign, generator_sum_check, pruning_check,
    rich_point_check, BoundName, Config, LemmaOptions,
};
use incidence_workbench::lab::{self, default_constant, Check, Family, GeneratorSpec, RunOptions};
use incidence_workbench::poly::{rat, ratio, MultiPoly, Rational};
use incidence_workbench::surfaces::regulus_through;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Wall-clock limits. Criterion 1 is timed on its own; the rest share the
/// suite budget.
const FLECNODE_QUADRICS_LIMIT: Duration = Duration::from_secs(10);
const FLECNODE_LINES_LIMIT: Duration = Duration::from_secs(120);
const SUITE_LIMIT: Duration = Duration::from_secs(300);

const RANDOM_CASES: usize = 1000;
const PROBES: usize = 100;
const MIN_LINES_ON_SURFACES: usize = 100;
const PROJECTION_RUNS: u64 = 100;
const SAMPLED_TRIPLES: usize = 50;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn poly(s: &str) -> MultiPoly {
    s.parse().expect("polynomial literal")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn spec(family: Family, f: impl FnOnce(&mut GeneratorSpec)) -> GeneratorSpec {
    let mut s = GeneratorSpec::new(family, 7);
    f(&mut s);
    s
}

fn gen(s: &GeneratorSpec) -> Result<Config, String> {
    lab::gen(s).map_err(|e| e.to_string())
}

const QUADRICS: [&str; 5] = [
    "x^2 + y^2 + z^2 - 1",
    "z - x*y",
    "y - x^2",
    "x^2 + y^2 - z^2",
    "x^2 + y^2 - z^2 - 1",
];

fn criterion_1() -> Outcome {
    let start = Instant::now();
    for q in QUADRICS {
        let fl = flecnode_poly(&poly(q)).map_err(|e| format!("{q}: {e}"))?.fl;
        ensure(fl.is_zero(), || format!("{q}: fl = {fl}"))?;
    }
    let t = start.elapsed();
    ensure(t < FLECNODE_QUADRICS_LIMIT, || format!("took {t:?}"))?;
    Ok(format!(
        "fl = 0 on all five quadrics in {:.2} s",
        t.as_secs_f64()
    ))
}

/// Rulings of `x² + y² = z² + 1` through the rational points of the unit
/// circle at height zero.
fn hyperboloid_lines(count: usize) -> Vec<ProjLine> {
    lab::pythagorean_directions(count)
        .into_iter()
        .map(|[a, b, c]| {
            let base = AffPoint::new(vec![ratio(a, c), ratio(b, c), rat(0)]);
            ProjLine::new(base, vec![ratio(-b, c), ratio(a, c), rat(1)]).expect("nonzero direction")
        })
        .collect()
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut cases: Vec<(MultiPoly, Vec<ProjLine>)> = Vec::new();
    let lines_of =
        |s: GeneratorSpec| gen(&s).map(|c| (c.surface().unwrap().f().clone(), c.lines().to_vec()));
    cases.push(lines_of(spec(Family::RegulusGrid, |s| s.g = Some(20)))?);
    cases.push(lines_of(spec(Family::ParabolicCylinder, |s| {
        s.n = Some(30);
        s.m = Some(1)
    }))?);
    cases.push(lines_of(spec(Family::ConePythagorean, |s| {
        s.n = Some(30);
        s.m = Some(1)
    }))?);
    cases.push(lines_of(spec(Family::ProductSurface, |s| s.n = Some(20)))?);
    cases.push((poly("x^2 + y^2 - z^2 - 1"), hyperboloid_lines(30)));
    let mut total = 0;
    for (f, lines) in &cases {
        let fl = flecnode_poly(f).map_err(|e| format!("{f}: {e}"))?.fl;
        for (i, l) in lines.iter().enumerate() {
            ensure(vanishes_on_line(f, l), || {
                format!("{f}: line {i} is not on the surface")
            })?;
            ensure(vanishes_on_line(&fl, l), || {
                format!("{f}: fl does not vanish on line {i}")
            })?;
        }
        total += lines.len();
    }
    ensure(total >= MIN_LINES_ON_SURFACES, || {
        format!("only {total} lines")
    })?;
    let t = start.elapsed();
    ensure(t < FLECNODE_LINES_LIMIT, || format!("took {t:?}"))?;
    Ok(format!(
        "fl vanishes on {total} lines over {} surfaces",
        cases.len()
    ))
}

fn criterion_3() -> Outcome {
    let f = poly("x^3 + y^3 + z^3 - 1");
    let verdicts = cayley_salmon_test(&f, std::slice::from_ref(&f)).map_err(|e| e.to_string())?;
    let Some(RuledVerdict::NotRuled {
        certificate,
        fl_value,
        ..
    }) = verdicts.first()
    else {
        return Err(format!("expected NOT_RULED, got {verdicts:?}"));
    };
    let fl = flecnode_poly(&f).map_err(|e| e.to_string())?.fl;
    let on = f.eval(&certificate.coords).map_err(|e| e.to_string())?;
    let value = fl.eval(&certificate.coords).map_err(|e| e.to_string())?;
    ensure(on == rat(0), || "certificate is off the surface".into())?;
    ensure(value == *fl_value && value != rat(0), || {
        format!("fl(p) = {value}, reported {fl_value}")
    })?;
    let coords: Vec<String> = certificate.coords.iter().map(|c| c.to_string()).collect();
    Ok(format!(
        "NOT_RULED at ({}), fl(p) = {value}",
        coords.join(", ")
    ))
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    ratio(rng.gen_range(-30..=30), rng.gen_range(1..=7))
}

fn random_point(rng: &mut ChaCha8Rng) -> AffPoint {
    AffPoint::new((0..3).map(|_| random_rational(rng)).collect())
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut klein = 0;
    while klein < RANDOM_CASES {
        let (x, y) = (random_point(&mut rng), random_point(&mut rng));
        if x == y {
            continue;
        }
        let l = line_from_points(&x, &y).map_err(|e| e.to_string())?;
        let pl = l.plucker().ok_or("no Plücker coordinates")?;
        ensure(klein_form(pl) == rat(0), || {
            format!("Klein form nonzero for {l:?}")
        })?;
        klein += 1;
    }
    let (mut agree, mut contained) = (0, 0);
    while agree < RANDOM_CASES {
        let (x, y) = (random_point(&mut rng), random_point(&mut rng));
        let mut h: Vec<Rational> = (0..4).map(|_| random_rational(&mut rng)).collect();
        // every tenth plane is forced through x and y to exercise containment
        if agree % 10 == 0 {
            let d: Vec<Rational> = (0..3).map(|i| &y.coords[i] - &x.coords[i]).collect();
            h[3] = rat(0);
            if d[2] != rat(0) {
                h[3] = -(&h[1] * &d[0] + &h[2] * &d[1]) / &d[2];
            }
            h[0] = -(&h[1] * &x.coords[0] + &h[2] * &x.coords[1] + &h[3] * &x.coords[2]);
        }
        let (Ok(l), Ok(h)) = (line_from_points(&x, &y), HyperplaneH::new(h)) else {
            continue;
        };
        match (
            line_plane_intersection(&l, &h),
            line_plane_intersection_parametric(&l, &h),
        ) {
            (Ok(a), Ok(b)) => ensure(a.same_point(&b), || format!("{a:?} vs {b:?}"))?,
            (Err(GeomError::LineInPlane), Err(GeomError::LineInPlane)) => contained += 1,
            (a, b) => return Err(format!("formula {a:?} vs parametric {b:?}")),
        }
        agree += 1;
    }
    Ok(format!(
        "{klein} Plücker tuples on the Klein quadric; {agree} line-plane cases agree ({contained} contained)"
    ))
}

fn criterion_5() -> Outcome {
    let opts = LemmaOptions {
        probes: PROBES,
        seed: 5,
    };
    let mut parts = Vec::new();
    for (name, family) in [
        ("cylinder", Family::ParabolicCylinder),
        ("cone", Family::ConePythagorean),
    ] {
        let cfg = gen(&spec(family, |s| s.n = Some(12)))?;
        let r = generator_sum_check(&cfg, &opts).map_err(|e| e.to_string())?;
        ensure(r.degree == 2, || format!("{name}: D = {}", r.degree))?;
        ensure(r.probes == PROBES, || {
            format!("{name}: {} probes", r.probes)
        })?;
        ensure(r.max_sum <= 2 && r.passed(), || {
            format!(
                "{name}: {} violations, max sum {}",
                r.violations.len(),
                r.max_sum
            )
        })?;
        parts.push(format!(
            "{name} max sum {} over {} probes",
            r.max_sum, r.probes
        ));
    }
    Ok(parts.join("; "))
}

fn criterion_6() -> Outcome {
    let cfg = gen(&spec(Family::ProductSurface, |s| s.n = Some(24)))?;
    let r = pruning_check(&cfg).map_err(|e| e.to_string())?;
    ensure(r.bound == 16, || format!("bound {}", r.bound))?;
    ensure(r.passed() && r.max_degree as u64 <= r.bound, || {
        format!("violations {:?}", r.violations)
    })?;
    Ok(format!(
        "|L1| = {}, {} points survive pruning, max degree {} <= {}",
        r.l1, r.surviving_points, r.max_degree, r.bound
    ))
}

fn criterion_7() -> Outcome {
    let mut worst = String::new();
    for n in [10, 25, 50, 100] {
        let cfg = gen(&spec(Family::ConePythagorean, |s| s.n = Some(n)))?;
        let r = rich_point_check(&cfg).map_err(|e| e.to_string())?;
        ensure(r.applicable && r.holds == Some(true), || {
            format!("cone n = {n}: {r:?}")
        })?;
        ensure(r.bound == 2 * n, || {
            format!("cone n = {n}: bound {}", r.bound)
        })?;
        worst = format!("cone n = {n}: {} <= {}", r.count, r.bound);
    }
    let reg = gen(&spec(Family::RegulusGrid, |s| s.g = Some(6)))?;
    let r = rich_point_check(&reg).map_err(|e| e.to_string())?;
    ensure(!r.applicable && r.holds.is_none(), || {
        format!("regulus not excluded: {r:?}")
    })?;
    Ok(format!(
        "{worst}; regulus excluded ({})",
        r.excluded_because.unwrap_or_default()
    ))
}

fn criterion_8() -> Outcome {
    // the ruling x = a, z = a·y of z = xy
    let ruling = |a: i64| ProjLine::from_ints(&[a, 0, 0], &[0, 1, a]).expect("ruling");
    let ls = [ruling(0), ruling(1), ruling(2)];
    let target = poly("z - x*y");
    let perms = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut first: Option<MultiPoly> = None;
    for p in perms {
        let q = regulus_through([&ls[p[0]], &ls[p[1]], &ls[p[2]]]).map_err(|e| e.to_string())?;
        ensure(q.eq_up_to_scalar(&target), || format!("{p:?} gave {q}"))?;
        let canon = q.monic();
        if let Some(f) = &first {
            ensure(*f == canon, || {
                format!("{p:?} canonical form {canon} differs from {f}")
            })?;
        }
        first.get_or_insert(canon);
    }
    Ok(format!("all 6 orders give {}", first.unwrap()))
}

/// Rechecks the chain claim from the raw assignment, without trusting the
/// violation list.
fn recheck_chain(cfg: &Config, label: &str) -> Result<usize, String> {
    let f = cfg.surface().unwrap().f().clone();
    let mut vars = 0;
    for var in ["x", "y", "z"] {
        if f.degree_in_var(var).map_err(|e| e.to_string())? != f.total_degree() {
            continue;
        }
        let c = derivative_chain_assign(&f, cfg, var).map_err(|e| format!("{label}/{var}: {e}"))?;
        for (li, l) in cfg.lines().iter().enumerate() {
            for (pi, p) in cfg.points().iter().enumerate() {
                if l.contains(p) {
                    ensure(c.points[pi] >= c.lines[li], || {
                        format!(
                            "{label}/{var}: line {li} (f_{}) holds point {pi} (f_{})",
                            c.lines[li], c.points[pi]
                        )
                    })?;
                }
            }
        }
        ensure(c.violations.is_empty(), || {
            format!("{label}/{var}: reported violations")
        })?;
        vars += 1;
    }
    ensure(vars > 0, || format!("{label}: no variable of full degree"))?;
    Ok(vars)
}

fn criterion_9() -> Outcome {
    let mut checked = 0;
    for n in [5, 20] {
        checked += recheck_chain(
            &gen(&spec(Family::ConePythagorean, |s| s.n = Some(n)))?,
            "cone",
        )?;
        checked += recheck_chain(
            &gen(&spec(Family::ProductSurface, |s| s.n = Some(n)))?,
            "product",
        )?;
    }
    Ok(format!(
        "claim holds on every incidence for {checked} (config, variable) pairs"
    ))
}

fn criterion_10() -> Outcome {
    let c = default_constant();
    let runs: [(Family, BoundName, &[u64]); 3] = [
        (Family::RegulusGrid, BoundName::Th13a, &[4, 8, 16, 32]),
        (Family::Variety4dXyz, BoundName::Th14a, &[2, 3, 4, 5, 6]),
        (Family::PlaneGridElekes, BoundName::Cormainx, &[2, 3, 4]),
    ];
    let mut csv = String::new();
    let mut parts = Vec::new();
    for (family, bound, sizes) in runs {
        let rep = lab::scaling_report(family, sizes, bound, &c, 0).map_err(|e| e.to_string())?;
        ensure(rep.all_hold, || {
            format!("{family} {bound}: not certified on every row")
        })?;
        for row in &rep.rows {
            let expected = match family {
                Family::RegulusGrid => Some(2 * row.size * row.size),
                Family::Variety4dXyz => Some(3 * row.size.pow(3)),
                _ => None,
            };
            if let Some(e) = expected {
                ensure(row.incidences == e, || {
                    format!("{family} size {}: I = {}", row.size, row.incidences)
                })?;
            }
            let cfg = gen(&GeneratorSpec::with_size(family, row.size, 0))?;
            ensure(count_incidences(&cfg) == row.incidences, || {
                format!("{family}: recount differs")
            })?;
        }
        let body = rep.to_csv().map_err(|e| e.to_string())?;
        if csv.is_empty() {
            csv.push_str(&body);
        } else {
            csv.extend(body.lines().skip(1).map(|l| format!("{l}\n")));
        }
        let ratios: Vec<String> = rep.rows.iter().map(|r| format!("{:.4}", r.ratio)).collect();
        parts.push(format!(
            "{family} {bound} ratios [{}] {:?}",
            ratios.join(", "),
            rep.trend
        ));
    }
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("trend.csv");
    std::fs::write(&path, &csv).map_err(|e| e.to_string())?;
    Ok(format!(
        "{}; written to {}",
        parts.join("; "),
        path.display()
    ))
}

fn criterion_11() -> Outcome {
    let cfg = gen(&spec(Family::Variety4dXyz, |s| s.g = Some(3)))?;
    let incidences = count_incidences(&cfg);
    let lines = cfg.lines();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut triples = Vec::new();
    while triples.len() < SAMPLED_TRIPLES {
        let t = [0, 1, 2].map(|_| rng.gen_range(0..lines.len()));
        if t[0] != t[1]
            && t[1] != t[2]
            && t[0] != t[2]
            && lines_non_coplanar(&lines[t[0]], &lines[t[1]], &lines[t[2]])
        {
            triples.push(t);
        }
    }
    let mut retries = 0;
    for seed in 0..PROJECTION_RUNS {
        let (low, info) = cfg
            .project(3, seed, SAMPLED_TRIPLES)
            .map_err(|e| format!("seed {seed}: {e}"))?;
        retries += info.attempts - 1;
        let distinct_points = low
            .points()
            .iter()
            .collect::<std::collections::HashSet<_>>()
            .len();
        let distinct_lines = low
            .lines()
            .iter()
            .collect::<std::collections::HashSet<_>>()
            .len();
        ensure(
            distinct_points == cfg.m() && distinct_lines == cfg.n(),
            || format!("seed {seed}: collisions"),
        )?;
        let ll = low.lines();
        for t in &triples {
            ensure(lines_non_coplanar(&ll[t[0]], &ll[t[1]], &ll[t[2]]), || {
                format!("seed {seed}: triple {t:?} became coplanar")
            })?;
        }
        ensure(count_incidences(&low) == incidences, || {
            format!("seed {seed}: incidence count changed")
        })?;
    }
    Ok(format!(
        "{PROJECTION_RUNS} projections of {} points and {} lines, {SAMPLED_TRIPLES} triples each, I = {incidences} kept, {retries} reseeds",
        cfg.m(),
        cfg.n()
    ))
}

fn criterion_12() -> Outcome {
    let s = spec(Family::ProductSurface, |s| s.n = Some(8));
    let opts = RunOptions {
        checks: vec![Check::Lemma, Check::Bounds, Check::Chain],
        bounds: vec![
            (BoundName::Th13a, default_constant()),
            (BoundName::Gk3, default_constant()),
        ],
        ..Default::default()
    };
    let a = lab::run_experiment(&s, &opts).to_json();
    let b = lab::run_experiment(&s, &opts).to_json();
    ensure(a == b, || "report JSON differs between runs".into())?;
    Ok(format!("{} identical bytes", a.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("flecnode polynomial vanishes on quadrics", criterion_1),
        (
            "flecnode polynomial vanishes on contained lines",
            criterion_2,
        ),
        ("non-ruled cubic carries a certificate", criterion_3),
        ("Klein quadric and line-plane intersection", criterion_4),
        ("generator sums along probe lines", criterion_5),
        ("pruned non-conical degrees", criterion_6),
        ("2-rich point bound", criterion_7),
        ("regulus reconstruction", criterion_8),
        ("derivative-chain assignment", criterion_9),
        ("bound inequalities at C = 10", criterion_10),
        ("generic projection", criterion_11),
        ("deterministic reports", criterion_12),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!(
                "[PASS] criterion {:2}: {name} ({secs:.2} s): {detail}",
                i + 1
            ),
            Err(why) => {
                failed += 1;
                println!("[FAIL] criterion {:2}: {name} ({secs:.2} s): {why}", i + 1);
            }
        }
    }
    let total = start.elapsed();
    if total > SUITE_LIMIT {
        failed += 1;
        println!("[FAIL] suite took {:.1} s", total.as_secs_f64());
    }
    println!(
        "{} of {} criteria passed in {:.1} s",
        criteria.len() - failed.min(criteria.len()),
        criteria.len(),
        total.as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
