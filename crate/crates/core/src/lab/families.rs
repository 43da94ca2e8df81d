//! Configuration families with known ground truth.

use std::collections::BTreeSet;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Family, GeneratorSpec, GroundTruth, LabError};
use crate::geometry::{AffPoint, ProjLine};
use crate::incidence::Config;
use crate::poly::{rat, ratio, MultiPoly, Rational};
use crate::surfaces::{ComponentMeta, SurfaceModel};

const MAX_REGULUS_G: u64 = 256;
const MAX_VARIETY_G: u64 = 48;
const MAX_ELEKES_SIDE: u64 = 64;
const MAX_LINES: u64 = 4096;
const MAX_POINTS: u64 = 1 << 16;

fn guard(what: &'static str, value: u64, limit: u64) -> Result<u64, LabError> {
    if value == 0 {
        return Err(LabError::BadSize { what, value });
    }
    if value > limit {
        return Err(LabError::SizeTooLarge { what, value, limit });
    }
    Ok(value)
}

fn poly(s: &str) -> MultiPoly {
    s.parse().expect("family polynomial")
}

/// Primitive Pythagorean directions `(k²−l², 2kl, k²+l²)` with `k > l ≥ 1`
/// coprime and of opposite parity, in order of increasing `k`.
pub fn pythagorean_directions(count: usize) -> Vec<[i64; 3]> {
    let mut out = Vec::with_capacity(count);
    let mut k = 2i64;
    while out.len() < count {
        for l in 1..k {
            if (k - l) % 2 == 1 && k.gcd(&l) == 1 {
                out.push([k * k - l * l, 2 * k * l, k * k + l * l]);
                if out.len() == count {
                    break;
                }
            }
        }
        k += 1;
    }
    out
}

pub(super) struct Built {
    pub config: Config,
    pub truth: GroundTruth,
}

fn build(
    points: Vec<AffPoint>,
    lines: Vec<ProjLine>,
    surface: SurfaceModel,
    truth_i: Option<u64>,
) -> Result<Built, LabError> {
    let truth = GroundTruth {
        m: points.len(),
        n: lines.len(),
        incidences: truth_i,
    };
    let dim = surface.dim();
    let config = Config::new(dim, points, lines, Some(surface))?;
    Ok(Built { config, truth })
}

fn regulus_grid(g: u64) -> Result<Built, LabError> {
    let g = guard("g", g, MAX_REGULUS_G)? as i64;
    let mut lines = Vec::new();
    for a in 0..g {
        lines.push(ProjLine::from_ints(&[a, 0, 0], &[0, 1, a])?);
    }
    for b in 0..g {
        lines.push(ProjLine::from_ints(&[0, b, 0], &[1, 0, b])?);
    }
    let mut points = Vec::new();
    for a in 0..g {
        for b in 0..g {
            points.push(AffPoint::from_ints(&[a, b, a * b]));
        }
    }
    let meta = ComponentMeta {
        is_regulus: Some(true),
        ..Default::default()
    };
    let surface = SurfaceModel::single(3, poly("z - x*y"), meta)?;
    build(points, lines, surface, Some(2 * (g * g) as u64))
}

fn cylinder_lines(xs: &[Rational]) -> Result<Vec<ProjLine>, LabError> {
    xs.iter()
        .map(|a| {
            Ok(ProjLine::new(
                AffPoint::new(vec![a.clone(), a * a, rat(0)]),
                vec![rat(0), rat(0), rat(1)],
            )?)
        })
        .collect()
}

fn cylinder_meta() -> ComponentMeta {
    ComponentMeta {
        cylinder_direction: Some(vec![rat(0), rat(0), rat(1)]),
        ..Default::default()
    }
}

fn cone_meta() -> ComponentMeta {
    ComponentMeta {
        cone_apex: Some(AffPoint::origin(3)),
        ..Default::default()
    }
}

/// One point per sample on the given lines, at distinct nonzero parameters.
fn sample_on_lines(lines: &[ProjLine], m: usize, rng: &mut ChaCha8Rng) -> Vec<AffPoint> {
    (0..m)
        .map(|k| {
            let line = &lines[k % lines.len()];
            let round = (k / lines.len()) as i64;
            let t = rat(round + 1) + ratio(rng.gen_range(1..=9), 10);
            line.point_at(&t)
        })
        .collect()
}

fn parabolic_cylinder(n: u64, m: u64, rng: &mut ChaCha8Rng) -> Result<Built, LabError> {
    let n = guard("n", n, MAX_LINES)? as i64;
    let m = guard("m", m, MAX_POINTS)? as usize;
    let xs: Vec<Rational> = (0..n).map(rat).collect();
    let lines = cylinder_lines(&xs)?;
    let points = sample_on_lines(&lines, m, rng);
    let surface = SurfaceModel::single(3, poly("y - x^2"), cylinder_meta())?;
    build(points, lines, surface, Some(m as u64))
}

fn cone_lines(n: usize) -> Result<Vec<ProjLine>, LabError> {
    pythagorean_directions(n)
        .iter()
        .map(|d| Ok(ProjLine::from_ints(&[0, 0, 0], d)?))
        .collect()
}

fn cone_pythagorean(n: u64, m: u64, rng: &mut ChaCha8Rng) -> Result<Built, LabError> {
    let n = guard("n", n, MAX_LINES)? as usize;
    let m = guard("m", m, MAX_POINTS)? as usize;
    let lines = cone_lines(n)?;
    let mut points = vec![AffPoint::origin(3)];
    points.extend(sample_on_lines(&lines, m, rng));
    let surface = SurfaceModel::single(3, poly("x^2 + y^2 - z^2"), cone_meta())?;
    build(points, lines, surface, Some((n + m) as u64))
}

fn plane_grid_elekes(a: u64, b: u64) -> Result<Built, LabError> {
    let a = guard("a", a, MAX_ELEKES_SIDE)? as i64;
    let b = guard("b", b, MAX_ELEKES_SIDE)? as i64;
    let mut points = Vec::new();
    for x in 1..=a {
        for y in 1..=2 * a * b {
            points.push(AffPoint::from_ints(&[x, y, 0]));
        }
    }
    let mut lines = Vec::new();
    for c in 1..=b {
        for d in 1..=a * b {
            lines.push(ProjLine::from_ints(&[0, d, 0], &[1, c, 0])?);
        }
    }
    let surface = SurfaceModel::single(3, poly("z"), ComponentMeta::default())?;
    // every line y = cx + d stays inside the grid for x in 1..=a
    build(points, lines, surface, Some((a * a * b * b) as u64))
}

/// Cone lines from Pythagorean directions together with the cylinder
/// rulings through their second intersection with `y = x²`, plus the ruling
/// through the apex.
fn product_surface(n: u64, m: u64, rng: &mut ChaCha8Rng) -> Result<Built, LabError> {
    let n = guard("n", n, MAX_LINES / 2)? as usize;
    let m = m as usize;
    let dirs = pythagorean_directions(n);
    let cone = cone_lines(n)?;
    let mut xs: BTreeSet<Rational> = BTreeSet::from([rat(0)]);
    let mut cross = Vec::new();
    for (d, l) in dirs.iter().zip(&cone) {
        // t·(p, q, r) with t = q / p² lies on y = x²
        let t = ratio(d[1], d[0] * d[0]);
        let p = l.point_at(&t);
        xs.insert(p.coords[0].clone());
        cross.push(p);
    }
    let xs: Vec<Rational> = xs.into_iter().collect();
    let rulings = cylinder_lines(&xs)?;
    let mut seen: BTreeSet<AffPoint> = BTreeSet::new();
    let mut points = Vec::new();
    let mut push = |p: AffPoint| {
        if seen.insert(p.clone()) {
            points.push(p);
        }
    };
    push(AffPoint::origin(3));
    cross.into_iter().for_each(&mut push);
    sample_on_lines(&rulings, m, rng)
        .into_iter()
        .for_each(&mut push);
    sample_on_lines(&cone, m, rng)
        .into_iter()
        .for_each(&mut push);
    let mut lines = rulings;
    lines.extend(cone);
    let f1 = poly("y - x^2");
    let f2 = poly("x^2 + y^2 - z^2");
    let f = &f1 * &f2;
    let surface = SurfaceModel::new(3, f, vec![f1, f2], vec![cylinder_meta(), cone_meta()])?;
    build(points, lines, surface, None)
}

fn variety_4d_xyz(g: u64) -> Result<Built, LabError> {
    let g = guard("g", g, MAX_VARIETY_G)? as i64;
    let r = 0..g;
    let mut points = Vec::new();
    for a in r.clone() {
        for b in r.clone() {
            for c in r.clone() {
                points.push(AffPoint::from_ints(&[a, b, c, a * b * c]));
            }
        }
    }
    let mut lines = Vec::new();
    for u in r.clone() {
        for v in r.clone() {
            lines.push(ProjLine::from_ints(&[0, u, v, 0], &[1, 0, 0, u * v])?);
            lines.push(ProjLine::from_ints(&[u, 0, v, 0], &[0, 1, 0, u * v])?);
            lines.push(ProjLine::from_ints(&[u, v, 0, 0], &[0, 0, 1, u * v])?);
        }
    }
    let surface = SurfaceModel::single(4, poly("w - x*y*z"), ComponentMeta::default())?;
    build(points, lines, surface, Some(3 * (g * g * g) as u64))
}

pub(super) fn generate(spec: &GeneratorSpec) -> Result<Built, LabError> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let need = |v: Option<u64>, name: &'static str| {
        v.ok_or(LabError::MissingSize {
            family: spec.family,
            name,
        })
    };
    match spec.family {
        Family::RegulusGrid => regulus_grid(need(spec.g, "g")?),
        Family::ParabolicCylinder => {
            let n = need(spec.n, "n")?;
            parabolic_cylinder(n, spec.m.unwrap_or(2 * n), &mut rng)
        }
        Family::ConePythagorean => {
            let n = need(spec.n, "n")?;
            cone_pythagorean(n, spec.m.unwrap_or(2 * n), &mut rng)
        }
        Family::PlaneGridElekes => {
            let a = need(spec.a.or(spec.g), "a")?;
            plane_grid_elekes(a, spec.b.unwrap_or(a))
        }
        Family::ProductSurface => {
            let n = need(spec.n, "n")?;
            product_surface(n, spec.m.unwrap_or(n), &mut rng)
        }
        Family::Variety4dXyz => variety_4d_xyz(need(spec.g, "g")?),
    }
}
