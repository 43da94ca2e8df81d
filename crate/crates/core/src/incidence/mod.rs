//! Exact incidence counting over a finite configuration of points and lines,
//! together with the combinatorial procedures built on top of it: rich
//! points, the planarity parameter `s`, component assignment, conical
//! tagging and derivative-chain assignment.

mod bounds;
mod lemmas;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::thread;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::flecnode::vanishes_on_line;
use crate::geometry::{
    line_intersection, lines_coplanar, project_generic, span_2flat, AffPoint, Flat2, GeomError,
    ProjLine, Projection, ProjectionInput,
};
use crate::poly::{MultiPoly, PolyError};
use crate::surfaces::{embed, SurfaceError, SurfaceModel};

pub use bounds::{bound_eval, BoundError, BoundName, BoundParams, Interval};
pub use lemmas::{
    generator_sum_check, lemma_suite, pruning_check, rich_point_check, GeneratorSumReport,
    LemmaOptions, LemmaReport, ProbeKind, ProbeOutcome, PruningReport, RichPointReport,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IncidenceError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error("element {index} has dimension {got}, expected {expected}")]
    Dimension {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("point {0} appears twice")]
    DuplicatePoint(usize),
    #[error("line {0} appears twice")]
    DuplicateLine(usize),
    #[error("configuration has no surface")]
    NoSurface,
    #[error("point {0} lies on no factor of the surface")]
    PointOnNoFactor(usize),
    #[error("line {0} is not contained in the surface")]
    LineNotContained(usize),
    #[error("point {0} is not on the surface")]
    PointNotOnSurface(usize),
    #[error("derivative chain exhausted at point {0}")]
    ChainExhaustedPoint(usize),
    #[error("derivative chain exhausted at line {0}")]
    ChainExhaustedLine(usize),
    #[error("lemma suite needs closed-form generators on at least one component")]
    NoGenerators,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct RawConfig {
    ambient_dim: usize,
    points: Vec<AffPoint>,
    lines: Vec<ProjLine>,
    #[serde(default)]
    surface: Option<SurfaceModel>,
}

/// Finite point and line sets with exact coordinates, optionally on a
/// surface.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawConfig", into = "RawConfig")]
pub struct Config {
    ambient_dim: usize,
    points: Vec<AffPoint>,
    lines: Vec<ProjLine>,
    surface: Option<SurfaceModel>,
}

impl TryFrom<RawConfig> for Config {
    type Error = IncidenceError;

    fn try_from(r: RawConfig) -> Result<Self, IncidenceError> {
        Config::new(r.ambient_dim, r.points, r.lines, r.surface)
    }
}

impl From<Config> for RawConfig {
    fn from(c: Config) -> Self {
        RawConfig {
            ambient_dim: c.ambient_dim,
            points: c.points,
            lines: c.lines,
            surface: c.surface,
        }
    }
}

impl Config {
    pub fn new(
        ambient_dim: usize,
        points: Vec<AffPoint>,
        lines: Vec<ProjLine>,
        surface: Option<SurfaceModel>,
    ) -> Result<Self, IncidenceError> {
        let check = |index: usize, got: usize| {
            if got == ambient_dim {
                Ok(())
            } else {
                Err(IncidenceError::Dimension {
                    index,
                    expected: ambient_dim,
                    got,
                })
            }
        };
        let mut seen = HashSet::new();
        for (i, p) in points.iter().enumerate() {
            check(i, p.dim())?;
            if !seen.insert(p) {
                return Err(IncidenceError::DuplicatePoint(i));
            }
        }
        let mut seen = HashSet::new();
        for (i, l) in lines.iter().enumerate() {
            check(i, l.dim())?;
            if !seen.insert(l) {
                return Err(IncidenceError::DuplicateLine(i));
            }
        }
        if let Some(s) = &surface {
            check(0, s.dim())?;
        }
        Ok(Config {
            ambient_dim,
            points,
            lines,
            surface,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn points(&self) -> &[AffPoint] {
        &self.points
    }

    pub fn lines(&self) -> &[ProjLine] {
        &self.lines
    }

    pub fn surface(&self) -> Option<&SurfaceModel> {
        self.surface.as_ref()
    }

    pub fn m(&self) -> usize {
        self.points.len()
    }

    pub fn n(&self) -> usize {
        self.lines.len()
    }

    /// Projects the configuration to `target_dim` with a verified generic
    /// projection. The surface is dropped since it does not project.
    pub fn project(
        &self,
        target_dim: usize,
        seed: u64,
        triple_samples: usize,
    ) -> Result<(Config, Projection), IncidenceError> {
        let out = project_generic(&ProjectionInput {
            points: &self.points,
            lines: &self.lines,
            target_dim,
            seed,
            triple_samples,
        })?;
        let cfg = Config::new(target_dim, out.points.clone(), out.lines.clone(), None)?;
        Ok((cfg, out))
    }
}

/// Splits `0..len` into contiguous chunks processed on scoped threads;
/// results come back in chunk order so reductions stay deterministic.
fn par_chunks<T: Send>(len: usize, work: impl Fn(std::ops::Range<usize>) -> T + Sync) -> Vec<T> {
    let threads = thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(8);
    if len < 64 || threads == 1 {
        return vec![work(0..len)];
    }
    let step = len.div_ceil(threads);
    thread::scope(|s| {
        let handles: Vec<_> = (0..len)
            .step_by(step)
            .map(|start| {
                let work = &work;
                s.spawn(move || work(start..(start + step).min(len)))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

pub fn count_incidences(config: &Config) -> u64 {
    let points = &config.points;
    let lines = &config.lines;
    par_chunks(points.len(), |range| {
        range
            .map(|i| lines.iter().filter(|l| l.contains(&points[i])).count() as u64)
            .sum::<u64>()
    })
    .into_iter()
    .sum()
}

/// Number of points of the configuration on each line.
pub fn points_per_line(config: &Config) -> Vec<usize> {
    config
        .lines
        .iter()
        .map(|l| config.points.iter().filter(|p| l.contains(p)).count())
        .collect()
}

/// Points of space on at least two lines, with the set of lines through
/// each, from exact pairwise intersection.
fn intersection_points(config: &Config) -> BTreeMap<AffPoint, Vec<usize>> {
    let lines = &config.lines;
    let n = lines.len();
    let chunks = par_chunks(n, |range| {
        let mut out = Vec::new();
        for i in range {
            for j in i + 1..n {
                if let Some(p) = line_intersection(&lines[i], &lines[j]) {
                    out.push((p, i, j));
                }
            }
        }
        out
    });
    let mut map: BTreeMap<AffPoint, Vec<usize>> = BTreeMap::new();
    for (p, i, j) in chunks.into_iter().flatten() {
        let e = map.entry(p).or_default();
        e.push(i);
        e.push(j);
    }
    for v in map.values_mut() {
        v.sort_unstable();
        v.dedup();
    }
    map
}

/// All points of space incident to at least `r` lines, with their degrees.
pub fn rich_points(config: &Config, r: usize) -> Vec<(AffPoint, usize)> {
    let r = r.max(2);
    intersection_points(config)
        .into_iter()
        .filter(|(_, ls)| ls.len() >= r)
        .map(|(p, ls)| (p, ls.len()))
        .collect()
}

/// `r ↦ number of points on at least r lines`, for every `r ≥ 2` that occurs.
pub fn rich_point_counts(config: &Config) -> BTreeMap<usize, usize> {
    let degrees: Vec<usize> = rich_points(config, 2).into_iter().map(|(_, d)| d).collect();
    let top = degrees.iter().copied().max().unwrap_or(1);
    (2..=top.max(2))
        .map(|r| (r, degrees.iter().filter(|&&d| d >= r).count()))
        .collect()
}

/// Largest number of lines in a common 2-flat. Every pair of distinct lines
/// in a flat spans it, so the lines of each flat are collected from the
/// coplanar pairs that span it.
pub fn max_coplanar_s(config: &Config) -> usize {
    let lines = &config.lines;
    let n = lines.len();
    if n == 0 {
        return 0;
    }
    let chunks = par_chunks(n, |range| {
        let mut out = Vec::new();
        for i in range {
            for j in i + 1..n {
                if lines_coplanar(&lines[i], &lines[j]).unwrap_or(false) {
                    out.push((
                        span_2flat(&lines[i], &lines[j]).expect("coplanar pair spans a flat"),
                        i,
                        j,
                    ));
                }
            }
        }
        out
    });
    let mut flats: HashMap<Flat2, HashSet<usize>> = HashMap::new();
    for (f, i, j) in chunks.into_iter().flatten() {
        let e = flats.entry(f).or_default();
        e.insert(i);
        e.insert(j);
    }
    let best = flats.iter().max_by_key(|(_, ls)| ls.len());
    if let Some((flat, ls)) = best {
        debug_assert_eq!(
            lines.iter().filter(|l| flat.contains_line(l)).count(),
            ls.len()
        );
    }
    best.map(|(_, ls)| ls.len()).unwrap_or(1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentAssignment {
    /// First factor vanishing at each point.
    pub points: Vec<usize>,
    /// First factor containing each line, if any.
    pub lines: Vec<Option<usize>>,
    pub points_per_component: Vec<usize>,
    pub lines_per_component: Vec<usize>,
    /// Incidences whose point and line are assigned to different factors.
    pub cross_incidences: u64,
    /// `n · D`.
    pub cross_bound: u64,
}

pub fn assign_components(config: &Config) -> Result<ComponentAssignment, IncidenceError> {
    let surface = config.surface.as_ref().ok_or(IncidenceError::NoSurface)?;
    let factors = surface.factors();
    let k = factors.len();
    let mut points = Vec::with_capacity(config.m());
    for (i, p) in config.points.iter().enumerate() {
        let j = factors
            .iter()
            .position(|q| q.eval(&p.coords).map(|v| v.is_zero()).unwrap_or(false))
            .ok_or(IncidenceError::PointOnNoFactor(i))?;
        points.push(j);
    }
    let lines: Vec<Option<usize>> = config
        .lines
        .iter()
        .map(|l| factors.iter().position(|q| vanishes_on_line(q, l)))
        .collect();
    let mut cross = 0u64;
    for (pi, p) in config.points.iter().enumerate() {
        for (li, l) in config.lines.iter().enumerate() {
            if l.contains(p) && lines[li] != Some(points[pi]) {
                cross += 1;
            }
        }
    }
    let mut ppc = vec![0; k];
    for &j in &points {
        ppc[j] += 1;
    }
    let mut lpc = vec![0; k];
    for j in lines.iter().flatten() {
        lpc[*j] += 1;
    }
    Ok(ComponentAssignment {
        points,
        lines,
        points_per_component: ppc,
        lines_per_component: lpc,
        cross_incidences: cross,
        cross_bound: config.n() as u64 * surface.degree() as u64,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IncidenceTag {
    Conical,
    NonConical,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedIncidence {
    pub point: usize,
    pub line: usize,
    pub tag: IncidenceTag,
}

/// True iff `p` is the apex of a cone component that contains `l`.
pub(crate) fn is_conical(surface: &SurfaceModel, p: &AffPoint, l: &ProjLine) -> bool {
    surface
        .factors()
        .iter()
        .zip(surface.component_meta())
        .any(|(q, m)| m.cone_apex.as_ref() == Some(p) && vanishes_on_line(q, l))
}

/// Every incidence tagged conical or non-conical. Without a surface all
/// incidences are non-conical.
pub fn tag_conical(config: &Config) -> Vec<TaggedIncidence> {
    let mut out = Vec::new();
    for (li, l) in config.lines.iter().enumerate() {
        for (pi, p) in config.points.iter().enumerate() {
            if !l.contains(p) {
                continue;
            }
            let conical = config.surface.as_ref().is_some_and(|s| is_conical(s, p, l));
            out.push(TaggedIncidence {
                point: pi,
                line: li,
                tag: if conical {
                    IncidenceTag::Conical
                } else {
                    IncidenceTag::NonConical
                },
            });
        }
    }
    out
}

pub fn conical_count(config: &Config) -> usize {
    tag_conical(config)
        .iter()
        .filter(|t| t.tag == IncidenceTag::Conical)
        .count()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainAssignment {
    #[serde(with = "chain_polys")]
    pub chain: Vec<MultiPoly>,
    pub points: Vec<usize>,
    pub lines: Vec<usize>,
    /// `(line, point)` pairs where a point on a line assigned to `j` was
    /// assigned to some `k < j`.
    pub violations: Vec<(usize, usize)>,
}

mod chain_polys {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[MultiPoly], s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<String> = v.iter().map(|p| p.to_string()).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<MultiPoly>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|t| MultiPoly::parse(t).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// `f_0 = f`, `f_{j+1}` the square-free part of `∂f_j/∂var`, while nonzero.
pub fn derivative_chain(f: &MultiPoly, var: &str) -> Result<Vec<MultiPoly>, IncidenceError> {
    let mut chain = vec![f.clone()];
    loop {
        let d = chain.last().unwrap().partial_derivative(var)?;
        if d.is_zero() {
            break;
        }
        chain.push(d.square_free_part()?);
    }
    Ok(chain)
}

pub fn derivative_chain_assign(
    f: &MultiPoly,
    config: &Config,
    var: &str,
) -> Result<ChainAssignment, IncidenceError> {
    let f = embed(f, config.ambient_dim)?;
    let chain = derivative_chain(&f, var)?;
    let vanish = |j: usize, p: &AffPoint| {
        chain[j]
            .eval(&p.coords)
            .map(|v| v.is_zero())
            .unwrap_or(false)
    };
    let mut points = Vec::with_capacity(config.m());
    for (i, p) in config.points.iter().enumerate() {
        if !vanish(0, p) {
            return Err(IncidenceError::PointNotOnSurface(i));
        }
        let j = (0..chain.len())
            .find(|&j| vanish(j, p) && j + 1 < chain.len() && !vanish(j + 1, p))
            .ok_or(IncidenceError::ChainExhaustedPoint(i))?;
        points.push(j);
    }
    let mut lines = Vec::with_capacity(config.n());
    for (i, l) in config.lines.iter().enumerate() {
        if !vanishes_on_line(&chain[0], l) {
            return Err(IncidenceError::LineNotContained(i));
        }
        let j = (0..chain.len())
            .find(|&j| {
                vanishes_on_line(&chain[j], l)
                    && j + 1 < chain.len()
                    && !vanishes_on_line(&chain[j + 1], l)
            })
            .ok_or(IncidenceError::ChainExhaustedLine(i))?;
        lines.push(j);
    }
    let mut violations = Vec::new();
    for (li, l) in config.lines.iter().enumerate() {
        for (pi, p) in config.points.iter().enumerate() {
            if l.contains(p) && points[pi] < lines[li] {
                violations.push((li, pi));
            }
        }
    }
    Ok(ChainAssignment {
        chain,
        points,
        lines,
        violations,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundRow {
    pub name: BoundName,
    #[serde(with = "crate::json::rational")]
    pub constant: crate::poly::Rational,
    pub value: Interval,
    /// `I / value`, as an interval.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<Interval>,
    /// Whether `I ≤ value` is certified (`Some(true)`), refuted
    /// (`Some(false)`), or undecided at the working precision.
    pub holds: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncidenceReport {
    pub m: usize,
    pub n: usize,
    #[serde(rename = "I")]
    pub incidences: u64,
    pub rich_points: BTreeMap<usize, usize>,
    pub s: usize,
    #[serde(rename = "D", skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_component: Option<ComponentAssignment>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conical_count: Option<usize>,
    pub bounds: Vec<BoundRow>,
}

impl IncidenceReport {
    pub fn params(&self) -> BoundParams {
        BoundParams {
            m: Some(self.m as u64),
            n: Some(self.n as u64),
            d: self.degree.map(u64::from),
            s: Some(self.s as u64),
            q: None,
        }
    }
}

/// Counts everything and evaluates the requested bounds. Parameters not
/// derivable from the configuration (`q`, or `D` without a surface) come
/// from `extra`.
pub fn report(
    config: &Config,
    bounds: &[(BoundName, crate::poly::Rational)],
    extra: &BoundParams,
) -> Result<IncidenceReport, IncidenceError> {
    let incidences = count_incidences(config);
    debug_assert_eq!(
        points_per_line(config).iter().sum::<usize>() as u64,
        incidences
    );
    let (per_component, conical) = match &config.surface {
        Some(_) => {
            let a = assign_components(config)?;
            let c = conical_count(config);
            (Some(a), Some(c))
        }
        None => (None, None),
    };
    let mut rep = IncidenceReport {
        m: config.m(),
        n: config.n(),
        incidences,
        rich_points: rich_point_counts(config),
        s: max_coplanar_s(config),
        degree: config.surface.as_ref().map(|s| s.degree()),
        per_component,
        conical_count: conical,
        bounds: Vec::new(),
    };
    let mut params = rep.params();
    params.d = params.d.or(extra.d);
    params.q = extra.q;
    for (name, c) in bounds {
        let value = bound_eval(*name, &params, c)?;
        let ratio = value.ratio_of(incidences);
        let holds = value.compare_at_least(incidences);
        rep.bounds.push(BoundRow {
            name: *name,
            constant: c.clone(),
            value,
            ratio,
            holds,
        });
    }
    Ok(rep)
}
