//! Seeded generic linear projections `R^d → R^{d-1} → … → R^target`,
//! verified after the fact and retried with a fresh seed on failure.

use std::collections::HashSet;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::linalg::{dot, scale, sub};
use super::{lines_coplanar, lines_non_coplanar, AffPoint, GeomError, ProjLine};
use crate::json;
use crate::poly::{rat, Rational};

const MAX_ATTEMPTS: u32 = 16;

/// Entries of `w` are drawn from `-W_RANGE..=W_RANGE`. A skew pair in `R^4`
/// turns coplanar only when `w` falls in the hyperplane it spans, so a small
/// range makes that common once there are a few hundred pairs.
const W_RANGE: i64 = 1 << 16;

pub struct ProjectionInput<'a> {
    pub points: &'a [AffPoint],
    pub lines: &'a [ProjLine],
    pub target_dim: usize,
    pub seed: u64,
    /// Number of non-coplanar line triples sampled for the genericity check.
    pub triple_samples: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Projection {
    #[serde(skip)]
    pub points: Vec<AffPoint>,
    #[serde(skip)]
    pub lines: Vec<ProjLine>,
    /// Projection vectors `w`, one per step.
    #[serde(with = "json::rational_vecs")]
    pub ws: Vec<Vec<Rational>>,
    /// Coordinate dropped after each step.
    pub dropped: Vec<usize>,
    pub seed_used: u64,
    pub attempts: u32,
    pub triples_checked: usize,
}

struct Step {
    w: Vec<Rational>,
    ww: Rational,
    drop: usize,
}

impl Step {
    fn random(rng: &mut ChaCha8Rng, d: usize) -> Step {
        loop {
            let w: Vec<Rational> = (0..d)
                .map(|_| rat(rng.gen_range(-W_RANGE..=W_RANGE)))
                .collect();
            if let Some(drop) = w.iter().rposition(|c| !c.is_zero()) {
                let ww = dot(&w, &w);
                return Step { w, ww, drop };
            }
        }
    }

    /// `v − (v·w)/(w·w) w` with coordinate `drop` removed.
    fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        let c = dot(v, &self.w) / &self.ww;
        let mut out = sub(v, &scale(&self.w, &c));
        out.remove(self.drop);
        out
    }
}

fn project_line(steps: &[Step], l: &ProjLine) -> Option<ProjLine> {
    let mut b = l.base().coords.clone();
    let mut d = l.direction().to_vec();
    for s in steps {
        b = s.apply(&b);
        d = s.apply(&d);
    }
    ProjLine::new(AffPoint::new(b), d).ok()
}

fn project_point(steps: &[Step], p: &AffPoint) -> AffPoint {
    let mut v = p.coords.clone();
    for s in steps {
        v = s.apply(&v);
    }
    AffPoint::new(v)
}

fn sample_triples(lines: &[ProjLine], want: usize, rng: &mut ChaCha8Rng) -> Vec<[usize; 3]> {
    let n = lines.len();
    let mut out = Vec::new();
    if n < 3 {
        return out;
    }
    let mut tries = 0;
    while out.len() < want && tries < want * 50 {
        tries += 1;
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        let k = rng.gen_range(0..n);
        if i == j || j == k || i == k {
            continue;
        }
        if lines_non_coplanar(&lines[i], &lines[j], &lines[k]) {
            out.push([i, j, k]);
        }
    }
    out
}

fn validate(
    input: &ProjectionInput<'_>,
    steps: &[Step],
    triples: &[[usize; 3]],
) -> Option<(Vec<AffPoint>, Vec<ProjLine>)> {
    let points: Vec<AffPoint> = input
        .points
        .iter()
        .map(|p| project_point(steps, p))
        .collect();
    if points.iter().collect::<HashSet<_>>().len() != points.len() {
        return None;
    }
    let lines: Vec<ProjLine> = input
        .lines
        .iter()
        .map(|l| project_line(steps, l))
        .collect::<Option<_>>()?;
    if lines.iter().collect::<HashSet<_>>().len() != lines.len() {
        return None;
    }
    for t in triples {
        if !lines_non_coplanar(&lines[t[0]], &lines[t[1]], &lines[t[2]]) {
            return None;
        }
    }
    for (i, l) in input.lines.iter().enumerate() {
        for (j, k) in input.lines.iter().enumerate().skip(i + 1) {
            if lines_coplanar(&lines[i], &lines[j]).ok()? && !lines_coplanar(l, k).ok()? {
                return None;
            }
        }
    }
    for (p, pp) in input.points.iter().zip(&points) {
        for (l, ll) in input.lines.iter().zip(&lines) {
            if l.contains(p) != ll.contains(pp) {
                return None;
            }
        }
    }
    Some((points, lines))
}

/// Projects points and lines to `target_dim`, checking that points and
/// lines stay distinct, incidences are neither lost nor created, skew pairs
/// stay skew and sampled non-coplanar triples stay non-coplanar. Reseeds
/// (seed + attempt) on failure.
pub fn project_generic(input: &ProjectionInput<'_>) -> Result<Projection, GeomError> {
    let d = input
        .points
        .first()
        .map(|p| p.dim())
        .or_else(|| input.lines.first().map(|l| l.dim()))
        .unwrap_or(input.target_dim + 1);
    if input.target_dim == 0 || input.target_dim >= d {
        return Err(GeomError::DimensionMismatch(d, input.target_dim));
    }
    let mut triple_rng = ChaCha8Rng::seed_from_u64(input.seed ^ 0x7269_706c);
    let triples = sample_triples(input.lines, input.triple_samples, &mut triple_rng);
    for attempt in 0..MAX_ATTEMPTS {
        let seed = input.seed.wrapping_add(attempt as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let steps: Vec<Step> = (input.target_dim + 1..=d)
            .rev()
            .map(|k| Step::random(&mut rng, k))
            .collect();
        if let Some((points, lines)) = validate(input, &steps, &triples) {
            return Ok(Projection {
                points,
                lines,
                ws: steps.iter().map(|s| s.w.clone()).collect(),
                dropped: steps.iter().map(|s| s.drop).collect(),
                seed_used: seed,
                attempts: attempt + 1,
                triples_checked: triples.len(),
            });
        }
    }
    Err(GeomError::RetriesExhausted(MAX_ATTEMPTS))
}
