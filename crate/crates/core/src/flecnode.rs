//! Flecnode polynomials by resultant elimination, the Cayley–Salmon–Monge
//! ruledness test, and exact line-existence decisions at a point.
//!
//! With `G_k = ∇_v^k f` (homogeneous of degree `k` in `v`), a point `p` is a
//! flecnode when `G_1 = G_2 = G_3 = 0` has a projective solution `v`. The
//! direction space is covered by the chart `v1 = 1`, the chart
//! `v1 = 0, v2 = 1`, and the single direction `(0, 0, 1)`. In each affine
//! chart `v3` is eliminated first and then the remaining direction
//! variable; the seam direction contributes the first nonzero polynomial
//! among `f_z, f_zz, f_zzz`.

use std::thread;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::linalg::nullspace;
use crate::geometry::{AffPoint, GeomError, ProjLine};
use crate::json;
use crate::poly::{point_vars, rat, MultiPoly, PolyError, Rational, UniPoly};
use crate::sampling::{rational_points, PointSearch};

/// Largest input degree accepted by [`flecnode_poly`].
pub const MAX_FLECNODE_DEGREE: u32 = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlecnodeError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("flecnode polynomial needs a polynomial in x, y, z; got variables {0:?}")]
    NotTrivariate(Vec<String>),
    #[error("degree {0} is below 2")]
    DegreeTooLow(u32),
    #[error("degree {0} exceeds the supported maximum of {MAX_FLECNODE_DEGREE}")]
    DegreeTooHigh(u32),
    #[error("input polynomial is not square-free")]
    NotSquareFree,
    #[error("point is not on the surface")]
    PointNotOnSurface,
    #[error("product of the factors differs from the surface polynomial")]
    FactorMismatch,
    #[error("factor {0} is not divisible by its flecnode polynomial, but no certificate point was found")]
    NoCertificate(String),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LogEntry {
    pub step: String,
    pub degree: u32,
    pub terms: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FlecnodeResult {
    #[serde(with = "json::poly")]
    pub fl: MultiPoly,
    pub construction_log: Vec<LogEntry>,
    /// `11·D − 24` for `D ≥ 3`.
    pub true_degree_bound: Option<i64>,
}

/// Degree of the classical flecnode polynomial, `11·D − 24`.
pub fn classical_flecnode_degree(d: u32) -> Option<i64> {
    (d >= 3).then(|| 11 * d as i64 - 24)
}

/// Bound on the number of lines on a non-ruled surface of degree `D`,
/// `D·(11·D − 24)`.
pub fn non_ruled_line_bound(d: u32) -> Option<i64> {
    classical_flecnode_degree(d).map(|k| d as i64 * k)
}

fn trivariate(f: &MultiPoly) -> Result<MultiPoly, FlecnodeError> {
    let vars = point_vars(3);
    f.with_vars(&vars)
        .map_err(|_| FlecnodeError::NotTrivariate(f.vars().to_vec()))
}

fn log(step: &str, p: &MultiPoly) -> LogEntry {
    LogEntry {
        step: step.to_string(),
        degree: p.total_degree(),
        terms: p.num_terms(),
    }
}

/// Removes every factor `c` from `p` and multiplies one back in, so the
/// extraneous powers of `c` introduced by elimination do not pile up.
fn strip_powers(p: &MultiPoly, c: &MultiPoly) -> MultiPoly {
    if c.is_constant() || p.is_zero() {
        return p.clone();
    }
    let mut out = p.clone();
    let mut stripped = false;
    while let Ok(q) = out.div_exact(c) {
        out = q;
        stripped = true;
    }
    if stripped {
        &out * c
    } else {
        out
    }
}

/// One affine chart: `fixed` is set to 1, `v3` is eliminated, then `free`.
fn chart(
    gs: &[MultiPoly; 3],
    fixed: &str,
    free: &str,
    fz: &MultiPoly,
) -> Result<(MultiPoly, Vec<LogEntry>), PolyError> {
    let mut logs = Vec::new();
    let set: Vec<MultiPoly> = gs
        .iter()
        .map(|g| {
            let i = g.var_index(fixed).unwrap();
            g.eval_var(i, &rat(1))
        })
        .collect();
    let r12 = set[0].eliminate(&set[1], "v3")?;
    let r13 = set[0].eliminate(&set[2], "v3")?;
    logs.push(log(&format!("{fixed}=1: Res_v3(G1,G2)"), &r12));
    logs.push(log(&format!("{fixed}=1: Res_v3(G1,G3)"), &r13));
    if r12.is_zero() || r13.is_zero() {
        return Ok((MultiPoly::zero(&point_vars(3)), logs));
    }
    let r = r12.eliminate(&r13, free)?;
    logs.push(log(&format!("{fixed}=1: Res_{free}"), &r));
    let r = r.with_vars(&point_vars(3))?;
    let r = strip_powers(&r, fz);
    logs.push(log(&format!("{fixed}=1: stripped"), &r));
    Ok((r, logs))
}

/// A polynomial vanishing at every flecnode of `Z(f)` and on every line
/// contained in `Z(f)`. It may carry extraneous factors.
pub fn flecnode_poly(f: &MultiPoly) -> Result<FlecnodeResult, FlecnodeError> {
    let f = trivariate(f)?;
    let d = f.total_degree();
    if d < 2 {
        return Err(FlecnodeError::DegreeTooLow(d));
    }
    if d > MAX_FLECNODE_DEGREE {
        return Err(FlecnodeError::DegreeTooHigh(d));
    }
    if !f.is_square_free() {
        return Err(FlecnodeError::NotSquareFree);
    }
    let zero = MultiPoly::zero(&point_vars(3));
    let bound = classical_flecnode_degree(d);
    let g1 = f.directional_derivative_form(1)?;
    let g2 = f.directional_derivative_form(2)?;
    let g3 = f.directional_derivative_form(3)?;
    let mut construction_log = vec![log("G1", &g1), log("G2", &g2), log("G3", &g3)];
    if g1.is_zero() || g2.is_zero() || g3.is_zero() {
        construction_log.push(log("some G_k vanishes identically", &zero));
        return Ok(FlecnodeResult {
            fl: zero,
            construction_log,
            true_degree_bound: bound,
        });
    }
    let fz = f.partial_derivative("z")?;
    let seam = [
        fz.clone(),
        fz.partial_derivative("z")?,
        fz.partial_derivative("z")?.partial_derivative("z")?,
    ]
    .into_iter()
    .find(|p| !p.is_zero());
    let Some(seam) = seam else {
        // f does not involve z: every point lies on a vertical line
        construction_log.push(log("f independent of z", &zero));
        return Ok(FlecnodeResult {
            fl: zero,
            construction_log,
            true_degree_bound: bound,
        });
    };
    construction_log.push(log("seam direction (0,0,1)", &seam));

    let gs = [g1, g2, g3];
    let b_gs: [MultiPoly; 3] = gs.clone().map(|g| {
        let i = g.var_index("v1").unwrap();
        g.eval_var(i, &Rational::zero())
    });
    let (a, b) = thread::scope(|s| {
        let ha = s.spawn(|| chart(&gs, "v1", "v2", &fz));
        let hb = s.spawn(|| chart(&b_gs, "v2", "v1", &fz));
        (
            ha.join().expect("chart thread"),
            hb.join().expect("chart thread"),
        )
    });
    let (ra, la) = a?;
    let (rb, lb) = b?;
    construction_log.extend(la);
    construction_log.extend(lb);

    let mut parts: Vec<MultiPoly> = Vec::new();
    for p in [ra, rb, seam] {
        if p.is_zero() {
            construction_log.push(log("chart eliminant vanishes identically", &zero));
            return Ok(FlecnodeResult {
                fl: zero,
                construction_log,
                true_degree_bound: bound,
            });
        }
        if p.is_constant() {
            continue;
        }
        let s = p.square_free_part()?;
        if !parts.iter().any(|q| q.eq_up_to_scalar(&s)) {
            parts.push(s);
        }
    }
    let fl = combine_square_free(&parts);
    construction_log.push(log("fl", &fl));
    Ok(FlecnodeResult {
        fl,
        construction_log,
        true_degree_bound: bound,
    })
}

/// Square-free part of a product of square-free polynomials, dividing out
/// pairwise common factors.
fn combine_square_free(parts: &[MultiPoly]) -> MultiPoly {
    let mut acc = MultiPoly::one(&point_vars(3));
    for p in parts {
        let g = acc.gcd(p);
        let fresh = p.div_exact(&g).expect("gcd divides");
        acc = &acc * &fresh;
    }
    acc.monic()
}

/// True iff `g` vanishes at every point of the line.
pub fn vanishes_on_line(g: &MultiPoly, l: &ProjLine) -> bool {
    let g = if g.arity() == l.dim() {
        g.clone()
    } else {
        match g.with_vars(&point_vars(l.dim())) {
            Ok(h) => h,
            Err(_) => return false,
        }
    };
    g.restrict_to_line(&l.base().coords, l.direction())
        .map(|u| u.is_zero())
        .unwrap_or(false)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RuledVerdict {
    NotRuled {
        #[serde(with = "json::poly")]
        factor: MultiPoly,
        certificate: AffPoint,
        #[serde(with = "json::rational")]
        fl_value: Rational,
    },
    RuledEvidence {
        #[serde(with = "json::poly")]
        factor: MultiPoly,
        fl_is_zero: bool,
    },
}

impl RuledVerdict {
    pub fn is_ruled_evidence(&self) -> bool {
        matches!(self, RuledVerdict::RuledEvidence { .. })
    }
}

/// Per-factor Cayley–Salmon–Monge test. A `NotRuled` verdict carries a
/// rational point of the factor where its flecnode polynomial is nonzero.
pub fn cayley_salmon_test(
    f: &MultiPoly,
    factors: &[MultiPoly],
) -> Result<Vec<RuledVerdict>, FlecnodeError> {
    let f = trivariate(f)?;
    let product = factors
        .iter()
        .try_fold(MultiPoly::one(&point_vars(3)), |acc, q| {
            trivariate(q).map(|q| &acc * &q)
        })?;
    if !product.eq_up_to_scalar(&f) {
        return Err(FlecnodeError::FactorMismatch);
    }
    factors
        .iter()
        .map(|q| verdict_for(&trivariate(q)?))
        .collect()
}

fn verdict_for(q: &MultiPoly) -> Result<RuledVerdict, FlecnodeError> {
    if q.total_degree() <= 1 {
        return Ok(RuledVerdict::RuledEvidence {
            factor: q.clone(),
            fl_is_zero: true,
        });
    }
    let fl = flecnode_poly(q)?.fl;
    if fl.is_zero() || q.divides(&fl)? {
        return Ok(RuledVerdict::RuledEvidence {
            factor: q.clone(),
            fl_is_zero: fl.is_zero(),
        });
    }
    let search = PointSearch {
        want: 60,
        budget: 6000,
        seed: 11,
    };
    for p in rational_points(q, &search) {
        let v = fl.eval(&p.coords)?;
        if !v.is_zero() {
            debug_assert!(q.eval(&p.coords)?.is_zero());
            return Ok(RuledVerdict::NotRuled {
                factor: q.clone(),
                certificate: p,
                fl_value: v,
            });
        }
    }
    Err(FlecnodeError::NoCertificate(q.to_string()))
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "result", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LineExistence {
    /// Every chart of the direction space has a nonzero constant eliminant.
    No { certificates: Vec<String> },
    /// Rational directions of lines through the point contained in the
    /// surface. `exhaustive` is set when every candidate was resolved.
    Witness {
        #[serde(with = "json::rational_vecs")]
        directions: Vec<Vec<Rational>>,
        exhaustive: bool,
    },
    /// Elimination does not rule out a solution, but none is rational.
    /// `real_candidates` counts real roots of the univariate eliminants
    /// when they are finite.
    ResultantZero { real_candidates: Option<usize> },
}

impl LineExistence {
    pub fn witnesses(&self) -> &[Vec<Rational>] {
        match self {
            LineExistence::Witness { directions, .. } => directions,
            _ => &[],
        }
    }
}

struct ChartOutcome {
    found: Vec<Vec<Rational>>,
    certificate: Option<String>,
    unresolved: bool,
    real_candidates: Option<usize>,
}

fn univariate_common(forms: &[UniPoly]) -> UniPoly {
    forms
        .iter()
        .filter(|u| !u.is_zero())
        .fold(UniPoly::zero(), |acc, u| acc.gcd(u))
}

fn resolve_univariate(
    g: &UniPoly,
    label: &str,
    lift: impl Fn(&Rational) -> Vec<Rational>,
) -> ChartOutcome {
    if g.is_zero() {
        // all forms vanish on the whole chart; cannot happen for f ≠ 0 at a chart of dimension 1
        return ChartOutcome {
            found: vec![lift(&rat(0))],
            certificate: None,
            unresolved: true,
            real_candidates: None,
        };
    }
    if g.degree() == Some(0) {
        return ChartOutcome {
            found: Vec::new(),
            certificate: Some(format!(
                "{label}: gcd of the restricted forms is a nonzero constant"
            )),
            unresolved: false,
            real_candidates: Some(0),
        };
    }
    let roots = g.rational_roots();
    let sf = g.square_free_part();
    let irrational = sf.degree().unwrap_or(0) > roots.len();
    let real = sf.real_root_count() - roots.len();
    ChartOutcome {
        found: roots.iter().map(lift).collect(),
        certificate: None,
        unresolved: irrational,
        real_candidates: Some(real),
    }
}

/// Decides whether a line through `p` lies in `Z(f)`, i.e. whether some
/// direction `v` kills every Taylor form `f_k(v)`, `1 ≤ k ≤ deg f`.
pub fn lines_through_point_exist(
    f: &MultiPoly,
    p: &AffPoint,
) -> Result<LineExistence, FlecnodeError> {
    let n = p.dim();
    let f = f
        .with_vars(&point_vars(n))
        .map_err(|_| FlecnodeError::NotTrivariate(f.vars().to_vec()))?;
    if !f.eval(&p.coords)?.is_zero() {
        return Err(FlecnodeError::PointNotOnSurface);
    }
    if n != 3 {
        return Err(FlecnodeError::NotTrivariate(f.vars().to_vec()));
    }
    let comps = f.taylor_components(&p.coords)?;
    let forms: Vec<MultiPoly> = comps.into_iter().skip(1).filter(|c| !c.is_zero()).collect();
    let vars = point_vars(3);

    let mut outcomes = Vec::new();
    // chart A: v = (1, a, b) with a ↦ y, b ↦ z
    let fa: Vec<MultiPoly> = forms.iter().map(|g| g.eval_var(0, &rat(1))).collect();
    outcomes.push(chart_bivariate(&fa, &vars));
    // chart B: v = (0, 1, b)
    let fb: Vec<UniPoly> = forms
        .iter()
        .map(|g| {
            g.restrict_to_line(&[rat(0), rat(1), rat(0)], &[rat(0), rat(0), rat(1)])
                .expect("arity 3")
        })
        .collect();
    outcomes.push(resolve_univariate(
        &univariate_common(&fb),
        "chart v=(0,1,b)",
        |b| vec![rat(0), rat(1), b.clone()],
    ));
    // direction (0, 0, 1)
    let c_ok = forms
        .iter()
        .all(|g| g.eval(&[rat(0), rat(0), rat(1)]).unwrap().is_zero());
    outcomes.push(ChartOutcome {
        found: if c_ok {
            vec![vec![rat(0), rat(0), rat(1)]]
        } else {
            Vec::new()
        },
        certificate: (!c_ok).then(|| "direction (0,0,1): some form is nonzero".to_string()),
        unresolved: false,
        real_candidates: Some(0),
    });

    let mut directions: Vec<Vec<Rational>> = Vec::new();
    let mut unresolved = false;
    let mut real = Some(0usize);
    let mut certificates = Vec::new();
    for o in outcomes {
        for v in o.found {
            let line = ProjLine::new(p.clone(), v.clone())?;
            if vanishes_on_line(&f, &line) && !directions.contains(&line.direction().to_vec()) {
                directions.push(line.direction().to_vec());
            }
        }
        unresolved |= o.unresolved;
        real = match (real, o.real_candidates) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        certificates.extend(o.certificate);
    }
    if !directions.is_empty() {
        return Ok(LineExistence::Witness {
            directions,
            exhaustive: !unresolved,
        });
    }
    if unresolved {
        return Ok(LineExistence::ResultantZero {
            real_candidates: real,
        });
    }
    Ok(LineExistence::No { certificates })
}

/// Chart `v1 = 1` with forms in the variables `y, z` (standing for `a, b`).
fn chart_bivariate(forms: &[MultiPoly], vars: &[String]) -> ChartOutcome {
    let label = "chart v=(1,a,b)";
    if forms
        .iter()
        .any(|g| g.as_constant().is_some_and(|c| !c.is_zero()))
    {
        return ChartOutcome {
            found: Vec::new(),
            certificate: Some(format!("{label}: a form is a nonzero constant")),
            unresolved: false,
            real_candidates: Some(0),
        };
    }
    let common = forms
        .iter()
        .fold(MultiPoly::zero(vars), |acc, g| acc.gcd(g));
    if !common.is_constant() {
        // a curve of directions: sample rational points on it
        return sample_curve(&common, forms);
    }
    // eliminate b (z) pairwise, then combine the univariate eliminants in a (y)
    let mut h: Option<UniPoly> = None;
    for i in 0..forms.len() {
        for j in i + 1..forms.len() {
            let Ok(r) = forms[i].eliminate(&forms[j], "z") else {
                continue;
            };
            if r.is_zero() {
                continue;
            }
            let u = r.to_univariate(1).expect("eliminant in a only");
            h = Some(match h {
                None => u.monic(),
                Some(acc) => acc.gcd(&u),
            });
        }
    }
    let Some(h) = h else {
        return ChartOutcome {
            found: Vec::new(),
            certificate: None,
            unresolved: true,
            real_candidates: None,
        };
    };
    if h.degree() == Some(0) {
        return ChartOutcome {
            found: Vec::new(),
            certificate: Some(format!("{label}: resultant chain is a nonzero constant")),
            unresolved: false,
            real_candidates: Some(0),
        };
    }
    let mut found = Vec::new();
    let mut unresolved = false;
    let mut real = 0;
    let roots = h.rational_roots();
    let sf = h.square_free_part();
    if sf.degree().unwrap_or(0) > roots.len() {
        unresolved = true;
        real += sf.real_root_count() - roots.len();
    }
    for a in &roots {
        let sub: Vec<UniPoly> = forms
            .iter()
            .map(|g| {
                g.restrict_to_line(&[rat(0), a.clone(), rat(0)], &[rat(0), rat(0), rat(1)])
                    .expect("arity 3")
            })
            .collect();
        let o = resolve_univariate(&univariate_common(&sub), label, |b| {
            vec![rat(1), a.clone(), b.clone()]
        });
        found.extend(o.found);
        unresolved |= o.unresolved;
        real += o.real_candidates.unwrap_or(0);
    }
    ChartOutcome {
        found,
        certificate: None,
        unresolved,
        real_candidates: Some(real),
    }
}

fn sample_curve(common: &MultiPoly, forms: &[MultiPoly]) -> ChartOutcome {
    let mut found = Vec::new();
    let candidates: Vec<Rational> = (-6..=6)
        .flat_map(|n| (1..=3).map(move |d| Rational::new(n.into(), d.into())))
        .collect();
    let mut seen = std::collections::HashSet::new();
    for a in candidates {
        if !seen.insert(a.clone()) {
            continue;
        }
        let u = common
            .restrict_to_line(&[rat(0), a.clone(), rat(0)], &[rat(0), rat(0), rat(1)])
            .expect("arity 3");
        for b in u.rational_roots() {
            let v = [rat(1), a.clone(), b.clone()];
            if forms.iter().all(|g| g.eval(&v).unwrap().is_zero()) {
                found.push(v.to_vec());
            }
        }
        if found.len() >= 8 {
            break;
        }
    }
    ChartOutcome {
        found,
        certificate: None,
        unresolved: true,
        real_candidates: None,
    }
}

/// Tangent-plane directions at a smooth point, as a rational basis.
pub fn tangent_basis(f: &MultiPoly, p: &AffPoint) -> Result<Vec<Vec<Rational>>, FlecnodeError> {
    let g: Vec<Rational> = f
        .gradient()
        .iter()
        .map(|d| d.eval(&p.coords))
        .collect::<Result<_, _>>()?;
    Ok(nullspace(&[g], p.dim()))
}
