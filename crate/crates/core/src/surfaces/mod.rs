//! Local analysis of hypersurfaces (singular points, multiplicity, tangent
//! planes, flat points, intersection multiplicity) and the surface model
//! shared by the incidence procedures.

mod quadric;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::flecnode::vanishes_on_line;
use crate::geometry::linalg::{add, nullspace};
use crate::geometry::{AffPoint, GeomError, HyperplaneH, ProjLine};
use crate::json;
use crate::poly::{point_vars, MultiPoly, PolyError, Rational};

pub use quadric::{classify_quadric, regulus_through, QuadricClass, QuadricKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("point is not on the zero set")]
    PointNotOnSurface,
    #[error("point is singular")]
    SingularPoint,
    #[error("line is contained in the curve")]
    LineInCurve,
    #[error("expected a polynomial in {expected} variables, got {got:?}")]
    WrongArity { expected: usize, got: Vec<String> },
    #[error("expected degree {expected}, got {got}")]
    WrongDegree { expected: u32, got: u32 },
    #[error("polynomial is not square-free")]
    NotSquareFree,
    #[error("lines {0} and {1} are coplanar")]
    CoplanarPair(usize, usize),
    #[error("quadrics through the lines form a space of dimension {0}, expected 1")]
    DegenerateSolution(usize),
    #[error("product of the factors differs from f")]
    FactorMismatch,
    #[error("component {index}: {reason}")]
    BadMeta { index: usize, reason: String },
}

/// Embeds `f` in the point variables of dimension `d`.
pub(crate) fn embed(f: &MultiPoly, d: usize) -> Result<MultiPoly, SurfaceError> {
    f.with_vars(&point_vars(d))
        .map_err(|_| SurfaceError::WrongArity {
            expected: d,
            got: f.vars().to_vec(),
        })
}

fn on_surface(f: &MultiPoly, p: &AffPoint) -> Result<MultiPoly, SurfaceError> {
    let f = embed(f, p.dim())?;
    if !f.eval(&p.coords)?.is_zero() {
        return Err(SurfaceError::PointNotOnSurface);
    }
    Ok(f)
}

fn gradient_at(f: &MultiPoly, p: &AffPoint) -> Result<Vec<Rational>, SurfaceError> {
    Ok(f.gradient()
        .iter()
        .map(|g| g.eval(&p.coords))
        .collect::<Result<_, _>>()?)
}

pub fn is_singular_point(f: &MultiPoly, p: &AffPoint) -> Result<bool, SurfaceError> {
    let f = on_surface(f, p)?;
    Ok(gradient_at(&f, p)?.iter().all(|c| c.is_zero()))
}

/// Order of the first nonzero Taylor component of `f` at `p`.
pub fn multiplicity_at(f: &MultiPoly, p: &AffPoint) -> Result<u32, SurfaceError> {
    let f = on_surface(f, p)?;
    let comps = f.taylor_components(&p.coords)?;
    let mu = comps
        .iter()
        .position(|c| !c.is_zero())
        .expect("a nonzero polynomial has a nonzero Taylor component");
    Ok(mu as u32)
}

pub fn tangent_plane(f: &MultiPoly, p: &AffPoint) -> Result<HyperplaneH, SurfaceError> {
    let f = on_surface(f, p)?;
    let g = gradient_at(&f, p)?;
    if g.iter().all(|c| c.is_zero()) {
        return Err(SurfaceError::SingularPoint);
    }
    Ok(HyperplaneH::through(p, &g)?)
}

/// True iff the second Taylor component vanishes on the tangent space.
///
/// A quadratic form vanishes on a subspace exactly when it vanishes on every
/// basis vector and on every pairwise sum of basis vectors.
pub fn is_flat_point(f: &MultiPoly, p: &AffPoint) -> Result<bool, SurfaceError> {
    let f = on_surface(f, p)?;
    let g = gradient_at(&f, p)?;
    if g.iter().all(|c| c.is_zero()) {
        return Err(SurfaceError::SingularPoint);
    }
    let basis = nullspace(&[g], p.dim());
    let f2 = f
        .taylor_components(&p.coords)?
        .into_iter()
        .nth(2)
        .unwrap_or_else(|| MultiPoly::zero(f.vars()));
    for (i, b) in basis.iter().enumerate() {
        if !f2.eval(b)?.is_zero() {
            return Ok(false);
        }
        for c in &basis[i + 1..] {
            if !f2.eval(&add(b, c))?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Order of vanishing of `t ↦ f(p + t·dir)` at `t = 0` for a plane curve.
pub fn line_curve_intersection_multiplicity(
    f: &MultiPoly,
    l: &ProjLine,
    p: &AffPoint,
) -> Result<usize, SurfaceError> {
    if l.dim() != 2 {
        return Err(SurfaceError::WrongArity {
            expected: 2,
            got: f.vars().to_vec(),
        });
    }
    if !l.contains(p) {
        return Err(SurfaceError::Geom(GeomError::DimensionMismatch(
            p.dim(),
            l.dim(),
        )));
    }
    let f = on_surface(f, p)?;
    let u = f.restrict_to_line(&p.coords, l.direction())?;
    u.order_at_zero().ok_or(SurfaceError::LineInCurve)
}

/// Per-component metadata. `cylinder_direction` marks a cylinder whose
/// generators are the lines in that direction; `cone_apex` marks a cone
/// whose generators are the lines through the apex.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentMeta {
    pub is_plane: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cone_apex: Option<AffPoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub is_regulus: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_vec")]
    pub cylinder_direction: Option<Vec<Rational>>,
}

mod opt_vec {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<Rational>>, s: S) -> Result<S::Ok, S::Error> {
        let strs: Option<Vec<String>> = v
            .as_ref()
            .map(|v| v.iter().map(json::rational_to_string).collect());
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Rational>>, D::Error> {
        let strs = Option::<Vec<String>>::deserialize(d)?;
        strs.map(|v| {
            v.iter()
                .map(|t| crate::poly::parse_rational(t).map_err(serde::de::Error::custom))
                .collect()
        })
        .transpose()
    }
}

/// Generator structure of a singly ruled component in closed form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generators<'a> {
    Cone { apex: &'a AffPoint },
    Cylinder { direction: &'a [Rational] },
}

impl ComponentMeta {
    pub fn generators(&self) -> Option<Generators<'_>> {
        if let Some(apex) = &self.cone_apex {
            return Some(Generators::Cone { apex });
        }
        self.cylinder_direction
            .as_deref()
            .map(|direction| Generators::Cylinder { direction })
    }

    pub fn regulus(&self) -> bool {
        self.is_regulus == Some(true)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct SurfaceRepr {
    dim: usize,
    #[serde(with = "json::poly")]
    f: MultiPoly,
    factors: Vec<String>,
    component_meta: Vec<ComponentMeta>,
}

/// A square-free polynomial with caller-asserted irreducible factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SurfaceRepr", into = "SurfaceRepr")]
pub struct SurfaceModel {
    dim: usize,
    f: MultiPoly,
    factors: Vec<MultiPoly>,
    meta: Vec<ComponentMeta>,
}

impl TryFrom<SurfaceRepr> for SurfaceModel {
    type Error = SurfaceError;

    fn try_from(r: SurfaceRepr) -> Result<Self, SurfaceError> {
        let factors = r
            .factors
            .iter()
            .map(|s| MultiPoly::parse(s))
            .collect::<Result<Vec<_>, _>>()?;
        SurfaceModel::new(r.dim, r.f, factors, r.component_meta)
    }
}

impl From<SurfaceModel> for SurfaceRepr {
    fn from(s: SurfaceModel) -> Self {
        SurfaceRepr {
            dim: s.dim,
            f: s.f,
            factors: s.factors.iter().map(|q| q.to_string()).collect(),
            component_meta: s.meta,
        }
    }
}

impl SurfaceModel {
    /// Validates the factorisation and metadata. Missing metadata entries
    /// are filled with defaults; `is_plane` is derived from the degree.
    pub fn new(
        dim: usize,
        f: MultiPoly,
        factors: Vec<MultiPoly>,
        mut meta: Vec<ComponentMeta>,
    ) -> Result<Self, SurfaceError> {
        let f = embed(&f, dim)?;
        if !f.is_square_free() {
            return Err(SurfaceError::NotSquareFree);
        }
        let factors = if factors.is_empty() {
            vec![f.clone()]
        } else {
            factors
        };
        let factors: Vec<MultiPoly> = factors
            .iter()
            .map(|q| embed(q, dim))
            .collect::<Result<_, _>>()?;
        let prod = factors
            .iter()
            .fold(MultiPoly::one(&point_vars(dim)), |acc, q| &acc * q);
        if !prod.eq_up_to_scalar(&f) {
            return Err(SurfaceError::FactorMismatch);
        }
        meta.resize(factors.len(), ComponentMeta::default());
        for (i, (q, m)) in factors.iter().zip(meta.iter_mut()).enumerate() {
            m.is_plane = q.total_degree() == 1;
            if let Some(apex) = &m.cone_apex {
                if apex.dim() != dim || !is_singular_point(q, apex).unwrap_or(false) {
                    return Err(SurfaceError::BadMeta {
                        index: i,
                        reason: format!("cone apex {apex} is not a singular point of {q}"),
                    });
                }
            }
            if let Some(d) = &m.cylinder_direction {
                if d.len() != dim || d.iter().all(|c| c.is_zero()) {
                    return Err(SurfaceError::BadMeta {
                        index: i,
                        reason: "cylinder direction has the wrong length or is zero".into(),
                    });
                }
                if !cylinder_invariant(q, d)? {
                    return Err(SurfaceError::BadMeta {
                        index: i,
                        reason: format!("{q} is not invariant along the cylinder direction"),
                    });
                }
            }
        }
        Ok(SurfaceModel {
            dim,
            f,
            factors,
            meta,
        })
    }

    pub fn single(dim: usize, f: MultiPoly, meta: ComponentMeta) -> Result<Self, SurfaceError> {
        let q = f.clone();
        SurfaceModel::new(dim, f, vec![q], vec![meta])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn f(&self) -> &MultiPoly {
        &self.f
    }

    pub fn degree(&self) -> u32 {
        self.f.total_degree()
    }

    pub fn factors(&self) -> &[MultiPoly] {
        &self.factors
    }

    pub fn component_meta(&self) -> &[ComponentMeta] {
        &self.meta
    }

    pub fn contains_point(&self, p: &AffPoint) -> bool {
        self.f.eval(&p.coords).map(|v| v.is_zero()).unwrap_or(false)
    }

    pub fn contains_line(&self, l: &ProjLine) -> bool {
        vanishes_on_line(&self.f, l)
    }
}

/// `q(x + t d) - q(x)` is the zero polynomial.
fn cylinder_invariant(q: &MultiPoly, d: &[Rational]) -> Result<bool, SurfaceError> {
    let mut all = q.vars().to_vec();
    all.push("t".to_string());
    let mut moved = q.with_vars(&all)?;
    let t = MultiPoly::var(&all, "t")?;
    for (i, c) in d.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let sub = &MultiPoly::var(&all, &all[i])? + &t.scale(c);
        moved = moved.substitute(i, &sub);
    }
    Ok((&moved - &q.with_vars(&all)?).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn p(s: &str) -> MultiPoly {
        s.parse::<MultiPoly>()
            .unwrap()
            .with_vars(&point_vars(3))
            .unwrap()
    }

    fn pt(v: &[i64]) -> AffPoint {
        AffPoint::from_ints(v)
    }

    #[test]
    fn singular_points() {
        let cone = p("x^2 + y^2 - z^2");
        assert!(is_singular_point(&cone, &pt(&[0, 0, 0])).unwrap());
        assert!(!is_singular_point(&cone, &pt(&[3, 4, 5])).unwrap());
        assert!(!is_singular_point(&p("z - x*y"), &pt(&[2, 3, 6])).unwrap());
        assert_eq!(
            is_singular_point(&cone, &pt(&[1, 0, 0])),
            Err(SurfaceError::PointNotOnSurface)
        );
    }

    #[test]
    fn multiplicities() {
        assert_eq!(
            multiplicity_at(&p("x^2 + y^2 - z^2"), &pt(&[0, 0, 0])).unwrap(),
            2
        );
        assert_eq!(multiplicity_at(&p("z - x*y"), &pt(&[0, 0, 0])).unwrap(), 1);
        assert_eq!(
            multiplicity_at(&p("(z - x*y)*(z + x*y)"), &pt(&[0, 0, 0])).unwrap(),
            2
        );
    }

    #[test]
    fn tangent_planes() {
        let h = tangent_plane(&p("z - x*y"), &pt(&[1, 1, 1])).unwrap();
        assert_eq!(h, HyperplaneH::from_ints(&[1, -1, -1, 1]).unwrap());
        let h = tangent_plane(&p("x^2 + y^2 + z^2 - 1"), &pt(&[1, 0, 0])).unwrap();
        assert_eq!(h, HyperplaneH::from_ints(&[-1, 1, 0, 0]).unwrap());
        assert_eq!(
            tangent_plane(&p("x^2 + y^2 - z^2"), &pt(&[0, 0, 0])),
            Err(SurfaceError::SingularPoint)
        );
    }

    #[test]
    fn flat_points() {
        assert!(is_flat_point(&p("x + y + z"), &pt(&[1, -1, 0])).unwrap());
        assert!(!is_flat_point(&p("z - x*y"), &pt(&[0, 0, 0])).unwrap());
        assert!(!is_flat_point(&p("z - x*y"), &pt(&[1, 1, 1])).unwrap());
        // z = x^3 at the origin: the second-order term vanishes identically
        assert!(is_flat_point(&p("z - x^3"), &pt(&[0, 0, 0])).unwrap());
    }

    #[test]
    fn intersection_multiplicities() {
        let parabola: MultiPoly = "y - x^2".parse().unwrap();
        let o = pt(&[0, 0]);
        let tangent = ProjLine::from_ints(&[0, 0], &[1, 0]).unwrap();
        let vertical = ProjLine::from_ints(&[0, 0], &[0, 1]).unwrap();
        assert_eq!(
            line_curve_intersection_multiplicity(&parabola, &tangent, &o).unwrap(),
            2
        );
        assert_eq!(
            line_curve_intersection_multiplicity(&parabola, &vertical, &o).unwrap(),
            1
        );
        let axis_curve: MultiPoly = "y*(y - x^2)".parse().unwrap();
        assert_eq!(
            line_curve_intersection_multiplicity(&axis_curve, &tangent, &o),
            Err(SurfaceError::LineInCurve)
        );
    }

    #[test]
    fn model_validation() {
        let f = p("(y - x^2)*(x^2 + y^2 - z^2)");
        let meta = vec![
            ComponentMeta {
                cylinder_direction: Some(vec![rat(0), rat(0), rat(1)]),
                ..Default::default()
            },
            ComponentMeta {
                cone_apex: Some(pt(&[0, 0, 0])),
                ..Default::default()
            },
        ];
        let m = SurfaceModel::new(3, f.clone(), vec![p("y - x^2"), p("x^2 + y^2 - z^2")], meta)
            .unwrap();
        let text = serde_json::to_string(&m).unwrap();
        let back: SurfaceModel = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
        assert_eq!(
            SurfaceModel::new(3, f.clone(), vec![p("y - x^2")], vec![]),
            Err(SurfaceError::FactorMismatch)
        );
        let bad = vec![ComponentMeta {
            cone_apex: Some(pt(&[1, 1, 0])),
            ..Default::default()
        }];
        assert!(SurfaceModel::new(3, p("y - x^2"), vec![], bad).is_err());
    }
}
