//! Exact points, lines, 2-flats and hyperplanes in affine d-space, with
//! Plücker coordinates for lines in 3-space.

pub mod linalg;
mod projection;

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::json;
use crate::poly::{rat, Rational};
use linalg::{add, cross, dot, rank, rref, scale, sub};

pub use projection::{project_generic, Projection, ProjectionInput};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("points are identical")]
    IdenticalPoints,
    #[error("direction vector is zero")]
    ZeroDirection,
    #[error("line is contained in the plane")]
    LineInPlane,
    #[error("lines are skew")]
    Skew,
    #[error("lines are identical")]
    IdenticalLines,
    #[error("hyperplane has no linear part")]
    DegenerateHyperplane,
    #[error("operation requires ambient dimension {0}")]
    NeedsDimension(usize),
    #[error("generic projection failed after {0} attempts")]
    RetriesExhausted(u32),
}

/// Point of affine d-space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AffPoint {
    #[serde(with = "json::rational_vec")]
    pub coords: Vec<Rational>,
}

impl AffPoint {
    pub fn new(coords: Vec<Rational>) -> Self {
        AffPoint { coords }
    }

    pub fn from_ints(v: &[i64]) -> Self {
        AffPoint::new(v.iter().map(|&x| rat(x)).collect())
    }

    pub fn origin(d: usize) -> Self {
        AffPoint::new(vec![Rational::zero(); d])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

impl fmt::Display for AffPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(json::rational_to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Plücker six-tuple `(π01, π02, π03, π23, π31, π12)`.
pub type Plucker = [Rational; 6];

/// Plücker coordinates of the line through two points of 3-space, from
/// the 2×2 minors of their homogeneous coordinates `(1, x)` and `(1, y)`.
pub fn plucker_from_points(x: &AffPoint, y: &AffPoint) -> Plucker {
    let hx = [
        Rational::one(),
        x.coords[0].clone(),
        x.coords[1].clone(),
        x.coords[2].clone(),
    ];
    let hy = [
        Rational::one(),
        y.coords[0].clone(),
        y.coords[1].clone(),
        y.coords[2].clone(),
    ];
    let pi = |i: usize, j: usize| &hx[i] * &hy[j] - &hx[j] * &hy[i];
    [pi(0, 1), pi(0, 2), pi(0, 3), pi(2, 3), pi(3, 1), pi(1, 2)]
}

/// `π01·π23 + π02·π31 + π03·π12`; zero exactly on Plücker tuples of lines.
pub fn klein_form(p: &Plucker) -> Rational {
    &p[0] * &p[3] + &p[1] * &p[4] + &p[2] * &p[5]
}

/// Affine line `base + t·direction`, kept canonical: the first nonzero
/// entry of `direction` is 1 and `base` is zero in that coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "LineRepr", into = "LineRepr")]
pub struct ProjLine {
    base: AffPoint,
    direction: Vec<Rational>,
    plucker: Option<Plucker>,
}

#[derive(Serialize, Deserialize)]
struct LineRepr {
    base: AffPoint,
    #[serde(with = "json::rational_vec")]
    direction: Vec<Rational>,
}

impl TryFrom<LineRepr> for ProjLine {
    type Error = GeomError;
    fn try_from(r: LineRepr) -> Result<Self, GeomError> {
        ProjLine::new(r.base, r.direction)
    }
}

impl From<ProjLine> for LineRepr {
    fn from(l: ProjLine) -> Self {
        LineRepr {
            base: l.base,
            direction: l.direction,
        }
    }
}

impl ProjLine {
    pub fn new(base: AffPoint, direction: Vec<Rational>) -> Result<Self, GeomError> {
        if base.dim() != direction.len() {
            return Err(GeomError::DimensionMismatch(base.dim(), direction.len()));
        }
        let piv = direction
            .iter()
            .position(|c| !c.is_zero())
            .ok_or(GeomError::ZeroDirection)?;
        let dir = scale(&direction, &direction[piv].recip());
        let shift = base.coords[piv].clone();
        let b = sub(&base.coords, &scale(&dir, &shift));
        let base = AffPoint::new(b);
        let plucker = (base.dim() == 3).then(|| {
            let m = cross(&base.coords, &dir);
            [
                dir[0].clone(),
                dir[1].clone(),
                dir[2].clone(),
                m[0].clone(),
                m[1].clone(),
                m[2].clone(),
            ]
        });
        let line = ProjLine {
            base,
            direction: dir,
            plucker,
        };
        if let Some(p) = &line.plucker {
            let q = plucker_from_points(&line.base, &line.point_at(&Rational::one()));
            debug_assert_eq!(p, &q, "Plücker tuple disagrees with base/direction");
        }
        Ok(line)
    }

    pub fn from_ints(base: &[i64], dir: &[i64]) -> Result<Self, GeomError> {
        ProjLine::new(
            AffPoint::from_ints(base),
            dir.iter().map(|&x| rat(x)).collect(),
        )
    }

    pub fn base(&self) -> &AffPoint {
        &self.base
    }

    pub fn direction(&self) -> &[Rational] {
        &self.direction
    }

    pub fn plucker(&self) -> Option<&Plucker> {
        self.plucker.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn point_at(&self, t: &Rational) -> AffPoint {
        AffPoint::new(add(&self.base.coords, &scale(&self.direction, t)))
    }

    pub fn contains(&self, p: &AffPoint) -> bool {
        point_on_line(p, self)
    }

    /// Parameter `t` with `point_at(t) = p`, when `p` lies on the line.
    pub fn parameter_of(&self, p: &AffPoint) -> Option<Rational> {
        if !self.contains(p) {
            return None;
        }
        let piv = self.direction.iter().position(|c| !c.is_zero())?;
        Some(&p.coords[piv] - &self.base.coords[piv])
    }
}

impl fmt::Display for ProjLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = AffPoint::new(self.direction.clone());
        write!(f, "{} + t{}", self.base, d)
    }
}

/// Homogeneous hyperplane `A0 + A1 x1 + … + Ad xd = 0`, scaled so the first
/// nonzero linear coefficient is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HyperplaneH {
    #[serde(with = "json::rational_vec")]
    coeffs: Vec<Rational>,
}

impl HyperplaneH {
    pub fn new(coeffs: Vec<Rational>) -> Result<Self, GeomError> {
        let piv = coeffs
            .iter()
            .skip(1)
            .position(|c| !c.is_zero())
            .ok_or(GeomError::DegenerateHyperplane)?
            + 1;
        let inv = coeffs[piv].recip();
        Ok(HyperplaneH {
            coeffs: scale(&coeffs, &inv),
        })
    }

    pub fn from_ints(c: &[i64]) -> Result<Self, GeomError> {
        HyperplaneH::new(c.iter().map(|&x| rat(x)).collect())
    }

    /// Hyperplane `normal · (x − p) = 0`.
    pub fn through(p: &AffPoint, normal: &[Rational]) -> Result<Self, GeomError> {
        let mut c = vec![-dot(normal, &p.coords)];
        c.extend(normal.iter().cloned());
        HyperplaneH::new(c)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn normal(&self) -> &[Rational] {
        &self.coeffs[1..]
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, p: &AffPoint) -> Rational {
        &self.coeffs[0] + dot(self.normal(), &p.coords)
    }

    pub fn contains(&self, p: &AffPoint) -> bool {
        self.eval(p).is_zero()
    }

    pub fn contains_line(&self, l: &ProjLine) -> bool {
        self.contains(l.base()) && dot(self.normal(), l.direction()).is_zero()
    }
}

/// Point of projective d-space in homogeneous coordinates `(x0, x1, …, xd)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProjPoint {
    #[serde(with = "json::rational_vec")]
    pub coords: Vec<Rational>,
}

impl ProjPoint {
    pub fn is_at_infinity(&self) -> bool {
        self.coords[0].is_zero()
    }

    pub fn to_affine(&self) -> Option<AffPoint> {
        if self.is_at_infinity() {
            return None;
        }
        let inv = self.coords[0].recip();
        Some(AffPoint::new(scale(&self.coords[1..], &inv)))
    }

    /// Equality as projective points.
    pub fn same_point(&self, other: &ProjPoint) -> bool {
        rank(&[self.coords.clone(), other.coords.clone()]) == 1
    }
}

/// Canonical affine 2-flat: reduced row echelon span and a base point that
/// vanishes on the pivot coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Flat2 {
    base: AffPoint,
    #[serde(with = "json::rational_vecs")]
    span: Vec<Vec<Rational>>,
}

impl Flat2 {
    pub fn new(base: AffPoint, u: Vec<Rational>, v: Vec<Rational>) -> Result<Self, GeomError> {
        let (span, pivots) = rref(&[u, v]);
        if span.len() != 2 {
            return Err(GeomError::ZeroDirection);
        }
        let mut b = base.coords;
        for (row, &pc) in span.iter().zip(&pivots) {
            let c = b[pc].clone();
            if !c.is_zero() {
                b = sub(&b, &scale(row, &c));
            }
        }
        Ok(Flat2 {
            base: AffPoint::new(b),
            span,
        })
    }

    pub fn base(&self) -> &AffPoint {
        &self.base
    }

    pub fn span(&self) -> &[Vec<Rational>] {
        &self.span
    }

    pub fn contains_vector(&self, v: &[Rational]) -> bool {
        let mut rows = self.span.clone();
        rows.push(v.to_vec());
        rank(&rows) == 2
    }

    pub fn contains_point(&self, p: &AffPoint) -> bool {
        self.contains_vector(&sub(&p.coords, &self.base.coords))
    }

    pub fn contains_line(&self, l: &ProjLine) -> bool {
        self.contains_point(l.base()) && self.contains_vector(l.direction())
    }
}

pub fn line_from_points(x: &AffPoint, y: &AffPoint) -> Result<ProjLine, GeomError> {
    if x.dim() != y.dim() {
        return Err(GeomError::DimensionMismatch(x.dim(), y.dim()));
    }
    if x == y {
        return Err(GeomError::IdenticalPoints);
    }
    ProjLine::new(x.clone(), sub(&y.coords, &x.coords))
}

pub fn point_on_line(p: &AffPoint, l: &ProjLine) -> bool {
    if p.dim() != l.dim() {
        return false;
    }
    let diff = sub(&p.coords, &l.base.coords);
    let piv = l.direction.iter().position(|c| !c.is_zero()).unwrap();
    let t = &diff[piv];
    diff.iter().zip(&l.direction).all(|(a, d)| *a == t * d)
}

/// Intersection of a line in 3-space with a plane, as the homogeneous point
/// `(A·d, A×m − A0·d)` where `d` is the direction, `m = base × d` and
/// `A = (A1, A2, A3)`. The result is re-checked against both inputs.
pub fn line_plane_intersection(l: &ProjLine, h: &HyperplaneH) -> Result<ProjPoint, GeomError> {
    if l.dim() != 3 {
        return Err(GeomError::NeedsDimension(3));
    }
    if h.dim() != 3 {
        return Err(GeomError::DimensionMismatch(h.dim(), 3));
    }
    if h.contains_line(l) {
        return Err(GeomError::LineInPlane);
    }
    let pl = l
        .plucker()
        .expect("3-space line carries Plücker coordinates");
    let d = &pl[0..3];
    let m = &pl[3..6];
    let a = h.normal();
    let a0 = &h.coeffs()[0];
    let mut coords = vec![dot(a, d)];
    coords.extend(sub(&cross(a, m), &scale(d, a0)));
    let out = ProjPoint { coords };
    match out.to_affine() {
        Some(p) => {
            assert!(
                h.contains(&p) && l.contains(&p),
                "intersection re-check failed"
            );
        }
        None => {
            assert!(
                dot(a, &out.coords[1..]).is_zero(),
                "point at infinity not on plane"
            );
        }
    }
    Ok(out)
}

/// Independent oracle: solve `A0 + A·(b + t d) = 0` for `t`.
pub fn line_plane_intersection_parametric(
    l: &ProjLine,
    h: &HyperplaneH,
) -> Result<ProjPoint, GeomError> {
    if h.contains_line(l) {
        return Err(GeomError::LineInPlane);
    }
    let ad = dot(h.normal(), l.direction());
    if ad.is_zero() {
        let mut coords = vec![Rational::zero()];
        coords.extend(l.direction().iter().cloned());
        return Ok(ProjPoint { coords });
    }
    let t = -h.eval(l.base()) / ad;
    let p = l.point_at(&t);
    let mut coords = vec![Rational::one()];
    coords.extend(p.coords);
    Ok(ProjPoint { coords })
}

/// True iff the two distinct lines lie in a common 2-flat (they meet or are
/// parallel).
pub fn lines_coplanar(l1: &ProjLine, l2: &ProjLine) -> Result<bool, GeomError> {
    if l1.dim() != l2.dim() {
        return Err(GeomError::DimensionMismatch(l1.dim(), l2.dim()));
    }
    if l1 == l2 {
        return Err(GeomError::IdenticalLines);
    }
    Ok(rank(&[
        l1.direction.clone(),
        l2.direction.clone(),
        sub(&l2.base.coords, &l1.base.coords),
    ]) <= 2)
}

pub fn lines_parallel(l1: &ProjLine, l2: &ProjLine) -> bool {
    l1.direction == l2.direction
}

pub fn span_2flat(l1: &ProjLine, l2: &ProjLine) -> Result<Flat2, GeomError> {
    if !lines_coplanar(l1, l2)? {
        return Err(GeomError::Skew);
    }
    let second = if lines_parallel(l1, l2) {
        sub(&l2.base.coords, &l1.base.coords)
    } else {
        l2.direction.clone()
    };
    let flat = Flat2::new(l1.base.clone(), l1.direction.clone(), second)?;
    debug_assert!(flat.contains_line(l1) && flat.contains_line(l2));
    Ok(flat)
}

/// Unique common point of two distinct lines, if any.
pub fn line_intersection(l1: &ProjLine, l2: &ProjLine) -> Option<AffPoint> {
    if l1 == l2 || lines_parallel(l1, l2) || !lines_coplanar(l1, l2).ok()? {
        return None;
    }
    // b1 + s d1 = b2 + t d2: pick two coordinates where the 2×2 system is regular
    let d1 = &l1.direction;
    let d2 = &l2.direction;
    let rhs = sub(&l2.base.coords, &l1.base.coords);
    let n = d1.len();
    for i in 0..n {
        for j in i + 1..n {
            let det = &d1[i] * -&d2[j] + &d2[i] * &d1[j];
            if det.is_zero() {
                continue;
            }
            let s = (&rhs[i] * -&d2[j] + &d2[i] * &rhs[j]) / &det;
            let p = l1.point_at(&s);
            debug_assert!(l2.contains(&p));
            return Some(p);
        }
    }
    None
}

/// Three lines are non-coplanar when no single 2-flat contains all of them.
pub fn lines_non_coplanar(a: &ProjLine, b: &ProjLine, c: &ProjLine) -> bool {
    rank(&[
        a.direction.clone(),
        b.direction.clone(),
        c.direction.clone(),
        sub(&b.base.coords, &a.base.coords),
        sub(&c.base.coords, &a.base.coords),
    ]) > 2
}

/// True iff the lines are pairwise non-coplanar.
pub fn pairwise_skew(lines: &[&ProjLine]) -> bool {
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            if lines[i] == lines[j] || lines_coplanar(lines[i], lines[j]).unwrap_or(true) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ratio;

    fn pt(v: &[i64]) -> AffPoint {
        AffPoint::from_ints(v)
    }

    #[test]
    fn line_from_points_examples() {
        let l = line_from_points(&pt(&[0, 0, 0]), &pt(&[1, 0, 0])).unwrap();
        let expected: Plucker = [rat(1), rat(0), rat(0), rat(0), rat(0), rat(0)];
        assert_eq!(l.plucker().unwrap(), &expected);
        let l = line_from_points(&pt(&[0, 0, 0]), &pt(&[0, 1, 0])).unwrap();
        assert_eq!(l.direction(), &[rat(0), rat(1), rat(0)]);
        assert_eq!(
            line_from_points(&pt(&[1, 2, 3]), &pt(&[1, 2, 3])),
            Err(GeomError::IdenticalPoints)
        );
        let l = line_from_points(&pt(&[1, 2, 3]), &pt(&[4, -1, 7])).unwrap();
        assert!(klein_form(l.plucker().unwrap()).is_zero());
    }

    #[test]
    fn canonical_lines_compare_equal() {
        let a = line_from_points(&pt(&[0, 0, 0]), &pt(&[2, 2, 2])).unwrap();
        let b = line_from_points(&pt(&[5, 5, 5]), &pt(&[-1, -1, -1])).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn point_on_line_examples() {
        let l = ProjLine::from_ints(&[0, 0, 0], &[2, 3, 6]).unwrap();
        assert!(point_on_line(&pt(&[2, 3, 6]), &l));
        assert!(!point_on_line(&pt(&[1, 1, 2]), &l));
        let half = AffPoint::new(vec![rat(1), ratio(3, 2), rat(3)]);
        assert!(point_on_line(&half, &l));
    }

    #[test]
    fn line_plane_examples() {
        let x_axis = ProjLine::from_ints(&[0, 0, 0], &[1, 0, 0]).unwrap();
        let plane = HyperplaneH::from_ints(&[-1, 1, 0, 0]).unwrap();
        let p = line_plane_intersection(&x_axis, &plane).unwrap();
        assert_eq!(p.to_affine().unwrap(), pt(&[1, 0, 0]));

        let l = ProjLine::from_ints(&[0, 0, 1], &[1, 1, 0]).unwrap();
        let z1 = HyperplaneH::from_ints(&[-1, 0, 0, 1]).unwrap();
        assert_eq!(
            line_plane_intersection(&l, &z1),
            Err(GeomError::LineInPlane)
        );

        let l = ProjLine::from_ints(&[1, 0, 0], &[0, 1, 1]).unwrap();
        let y2 = HyperplaneH::from_ints(&[-2, 0, 1, 0]).unwrap();
        let p = line_plane_intersection(&l, &y2).unwrap();
        assert_eq!(p.to_affine().unwrap(), pt(&[1, 2, 2]));
        assert!(p.same_point(&line_plane_intersection_parametric(&l, &y2).unwrap()));
    }

    #[test]
    fn parallel_line_meets_plane_at_infinity() {
        let l = ProjLine::from_ints(&[0, 0, 0], &[1, 1, 0]).unwrap();
        let z1 = HyperplaneH::from_ints(&[-1, 0, 0, 1]).unwrap();
        let p = line_plane_intersection(&l, &z1).unwrap();
        assert!(p.is_at_infinity());
        assert!(p.same_point(&line_plane_intersection_parametric(&l, &z1).unwrap()));
    }

    #[test]
    fn coplanarity_examples() {
        let x_axis = ProjLine::from_ints(&[0, 0, 0], &[1, 0, 0]).unwrap();
        let y_axis = ProjLine::from_ints(&[0, 0, 0], &[0, 1, 0]).unwrap();
        assert!(lines_coplanar(&x_axis, &y_axis).unwrap());
        // rulings (a, t, a t) of z = xy
        let r0 = ProjLine::from_ints(&[0, 0, 0], &[0, 1, 0]).unwrap();
        let r1 = ProjLine::from_ints(&[1, 0, 0], &[0, 1, 1]).unwrap();
        assert!(!lines_coplanar(&r0, &r1).unwrap());
        let p1 = ProjLine::from_ints(&[0, 0, 0], &[0, 1, 0]).unwrap();
        let p2 = ProjLine::from_ints(&[3, 0, 5], &[0, 1, 0]).unwrap();
        assert!(lines_coplanar(&p1, &p2).unwrap());
        assert_eq!(lines_coplanar(&p1, &p1), Err(GeomError::IdenticalLines));
    }

    #[test]
    fn span_examples() {
        let x_axis = ProjLine::from_ints(&[0, 0, 0], &[1, 0, 0]).unwrap();
        let y_axis = ProjLine::from_ints(&[0, 0, 0], &[0, 1, 0]).unwrap();
        let f = span_2flat(&x_axis, &y_axis).unwrap();
        let xy = Flat2::new(
            pt(&[5, 7, 0]),
            vec![rat(1), rat(1), rat(0)],
            vec![rat(1), rat(-1), rat(0)],
        )
        .unwrap();
        assert_eq!(f, xy);
        // parallel cylinder rulings (a, a², t)
        let c1 = ProjLine::from_ints(&[1, 1, 0], &[0, 0, 1]).unwrap();
        let c2 = ProjLine::from_ints(&[2, 4, 0], &[0, 0, 1]).unwrap();
        let f = span_2flat(&c1, &c2).unwrap();
        assert!(f.contains_line(&c1) && f.contains_line(&c2));
        let c3 = ProjLine::from_ints(&[3, 9, 0], &[0, 0, 1]).unwrap();
        assert!(!f.contains_line(&c3));
        let skew = ProjLine::from_ints(&[0, 0, 1], &[0, 1, 0]).unwrap();
        assert_eq!(span_2flat(&x_axis, &skew).unwrap_err(), GeomError::Skew);
    }

    #[test]
    fn intersection_of_lines() {
        let a = ProjLine::from_ints(&[1, 0, 0], &[0, 1, 1]).unwrap();
        let b = ProjLine::from_ints(&[0, 2, 0], &[1, 0, 2]).unwrap();
        assert_eq!(line_intersection(&a, &b), Some(pt(&[1, 2, 2])));
        let c = ProjLine::from_ints(&[0, 0, 0], &[0, 1, 0]).unwrap();
        assert_eq!(line_intersection(&a, &c), None);
    }

    #[test]
    fn json_round_trip() {
        let l = ProjLine::new(
            AffPoint::new(vec![ratio(1, 2), rat(0), rat(-3)]),
            vec![rat(0), rat(2), ratio(2, 3)],
        )
        .unwrap();
        let s = serde_json::to_string(&l).unwrap();
        assert_eq!(
            s,
            r#"{"base":["1/2","0","-3"],"direction":["0","1","1/3"]}"#
        );
        let back: ProjLine = serde_json::from_str(&s).unwrap();
        assert_eq!(back, l);
    }
}
