//! Real quadrics in 3-space: classification through the homogenised 4×4
//! symmetric matrix, and the quadric spanned by three pairwise skew lines.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{embed, is_singular_point, SurfaceError};
use crate::flecnode::{lines_through_point_exist, vanishes_on_line};
use crate::geometry::linalg::{nullspace, rank, Matrix};
use crate::geometry::{lines_coplanar, AffPoint, ProjLine};
use crate::json;
use crate::poly::{point_vars, rat, sign, Monomial, MultiPoly, Rational};
use crate::sampling::{rational_points, PointSearch};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum QuadricKind {
    PlanePair,
    Regulus,
    NonRegulusRuled,
    NoRealLines,
    Cone,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineWitness {
    pub point: AffPoint,
    #[serde(with = "json::rational_vecs")]
    pub directions: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadricClass {
    pub kind: QuadricKind,
    pub rank: usize,
    /// Numbers of positive and negative diagonal entries, larger first.
    pub signature: (usize, usize),
    #[serde(skip_serializing_if = "Option::is_none")]
    pub apex: Option<AffPoint>,
    /// Rational lines through a sampled smooth point, when one was found.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<LineWitness>,
}

/// Symmetric matrix of the homogenisation, coordinates `(x0, x, y, z)`.
fn homogeneous_matrix(f: &MultiPoly) -> Matrix {
    let mut m = vec![vec![Rational::zero(); 4]; 4];
    for (mono, c) in f.terms() {
        let mut idx: Vec<usize> = Vec::with_capacity(2);
        for (i, &e) in mono.0.iter().enumerate() {
            for _ in 0..e {
                idx.push(i + 1);
            }
        }
        while idx.len() < 2 {
            idx.insert(0, 0);
        }
        let (i, j) = (idx[0], idx[1]);
        if i == j {
            m[i][i] += c;
        } else {
            let half = c / rat(2);
            m[i][j] += &half;
            m[j][i] += &half;
        }
    }
    m
}

/// Signs of a diagonal matrix congruent to `a`, zeros dropped.
fn congruence_signs(mut a: Matrix) -> Vec<i8> {
    let n = a.len();
    let mut signs = Vec::new();
    for k in 0..n {
        if let Some(p) = (k..n).find(|&i| !a[i][i].is_zero()) {
            swap_sym(&mut a, k, p);
        } else if let Some((i, j)) = (k..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| !a[i][j].is_zero())
        {
            // row_i += row_j, col_i += col_j leaves a_ii = 2 a_ij ≠ 0
            for c in 0..n {
                let v = a[j][c].clone();
                a[i][c] += v;
            }
            for r in 0..n {
                let v = a[r][j].clone();
                a[r][i] += v;
            }
            swap_sym(&mut a, k, i);
        } else {
            break;
        }
        let pivot = a[k][k].clone();
        for i in k + 1..n {
            let f = &a[i][k] / &pivot;
            if f.is_zero() {
                continue;
            }
            for c in 0..n {
                let v = &f * &a[k][c];
                a[i][c] -= v;
            }
            for r in 0..n {
                let v = &f * &a[r][k];
                a[r][i] -= v;
            }
        }
        signs.push(sign(&pivot));
    }
    signs
}

fn swap_sym(a: &mut Matrix, i: usize, j: usize) {
    if i == j {
        return;
    }
    a.swap(i, j);
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

pub fn classify_quadric(f: &MultiPoly) -> Result<QuadricClass, SurfaceError> {
    let f = embed(f, 3)?;
    if f.total_degree() != 2 {
        return Err(SurfaceError::WrongDegree {
            expected: 2,
            got: f.total_degree(),
        });
    }
    if !f.is_square_free() {
        return Err(SurfaceError::NotSquareFree);
    }
    let m = homogeneous_matrix(&f);
    let signs = congruence_signs(m.clone());
    let pos = signs.iter().filter(|&&s| s > 0).count();
    let neg = signs.iter().filter(|&&s| s < 0).count();
    let r = pos + neg;
    debug_assert_eq!(r, rank(&m));
    let signature = (pos.max(neg), pos.min(neg));
    let kernel = nullspace(&m, 4);
    let affine_kernel_point = kernel
        .iter()
        .find(|v| !v[0].is_zero())
        .map(|v| AffPoint::new(v[1..].iter().map(|c| c / &v[0]).collect()));
    let (kind, apex) = match (r, signature) {
        (4, (2, 2)) => (QuadricKind::Regulus, None),
        (4, _) => (QuadricKind::NoRealLines, None),
        (3, (2, 1)) => match affine_kernel_point {
            Some(p) => (QuadricKind::Cone, Some(p)),
            None => (QuadricKind::NonRegulusRuled, None),
        },
        (3, _) => (QuadricKind::NoRealLines, None),
        (2, (1, 1)) => (QuadricKind::PlanePair, None),
        // two conjugate complex planes: real points only on their common line
        (2, _) => match affine_kernel_point {
            Some(_) => (QuadricKind::PlanePair, None),
            None => (QuadricKind::NoRealLines, None),
        },
        _ => return Err(SurfaceError::NotSquareFree),
    };
    let witness = match kind {
        QuadricKind::NoRealLines => None,
        _ => line_witness(&f),
    };
    Ok(QuadricClass {
        kind,
        rank: r,
        signature,
        apex,
        witness,
    })
}

fn line_witness(f: &MultiPoly) -> Option<LineWitness> {
    let search = PointSearch {
        want: 8,
        budget: 400,
        seed: 5,
    };
    for p in rational_points(f, &search) {
        if is_singular_point(f, &p).unwrap_or(true) {
            continue;
        }
        let found = lines_through_point_exist(f, &p).ok()?;
        if !found.witnesses().is_empty() {
            return Some(LineWitness {
                directions: found.witnesses().to_vec(),
                point: p,
            });
        }
    }
    None
}

/// Monomials of degree at most 2 in three variables.
fn quadric_monomials() -> Vec<Monomial> {
    let mut out = Vec::new();
    for a in 0..=2u32 {
        for b in 0..=2 - a {
            for c in 0..=2 - a - b {
                out.push(Monomial(vec![a, b, c]));
            }
        }
    }
    out
}

/// The quadric containing three pairwise skew lines, normalised to leading
/// coefficient 1. Each line contributes the points at `t = 0, 1, -1`.
pub fn regulus_through(lines: [&ProjLine; 3]) -> Result<MultiPoly, SurfaceError> {
    for l in &lines {
        if l.dim() != 3 {
            return Err(SurfaceError::WrongArity {
                expected: 3,
                got: point_vars(l.dim()),
            });
        }
    }
    for i in 0..3 {
        for j in i + 1..3 {
            if lines_coplanar(lines[i], lines[j]).unwrap_or(true) {
                return Err(SurfaceError::CoplanarPair(i, j));
            }
        }
    }
    let monos = quadric_monomials();
    let mut rows = Vec::with_capacity(9);
    for l in &lines {
        for t in [0, 1, -1] {
            let p = l.point_at(&rat(t));
            let row: Vec<Rational> = monos
                .iter()
                .map(|m| {
                    m.0.iter().zip(&p.coords).fold(rat(1), |acc, (&e, x)| {
                        acc * num_traits::pow(x.clone(), e as usize)
                    })
                })
                .collect();
            rows.push(row);
        }
    }
    let kernel = nullspace(&rows, monos.len());
    if kernel.len() != 1 {
        return Err(SurfaceError::DegenerateSolution(kernel.len()));
    }
    let q = MultiPoly::from_map(
        point_vars(3),
        monos
            .into_iter()
            .zip(kernel[0].iter().cloned())
            .filter(|(_, c)| !c.is_zero())
            .collect(),
    )
    .monic();
    for l in &lines {
        assert!(
            vanishes_on_line(&q, l),
            "reconstructed quadric misses an input line"
        );
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ratio;

    fn p(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    fn kind(s: &str) -> QuadricKind {
        classify_quadric(&p(s)).unwrap().kind
    }

    #[test]
    fn taxonomy() {
        assert_eq!(kind("z - x*y"), QuadricKind::Regulus);
        assert_eq!(kind("x^2 + y^2 - z^2 - 1"), QuadricKind::Regulus);
        assert_eq!(kind("y - x^2"), QuadricKind::NonRegulusRuled);
        assert_eq!(kind("x^2 + y^2 - 1"), QuadricKind::NonRegulusRuled);
        assert_eq!(kind("x^2 + y^2 + z^2 - 1"), QuadricKind::NoRealLines);
        assert_eq!(kind("x^2 + y^2 - z^2 + 1"), QuadricKind::NoRealLines);
        assert_eq!(kind("z - x^2 - y^2"), QuadricKind::NoRealLines);
        assert_eq!(kind("x*y"), QuadricKind::PlanePair);
        assert_eq!(kind("x^2 - 1"), QuadricKind::PlanePair);
        let cone = classify_quadric(&p("x^2 + y^2 - (z - 1)^2")).unwrap();
        assert_eq!(cone.kind, QuadricKind::Cone);
        assert_eq!(cone.apex, Some(AffPoint::from_ints(&[0, 0, 1])));
        assert_eq!(cone.signature, (2, 1));
    }

    #[test]
    fn regulus_witness_has_two_lines() {
        let c = classify_quadric(&p("z - x*y")).unwrap();
        assert_eq!(c.witness.unwrap().directions.len(), 2);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            classify_quadric(&p("x^3 - y")),
            Err(SurfaceError::WrongDegree { .. })
        ));
        assert_eq!(
            classify_quadric(&p("(x - y)^2")),
            Err(SurfaceError::NotSquareFree)
        );
    }

    fn ruling(a: i64) -> ProjLine {
        ProjLine::from_ints(&[a, 0, 0], &[0, 1, a]).unwrap()
    }

    #[test]
    fn regulus_of_saddle_rulings() {
        let (l0, l1, l2) = (ruling(0), ruling(1), ruling(2));
        let q = regulus_through([&l0, &l1, &l2]).unwrap();
        assert!(q.eq_up_to_scalar(&p("z - x*y").with_vars(&point_vars(3)).unwrap()));
        let r = regulus_through([&l2, &l0, &l1]).unwrap();
        assert_eq!(q, r);
    }

    #[test]
    fn regulus_of_hyperboloid_rulings() {
        // (2c, s, 0) + t(-2s, c, 1) lies on x^2/4 + y^2 - z^2 = 1 when c^2 + s^2 = 1
        let line = |c: Rational, s: Rational| {
            ProjLine::new(
                AffPoint::new(vec![&c * rat(2), s.clone(), rat(0)]),
                vec![-(&s * rat(2)), c, rat(1)],
            )
            .unwrap()
        };
        let ls = [
            line(rat(1), rat(0)),
            line(rat(0), rat(1)),
            line(ratio(3, 5), ratio(4, 5)),
        ];
        let q = regulus_through([&ls[0], &ls[1], &ls[2]]).unwrap();
        let expect = p("x^2 + 4*y^2 - 4*z^2 - 4")
            .with_vars(&point_vars(3))
            .unwrap();
        assert!(q.eq_up_to_scalar(&expect));
    }

    #[test]
    fn coplanar_lines_are_rejected() {
        let a = ProjLine::from_ints(&[0, 0, 0], &[1, 0, 0]).unwrap();
        let b = ProjLine::from_ints(&[0, 1, 0], &[1, 0, 0]).unwrap();
        let c = ProjLine::from_ints(&[1, 0, 1], &[0, 1, 0]).unwrap();
        assert_eq!(
            regulus_through([&a, &b, &c]),
            Err(SurfaceError::CoplanarPair(0, 1))
        );
    }
}
