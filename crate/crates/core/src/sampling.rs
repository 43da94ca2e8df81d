//! Search for rational points on a hypersurface.
//!
//! Seeds come from axis-parallel lines through small integer points and
//! from random lines; every rational root of a restriction is a point.
//! Known points are then expanded: a tangent line at a smooth point meets
//! the surface with multiplicity two there, so on a cubic the residual
//! intersection is rational, a secant through two rational points of a
//! cubic has a rational third point, and any line through a rational point
//! of a quadric meets it again rationally.

use std::collections::{HashSet, VecDeque};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::linalg::{add, nullspace, scale, sub};
use crate::geometry::AffPoint;
use crate::poly::{rat, MultiPoly, Rational, UniPoly};

pub struct PointSearch {
    /// Stop after this many distinct points.
    pub want: usize,
    /// Bound on the number of line restrictions tried.
    pub budget: usize,
    pub seed: u64,
}

impl Default for PointSearch {
    fn default() -> Self {
        PointSearch {
            want: 40,
            budget: 4000,
            seed: 1,
        }
    }
}

struct State<'a> {
    f: &'a MultiPoly,
    found: Vec<AffPoint>,
    seen: HashSet<AffPoint>,
    queue: VecDeque<usize>,
    tried: usize,
}

impl State<'_> {
    fn line_roots(&mut self, base: &[Rational], dir: &[Rational], skip_zero: bool) {
        self.tried += 1;
        let Ok(u) = self.f.restrict_to_line(base, dir) else {
            return;
        };
        if u.is_zero() {
            return;
        }
        let u = if skip_zero { strip_root_at_zero(&u) } else { u };
        for t in u.rational_roots() {
            let p = AffPoint::new(add(base, &scale(dir, &t)));
            if self.seen.insert(p.clone()) {
                debug_assert!(self.f.eval(&p.coords).unwrap().is_zero());
                self.queue.push_back(self.found.len());
                self.found.push(p);
            }
        }
    }
}

fn strip_root_at_zero(u: &UniPoly) -> UniPoly {
    let k = u.order_at_zero().unwrap_or(0);
    UniPoly::new(u.coeffs()[k..].to_vec())
}

/// Rational points of `Z(f)` found by a deterministic bounded search.
pub fn rational_points(f: &MultiPoly, search: &PointSearch) -> Vec<AffPoint> {
    let n = f.arity();
    let mut st = State {
        f,
        found: Vec::new(),
        seen: HashSet::new(),
        queue: VecDeque::new(),
        tried: 0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(search.seed);

    // axis-parallel lines through a small integer grid
    let grid: Vec<i64> = vec![0, 1, -1, 2, -2, 3, -3];
    'axis: for axis in 0..n {
        let others = n - 1;
        let total = grid.len().pow(others as u32);
        for idx in 0..total {
            let mut base = Vec::with_capacity(n);
            let mut k = idx;
            for i in 0..n {
                if i == axis {
                    base.push(Rational::zero());
                } else {
                    base.push(rat(grid[k % grid.len()]));
                    k /= grid.len();
                }
            }
            let mut dir = vec![Rational::zero(); n];
            dir[axis] = rat(1);
            st.line_roots(&base, &dir, false);
            if st.found.len() >= search.want * 4 || st.tried >= search.budget / 4 {
                break 'axis;
            }
        }
    }
    // random lines
    while st.found.len() < 2 && st.tried < search.budget / 2 {
        let base: Vec<Rational> = (0..n).map(|_| rat(rng.gen_range(-4..=4))).collect();
        let dir: Vec<Rational> = (0..n).map(|_| rat(rng.gen_range(-3..=3))).collect();
        if dir.iter().all(|c| c.is_zero()) {
            continue;
        }
        st.line_roots(&base, &dir, false);
    }

    // expansion by tangent and secant lines
    let grad = f.gradient();
    while st.found.len() < search.want && st.tried < search.budget {
        let Some(i) = st.queue.pop_front() else {
            break;
        };
        let p = st.found[i].clone();
        let g: Vec<Rational> = grad.iter().map(|d| d.eval(&p.coords).unwrap()).collect();
        if g.iter().any(|c| !c.is_zero()) {
            let basis = nullspace(&[g], n);
            let mut dirs: Vec<Vec<Rational>> = basis.clone();
            for _ in 0..6 {
                let mut v = vec![Rational::zero(); n];
                for b in &basis {
                    v = add(&v, &scale(b, &rat(rng.gen_range(-3..=3))));
                }
                if v.iter().any(|c| !c.is_zero()) {
                    dirs.push(v);
                }
            }
            for d in dirs {
                st.line_roots(&p.coords, &d, true);
            }
        }
        // through a known point of a quadric every line has a rational residual point
        for _ in 0..4 {
            let d: Vec<Rational> = (0..n).map(|_| rat(rng.gen_range(-4..=4))).collect();
            if d.iter().any(|c| !c.is_zero()) {
                st.line_roots(&p.coords, &d, true);
            }
        }
        let partners: Vec<usize> = (0..st.found.len().min(12)).filter(|&j| j != i).collect();
        for j in partners {
            let q = st.found[j].clone();
            st.line_roots(&p.coords, &sub(&q.coords, &p.coords), true);
        }
    }
    st.found
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_points_on_the_fermat_cubic() {
        let f: MultiPoly = "x^3 + y^3 + z^3 - 1".parse().unwrap();
        let pts = rational_points(&f, &PointSearch::default());
        assert!(pts.len() >= 10);
        for p in &pts {
            assert!(f.eval(&p.coords).unwrap().is_zero());
        }
    }

    #[test]
    fn finds_points_on_a_sphere() {
        let f: MultiPoly = "x^2 + y^2 + z^2 - 1".parse().unwrap();
        let pts = rational_points(
            &f,
            &PointSearch {
                want: 20,
                ..Default::default()
            },
        );
        assert!(pts.len() >= 20);
    }
}
