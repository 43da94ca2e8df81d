//! Dense univariate polynomials over the rationals: restrictions of
//! multivariate polynomials to lines, Sturm sequences, and exact rational
//! root finding.

use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{rat, Rational};

/// Coefficients from the constant term upward; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `t - r`
    pub fn linear_root(r: &Rational) -> Self {
        Self::new(vec![-r, Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().recip())
    }

    /// Order of vanishing at `t = 0`; `None` for the zero polynomial.
    pub fn order_at_zero(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Multiplicity of `r` as a root (0 when `r` is not a root).
    pub fn root_multiplicity(&self, r: &Rational) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let lin = UniPoly::linear_root(r);
        let mut p = self.clone();
        let mut k = 0;
        loop {
            let (q, rem) = p.div_rem(&lin);
            if !rem.is_zero() {
                return k;
            }
            p = q;
            k += 1;
        }
    }

    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (UniPoly::zero(), self.clone());
        }
        let lc_inv = d.leading().recip();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &lc_inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * dc;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Product of the distinct irreducible factors, monic.
    pub fn square_free_part(&self) -> UniPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Number of distinct complex roots.
    pub fn distinct_root_count(&self) -> usize {
        self.square_free_part().degree().unwrap_or(0)
    }

    /// Integer polynomial with the same roots and coprime coefficients.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if g.is_zero() {
            return ints;
        }
        ints.into_iter().map(|c| c / &g).collect()
    }

    /// Sturm sequence of the square-free part.
    pub fn sturm_sequence(&self) -> Vec<UniPoly> {
        let p0 = self.square_free_part();
        let mut seq = vec![p0.clone(), p0.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(r.scale(&-Rational::one()));
        }
        seq
    }

    /// Number of distinct real roots in `(lo, hi]`.
    pub fn real_roots_in(&self, lo: &Rational, hi: &Rational) -> usize {
        let seq = self.sturm_sequence();
        let v = |x: &Rational| sign_variations(seq.iter().map(|p| p.eval(x)));
        v(lo).saturating_sub(v(hi))
    }

    /// Number of distinct real roots.
    pub fn real_root_count(&self) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let seq = self.sturm_sequence();
        let at_pos = sign_variations(seq.iter().map(|p| p.leading()));
        let at_neg = sign_variations(seq.iter().map(|p| {
            let l = p.leading();
            if p.degree().unwrap_or(0) % 2 == 1 {
                -l
            } else {
                l
            }
        }));
        at_neg.saturating_sub(at_pos)
    }

    /// All distinct rational roots in increasing order.
    ///
    /// Real roots are isolated with a Sturm sequence; a rational root of a
    /// primitive integer polynomial with leading coefficient `a` has the
    /// form `N / a`, so each isolating interval is refined until it holds
    /// at most a couple of such candidates, which are then tested exactly.
    pub fn rational_roots(&self) -> Vec<Rational> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let mut roots = Vec::new();
        let mut p = self.square_free_part();
        if p.coeffs[0].is_zero() {
            roots.push(Rational::zero());
            p = UniPoly::new(p.coeffs[1..].to_vec());
        }
        if p.degree().unwrap_or(0) == 0 {
            return roots;
        }
        if p.degree() == Some(1) {
            roots.push(-&p.coeffs[0] / &p.coeffs[1]);
            roots.sort();
            return roots;
        }
        let ints = p.primitive_integer();
        let lead = ints.last().unwrap().abs();
        let lead_q = Rational::from_integer(lead.clone());
        let pz = UniPoly::new(
            ints.iter()
                .map(|c| Rational::from_integer(c.clone()))
                .collect(),
        );
        let bound = pz
            .coeffs
            .iter()
            .map(|c| (c / pz.leading()).abs())
            .max()
            .unwrap()
            + Rational::one();
        let seq = pz.sturm_sequence();
        let count = |lo: &Rational, hi: &Rational| {
            let v = |x: &Rational| sign_variations(seq.iter().map(|q| q.eval(x)));
            v(lo).saturating_sub(v(hi))
        };
        let mut stack = vec![(-bound.clone(), bound.clone())];
        while let Some((lo, hi)) = stack.pop() {
            let n = count(&lo, &hi);
            if n == 0 {
                continue;
            }
            let nlo = (&lo * &lead_q).floor().to_integer();
            let nhi = (&hi * &lead_q).floor().to_integer();
            if n == 1 && &nhi - &nlo <= BigInt::from(2) {
                let mut k = nlo.clone();
                while k <= nhi {
                    let cand = Rational::new(k.clone(), lead.clone());
                    if cand > lo && cand <= hi && pz.eval(&cand).is_zero() {
                        roots.push(cand);
                    }
                    k += 1;
                }
                continue;
            }
            let mid = (&lo + &hi) / rat(2);
            stack.push((lo, mid.clone()));
            stack.push((mid, hi));
        }
        roots.sort();
        roots.dedup();
        roots
    }
}

fn sign_variations(values: impl Iterator<Item = Rational>) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for v in values {
        let s = if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        };
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

impl<'a> Add<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &'a UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut c = vec![Rational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            c[i] += a;
        }
        for (i, a) in rhs.coeffs.iter().enumerate() {
            c[i] += a;
        }
        UniPoly::new(c)
    }
}

impl<'a> Sub<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &'a UniPoly) -> UniPoly {
        self + &rhs.scale(&-Rational::one())
    }
}

impl<'a> Mul<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &'a UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut c = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        UniPoly::new(c)
    }
}
