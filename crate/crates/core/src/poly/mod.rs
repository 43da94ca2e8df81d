//! Exact rational scalars and sparse multivariate polynomials over them.
//!
//! Every polynomial carries an ordered list of variable names. Arithmetic
//! between polynomials over different variable lists first merges the lists
//! under the global variable order `x < y < z < w < v1 < v2 < v3 < v4 < t`
//! (unknown names sort after these, alphabetically).
//!
//! Terms are kept in graded-lex order, so the last stored term is the
//! leading term and canonical forms ("up to scalar") are obtained by making
//! its coefficient 1.

mod gcd;
mod parse;
mod resultant;
pub mod univariate;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use resultant::{determinant_bareiss, sylvester_matrix};
pub use univariate::UniPoly;

/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// Global variable order used when variable lists are merged.
pub const GLOBAL_VARIABLE_ORDER: [&str; 9] = ["x", "y", "z", "w", "v1", "v2", "v3", "v4", "t"];

/// Point variables for ambient dimension `d` (3 or 4 in practice).
pub fn point_vars(d: usize) -> Vec<String> {
    let mut names: Vec<String> = ["x", "y", "z", "w"].iter().map(|s| s.to_string()).collect();
    for i in 5..=d {
        names.push(format!("x{i}"));
    }
    names.truncate(d);
    names
}

/// Direction variables `v1..vd`.
pub fn direction_vars(d: usize) -> Vec<String> {
    (1..=d).map(|i| format!("v{i}")).collect()
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("arity mismatch: expected {expected} values, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial has degree 0 in `{0}`")]
    DegreeZero(String),
    #[error("derivative order must be at least 1, got {0}")]
    OrderOutOfRange(u32),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid rational literal `{0}`")]
    BadRational(String),
    #[error("exact division failed")]
    InexactDivision,
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `a`, `-a`, or `a/b` with integer `a`, nonzero integer `b`.
pub fn parse_rational(s: &str) -> Result<Rational, PolyError> {
    let s = s.trim();
    let bad = || PolyError::BadRational(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(n))
        }
    }
}

pub fn factorial(k: u32) -> Rational {
    let mut acc = BigInt::one();
    for i in 2..=k {
        acc *= i;
    }
    Rational::from_integer(acc)
}

fn var_rank(name: &str) -> (usize, &str) {
    match GLOBAL_VARIABLE_ORDER.iter().position(|v| *v == name) {
        Some(i) => (i, ""),
        None => (GLOBAL_VARIABLE_ORDER.len(), name),
    }
}

/// Sorts and dedups variable names under the global order.
pub fn canonical_var_order<S: AsRef<str>>(names: &[S]) -> Vec<String> {
    let mut out: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
    out.sort_by(|a, b| var_rank(a).cmp(&var_rank(b)));
    out.dedup();
    out
}

/// Exponent vector. Ordered graded-lex: total degree first, ties broken
/// lexicographically with the first variable most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when every exponent of `other` is at most ours.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial with exact rational coefficients.
#[derive(Clone, Debug)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero<S: AsRef<str>>(vars: &[S]) -> Self {
        MultiPoly {
            vars: vars.iter().map(|s| s.as_ref().to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant<S: AsRef<str>>(vars: &[S], c: Rational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            let n = p.vars.len();
            p.terms.insert(Monomial::one(n), c);
        }
        p
    }

    pub fn one<S: AsRef<str>>(vars: &[S]) -> Self {
        Self::constant(vars, Rational::one())
    }

    /// The polynomial consisting of the single variable `name`.
    pub fn var<S: AsRef<str>>(vars: &[S], name: &str) -> Result<Self, PolyError> {
        let mut p = Self::zero(vars);
        let i = p.var_index(name)?;
        let mut e = vec![0; p.vars.len()];
        e[i] = 1;
        p.terms.insert(Monomial(e), Rational::one());
        Ok(p)
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing
    /// repeated exponents and dropping zeros.
    pub fn from_terms<S: AsRef<str>>(
        vars: &[S],
        terms: impl IntoIterator<Item = (Vec<u32>, Rational)>,
    ) -> Result<Self, PolyError> {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            if e.len() != p.vars.len() {
                return Err(PolyError::ArityMismatch {
                    expected: p.vars.len(),
                    got: e.len(),
                });
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    pub(crate) fn from_map(vars: Vec<String>, terms: BTreeMap<Monomial, Rational>) -> Self {
        MultiPoly { vars, terms }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn var_index(&self, name: &str) -> Result<usize, PolyError> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True for the zero polynomial and nonzero constants.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    /// Constant term value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        if !self.is_constant() {
            return None;
        }
        Some(
            self.terms
                .values()
                .next()
                .cloned()
                .unwrap_or_else(Rational::zero),
        )
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .next_back()
            .map(|m| m.degree())
            .unwrap_or(0)
    }

    pub fn degree_in(&self, idx: usize) -> u32 {
        self.terms.keys().map(|m| m.0[idx]).max().unwrap_or(0)
    }

    pub fn degree_in_var(&self, name: &str) -> Result<u32, PolyError> {
        Ok(self.degree_in(self.var_index(name)?))
    }

    /// Indices of variables that occur with positive exponent.
    pub fn used_vars(&self) -> Vec<usize> {
        (0..self.vars.len())
            .filter(|&i| self.terms.keys().any(|m| m.0[i] > 0))
            .collect()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.leading_term()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// Canonical representative up to a nonzero scalar: leading graded-lex
    /// coefficient equal to 1. The zero polynomial is returned unchanged.
    pub fn monic(&self) -> MultiPoly {
        match self.leading_term() {
            None => self.clone(),
            Some((_, lc)) if lc.is_one() => self.clone(),
            Some((_, lc)) => self.scale(&lc.recip()),
        }
    }

    /// True iff `self = c * other` for some nonzero rational `c`.
    pub fn eq_up_to_scalar(&self, other: &MultiPoly) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        self.monic() == other.monic()
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.vars);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(&self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Re-embeds into a different variable list. Variables absent from the
    /// new list must not occur in the polynomial.
    pub fn with_vars<S: AsRef<str>>(&self, vars: &[S]) -> Result<MultiPoly, PolyError> {
        let new_vars: Vec<String> = vars.iter().map(|s| s.as_ref().to_string()).collect();
        if new_vars == self.vars {
            return Ok(self.clone());
        }
        let mut map = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            match new_vars.iter().position(|n| n == v) {
                Some(j) => map.push(Some(j)),
                None => {
                    if self.terms.keys().any(|m| m.0[i] > 0) {
                        return Err(PolyError::UnknownVariable(v.clone()));
                    }
                    map.push(None);
                }
            }
        }
        let mut out = MultiPoly::zero(&new_vars);
        for (m, c) in &self.terms {
            let mut e = vec![0; new_vars.len()];
            for (i, &k) in m.0.iter().enumerate() {
                if let Some(j) = map[i] {
                    e[j] += k;
                }
            }
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Drops variables that do not occur.
    pub fn trim_vars(&self) -> MultiPoly {
        let used = self.used_vars();
        let names: Vec<String> = used.iter().map(|&i| self.vars[i].clone()).collect();
        self.with_vars(&names)
            .expect("only unused variables dropped")
    }

    fn aligned(&self, other: &MultiPoly) -> (MultiPoly, MultiPoly) {
        let mut all = self.vars.clone();
        all.extend(other.vars.iter().cloned());
        let merged = canonical_var_order(&all);
        (
            self.with_vars(&merged).expect("superset"),
            other.with_vars(&merged).expect("superset"),
        )
    }

    /// Exact value at `point` (one coordinate per variable).
    pub fn eval(&self, point: &[Rational]) -> Result<Rational, PolyError> {
        if point.len() != self.vars.len() {
            return Err(PolyError::ArityMismatch {
                expected: self.vars.len(),
                got: point.len(),
            });
        }
        let mut powers: Vec<Vec<Rational>> = vec![vec![Rational::one()]; point.len()];
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let table = &mut powers[i];
                while table.len() <= e as usize {
                    let next = table.last().unwrap() * &point[i];
                    table.push(next);
                }
                term *= &table[e as usize];
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Substitutes a rational value for one variable; the variable stays in
    /// the list with exponent zero.
    pub fn eval_var(&self, idx: usize, value: &Rational) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.vars);
        let mut powers = vec![Rational::one()];
        for (m, c) in &self.terms {
            let e = m.0[idx] as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            let mut mm = m.clone();
            mm.0[idx] = 0;
            out.add_term(mm, c * &powers[e]);
        }
        out
    }

    /// Formal partial derivative with respect to `name`.
    pub fn partial_derivative(&self, name: &str) -> Result<MultiPoly, PolyError> {
        let i = self.var_index(name)?;
        Ok(self.derivative_idx(i))
    }

    pub(crate) fn derivative_idx(&self, i: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut mm = m.clone();
            mm.0[i] -= 1;
            out.add_term(mm, c * rat(e as i64));
        }
        out
    }

    pub fn gradient(&self) -> Vec<MultiPoly> {
        (0..self.vars.len())
            .map(|i| self.derivative_idx(i))
            .collect()
    }

    /// Replaces variable `idx` by `sub` (which must share our variable list).
    pub fn substitute(&self, idx: usize, sub: &MultiPoly) -> MultiPoly {
        assert_eq!(
            self.vars, sub.vars,
            "substitution requires a shared variable list"
        );
        let mut powers = vec![MultiPoly::one(&self.vars)];
        let mut out = MultiPoly::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[idx] as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap() * sub;
                powers.push(next);
            }
            let mut mm = m.clone();
            mm.0[idx] = 0;
            for (pm, pc) in &powers[e].terms {
                out.add_term(mm.mul(pm), c * pc);
            }
        }
        out
    }

    /// Univariate view in variable `idx`: entry `k` is the coefficient of
    /// `var^k`, a polynomial over the same variable list not involving `var`.
    pub fn coeffs_in(&self, idx: usize) -> Vec<MultiPoly> {
        let d = self.degree_in(idx) as usize;
        let mut out = vec![MultiPoly::zero(&self.vars); d + 1];
        for (m, c) in &self.terms {
            let e = m.0[idx] as usize;
            let mut mm = m.clone();
            mm.0[idx] = 0;
            out[e].terms.insert(mm, c.clone());
        }
        out
    }

    /// Inverse of [`MultiPoly::coeffs_in`].
    pub fn from_coeffs_in(vars: &[String], idx: usize, coeffs: &[MultiPoly]) -> MultiPoly {
        let mut out = MultiPoly::zero(vars);
        for (k, cp) in coeffs.iter().enumerate() {
            for (m, c) in &cp.terms {
                let mut mm = m.clone();
                mm.0[idx] += k as u32;
                out.add_term(mm, c.clone());
            }
        }
        out
    }

    /// Homogeneous components indexed by degree `0..=deg`.
    pub fn homogeneous_components(&self) -> Vec<MultiPoly> {
        let d = self.total_degree() as usize;
        let mut out = vec![MultiPoly::zero(&self.vars); d + 1];
        for (m, c) in &self.terms {
            out[m.degree() as usize].terms.insert(m.clone(), c.clone());
        }
        out
    }

    /// `f(p + x)` as a polynomial in the same variables.
    pub fn shift(&self, p: &[Rational]) -> Result<MultiPoly, PolyError> {
        if p.len() != self.vars.len() {
            return Err(PolyError::ArityMismatch {
                expected: self.vars.len(),
                got: p.len(),
            });
        }
        let mut out = self.clone();
        for (i, pi) in p.iter().enumerate() {
            if pi.is_zero() || out.degree_in(i) == 0 {
                continue;
            }
            let sub = &MultiPoly::var(&self.vars, &self.vars[i]).unwrap()
                + &MultiPoly::constant(&self.vars, pi.clone());
            out = out.substitute(i, &sub);
        }
        Ok(out)
    }

    /// Homogeneous components `f_0, f_1, ..., f_deg` of `f(p + x)`.
    ///
    /// When `f(p) = 0` the index of the first nonzero component is the
    /// multiplicity of `p`.
    pub fn taylor_components(&self, p: &[Rational]) -> Result<Vec<MultiPoly>, PolyError> {
        let shifted = self.shift(p)?;
        let mut comps = shifted.homogeneous_components();
        comps.resize(
            self.total_degree() as usize + 1,
            MultiPoly::zero(&self.vars),
        );
        Ok(comps)
    }

    /// `∇_v^k f` as a polynomial in the point variables followed by
    /// direction variables `v1..vd`: `k!` times the coefficient of `t^k` in
    /// `f(p + t v)`. Orders above the degree give the zero polynomial.
    pub fn directional_derivative_form(&self, k: u32) -> Result<MultiPoly, PolyError> {
        if k == 0 {
            return Err(PolyError::OrderOutOfRange(k));
        }
        let d = self.vars.len();
        let dirs = direction_vars(d);
        let mut all = self.vars.clone();
        all.extend(dirs.iter().cloned());
        if k > self.total_degree() {
            return Ok(MultiPoly::zero(&all));
        }
        all.push("t".to_string());
        let lifted = self.with_vars(&all)?;
        let t = MultiPoly::var(&all, "t")?;
        let mut moved = lifted.clone();
        for i in 0..d {
            if moved.degree_in(i) == 0 {
                continue;
            }
            let sub = &MultiPoly::var(&all, &all[i])? + &(&t * &MultiPoly::var(&all, &dirs[i])?);
            moved = moved.substitute(i, &sub);
        }
        let t_idx = all.len() - 1;
        let coeffs = moved.coeffs_in(t_idx);
        let ck = coeffs
            .get(k as usize)
            .cloned()
            .unwrap_or_else(|| MultiPoly::zero(&all));
        ck.scale(&factorial(k)).with_vars(&all[..all.len() - 1])
    }

    /// `t ↦ f(base + t·dir)` as a univariate polynomial.
    pub fn restrict_to_line(
        &self,
        base: &[Rational],
        dir: &[Rational],
    ) -> Result<UniPoly, PolyError> {
        let n = self.vars.len();
        if base.len() != n || dir.len() != n {
            return Err(PolyError::ArityMismatch {
                expected: n,
                got: base.len().min(dir.len()),
            });
        }
        let linear: Vec<UniPoly> = (0..n)
            .map(|i| UniPoly::new(vec![base[i].clone(), dir[i].clone()]))
            .collect();
        let mut powers: Vec<Vec<UniPoly>> = vec![vec![UniPoly::one()]; n];
        let mut acc = UniPoly::zero();
        for (m, c) in &self.terms {
            let mut term = UniPoly::constant(c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let table = &mut powers[i];
                while table.len() <= e as usize {
                    let next = table.last().unwrap() * &linear[i];
                    table.push(next);
                }
                term = &term * &table[e as usize];
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// Converts a polynomial involving at most the variable `idx` into a
    /// univariate polynomial.
    pub fn to_univariate(&self, idx: usize) -> Option<UniPoly> {
        let d = self.degree_in(idx) as usize;
        let mut c = vec![Rational::zero(); d + 1];
        for (m, a) in &self.terms {
            if m.0.iter().enumerate().any(|(i, &e)| i != idx && e > 0) {
                return None;
            }
            c[m.0[idx] as usize] = a.clone();
        }
        Some(UniPoly::new(c))
    }

    /// Largest absolute value of a coefficient numerator or denominator, in
    /// bits. Used in construction logs.
    pub fn coefficient_bits(&self) -> u64 {
        self.terms
            .values()
            .map(|c| c.numer().bits().max(c.denom().bits()))
            .max()
            .unwrap_or(0)
    }

    fn combine(&self, other: &MultiPoly, negate: bool) -> MultiPoly {
        if self.vars != other.vars {
            let (a, b) = self.aligned(other);
            return a.combine(&b, negate);
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            if negate {
                out.add_term(m.clone(), -c);
            } else {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    fn product(&self, other: &MultiPoly) -> MultiPoly {
        if self.vars != other.vars {
            let (a, b) = self.aligned(other);
            return a.product(&b);
        }
        if self.is_zero() || other.is_zero() {
            return MultiPoly::zero(&self.vars);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        let mut acc: std::collections::HashMap<Monomial, Rational> =
            std::collections::HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let prod = ca * cb;
                acc.entry(ma.mul(mb))
                    .and_modify(|e| *e += &prod)
                    .or_insert(prod);
            }
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        if self.vars == other.vars {
            return self.terms == other.terms;
        }
        let (a, b) = self.aligned(other);
        a.terms == b.terms
    }
}

impl Eq for MultiPoly {}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.combine(rhs, false)
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.combine(rhs, true)
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.product(rhs)
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: MultiPoly) -> MultiPoly {
        self.combine(&rhs, false)
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        self.combine(&rhs, true)
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        self.product(&rhs)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&parse::format_poly(self))
    }
}

impl std::str::FromStr for MultiPoly {
    type Err = PolyError;
    fn from_str(s: &str) -> Result<Self, PolyError> {
        MultiPoly::parse(s)
    }
}

/// Sign of a rational as -1, 0, 1.
pub fn sign(q: &Rational) -> i8 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}
