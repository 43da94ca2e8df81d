//! Incidence bounds with explicit constants, evaluated as rational
//! intervals.
//!
//! Every term is a product of integer parameters raised to rational powers,
//! so it equals an integer `L`-th root; that root is bracketed by an integer
//! root of the value scaled by `2^{L·PRECISION_BITS}`. The sub-polynomial
//! factor of `FOCS4` goes through a bracket of `log2 m` first, and its
//! exponent is rounded outward to a multiple of `1/1024`, so that bound
//! carries a relative width of up to about `2·10⁻³`; every other bound is
//! bracketed to about `2⁻²⁴` relative.
//!
//! The threshold `ξ = (nD/m)^{1/2}` of the pruning argument behind `TH13A`
//! only balances the `mξ` and `nD/ξ` contributions, so it is not exposed as
//! its own operation: it is what produces the `m^{1/2} n^{1/2} D^{1/2}` term.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::json;
use crate::poly::{rat, ratio, Rational};

const PRECISION_BITS: u64 = 24;
const LOG_STEPS: u32 = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum BoundName {
    /// Planar bound: `m^{2/3}n^{2/3} + m + n`.
    St,
    /// Lines in 3-space with at most `s` in a plane.
    Gk3,
    /// Lines in 4-space with the `2^{c√log m}` factor.
    Focs4,
    /// Points and lines on a surface of degree `D`, real case.
    Th13a,
    /// Same, complex case.
    Th13b,
    /// Points on a 3-dimensional variety of degree `D`, real case.
    Th14a,
    /// Same, complex case.
    Th14b,
    /// Surfaces that may contain planes.
    Cormainx,
    /// 3-dimensional varieties that may contain hyperplanes and quadrics.
    Cor4dx,
    /// Linear bound `m + n` on a constant-degree surface without planes.
    Cor15,
    /// Linear bound `m + n` on a constant-degree 3-dimensional variety.
    Cor17,
}

impl BoundName {
    pub const ALL: [BoundName; 11] = [
        BoundName::St,
        BoundName::Gk3,
        BoundName::Focs4,
        BoundName::Th13a,
        BoundName::Th13b,
        BoundName::Th14a,
        BoundName::Th14b,
        BoundName::Cormainx,
        BoundName::Cor4dx,
        BoundName::Cor15,
        BoundName::Cor17,
    ];
}

impl fmt::Display for BoundName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        write!(f, "{}", s.as_str().unwrap())
    }
}

impl FromStr for BoundName {
    type Err = BoundError;

    fn from_str(s: &str) -> Result<Self, BoundError> {
        serde_json::from_value(serde_json::Value::String(s.to_ascii_uppercase()))
            .map_err(|_| BoundError::UnknownBound(s.to_string()))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundError {
    #[error("bound {name} needs parameter {param}")]
    MissingParameter { name: BoundName, param: char },
    #[error("unknown bound `{0}`")]
    UnknownBound(String),
    #[error("constant must be nonnegative")]
    NegativeConstant,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundParams {
    pub m: Option<u64>,
    pub n: Option<u64>,
    #[serde(rename = "D")]
    pub d: Option<u64>,
    pub s: Option<u64>,
    pub q: Option<u64>,
}

/// Closed rational interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "json::rational")]
    pub lo: Rational,
    #[serde(with = "json::rational")]
    pub hi: Rational,
}

impl Interval {
    pub fn exact(q: Rational) -> Interval {
        Interval {
            lo: q.clone(),
            hi: q,
        }
    }

    fn add(&self, o: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }

    /// Product of two nonnegative intervals.
    fn mul(&self, o: &Interval) -> Interval {
        Interval {
            lo: &self.lo * &o.lo,
            hi: &self.hi * &o.hi,
        }
    }

    pub fn midpoint_f64(&self) -> f64 {
        ((&self.lo + &self.hi) / rat(2))
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// `x / self`, or `None` if the interval touches zero.
    pub fn ratio_of(&self, x: u64) -> Option<Interval> {
        if self.lo.is_zero() {
            return None;
        }
        let x = Rational::from_integer(BigInt::from(x));
        Some(Interval {
            lo: &x / &self.hi,
            hi: &x / &self.lo,
        })
    }

    /// `Some(true)` if `x ≤ lo`, `Some(false)` if `x > hi`.
    pub fn compare_at_least(&self, x: u64) -> Option<bool> {
        let x = Rational::from_integer(BigInt::from(x));
        if x <= self.lo {
            Some(true)
        } else if x > self.hi {
            Some(false)
        } else {
            None
        }
    }
}

/// Integer `k`-th root of a nonnegative rational, bracketed to
/// `PRECISION_BITS` binary digits.
fn root_bracket(x: &Rational, k: u32) -> Interval {
    if x.is_zero() {
        return Interval::exact(Rational::zero());
    }
    if k == 1 {
        return Interval::exact(x.clone());
    }
    // x^{1/k} = (num · den^{k-1})^{1/k} / den
    let num = x.numer().to_biguint().expect("nonnegative");
    let den = x.denom().to_biguint().expect("positive");
    let radicand = (num * den.pow(k - 1)) << (u64::from(k) * PRECISION_BITS);
    let r = radicand.nth_root(k);
    let exact = r.pow(k) == radicand;
    let scale = BigUint::one() << PRECISION_BITS;
    let to_q = |v: BigUint| Rational::new(BigInt::from(v), BigInt::from(&scale * &den));
    let lo = to_q(r.clone());
    let hi = if exact { lo.clone() } else { to_q(r + 1u32) };
    Interval { lo, hi }
}

/// `Π x_i^{a_i}` for integers `x_i ≥ 0` and rational `a_i ≥ 0`.
fn monomial(factors: &[(u64, Rational)]) -> Interval {
    if factors.iter().any(|(x, a)| *x == 0 && !a.is_zero()) {
        return Interval::exact(Rational::zero());
    }
    let l = factors.iter().fold(BigInt::one(), |acc, (_, a)| {
        num_integer::lcm(acc, a.denom().clone())
    });
    let l = l.to_u32().expect("small exponent denominators");
    let mut value = BigUint::one();
    for (x, a) in factors {
        let e = (a * Rational::from_integer(BigInt::from(l)))
            .to_integer()
            .to_u32()
            .expect("small exponents");
        value *= BigUint::from(*x).pow(e);
    }
    root_bracket(&Rational::from_integer(BigInt::from(value)), l)
}

/// Bracket of `log2 m` for an integer `m ≥ 1`, from the bit length of
/// `m^LOG_STEPS`.
fn log2_bracket(m: u64) -> Interval {
    if m <= 1 {
        return Interval::exact(Rational::zero());
    }
    if m.is_power_of_two() {
        return Interval::exact(rat(m.trailing_zeros() as i64));
    }
    let big = BigUint::from(m).pow(LOG_STEPS);
    let k = big.bits() - 1;
    Interval {
        lo: ratio(k as i64, LOG_STEPS as i64),
        hi: ratio(k as i64 + 1, LOG_STEPS as i64),
    }
}

/// Bracket of `2^{c √(log2 m)}`.
fn subpolynomial_factor(m: u64, c: &Rational) -> Interval {
    let lg = log2_bracket(m);
    let lo_sqrt = root_bracket(&lg.lo, 2).lo;
    let hi_sqrt = root_bracket(&lg.hi, 2).hi;
    let steps = Rational::from_integer(BigInt::from(LOG_STEPS));
    let e_lo = (&lo_sqrt * c * &steps).floor().to_integer();
    let e_hi = (&hi_sqrt * c * &steps).ceil().to_integer();
    let pow2 = |e: &BigInt| {
        Rational::from_integer(BigInt::one() << e.to_usize().expect("moderate exponent"))
    };
    Interval {
        lo: root_bracket(&pow2(&e_lo), LOG_STEPS).lo,
        hi: root_bracket(&pow2(&e_hi), LOG_STEPS).hi,
    }
}

fn need(name: BoundName, v: Option<u64>, param: char) -> Result<u64, BoundError> {
    v.ok_or(BoundError::MissingParameter { name, param })
}

/// `C` times the named expression. For `FOCS4` the same `C` multiplies
/// both groups of terms and the exponent constant is `c = 1` with `log`
/// taken to base 2.
pub fn bound_eval(
    name: BoundName,
    params: &BoundParams,
    c: &Rational,
) -> Result<Interval, BoundError> {
    bound_eval_with_exponent(name, params, c, &rat(1))
}

pub fn bound_eval_with_exponent(
    name: BoundName,
    params: &BoundParams,
    c: &Rational,
    focs_c: &Rational,
) -> Result<Interval, BoundError> {
    use BoundName::*;
    if *c < Rational::zero() {
        return Err(BoundError::NegativeConstant);
    }
    let m = || need(name, params.m, 'm');
    let n = || need(name, params.n, 'n');
    let d = || need(name, params.d, 'D');
    let s = || need(name, params.s, 's');
    let q = || need(name, params.q, 'q');
    let r = ratio;
    let terms: Vec<Vec<(u64, Rational)>> = match name {
        St => vec![
            vec![(m()?, r(2, 3)), (n()?, r(2, 3))],
            vec![(m()?, rat(1))],
            vec![(n()?, rat(1))],
        ],
        Gk3 => vec![
            vec![(m()?, r(1, 2)), (n()?, r(3, 4))],
            vec![(m()?, r(2, 3)), (n()?, r(1, 3)), (s()?, r(1, 3))],
            vec![(m()?, rat(1))],
            vec![(n()?, rat(1))],
        ],
        Focs4 => {
            let (mm, nn) = (m()?, n()?);
            let front = monomial(&[(mm, r(2, 5)), (nn, r(4, 5))]).add(&monomial(&[(mm, rat(1))]));
            let front = subpolynomial_factor(mm, focs_c).mul(&front);
            let back = [
                vec![(mm, r(1, 2)), (nn, r(1, 2)), (q()?, r(1, 4))],
                vec![(mm, r(2, 3)), (nn, r(1, 3)), (s()?, r(1, 3))],
                vec![(nn, rat(1))],
            ]
            .iter()
            .fold(Interval::exact(Rational::zero()), |acc, t| {
                acc.add(&monomial(t))
            });
            let total = front.add(&back);
            return Ok(Interval::exact(c.clone()).mul(&total));
        }
        Th13a | Th13b => {
            let mut t = vec![
                vec![(m()?, r(1, 2)), (n()?, r(1, 2)), (d()?, r(1, 2))],
                vec![(m()?, r(2, 3)), (d()?, r(2, 3)), (s()?, r(1, 3))],
                vec![(m()?, rat(1))],
                vec![(n()?, rat(1))],
            ];
            if name == Th13b {
                t.push(vec![(d()?, rat(3))]);
            }
            t
        }
        Th14a | Th14b => {
            let mut t = vec![
                vec![(m()?, r(1, 2)), (n()?, r(1, 2)), (d()?, rat(1))],
                vec![(m()?, r(2, 3)), (n()?, r(1, 3)), (s()?, r(1, 3))],
                vec![(n()?, rat(1)), (d()?, rat(1))],
                vec![(m()?, rat(1))],
            ];
            if name == Th14b {
                t.push(vec![(d()?, rat(6))]);
            }
            t
        }
        Cormainx => vec![
            vec![(m()?, r(2, 3)), (s()?, r(2, 3))],
            vec![(m()?, rat(1))],
            vec![(n()?, rat(1))],
        ],
        Cor4dx => vec![
            vec![(m()?, r(1, 2)), (n()?, r(1, 2)), (d()?, rat(1))],
            vec![(m()?, r(1, 2)), (n()?, r(1, 2)), (q()?, r(1, 4))],
            vec![(m()?, r(2, 3)), (n()?, r(1, 3)), (s()?, r(1, 3))],
            vec![(n()?, rat(1)), (d()?, rat(1))],
            vec![(m()?, rat(1))],
        ],
        Cor15 | Cor17 => vec![vec![(m()?, rat(1))], vec![(n()?, rat(1))]],
    };
    let total = terms
        .iter()
        .fold(Interval::exact(Rational::zero()), |acc, t| {
            acc.add(&monomial(t))
        });
    Ok(Interval::exact(c.clone()).mul(&total))
}
