//! Exact division, multivariate gcd and square-free parts.
//!
//! Small gcds use the subresultant sequence with content recursion; larger
//! ones specialise all but one variable at integer points, take univariate
//! gcds and interpolate, accepting the result only after trial division.
//!
//! Both gcd and square-free part first try a cheap certificate: restrict the
//! inputs to a pseudo-random rational line on which their total degrees are
//! preserved. Every factor then restricts to a univariate polynomial of the
//! same degree, so a square-free (resp. coprime) restriction proves the
//! multivariate statement. Only when the certificate fails do we run the
//! full recursion.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::{rat, Monomial, MultiPoly, PolyError, Rational, UniPoly};

/// Small deterministic generator for probe lines; keeps results independent
/// of any ambient RNG state.
struct Probe(u64);

impl Probe {
    fn next(&mut self) -> i64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((self.0 >> 33) % 23) as i64 - 11
    }

    fn line(&mut self, n: usize) -> (Vec<Rational>, Vec<Rational>) {
        let base = (0..n).map(|_| rat(self.next())).collect();
        let dir = (0..n)
            .map(|_| {
                let v = self.next();
                rat(if v == 0 { 1 } else { v })
            })
            .collect();
        (base, dir)
    }
}

fn restriction(p: &MultiPoly, base: &[Rational], dir: &[Rational]) -> Option<UniPoly> {
    let u = p.restrict_to_line(base, dir).ok()?;
    (u.degree() == Some(p.total_degree() as usize)).then_some(u)
}

impl MultiPoly {
    /// `self / d` when the division is exact.
    pub fn div_exact(&self, d: &MultiPoly) -> Result<MultiPoly, PolyError> {
        if d.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        if self.vars() != d.vars() {
            let mut all = self.vars().to_vec();
            all.extend(d.vars().iter().cloned());
            let merged = super::canonical_var_order(&all);
            return self.with_vars(&merged)?.div_exact(&d.with_vars(&merged)?);
        }
        if let Some(c) = d.as_constant() {
            return Ok(self.scale(&c.recip()));
        }
        let (lm, lc) = d
            .leading_term()
            .map(|(m, c)| (m.clone(), c.clone()))
            .unwrap();
        let lc_inv = lc.recip();
        let mut rem = self.clone();
        let mut quot = std::collections::BTreeMap::new();
        while let Some((rm, rc)) = rem.leading_term() {
            let q = rm.checked_div(&lm).ok_or(PolyError::InexactDivision)?;
            let qc = rc * &lc_inv;
            let term = MultiPoly::from_map(
                self.vars().to_vec(),
                [(q.clone(), qc.clone())].into_iter().collect(),
            );
            rem = &rem - &(&term * d);
            quot.insert(q, qc);
        }
        Ok(MultiPoly::from_map(self.vars().to_vec(), quot))
    }

    /// True iff `g = self·h` for some polynomial `h`. The zero polynomial is
    /// divisible by everything.
    pub fn divides(&self, g: &MultiPoly) -> Result<bool, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        if g.is_zero() {
            return Ok(true);
        }
        match g.div_exact(self) {
            Ok(_) => Ok(true),
            Err(PolyError::InexactDivision) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// Monic gcd (leading graded-lex coefficient 1); `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &MultiPoly) -> MultiPoly {
        let mut all = self.vars().to_vec();
        all.extend(other.vars().iter().cloned());
        let merged = super::canonical_var_order(&all);
        let a = self.with_vars(&merged).expect("superset");
        let b = other.with_vars(&merged).expect("superset");
        gcd_rec(&a, &b).monic()
    }

    /// Gcd of the coefficients of `self` viewed as a polynomial in `idx`.
    pub fn content_in(&self, idx: usize) -> MultiPoly {
        let coeffs = self.coeffs_in(idx);
        gcd_list(&coeffs)
    }

    /// Product of the distinct irreducible factors, with leading graded-lex
    /// coefficient 1.
    pub fn square_free_part(&self) -> Result<MultiPoly, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        Ok(square_free_rec(self).monic())
    }

    /// True iff no irreducible factor is repeated.
    pub fn is_square_free(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        if certify_square_free(self) {
            return true;
        }
        square_free_rec(self).total_degree() == self.total_degree()
    }
}

fn certify_square_free(p: &MultiPoly) -> bool {
    if p.total_degree() <= 1 {
        return true;
    }
    let mut probe = Probe(0x5eed ^ p.num_terms() as u64);
    for _ in 0..3 {
        let (b, d) = probe.line(p.arity());
        if let Some(u) = restriction(p, &b, &d) {
            return u.gcd(&u.derivative()).degree() == Some(0);
        }
    }
    false
}

fn certify_coprime(a: &MultiPoly, b: &MultiPoly) -> bool {
    let mut probe = Probe(0xc0de ^ (a.num_terms() * 31 + b.num_terms()) as u64);
    for _ in 0..3 {
        let (base, dir) = probe.line(a.arity());
        if let (Some(ua), Some(ub)) = (restriction(a, &base, &dir), restriction(b, &base, &dir)) {
            return ua.gcd(&ub).degree() == Some(0);
        }
    }
    false
}

fn gcd_list(ps: &[MultiPoly]) -> MultiPoly {
    let mut acc: Option<MultiPoly> = None;
    let mut sorted: Vec<&MultiPoly> = ps.iter().filter(|p| !p.is_zero()).collect();
    sorted.sort_by_key(|p| (p.total_degree(), p.num_terms()));
    for p in sorted {
        acc = Some(match acc {
            None => p.monic(),
            Some(g) => gcd_rec(&g, p).monic(),
        });
        if acc.as_ref().is_some_and(|g| g.is_constant()) {
            break;
        }
    }
    acc.unwrap_or_else(|| MultiPoly::zero(ps.first().map(|p| p.vars()).unwrap_or(&[])))
}

/// Gcd over a shared variable list, up to a scalar.
fn gcd_rec(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    let vars = a.vars().to_vec();
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one(&vars);
    }
    if a.eq_up_to_scalar(b) {
        return a.clone();
    }
    if certify_coprime(a, b) {
        return MultiPoly::one(&vars);
    }
    // main variable: the last one used by either input
    let ua = a.used_vars();
    let ub = b.used_vars();
    let v = *ua.iter().chain(ub.iter()).max().unwrap();
    let mut others: Vec<usize> = ua
        .iter()
        .chain(ub.iter())
        .copied()
        .filter(|&i| i != v)
        .collect();
    others.sort_unstable();
    others.dedup();
    if !others.is_empty() && a.total_degree().max(b.total_degree()) > INTERPOLATION_THRESHOLD {
        if let Some(g) = gcd_interp(a, b, v, &others) {
            return g;
        }
    }
    let ca = a.content_in(v);
    let cb = b.content_in(v);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let cont = gcd_rec(&ca, &cb);
    let prim = if pa.degree_in(v) == 0 || pb.degree_in(v) == 0 {
        MultiPoly::one(&vars)
    } else {
        subresultant_gcd(&pa, &pb, v)
    };
    &cont * &prim
}

/// Above this total degree multivariate gcds go through evaluation and
/// interpolation first; the subresultant sequence suffers coefficient
/// growth there.
const INTERPOLATION_THRESHOLD: u32 = 6;

/// Coefficients of `p` as univariate polynomials in variable `y`, keyed by
/// the remaining monomial.
fn y_groups(p: &MultiPoly, y: usize) -> BTreeMap<Monomial, Vec<Rational>> {
    let mut out: BTreeMap<Monomial, Vec<Rational>> = BTreeMap::new();
    for (m, c) in p.terms() {
        let e = m.0[y] as usize;
        let mut key = m.clone();
        key.0[y] = 0;
        let slot = out.entry(key).or_default();
        if slot.len() <= e {
            slot.resize(e + 1, Rational::zero());
        }
        slot[e] = c.clone();
    }
    out
}

fn from_y_groups(vars: &[String], y: usize, groups: &BTreeMap<Monomial, UniPoly>) -> MultiPoly {
    let mut terms = BTreeMap::new();
    for (m, u) in groups {
        for (k, c) in u.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut mm = m.clone();
            mm.0[y] = k as u32;
            terms.insert(mm, c.clone());
        }
    }
    MultiPoly::from_map(vars.to_vec(), terms)
}

/// Splits `p` into its content in `Q[y]` and the primitive part.
fn y_content(p: &MultiPoly, y: usize) -> (UniPoly, BTreeMap<Monomial, UniPoly>) {
    let groups: BTreeMap<Monomial, UniPoly> = y_groups(p, y)
        .into_iter()
        .map(|(m, c)| (m, UniPoly::new(c)))
        .collect();
    let cont = groups.values().fold(UniPoly::zero(), |acc, u| acc.gcd(u));
    let prim = groups
        .into_iter()
        .map(|(m, u)| {
            let (q, r) = u.div_rem(&cont);
            debug_assert!(r.is_zero());
            (m, q)
        })
        .collect();
    (cont, prim)
}

/// Newton interpolation through `(xs[i], ys[i])`.
fn interpolate(xs: &[Rational], ys: &[Rational]) -> UniPoly {
    let n = xs.len();
    let mut dd: Vec<Rational> = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut acc = UniPoly::constant(dd[n - 1].clone());
    for i in (0..n - 1).rev() {
        acc = &(&acc * &UniPoly::linear_root(&xs[i])) + &UniPoly::constant(dd[i].clone());
    }
    acc
}

fn interpolate_images(xs: &[Rational], images: &[MultiPoly]) -> BTreeMap<Monomial, UniPoly> {
    let mut support: Vec<Monomial> = images
        .iter()
        .flat_map(|g| g.terms().map(|(m, _)| m.clone()))
        .collect();
    support.sort();
    support.dedup();
    support
        .into_iter()
        .map(|m| {
            let ys: Vec<Rational> = images.iter().map(|g| g.coeff(&m.0)).collect();
            let u = interpolate(xs, &ys);
            (m, u)
        })
        .collect()
}

/// Dense evaluation/interpolation gcd: the last variable of `others` is
/// specialised at integer points, the gcd of the images is computed
/// recursively, and the results are interpolated with the leading
/// coefficient forced to `gcd(lc(a), lc(b))`. The candidate is accepted
/// only if it divides both inputs, which makes the answer exact.
fn gcd_interp(a: &MultiPoly, b: &MultiPoly, main: usize, others: &[usize]) -> Option<MultiPoly> {
    let vars = a.vars().to_vec();
    if a.is_zero() || b.is_zero() {
        return Some(if a.is_zero() { b.clone() } else { a.clone() });
    }
    let Some((&y, rest)) = others.split_last() else {
        let ua = a.to_univariate(main)?;
        let ub = b.to_univariate(main)?;
        let g = ua.gcd(&ub);
        let coeffs: Vec<MultiPoly> = g
            .coeffs()
            .iter()
            .map(|c| MultiPoly::constant(&vars, c.clone()))
            .collect();
        return Some(MultiPoly::from_coeffs_in(&vars, main, &coeffs));
    };
    let (ca, ga) = y_content(a, y);
    let (cb, gb) = y_content(b, y);
    let cont = ca.gcd(&cb);
    let cont_poly = from_y_groups(
        &vars,
        y,
        &[(Monomial::one(vars.len()), cont)].into_iter().collect(),
    );
    let pa = from_y_groups(&vars, y, &ga);
    let pb = from_y_groups(&vars, y, &gb);
    let lca = ga.values().next_back()?.clone();
    let lcb = gb.values().next_back()?.clone();
    let lcg = lca.gcd(&lcb);
    let bound = pa.degree_in(y).min(pb.degree_in(y)) as usize + lcg.degree().unwrap_or(0);

    let mut xs: Vec<Rational> = Vec::new();
    let mut images: Vec<MultiPoly> = Vec::new();
    let mut lead: Option<Monomial> = None;
    let mut groups: BTreeMap<Monomial, UniPoly> = BTreeMap::new();
    let mut k: i64 = 0;
    let limit = 4 * (bound as i64 + 4) + 16;
    while k < limit {
        let pt = rat(if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 });
        k += 1;
        if lca.eval(&pt).is_zero() || lcb.eval(&pt).is_zero() {
            continue;
        }
        let ea = pa.eval_var(y, &pt);
        let eb = pb.eval_var(y, &pt);
        let g = gcd_interp(&ea, &eb, main, rest)?.monic();
        if g.is_constant() {
            return Some(&cont_poly * &MultiPoly::one(&vars));
        }
        let lm = g.leading_term().unwrap().0.clone();
        match &lead {
            Some(cur) if lm > *cur => continue,
            Some(cur) if lm < *cur => {
                xs.clear();
                images.clear();
                groups.clear();
                lead = Some(lm);
            }
            None => lead = Some(lm),
            _ => {}
        }
        let image = g.scale(&lcg.eval(&pt));
        // early exit: the interpolant through the earlier points already
        // predicts this image, so it is likely the answer
        let stable = !xs.is_empty()
            && groups.len() == image.num_terms()
            && groups.iter().all(|(m, u)| u.eval(&pt) == image.coeff(&m.0));
        images.push(image);
        xs.push(pt);
        if !stable && xs.len() < bound + 1 {
            groups = interpolate_images(&xs, &images);
            continue;
        }
        if !stable {
            groups = interpolate_images(&xs, &images);
        }
        let h = from_y_groups(&vars, y, &groups);
        let (_, hp) = y_content(&h, y);
        let cand = from_y_groups(&vars, y, &hp);
        if cand.divides(&pa).ok()? && cand.divides(&pb).ok()? {
            return Some(&cont_poly * &cand);
        }
        if stable {
            groups = interpolate_images(&xs, &images);
        }
    }
    None
}

/// Pseudo-remainder of `a` by `b` in variable `v`, as coefficient vectors.
fn prem(a: &[MultiPoly], b: &[MultiPoly]) -> Vec<MultiPoly> {
    let mut r: Vec<MultiPoly> = a.to_vec();
    let n = b.len() - 1;
    let lb = &b[n];
    let mut steps = a.len() as isize - b.len() as isize + 1;
    while r.len() > n && !r.is_empty() {
        let m = r.len() - 1;
        let lr = r[m].clone();
        let shift = m - n;
        for c in r.iter_mut() {
            *c = &*c * lb;
        }
        for (j, bj) in b.iter().enumerate() {
            r[j + shift] = &r[j + shift] - &(&lr * bj);
        }
        r.pop();
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
        steps -= 1;
    }
    if steps > 0 {
        let f = lb.pow(steps as u32);
        for c in r.iter_mut() {
            *c = &*c * &f;
        }
    }
    r
}

/// Gcd of two polynomials primitive in `v`, via the subresultant PRS.
fn subresultant_gcd(a: &MultiPoly, b: &MultiPoly, v: usize) -> MultiPoly {
    let vars = a.vars().to_vec();
    let (mut f, mut g) = if a.degree_in(v) >= b.degree_in(v) {
        (a.coeffs_in(v), b.coeffs_in(v))
    } else {
        (b.coeffs_in(v), a.coeffs_in(v))
    };
    let mut gg = MultiPoly::one(&vars);
    let mut h = MultiPoly::one(&vars);
    loop {
        let delta = (f.len() - g.len()) as u32;
        let r = prem(&f, &g);
        if r.is_empty() {
            break;
        }
        if r.len() == 1 {
            return MultiPoly::one(&vars);
        }
        let denom = &gg * &h.pow(delta);
        let next: Vec<MultiPoly> = r
            .iter()
            .map(|c| c.div_exact(&denom).expect("subresultant division is exact"))
            .collect();
        f = g;
        g = next;
        gg = f.last().unwrap().clone();
        h = if delta == 0 {
            h
        } else {
            gg.pow(delta)
                .div_exact(&h.pow(delta - 1))
                .expect("subresultant division is exact")
        };
    }
    let last = MultiPoly::from_coeffs_in(&vars, v, &g);
    let c = last.content_in(v);
    last.div_exact(&c).expect("content divides")
}

fn square_free_rec(p: &MultiPoly) -> MultiPoly {
    if p.is_constant() {
        return MultiPoly::one(p.vars());
    }
    if certify_square_free(p) {
        return p.clone();
    }
    let v = *p.used_vars().last().unwrap();
    let cont = p.content_in(v);
    let pp = p.div_exact(&cont).expect("content divides");
    let g = gcd_rec(&pp, &pp.derivative_idx(v));
    let sf = pp.div_exact(&g).expect("gcd divides");
    &sf * &square_free_rec(&cont)
}
