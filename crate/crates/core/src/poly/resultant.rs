//! Sylvester matrices and fraction-free determinants.

use super::{MultiPoly, PolyError};

/// Sylvester matrix of `f` and `g` with respect to variable index `v`.
/// Rows hold coefficients from the highest power down.
pub fn sylvester_matrix(f: &MultiPoly, g: &MultiPoly, v: usize) -> Vec<Vec<MultiPoly>> {
    let vars = f.vars().to_vec();
    let fc = f.coeffs_in(v);
    let gc = g.coeffs_in(v);
    let m = fc.len() - 1;
    let n = gc.len() - 1;
    let size = m + n;
    let zero = MultiPoly::zero(&vars);
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![zero.clone(); size];
        for (k, c) in fc.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![zero.clone(); size];
        for (k, c) in gc.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Determinant of a square polynomial matrix by Bareiss elimination. Every
/// division is exact; a row swap flips the sign.
pub fn determinant_bareiss(mut a: Vec<Vec<MultiPoly>>, vars: &[String]) -> MultiPoly {
    let n = a.len();
    if n == 0 {
        return MultiPoly::one(vars);
    }
    let mut negate = false;
    let mut prev = MultiPoly::one(vars);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            // choose the sparsest available pivot to limit growth
            let pick = (k + 1..n)
                .filter(|&i| !a[i][k].is_zero())
                .min_by_key(|&i| a[i][k].num_terms());
            match pick {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return MultiPoly::zero(vars),
            }
        }
        let pivot = a[k][k].clone();
        for i in k + 1..n {
            let aik = a[i][k].clone();
            for j in k + 1..n {
                let num = &(&pivot * &a[i][j]) - &(&aik * &a[k][j]);
                a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            a[i][k] = MultiPoly::zero(vars);
        }
        prev = pivot;
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

impl MultiPoly {
    /// Resultant of `self` and `g` with respect to `var`.
    pub fn sylvester_resultant(&self, g: &MultiPoly, var: &str) -> Result<MultiPoly, PolyError> {
        if self.is_zero() || g.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let mut all = self.vars().to_vec();
        all.extend(g.vars().iter().cloned());
        let vars = super::canonical_var_order(&all);
        let f = self.with_vars(&vars)?;
        let g = g.with_vars(&vars)?;
        let v = f.var_index(var)?;
        if f.degree_in(v) == 0 || g.degree_in(v) == 0 {
            return Err(PolyError::DegreeZero(var.to_string()));
        }
        Ok(determinant_bareiss(sylvester_matrix(&f, &g, v), &vars))
    }

    /// Eliminates `var` from the pair: the result vanishes at every point
    /// where `self` and `g` have a common root in `var`. Uses the Sylvester
    /// resultant, `a^deg(g)` when `self = a` is free of `var` (and
    /// symmetrically), and the input of lower degree when both are free of
    /// `var`.
    pub fn eliminate(&self, g: &MultiPoly, var: &str) -> Result<MultiPoly, PolyError> {
        if self.is_zero() || g.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let df = self.degree_in_var(var).unwrap_or(0);
        let dg = g.degree_in_var(var).unwrap_or(0);
        match (df, dg) {
            (0, 0) if g.total_degree() < self.total_degree() => Ok(g.clone()),
            (0, 0) => Ok(self.clone()),
            (0, _) => Ok(self.pow(dg)),
            (_, 0) => Ok(g.pow(df)),
            _ => self.sylvester_resultant(g, var),
        }
    }
}
