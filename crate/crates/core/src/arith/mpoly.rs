//! Sparse multivariate polynomials over a field, used for the small exact
//! symbolic computations (normal crossings, small star quivers).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use super::field::Field;
use super::matrix::Matrix;
use crate::error::{Error, Result};

/// Dense exponent vector; keys compare lexicographically with variable 0
/// most significant.
pub type Monomial = Vec<u16>;

#[derive(Clone, PartialEq)]
pub struct MPoly<F> {
    nvars: usize,
    terms: BTreeMap<Monomial, F>,
}

impl<F: Field> fmt::Debug for MPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display(None))
    }
}

impl<F: Field> MPoly<F> {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: F) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, F::one())
    }

    /// `c * x_i`.
    pub fn var(nvars: usize, i: usize, c: F) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            let mut m = vec![0; nvars];
            m[i] = 1;
            p.terms.insert(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degrees of the monomials, if all agree.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|m| m.iter().map(|&e| e as usize).sum::<usize>());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Coefficient of the lexicographically first (largest) monomial.
    pub fn leading_coefficient(&self) -> Option<&F> {
        self.terms.values().next_back()
    }

    fn insert_add(&mut self, m: Monomial, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = v.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_add(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v.clone() * c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m: Monomial = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                out.insert_add(m, c1.clone() * c2.clone());
            }
        }
        out
    }

    pub fn eval(&self, point: &[F]) -> F {
        assert_eq!(point.len(), self.nvars);
        self.terms.iter().fold(F::zero(), |acc, (m, c)| {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m) {
                if e > 0 {
                    t = t * x.powi(e as i64);
                }
            }
            acc + t
        })
    }

    /// Human-readable form; `names` overrides `x0, x1, ...`.
    pub fn display(&self, names: Option<&[String]>) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (m, c) in self.terms.iter().rev() {
            let mut factors = Vec::new();
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = names.map(|n| n[i].clone()).unwrap_or_else(|| format!("x{i}"));
                factors.push(if e == 1 { name } else { format!("{name}^{e}") });
            }
            let mono = factors.join("*");
            let cs = c.to_string();
            parts.push(match (mono.is_empty(), cs.as_str()) {
                (true, _) => cs,
                (false, "1") => mono,
                (false, "-1") => format!("-{mono}"),
                (false, _) => format!("{cs}*{mono}"),
            });
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

/// Determinant of a matrix of polynomials by Laplace expansion along rows,
/// memoised over the set of used columns. Limited to 20 columns.
pub fn det_mpoly<F: Field>(m: &Matrix<MPoly<F>>, nvars: usize) -> Result<MPoly<F>> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    if n > 20 {
        return Err(Error::Usage(format!("symbolic determinant of size {n} exceeds the limit of 20")));
    }
    // memo[mask] = det of rows (n - popcount(mask)).. with columns in mask
    let mut memo: Vec<Option<MPoly<F>>> = vec![None; 1 << n];
    memo[0] = Some(MPoly::one(nvars));
    let masks_by_size = {
        let mut v: Vec<usize> = (1..(1usize << n)).collect();
        v.sort_by_key(|x| x.count_ones());
        v
    };
    for mask in masks_by_size {
        let k = mask.count_ones() as usize;
        let row = n - k;
        let mut acc = MPoly::zero(nvars);
        // sign: position of column among the columns in mask
        for (pos, col) in (0..n).filter(|c| mask >> c & 1 == 1).enumerate() {
            let entry = &m[(row, col)];
            if entry.is_zero() {
                continue;
            }
            let Some(minor) = memo[mask & !(1 << col)].as_ref() else { continue };
            if minor.is_zero() {
                continue;
            }
            let term = entry.mul(minor);
            acc = if pos % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        memo[mask] = Some(acc);
    }
    Ok(memo[(1 << n) - 1].take().unwrap())
}

impl<F: Field> MPoly<F> {
    /// Product of the listed variables.
    pub fn product_of_vars(nvars: usize, vars: &[usize]) -> Self {
        vars.iter().fold(Self::one(nvars), |acc, &v| acc.mul(&Self::var(nvars, v, F::one())))
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&vec![0; self.nvars]).is_some_and(One::is_one)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::field::{rat, Rational};

    #[test]
    fn det_of_symbolic_two_by_two() {
        // [[x0, x1], [x2, x3]] -> x0 x3 - x1 x2
        let v = |i| MPoly::<Rational>::var(4, i, rat(1));
        let m = Matrix::from_rows(&[vec![v(0), v(1)], vec![v(2), v(3)]]);
        let d = det_mpoly(&m, 4).unwrap();
        let expected = v(0).mul(&v(3)).sub(&v(1).mul(&v(2)));
        assert_eq!(d, expected);
        assert_eq!(d.homogeneous_degree(), Some(2));
        assert_eq!(d.display(None), "x0*x3 - x1*x2");
    }

    #[test]
    fn det_matches_numeric_after_evaluation() {
        let v = |i| MPoly::<Rational>::var(9, i, rat(1));
        let m = Matrix::from_fn(3, 3, |i, j| v(3 * i + j));
        let d = det_mpoly(&m, 9).unwrap();
        let pt: Vec<Rational> = (0..9).map(|i| rat((i * i + 1) as i64)).collect();
        let num = Matrix::from_fn(3, 3, |i, j| pt[3 * i + j].clone()).det().unwrap();
        assert_eq!(d.eval(&pt), num);
        assert_eq!(d.num_terms(), 6);
    }
}
