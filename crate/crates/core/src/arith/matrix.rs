//! Dense row-major matrices and elimination over a [`Field`].

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::field::{Field, Rational};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.data.chunks(self.cols.max(1)).take(self.rows)).finish()
    }
}

impl<T> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(rows * cols, data.len(), "matrix data length");
        Matrix { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<T: Clone> Matrix<T> {
    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.iter().flatten().cloned().collect() }
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Copy with one column removed.
    pub fn without_col(&self, col: usize) -> Self {
        Matrix::from_fn(self.rows, self.cols - 1, |i, j| self[(i, if j < col { j } else { j + 1 })].clone())
    }

    /// Copy with row and column sets selected.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }
}

impl<T: Clone + Zero> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Clone + Zero + Add<Output = T> + Mul<Output = T>> Matrix<T> {
    pub fn mul_mat(&self, other: &Matrix<T>) -> Result<Matrix<T>> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out: Matrix<T> = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out[(i, j)].clone() + a.clone() * other[(k, j)].clone();
                    out[(i, j)] = v;
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.rows);
        (0..self.cols)
            .map(|j| (0..self.rows).fold(T::zero(), |acc, i| acc + v[i].clone() * self[(i, j)].clone()))
            .collect()
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).fold(T::zero(), |acc, j| acc + self[(i, j)].clone() * v[j].clone()))
            .collect()
    }
}

impl<T: Clone + Add<Output = T>> Matrix<T> {
    pub fn add_mat(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

/// Outcome of forward elimination.
struct Echelon<F> {
    reduced: Matrix<F>,
    pivots: Vec<usize>,
    swaps: usize,
}

fn eliminate<F: Field>(mut m: Matrix<F>, full: bool) -> Echelon<F> {
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut swaps = 0;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let mut best = None;
        let mut best_w = 0.0;
        for i in r..rows {
            let w = m[(i, c)].pivot_weight();
            if w > best_w {
                best_w = w;
                best = Some(i);
                if F::is_exact() {
                    break;
                }
            }
        }
        let Some(p) = best else { continue };
        if p != r {
            m.swap_rows(p, r);
            swaps += 1;
        }
        let inv = m[(r, c)].inverse().expect("nonzero pivot");
        let start = if full { 0 } else { r + 1 };
        for i in start..rows {
            if i == r || m[(i, c)].is_zero() {
                continue;
            }
            let factor = m[(i, c)].clone() * inv.clone();
            for j in c..cols {
                let v = m[(i, j)].clone() - factor.clone() * m[(r, j)].clone();
                m[(i, j)] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    Echelon { reduced: m, pivots, swaps }
}

impl<F: Field> Matrix<F> {
    /// Determinant by Gaussian elimination with pivoting.
    pub fn det(&self) -> Result<F> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let ech = eliminate(self.clone(), false);
        if ech.pivots.len() < n {
            return Ok(F::zero());
        }
        let mut d = F::one();
        for i in 0..n {
            d = d * ech.reduced[(i, i)].clone();
        }
        Ok(if ech.swaps % 2 == 1 { -d } else { d })
    }

    pub fn rank(&self) -> usize {
        eliminate(self.clone(), false).pivots.len()
    }

    /// Solves `self * x = b`. Returns `Ok(None)` when inconsistent and
    /// `Err(DependentWeights)` when the solution is not unique.
    pub fn solve_unique(&self, b: &[F]) -> Result<Option<Vec<F>>> {
        if b.len() != self.rows {
            return Err(Error::LengthMismatch { expected: self.rows, got: b.len() });
        }
        let aug = Matrix::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                b[i].clone()
            }
        });
        let ech = eliminate(aug, true);
        if ech.pivots.contains(&self.cols) {
            return Ok(None);
        }
        if ech.pivots.len() < self.cols {
            return Err(Error::DependentWeights);
        }
        let m = &ech.reduced;
        let x = (0..self.cols).map(|r| m[(r, self.cols)].clone() / m[(r, r)].clone()).collect::<Vec<_>>();
        // pivots are 0..cols in order, so row r holds variable r
        debug_assert!(ech.pivots.iter().enumerate().all(|(i, &c)| i == c));
        Ok(Some(x))
    }

    /// Basis of the right kernel.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let ech = eliminate(self.clone(), true);
        let m = &ech.reduced;
        let free: Vec<usize> = (0..self.cols).filter(|c| !ech.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![F::zero(); self.cols];
                v[f] = F::one();
                for (r, &pc) in ech.pivots.iter().enumerate() {
                    v[pc] = -(m[(r, f)].clone() / m[(r, pc)].clone());
                }
                v
            })
            .collect()
    }
}

/// Fraction-free (Bareiss) determinant over an integral domain with exact
/// division.
pub fn det_bareiss<T>(m: &Matrix<T>) -> Result<T>
where
    T: Clone + Zero + One + PartialEq + Sub<Output = T> + Mul<Output = T> + Neg<Output = T> + std::ops::Div<Output = T>,
{
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(T::one());
    }
    let mut a = m.clone();
    let mut prev = T::one();
    let mut negate = false;
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                return Ok(T::zero());
            };
            a.swap_rows(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (a[(i, j)].clone() * a[(k, k)].clone() - a[(i, k)].clone() * a[(k, j)].clone()) / prev.clone();
                a[(i, j)] = v;
            }
        }
        prev = a[(k, k)].clone();
    }
    let d = a[(n - 1, n - 1)].clone();
    Ok(if negate { -d } else { d })
}

/// Exact rational determinant: clears denominators row by row, then runs
/// Bareiss elimination over the integers.
pub fn det_rational_fraction_free(m: &Matrix<Rational>) -> Result<Rational> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows, cols: m.cols });
    }
    let mut scale = BigInt::one();
    let mut int_rows = Vec::with_capacity(m.rows);
    for i in 0..m.rows {
        let l = m.row(i).iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        scale *= &l;
        int_rows.push(m.row(i).iter().map(|x| x.numer() * (&l / x.denom())).collect::<Vec<_>>());
    }
    let im = Matrix::from_rows(&int_rows);
    let d = det_bareiss(&im)?;
    Ok(Rational::new(d, scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::field::{rat, PrimeField};

    #[test]
    fn det_two_by_two_rational() {
        let m = Matrix::from_rows(&[vec![rat(1), rat(2)], vec![rat(3), rat(4)]]);
        assert_eq!(m.det().unwrap(), rat(-2));
        assert_eq!(det_rational_fraction_free(&m).unwrap(), rat(-2));
    }

    #[test]
    fn det_identity_118() {
        let f = PrimeField::default_field();
        let m: Matrix<crate::Fp> = Matrix::from_fn(118, 118, |i, j| f.elem((i == j) as u64));
        assert_eq!(m.det().unwrap(), f.elem(1));
    }

    #[test]
    fn det_rejects_non_square() {
        let m: Matrix<f64> = Matrix::zeros(2, 3);
        assert!(matches!(m.det(), Err(Error::NotSquare { rows: 2, cols: 3 })));
    }

    #[test]
    fn rank_and_kernel() {
        let m = Matrix::from_rows(&[vec![rat(1), rat(2), rat(3)], vec![rat(2), rat(4), rat(6)]]);
        assert_eq!(m.rank(), 1);
        let k = m.kernel();
        assert_eq!(k.len(), 2);
        for v in k {
            assert!(m.mul_vec(&v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn solve_unique_overdetermined() {
        // columns (1,0,1) and (0,1,1); b = 2c1 + 3c2
        let m = Matrix::from_rows(&[vec![rat(1), rat(0)], vec![rat(0), rat(1)], vec![rat(1), rat(1)]]);
        let x = m.solve_unique(&[rat(2), rat(3), rat(5)]).unwrap().unwrap();
        assert_eq!(x, vec![rat(2), rat(3)]);
        assert_eq!(m.solve_unique(&[rat(2), rat(3), rat(4)]).unwrap(), None);
        let dep = Matrix::from_rows(&[vec![rat(1), rat(2)], vec![rat(2), rat(4)]]);
        assert_eq!(dep.solve_unique(&[rat(1), rat(2)]), Err(Error::DependentWeights));
    }

    #[test]
    fn float_det_uses_partial_pivoting() {
        let m = Matrix::from_rows(&[vec![1e-18f64, 1.0], vec![1.0, 1.0]]);
        assert!((m.det().unwrap() + 1.0).abs() < 1e-12);
    }
}
