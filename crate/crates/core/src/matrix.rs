//! Dense integer and rational matrices, sized for desk-scale exact algebra.

use crate::error::{CoreError, Result};
use crate::poly::IntPoly;
use crate::Rational;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;

/// Row-major integer matrix. Vectors are columns; a matrix acts on the left.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut m = IntMatrix::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        IntMatrix::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
    }

    /// Row-major flat entries, e.g. for serialization.
    pub fn from_flat(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(CoreError::DimensionMismatch(format!(
                "expected {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
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

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (a, b) in m.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        m
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (a, b) in m.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        m
    }

    pub fn neg(&self) -> IntMatrix {
        let mut m = self.clone();
        for a in m.data.iter_mut() {
            *a = -std::mem::take(a);
        }
        m
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut m = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        m[(i, j)] += a * b;
                    }
                }
            }
        }
        m
    }

    pub fn mul_scalar(&self, c: &BigInt) -> IntMatrix {
        let mut m = self.clone();
        for a in m.data.iter_mut() {
            *a *= c;
        }
        m
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn pow(&self, mut e: u32) -> IntMatrix {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = IntMatrix::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.is_zero())
    }

    /// Kronecker product `self (x) other`.
    pub fn kronecker(&self, other: &IntMatrix) -> IntMatrix {
        let mut m = IntMatrix::zero(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        m[(i * other.rows + k, j * other.cols + l)] = a * &other[(k, l)];
                    }
                }
            }
        }
        m
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(CoreError::NotSquareMatrix);
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.data.clone();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k * n + k].is_zero() {
                let pivot = (k + 1..n).find(|&i| !a[i * n + k].is_zero());
                match pivot {
                    Some(i) => {
                        for j in 0..n {
                            a.swap(k * n + j, i * n + j);
                        }
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j];
                    a[i * n + j] = &t / &prev;
                }
                a[i * n + k] = BigInt::zero();
            }
            prev = a[k * n + k].clone();
        }
        let d = a[(n - 1) * n + (n - 1)].clone();
        Ok(if sign < 0 { -d } else { d })
    }

    /// Characteristic polynomial `det(xI - M)`, exact over `Z`
    /// (Faddeev-LeVerrier; the interior divisions are exact).
    pub fn charpoly(&self) -> Result<IntPoly> {
        if !self.is_square() {
            return Err(CoreError::NotSquareMatrix);
        }
        let n = self.rows;
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        let mut m = IntMatrix::zero(n, n);
        for k in 1..=n {
            m = self.mul(&m);
            let c = coeffs[n - k + 1].clone();
            for i in 0..n {
                m[(i, i)] += &c;
            }
            let tr: BigInt = (0..n)
                .map(|i| (0..n).map(|j| &self[(i, j)] * &m[(j, i)]).sum::<BigInt>())
                .sum();
            coeffs[n - k] = -tr / BigInt::from(k as i64);
        }
        Ok(IntPoly::from_coeffs(coeffs))
    }

    pub fn to_rational(&self) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|a| Rational::from_integer(a.clone()))
                .collect(),
        }
    }

    /// Evaluate a polynomial at this (square) matrix.
    pub fn eval_poly(&self, p: &IntPoly) -> IntMatrix {
        assert!(self.is_square());
        let n = self.rows;
        let mut acc = IntMatrix::zero(n, n);
        for c in p.coeffs().iter().rev() {
            acc = self.mul(&acc);
            for i in 0..n {
                acc[(i, i)] += c;
            }
        }
        acc
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(
                f,
                "[{}]",
                self.row(i)
                    .iter()
                    .map(|a| a.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            )?;
        }
        Ok(())
    }
}

/// Row-major matrix over `Q` for the places where denominators are forced.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows);
        let mut m = RatMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let t = a * b;
                        m[(i, j)] += t;
                    }
                }
            }
        }
        m
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<RatMatrix> {
        if self.rows != self.cols {
            return Err(CoreError::NotSquareMatrix);
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RatMatrix::identity(n);
        for k in 0..n {
            let pivot = (k..n).find(|&i| !a[(i, k)].is_zero());
            let p = match pivot {
                Some(p) => p,
                None => return Err(CoreError::SingularMatrix),
            };
            if p != k {
                for j in 0..n {
                    let (x, y) = (a[(k, j)].clone(), a[(p, j)].clone());
                    a[(k, j)] = y;
                    a[(p, j)] = x;
                    let (x, y) = (inv[(k, j)].clone(), inv[(p, j)].clone());
                    inv[(k, j)] = y;
                    inv[(p, j)] = x;
                }
            }
            let d = a[(k, k)].clone();
            for j in 0..n {
                a[(k, j)] = &a[(k, j)] / &d;
                inv[(k, j)] = &inv[(k, j)] / &d;
            }
            for i in 0..n {
                if i == k || a[(i, k)].is_zero() {
                    continue;
                }
                let f = a[(i, k)].clone();
                for j in 0..n {
                    let t = &a[(k, j)] * &f;
                    a[(i, j)] -= t;
                    let t = &inv[(k, j)] * &f;
                    inv[(i, j)] -= t;
                }
            }
        }
        Ok(inv)
    }

    /// `(integer matrix, common denominator)` with `self = matrix / den`.
    pub fn clear_denominators(&self) -> (IntMatrix, BigInt) {
        let mut den = BigInt::one();
        for a in &self.data {
            den = num_integer::lcm(den, a.denom().clone());
        }
        let m = IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|a| a.numer() * (&den / a.denom()))
                .collect(),
        };
        (m, den)
    }

    pub fn scale(&self, c: &Rational) -> RatMatrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= c;
        }
        out
    }

    /// `Some(integer matrix)` when every entry is an integer.
    pub fn to_integer(&self) -> Option<IntMatrix> {
        let mut data = Vec::with_capacity(self.data.len());
        for a in &self.data {
            if !a.denom().is_one() {
                return None;
            }
            data.push(a.numer().clone());
        }
        Some(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Dimension of the null space over `Q`, by Gaussian elimination.
    pub fn nullity(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        for col in 0..a.cols {
            let pivot = (rank..a.rows).find(|&i| !a[(i, col)].is_zero());
            let p = match pivot {
                Some(p) => p,
                None => continue,
            };
            if p != rank {
                for j in 0..a.cols {
                    let (x, y) = (a[(rank, j)].clone(), a[(p, j)].clone());
                    a[(rank, j)] = y;
                    a[(p, j)] = x;
                }
            }
            let d = a[(rank, col)].clone();
            for i in 0..a.rows {
                if i == rank || a[(i, col)].is_zero() {
                    continue;
                }
                let f = &a[(i, col)] / &d;
                for j in 0..a.cols {
                    let t = &a[(rank, j)] * &f;
                    a[(i, j)] -= t;
                }
            }
            rank += 1;
        }
        a.cols - rank
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}
