//! Hermite and Smith normal forms with unimodular transforms, plus the
//! lattice utilities built on them (saturated kernels, span comparison).

use crate::error::{CoreError, Result};
use crate::matrix::IntMatrix;
use crate::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Row Hermite normal form.
///
/// Returns `(h, u)` with `u` unimodular and `h = u * m` in row echelon form:
/// pivots positive, entries above each pivot reduced into `[0, pivot)`,
/// zero rows last.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut r = 0usize;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // Euclid on the entries of column c at rows >= r.
        loop {
            let mut best: Option<usize> = None;
            for i in r..rows {
                if h[(i, c)].is_zero() {
                    continue;
                }
                best = match best {
                    None => Some(i),
                    Some(b) if h[(i, c)].abs() < h[(b, c)].abs() => Some(i),
                    keep => keep,
                };
            }
            let pivot_row = match best {
                None => break,
                Some(p) => p,
            };
            if pivot_row != r {
                swap_rows(&mut h, r, pivot_row);
                swap_rows(&mut u, r, pivot_row);
            }
            let mut done = true;
            let pivot = h[(r, c)].clone();
            for i in r + 1..rows {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = rounded_div(&h[(i, c)], &pivot);
                row_op(&mut h, i, r, &q);
                row_op(&mut u, i, r, &q);
                if !h[(i, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            negate_row(&mut h, r);
            negate_row(&mut u, r);
        }
        let pivot = h[(r, c)].clone();
        for i in 0..r {
            let q = h[(i, c)].div_floor(&pivot);
            if !q.is_zero() {
                row_op(&mut h, i, r, &q);
                row_op(&mut u, i, r, &q);
            }
        }
        r += 1;
    }
    (h, u)
}

/// Smith normal form.
///
/// Returns `(d, u, v)` with `u`, `v` unimodular and `u * m * v = d` diagonal,
/// nonnegative, each diagonal entry dividing the next.
pub fn smith_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let steps = rows.min(cols);
    let mut t = 0usize;
    while t < steps {
        // Find a nonzero entry in the remaining block, smallest in magnitude.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if d[(i, j)].is_zero() {
                    continue;
                }
                best = match best {
                    None => Some((i, j)),
                    Some((bi, bj)) if d[(i, j)].abs() < d[(bi, bj)].abs() => Some((i, j)),
                    keep => keep,
                };
            }
        }
        let (pi, pj) = match best {
            None => break,
            Some(p) => p,
        };
        if pi != t {
            swap_rows(&mut d, t, pi);
            swap_rows(&mut u, t, pi);
        }
        if pj != t {
            swap_cols(&mut d, t, pj);
            swap_cols(&mut v, t, pj);
        }
        // Clear row and column t.
        let mut dirty = false;
        for i in t + 1..rows {
            if d[(i, t)].is_zero() {
                continue;
            }
            let q = rounded_div(&d[(i, t)], &d[(t, t)]);
            row_op(&mut d, i, t, &q);
            row_op(&mut u, i, t, &q);
            if !d[(i, t)].is_zero() {
                dirty = true;
            }
        }
        for j in t + 1..cols {
            if d[(t, j)].is_zero() {
                continue;
            }
            let q = rounded_div(&d[(t, j)], &d[(t, t)]);
            col_op(&mut d, j, t, &q);
            col_op(&mut v, j, t, &q);
            if !d[(t, j)].is_zero() {
                dirty = true;
            }
        }
        if dirty {
            continue;
        }
        // Enforce the divisibility chain before moving on.
        let pivot = d[(t, t)].clone();
        let mut fixed = true;
        'scan: for i in t + 1..rows {
            for j in t + 1..cols {
                if !d[(i, j)].mod_floor(&pivot).is_zero() {
                    // Fold row i into row t and restart the reduction.
                    let one = BigInt::from(-1);
                    row_op(&mut d, t, i, &one);
                    row_op(&mut u, t, i, &one);
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if fixed {
            t += 1;
        }
    }
    for t in 0..steps {
        if d[(t, t)].is_negative() {
            negate_row(&mut d, t);
            negate_row(&mut u, t);
        }
    }
    (d, u, v)
}

/// Invariant factors (nonzero diagonal of the Smith form).
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    let (d, _, _) = smith_normal_form(m);
    let mut out = Vec::new();
    for t in 0..m.rows().min(m.cols()) {
        if d[(t, t)].is_zero() {
            break;
        }
        out.push(d[(t, t)].clone());
    }
    out
}

/// Basis of the saturated integer kernel `{x : m x = 0}`, as column vectors.
///
/// Saturated: the Smith form of the matrix with these columns has all
/// invariant factors 1, so the basis spans the full lattice of integer
/// solutions, not a finite-index sublattice.
pub fn integer_kernel(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let (d, _, v) = smith_normal_form(m);
    let steps = m.rows().min(m.cols());
    let mut out = Vec::new();
    for j in 0..m.cols() {
        let zero_diag = j >= steps || d[(j, j)].is_zero();
        if zero_diag {
            out.push(v.col(j));
        }
    }
    out
}

/// Rank over `Q` (count of nonzero invariant factors).
pub fn rank(m: &IntMatrix) -> usize {
    invariant_factors(m).len()
}

/// Canonical form of the lattice spanned by the rows: Hermite form with zero
/// rows dropped. Two generating sets span the same lattice iff these agree.
pub fn lattice_row_canon(gens: &IntMatrix) -> IntMatrix {
    let (h, _) = hermite_normal_form(gens);
    let mut rows_kept = Vec::new();
    for i in 0..h.rows() {
        if h.row(i).iter().any(|a| !a.is_zero()) {
            rows_kept.push(h.row(i).to_vec());
        }
    }
    IntMatrix::from_rows(rows_kept)
}

/// Whether two row-generating sets span the same sublattice of `Z^n`.
pub fn same_row_lattice(a: &IntMatrix, b: &IntMatrix) -> bool {
    if a.cols() != b.cols() {
        return false;
    }
    lattice_row_canon(a) == lattice_row_canon(b)
}

/// Solve `a x = b` over `Q`; `None` when inconsistent.
pub fn solve_rational(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<Rational>> {
    assert_eq!(a.rows(), b.len());
    let (rows, cols) = (a.rows(), a.cols());
    let mut m = a.to_rational();
    let mut rhs: Vec<Rational> = b
        .iter()
        .map(|x| Rational::from_integer(x.clone()))
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        let pivot = (r..rows).find(|&i| !m[(i, c)].is_zero());
        let p = match pivot {
            Some(p) => p,
            None => continue,
        };
        if p != r {
            for j in 0..cols {
                let (x, y) = (m[(r, j)].clone(), m[(p, j)].clone());
                m[(r, j)] = y;
                m[(p, j)] = x;
            }
            rhs.swap(r, p);
        }
        let d = m[(r, c)].clone();
        for j in 0..cols {
            m[(r, j)] = &m[(r, j)] / &d;
        }
        rhs[r] = &rhs[r] / &d;
        for i in 0..rows {
            if i == r || m[(i, c)].is_zero() {
                continue;
            }
            let f = m[(i, c)].clone();
            for j in 0..cols {
                let t = &m[(r, j)] * &f;
                m[(i, j)] -= t;
            }
            let t = &rhs[r] * &f;
            rhs[i] -= t;
        }
        pivots.push((r, c));
        r += 1;
    }
    if rhs[r..rows].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (row, col) in pivots {
        x[col] = rhs[row].clone();
    }
    Some(x)
}

/// Solve `a x = b` over `Z`; `None` when there is no integral solution.
pub fn solve_integral(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let x = solve_rational(a, b)?;
    let mut out = Vec::with_capacity(x.len());
    for v in x {
        if !v.denom().is_one() {
            return None;
        }
        out.push(v.numer().clone());
    }
    Some(out)
}

pub fn assert_unimodular(m: &IntMatrix) -> Result<()> {
    let d = m.det()?;
    if d.abs().is_one() {
        Ok(())
    } else {
        Err(CoreError::Invalid(format!(
            "determinant {} is not a unit",
            d
        )))
    }
}

fn swap_rows(m: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.cols() {
        let (x, y) = (m[(a, j)].clone(), m[(b, j)].clone());
        m[(a, j)] = y;
        m[(b, j)] = x;
    }
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.rows() {
        let (x, y) = (m[(i, a)].clone(), m[(i, b)].clone());
        m[(i, a)] = y;
        m[(i, b)] = x;
    }
}

/// `row a -= q * row b`
fn row_op(m: &mut IntMatrix, a: usize, b: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for j in 0..m.cols() {
        let t = q * &m[(b, j)];
        m[(a, j)] -= t;
    }
}

/// `col a -= q * col b`
fn col_op(m: &mut IntMatrix, a: usize, b: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for i in 0..m.rows() {
        let t = q * &m[(i, b)];
        m[(i, a)] -= t;
    }
}

fn negate_row(m: &mut IntMatrix, r: usize) {
    for j in 0..m.cols() {
        m[(r, j)] = -std::mem::take(&mut m[(r, j)]);
    }
}

/// Division rounded to nearest, for fast Euclidean descent.
fn rounded_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    let two_r = BigInt::from(2) * r.abs();
    if two_r > b.abs() {
        if (a.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}
