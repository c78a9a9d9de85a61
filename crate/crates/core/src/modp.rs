//! Small dense linear algebra and polynomial arithmetic over `F_p`,
//! `p < 2^31`, with `u64` scalars and `u128` intermediate products.

/// Scalar arithmetic modulo a prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fp {
    pub p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Fp {
        assert!((2..1 << 31).contains(&p), "modulus out of range");
        Fp { p }
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> u64 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero");
        self.pow(a, self.p - 2)
    }
}

/// Polynomials over `F_p`, dense, low-to-high, trimmed.
pub mod poly {
    use super::Fp;

    pub fn trim(mut v: Vec<u64>) -> Vec<u64> {
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    pub fn deg(a: &[u64]) -> Option<usize> {
        if a.is_empty() {
            None
        } else {
            Some(a.len() - 1)
        }
    }

    pub fn add(f: &Fp, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut v = vec![0u64; n];
        for (i, slot) in v.iter_mut().enumerate() {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            *slot = f.add(x, y);
        }
        trim(v)
    }

    pub fn sub(f: &Fp, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut v = vec![0u64; n];
        for (i, slot) in v.iter_mut().enumerate() {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            *slot = f.sub(x, y);
        }
        trim(v)
    }

    pub fn mul(f: &Fp, a: &[u64], b: &[u64]) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut v = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                v[i + j] = f.add(v[i + j], f.mul(x, y));
            }
        }
        trim(v)
    }

    pub fn scale(f: &Fp, a: &[u64], c: u64) -> Vec<u64> {
        trim(a.iter().map(|&x| f.mul(x, c)).collect())
    }

    /// Make monic; the input must be nonzero.
    pub fn monic(f: &Fp, a: &[u64]) -> Vec<u64> {
        let lc = *a.last().expect("nonzero");
        if lc == 1 {
            return a.to_vec();
        }
        scale(f, a, f.inv(lc))
    }

    /// Division with remainder; the divisor must be nonzero.
    pub fn divrem(f: &Fp, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
        let db = deg(b).expect("division by zero");
        let mut rem = a.to_vec();
        if a.len() < b.len() {
            return (Vec::new(), trim(rem));
        }
        let mut quot = vec![0u64; a.len() - b.len() + 1];
        let inv_lc = f.inv(b[db]);
        for i in (db..a.len()).rev() {
            let r = rem[i];
            if r == 0 {
                continue;
            }
            let q = f.mul(r, inv_lc);
            let shift = i - db;
            quot[shift] = q;
            for (j, &c) in b.iter().enumerate() {
                rem[shift + j] = f.sub(rem[shift + j], f.mul(q, c));
            }
        }
        (trim(quot), trim(rem))
    }

    pub fn rem(f: &Fp, a: &[u64], b: &[u64]) -> Vec<u64> {
        divrem(f, a, b).1
    }

    /// Monic gcd.
    pub fn gcd(f: &Fp, a: &[u64], b: &[u64]) -> Vec<u64> {
        let (mut r0, mut r1) = (trim(a.to_vec()), trim(b.to_vec()));
        while !r1.is_empty() {
            let r = rem(f, &r0, &r1);
            r0 = r1;
            r1 = r;
        }
        if r0.is_empty() {
            r0
        } else {
            monic(f, &r0)
        }
    }

    /// Extended gcd: returns `(g, s, t)` monic with `s a + t b = g`.
    pub fn xgcd(f: &Fp, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
        let (mut r0, mut r1) = (trim(a.to_vec()), trim(b.to_vec()));
        let (mut s0, mut s1) = (vec![1u64], Vec::new());
        let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
        while !r1.is_empty() {
            let (q, r) = divrem(f, &r0, &r1);
            let ns = sub(f, &s0, &mul(f, &q, &s1));
            let nt = sub(f, &t0, &mul(f, &q, &t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = ns;
            t0 = t1;
            t1 = nt;
        }
        if r0.is_empty() {
            return (r0, s0, t0);
        }
        let lc = *r0.last().unwrap();
        let ilc = f.inv(lc);
        (scale(f, &r0, ilc), scale(f, &s0, ilc), scale(f, &t0, ilc))
    }

    pub fn derivative(f: &Fp, a: &[u64]) -> Vec<u64> {
        if a.len() <= 1 {
            return Vec::new();
        }
        trim(
            a.iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(c, (i as u64) % f.p))
                .collect(),
        )
    }

    /// `a^e mod m` by binary powering; `e` given as big-endian bits.
    pub fn pow_mod_bits(f: &Fp, a: &[u64], e_bits: &[bool], m: &[u64]) -> Vec<u64> {
        let mut acc = vec![1u64];
        for &bit in e_bits {
            acc = rem(f, &mul(f, &acc, &acc), m);
            if bit {
                acc = rem(f, &mul(f, &acc, a), m);
            }
        }
        acc
    }

    pub fn pow_mod_u64(f: &Fp, a: &[u64], e: u64, m: &[u64]) -> Vec<u64> {
        let bits: Vec<bool> = (0..64)
            .rev()
            .map(|i| (e >> i) & 1 == 1)
            .skip_while(|&b| !b)
            .collect();
        if bits.is_empty() {
            return vec![1u64];
        }
        pow_mod_bits(f, a, &bits, m)
    }
}

/// Row-reduced dense matrices over `F_p`, column-vector convention.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMatrix {
    pub field: Fp,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
}

impl FpMatrix {
    pub fn zero(field: Fp, rows: usize, cols: usize) -> FpMatrix {
        FpMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Fp, n: usize) -> FpMatrix {
        let mut m = FpMatrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn at(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = FpMatrix::zero(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.at(i, j));
            }
        }
        t
    }

    pub fn mat_mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.rows);
        let f = self.field;
        let mut m = FpMatrix::zero(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(m.at(i, j), f.mul(a, other.at(k, j)));
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.field.p;
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.cols, v.len());
        let f = self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = 0u64;
                for (j, &vj) in v.iter().enumerate() {
                    acc = f.add(acc, f.mul(self.at(i, j), vj));
                }
                acc
            })
            .collect()
    }

    /// Vertical stack; all blocks must share the column count.
    pub fn stack(blocks: &[&FpMatrix]) -> FpMatrix {
        let field = blocks[0].field;
        let cols = blocks[0].cols;
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for b in blocks {
            assert_eq!(b.cols, cols);
            data.extend_from_slice(&b.data);
        }
        FpMatrix {
            field,
            rows,
            cols,
            data,
        }
    }

    /// Horizontal concatenation; all blocks must share the row count.
    pub fn hcat(blocks: &[&FpMatrix]) -> FpMatrix {
        let field = blocks[0].field;
        let rows = blocks[0].rows;
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = FpMatrix::zero(field, rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, rows);
            for i in 0..rows {
                for j in 0..b.cols {
                    out.set(i, off + j, b.at(i, j));
                }
            }
            off += b.cols;
        }
        out
    }

    /// Basis of the null space, as column vectors.
    pub fn nullspace(&self) -> Vec<Vec<u64>> {
        let f = self.field;
        let mut a = self.clone();
        let mut pivot_col_of_row: Vec<usize> = Vec::new();
        let mut r = 0usize;
        for c in 0..a.cols {
            let pivot = (r..a.rows).find(|&i| a.at(i, c) != 0);
            let p = match pivot {
                Some(p) => p,
                None => continue,
            };
            if p != r {
                for j in 0..a.cols {
                    let (x, y) = (a.at(r, j), a.at(p, j));
                    a.set(r, j, y);
                    a.set(p, j, x);
                }
            }
            let inv = f.inv(a.at(r, c));
            for j in 0..a.cols {
                a.set(r, j, f.mul(a.at(r, j), inv));
            }
            for i in 0..a.rows {
                if i == r || a.at(i, c) == 0 {
                    continue;
                }
                let m = a.at(i, c);
                for j in 0..a.cols {
                    let t = f.sub(a.at(i, j), f.mul(m, a.at(r, j)));
                    a.set(i, j, t);
                }
            }
            pivot_col_of_row.push(c);
            r += 1;
        }
        let pivot_cols: std::collections::HashSet<usize> =
            pivot_col_of_row.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..a.cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![0u64; a.cols];
            v[free] = 1;
            for (row, &pc) in pivot_col_of_row.iter().enumerate() {
                v[pc] = f.neg(a.at(row, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Column span rank.
    pub fn rank(&self) -> usize {
        self.cols - self.nullspace().len()
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(field: Fp, dim: usize, cols: &[Vec<u64>]) -> FpMatrix {
        let mut m = FpMatrix::zero(field, dim, cols.len());
        for (j, v) in cols.iter().enumerate() {
            assert_eq!(v.len(), dim);
            for (i, &x) in v.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }
}
