//! Dense univariate polynomials over `Z`.
//!
//! Coefficients are stored low to high with no trailing zeros; the zero
//! polynomial is the empty vector. Division-free algorithms (pseudo-division,
//! primitive remainder sequences) keep everything in `Z`.

use crate::error::{CoreError, Result};
use crate::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly::constant(BigInt::one())
    }

    pub fn x() -> Self {
        IntPoly::from_coeffs(vec![BigInt::zero(), BigInt::one()])
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::from_coeffs(vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = c;
        IntPoly::from_coeffs(v)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        IntPoly::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the zero polynomial is `None`.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Degree with zero treated as 0, for size bookkeeping.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(self.coeff(i) + other.coeff(i));
        }
        IntPoly::from_coeffs(v)
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut v = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        IntPoly::from_coeffs(v)
    }

    pub fn mul_scalar(&self, c: &BigInt) -> IntPoly {
        IntPoly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiply by `x^k`.
    pub fn shift_up(&self, k: usize) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut v = vec![BigInt::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        IntPoly::from_coeffs(v)
    }

    pub fn pow(&self, mut e: u32) -> IntPoly {
        let mut base = self.clone();
        let mut acc = IntPoly::one();
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

    pub fn derivative(&self) -> IntPoly {
        if self.coeffs.len() <= 1 {
            return IntPoly::zero();
        }
        IntPoly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rat(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + Rational::from_integer(c.clone());
        }
        acc
    }

    /// Pseudo-division: returns `(quot, rem)` with
    /// `lc(b)^(deg a - deg b + 1) * a = quot * b + rem` and `deg rem < deg b`.
    pub fn pseudo_divrem(&self, b: &IntPoly) -> Result<(IntPoly, IntPoly)> {
        if b.is_zero() {
            return Err(CoreError::DivisionByZero);
        }
        let db = b.degree().unwrap();
        let mut rem = self.clone();
        if self.degree().is_none_or(|da| da < db) {
            let k = 0.max(self.deg() as i64 - db as i64 + 1) as u32;
            let scale = b.leading().pow(k);
            return Ok((IntPoly::zero(), rem.mul_scalar(&scale)));
        }
        let da = self.degree().unwrap();
        let steps = da - db + 1;
        let lc_b = b.leading();
        let mut quot = vec![BigInt::zero(); steps];
        let mut done = 0usize;
        while let Some(dr) = rem.degree() {
            if dr < db {
                break;
            }
            let shift = dr - db;
            let lead = rem.leading();
            // rem := lc_b * rem - lead * x^shift * b
            rem = rem
                .mul_scalar(&lc_b)
                .sub(&b.shift_up(shift).mul_scalar(&lead));
            for q in quot.iter_mut() {
                *q *= &lc_b;
            }
            quot[shift] += &lead;
            done += 1;
            debug_assert!(rem.degree().is_none_or(|d| d < dr));
        }
        // Normalize so the identity uses exponent deg a - deg b + 1 exactly.
        if done < steps {
            let extra = lc_b.pow((steps - done) as u32);
            rem = rem.mul_scalar(&extra);
            for q in quot.iter_mut() {
                *q *= &extra;
            }
        }
        Ok((IntPoly::from_coeffs(quot), rem))
    }

    /// Exact division in `Z[x]`; `None` when `b` does not divide `self`.
    pub fn div_exact(&self, b: &IntPoly) -> Option<IntPoly> {
        if b.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let da = self.degree()?;
        let db = b.degree().unwrap();
        if da < db {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); da - db + 1];
        let lc = b.leading();
        for i in (db..=da).rev() {
            let r = std::mem::replace(&mut rem[i], BigInt::zero());
            if r.is_zero() {
                continue;
            }
            let (q, s) = r.div_rem(&lc);
            if !s.is_zero() {
                return None;
            }
            let shift = i - db;
            for (j, c) in b.coeffs.iter().enumerate().take(db) {
                rem[shift + j] -= &q * c;
            }
            quot[shift] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(IntPoly::from_coeffs(quot))
    }

    pub fn divides(&self, other: &IntPoly) -> bool {
        other.div_exact(self).is_some()
    }

    /// Nonnegative gcd of the coefficients; 0 for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Content with the sign of the leading coefficient, so that
    /// `self = signed_content * primitive_part` exactly.
    pub fn signed_content(&self) -> BigInt {
        let g = self.content();
        if self.leading().is_negative() {
            -g
        } else {
            g
        }
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let c = self.signed_content();
        IntPoly::from_coeffs(self.coeffs.iter().map(|a| a / &c).collect())
    }

    /// Primitive part scaled only by the positive content, so every
    /// coefficient keeps its sign. Used where sign sequences matter.
    pub fn primitive_signed(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let c = self.content();
        IntPoly::from_coeffs(self.coeffs.iter().map(|a| a / &c).collect())
    }

    /// Primitive gcd with positive leading coefficient, via a primitive
    /// pseudo-remainder sequence.
    pub fn gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
        if a.is_zero() {
            return b.primitive_part();
        }
        if b.is_zero() {
            return a.primitive_part();
        }
        let (mut r0, mut r1) = (a.primitive_part(), b.primitive_part());
        if r0.deg() < r1.deg() {
            std::mem::swap(&mut r0, &mut r1);
        }
        while !r1.is_zero() {
            let (_, rem) = r0.pseudo_divrem(&r1).expect("nonzero divisor");
            r0 = r1;
            r1 = rem.primitive_part();
        }
        r0
    }

    /// Product of the distinct irreducible factors, primitive with positive
    /// leading coefficient (monic when `self` is monic).
    pub fn squarefree_part(&self) -> IntPoly {
        if self.is_constant() {
            return IntPoly::one();
        }
        let p = self.primitive_part();
        let g = IntPoly::gcd(&p, &p.derivative());
        p.div_exact(&g).expect("gcd divides")
    }

    pub fn is_squarefree(&self) -> bool {
        if self.is_constant() {
            return true;
        }
        IntPoly::gcd(self, &self.derivative()).is_constant()
    }

    /// Squarefree decomposition of a primitive polynomial with positive
    /// leading coefficient: returns `(factor, multiplicity)` pairs with
    /// pairwise-coprime squarefree factors whose weighted product is `self`.
    pub fn squarefree_decomposition(&self) -> Vec<(IntPoly, u32)> {
        assert!(!self.is_zero(), "zero polynomial has no decomposition");
        let p = self.primitive_part();
        if p.is_constant() {
            return Vec::new();
        }
        let dp = p.derivative();
        let g = IntPoly::gcd(&p, &dp);
        if g.is_constant() {
            return vec![(p, 1)];
        }
        let mut out = Vec::new();
        let mut c = p.div_exact(&g).expect("gcd divides");
        let mut d = dp
            .div_exact(&g)
            .expect("gcd divides derivative")
            .sub(&c.derivative());
        let mut i = 1u32;
        while !c.is_constant() {
            let f = IntPoly::gcd(&c, &d);
            if !f.is_constant() {
                out.push((f.clone(), i));
            }
            c = c.div_exact(&f).expect("factor divides");
            d = d
                .div_exact(&f)
                .expect("factor divides")
                .sub(&c.derivative());
            i += 1;
        }
        out
    }

    /// Sign of the value at a rational point: -1, 0, or 1.
    pub fn sign_at(&self, x: &Rational) -> i32 {
        let v = self.eval_rat(x);
        if v.is_zero() {
            0
        } else if v.is_negative() {
            -1
        } else {
            1
        }
    }

    /// Sign at +infinity.
    pub fn sign_at_pos_inf(&self) -> i32 {
        let l = self.leading();
        if l.is_zero() {
            0
        } else if l.is_negative() {
            -1
        } else {
            1
        }
    }

    /// Sign at -infinity.
    pub fn sign_at_neg_inf(&self) -> i32 {
        let s = self.sign_at_pos_inf();
        if self.deg().is_multiple_of(2) {
            s
        } else {
            -s
        }
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if i == 0 {
                write!(f, "{}", mag)?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}*", mag)?;
                }
                if i == 1 {
                    write!(f, "x")?;
                } else {
                    write!(f, "x^{}", i)?;
                }
            }
        }
        Ok(())
    }
}
