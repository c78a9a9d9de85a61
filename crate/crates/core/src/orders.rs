//! Symmetric polynomials in two variables F, V subject to FV = q, and the
//! minimal central orders they present.
//!
//! For an even-degree class set w the order is `Z[F,V]/(FV - q, h_w)`, with
//! Z-basis `F^D, ..., F, 1, V, ..., V^(D-1)`. When a rational class
//! `x -+ sqrt(q)` augments a rational-free set v, the order is
//! `Z[F,V]/(FV - q, h_v (F - t), h_v (V - t))` with `t = +-sqrt(q)` and basis
//! running to `V^D`. Both come with multiplication tables, a canonical
//! embedding into the product of single-class orders, the index of that
//! embedding, and socle/Gorenstein tests at p.

use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};

use crate::error::{CoreError, Result};
use crate::matrix::{IntMatrix, RatMatrix};
use crate::modp::{Fp, FpMatrix};
use crate::poly::IntPoly;
use crate::weil::{classify, WeilClass, WeilSet};
use crate::Rational;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Laurent-style exponent map: key e > 0 is the F^e term, e < 0 the V^(-e)
/// term, 0 the constant. Multiplication contracts opposite signs through
/// FV = q.
type ExpMap = BTreeMap<i64, BigInt>;

fn map_add_term(m: &mut ExpMap, e: i64, c: BigInt) {
    if c.is_zero() {
        return;
    }
    let entry = m.entry(e).or_insert_with(BigInt::zero);
    *entry += c;
    if entry.is_zero() {
        m.remove(&e);
    }
}

fn map_mul(a: &ExpMap, b: &ExpMap, q: &BigInt) -> ExpMap {
    let mut out = ExpMap::new();
    for (&e1, c1) in a {
        for (&e2, c2) in b {
            let contracted = if e1.signum() * e2.signum() < 0 {
                e1.abs().min(e2.abs()) as u32
            } else {
                0
            };
            map_add_term(&mut out, e1 + e2, c1 * c2 * q.pow(contracted));
        }
    }
    out
}

fn monomial(e: i64, c: BigInt) -> ExpMap {
    let mut m = ExpMap::new();
    map_add_term(&mut m, e, c);
    m
}

fn map_negate(m: &ExpMap) -> ExpMap {
    m.iter().map(|(&e, c)| (e, -c)).collect()
}

/// `h = f(F) + constant + g(V)` with f, g zero-constant-term: the canonical
/// shape modulo FV - q (no mixed monomials survive the contraction).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymPoly {
    f_coeffs: Vec<BigInt>,
    g_coeffs: Vec<BigInt>,
    constant: BigInt,
}

impl SymPoly {
    pub fn constant(c: BigInt) -> SymPoly {
        SymPoly {
            f_coeffs: Vec::new(),
            g_coeffs: Vec::new(),
            constant: c,
        }
    }

    pub fn one() -> SymPoly {
        SymPoly::constant(BigInt::one())
    }

    fn from_map(m: &ExpMap) -> SymPoly {
        let deg_f = m.keys().rev().find(|&&e| e > 0).copied().unwrap_or(0) as usize;
        let deg_v = (-m.keys().find(|&&e| e < 0).copied().unwrap_or(0)) as usize;
        let mut f_coeffs = vec![BigInt::zero(); deg_f];
        let mut g_coeffs = vec![BigInt::zero(); deg_v];
        let mut constant = BigInt::zero();
        for (&e, c) in m {
            if e > 0 {
                f_coeffs[(e - 1) as usize] = c.clone();
            } else if e < 0 {
                g_coeffs[(-e - 1) as usize] = c.clone();
            } else {
                constant = c.clone();
            }
        }
        SymPoly {
            f_coeffs,
            g_coeffs,
            constant,
        }
    }

    fn to_map(&self) -> ExpMap {
        let mut m = ExpMap::new();
        map_add_term(&mut m, 0, self.constant.clone());
        for (i, c) in self.f_coeffs.iter().enumerate() {
            map_add_term(&mut m, (i + 1) as i64, c.clone());
        }
        for (i, c) in self.g_coeffs.iter().enumerate() {
            map_add_term(&mut m, -((i + 1) as i64), c.clone());
        }
        m
    }

    /// Coefficient of F^e (e > 0), V^(-e) (e < 0), or the constant (e = 0).
    pub fn coeff(&self, e: i64) -> BigInt {
        if e > 0 {
            self.f_coeffs
                .get((e - 1) as usize)
                .cloned()
                .unwrap_or_else(BigInt::zero)
        } else if e < 0 {
            self.g_coeffs
                .get((-e - 1) as usize)
                .cloned()
                .unwrap_or_else(BigInt::zero)
        } else {
            self.constant.clone()
        }
    }

    pub fn deg_f(&self) -> usize {
        self.f_coeffs.len()
    }

    pub fn deg_v(&self) -> usize {
        self.g_coeffs.len()
    }

    /// The value h(0, 0) of the canonical form.
    pub fn constant_term(&self) -> &BigInt {
        &self.constant
    }

    /// Product modulo FV - q, back in canonical form.
    pub fn mul(&self, other: &SymPoly, q: &BigInt) -> SymPoly {
        SymPoly::from_map(&map_mul(&self.to_map(), &other.to_map(), q))
    }
}

impl std::fmt::Display for SymPoly {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let m = self.to_map();
        if m.is_empty() {
            return write!(out, "0");
        }
        let mut first = true;
        for (&e, c) in m.iter().rev() {
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(out, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(out, " - ")?;
            } else {
                write!(out, " + ")?;
            }
            let name = match e {
                0 => None,
                1 => Some("F".to_string()),
                -1 => Some("V".to_string()),
                e if e > 1 => Some(format!("F^{e}")),
                e => Some(format!("V^{}", -e)),
            };
            match name {
                None => write!(out, "{mag}")?,
                Some(n) if mag.is_one() => write!(out, "{n}")?,
                Some(n) => write!(out, "{mag}*{n}")?,
            }
        }
        Ok(())
    }
}

/// The symmetric polynomial of a single class: non-real classes of degree 2d
/// give `F^d + a_{2d-1} F^{d-1} + ... + a_{d+1} F + a_d + a_{d+1} V + ... +
/// V^d`; the real class x^2 - q gives `F - V`. Rational classes carry
/// half-integer exponents and are never materialized alone; they enter only
/// through the pair product (which is F - V) or the augmented order builder.
pub fn sym_poly(class: &WeilClass) -> Result<SymPoly> {
    if class.is_rational() {
        return Err(CoreError::RationalClassAlone);
    }
    if class.is_real() {
        return Ok(SymPoly {
            f_coeffs: vec![BigInt::one()],
            g_coeffs: vec![-BigInt::one()],
            constant: BigInt::zero(),
        });
    }
    let p = class.minpoly();
    let d = p.deg() / 2;
    let upper: Vec<BigInt> = (1..=d).map(|k| p.coeff(d + k)).collect();
    Ok(SymPoly {
        f_coeffs: upper.clone(),
        g_coeffs: upper,
        constant: p.coeff(d),
    })
}

/// `h_w = prod h_pi` in canonical form; the two rational classes, when both
/// present, contribute the single factor F - V.
pub fn sym_poly_product(w: &WeilSet) -> Result<SymPoly> {
    if !w.even_degree() {
        return Err(CoreError::OddDegreeSet);
    }
    let q = w.prime_power().q();
    let mut acc = SymPoly::one();
    let mut rationals = 0usize;
    for class in w.classes() {
        if class.is_rational() {
            rationals += 1;
            continue;
        }
        acc = acc.mul(&sym_poly(class)?, q);
    }
    if rationals == 2 {
        let pair = SymPoly {
            f_coeffs: vec![BigInt::one()],
            g_coeffs: vec![-BigInt::one()],
            constant: BigInt::zero(),
        };
        acc = acc.mul(&pair, q);
    }
    Ok(acc)
}

/// An element in the canonical basis of its parent order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderElement {
    parent: u64,
    pub coeffs: Vec<BigInt>,
}

/// The minimal central order R_w as an explicit Z-algebra: canonical
/// monomial basis, structure constants, and the embedding into the product
/// of single-class orders with its index.
#[derive(Clone, Debug)]
pub struct MinimalCentralOrder {
    w: WeilSet,
    h: SymPoly,
    augmented: Option<BigInt>,
    d_half: usize,
    rank: usize,
    basis_exps: Vec<i64>,
    rule_f_exp: i64,
    rule_f: ExpMap,
    rule_v_exp: i64,
    rule_v: ExpMap,
    mult_table: Vec<Vec<Vec<BigInt>>>,
    power_images: Vec<RatMatrix>,
    embedding: IntMatrix,
    index: BigInt,
    fingerprint: u64,
}

/// `R_w = Z[F,V]/(FV - q, h_w)` for a non-empty even-degree set.
pub fn build_order(w: &WeilSet) -> Result<MinimalCentralOrder> {
    if w.is_empty() {
        return Err(CoreError::EmptySet);
    }
    if !w.even_degree() {
        return Err(CoreError::OddDegreeSet);
    }
    let q = w.prime_power().q().clone();
    let h = sym_poly_product(w)?;
    let d = h.deg_f();
    debug_assert_eq!(d, w.total_degree() / 2);
    debug_assert_eq!(h.deg_v(), d);

    // V^D eliminated through h_w itself (leading V-coefficient is +-1).
    let eps = h.coeff(-(d as i64));
    debug_assert!(eps.clone().abs().is_one());
    let mut rule_v = h.to_map();
    rule_v.remove(&-(d as i64));
    let rule_v: ExpMap = rule_v.iter().map(|(&e, c)| (e, -c * &eps)).collect();

    // F^(D+1) eliminated through F * h_w.
    let fh = map_mul(&monomial(1, BigInt::one()), &h.to_map(), &q);
    let mut rule_f = fh;
    let top = rule_f
        .remove(&((d + 1) as i64))
        .unwrap_or_else(BigInt::zero);
    debug_assert!(top.is_one());
    let rule_f = map_negate(&rule_f);

    let basis_exps: Vec<i64> = (-(d as i64 - 1)..=d as i64).rev().collect();
    finish_order(
        w.clone(),
        h,
        None,
        d,
        basis_exps,
        (d + 1) as i64,
        rule_f,
        d as i64,
        rule_v,
    )
}

/// `R_w = Z[F,V]/(FV - q, h_v (F - t), h_v (V - t))` for w = v plus the
/// rational class of `t = sign * sqrt(q)`; v must be rational-free.
pub fn build_order_with_rational(v: &WeilSet, sign: i8) -> Result<MinimalCentralOrder> {
    let pp = v.prime_power().clone();
    let s = pp
        .sqrt()
        .ok_or_else(|| CoreError::QNotSquare(pp.q().to_string()))?
        .clone();
    if v.classes().iter().any(|c| c.is_rational()) {
        return Err(CoreError::Invalid(
            "augmentation set must not contain a rational class".into(),
        ));
    }
    let t = if sign >= 0 { s } else { -s };
    let q = pp.q().clone();
    let h = sym_poly_product(v)?;
    let d = h.deg_f();

    let rational_minpoly = IntPoly::from_coeffs(vec![-t.clone(), BigInt::one()]);
    let rational_class = classify(&rational_minpoly, &pp)?;
    let mut classes = v.classes().to_vec();
    classes.push(rational_class);
    let w = WeilSet::new(pp, classes)?;

    let lin_f = {
        let mut m = monomial(1, BigInt::one());
        map_add_term(&mut m, 0, -t.clone());
        m
    };
    let lin_v = {
        let mut m = monomial(-1, BigInt::one());
        map_add_term(&mut m, 0, -t.clone());
        m
    };
    let mut rule_f = map_mul(&h.to_map(), &lin_f, &q);
    let top = rule_f
        .remove(&((d + 1) as i64))
        .unwrap_or_else(BigInt::zero);
    debug_assert!(top.is_one());
    let rule_f = map_negate(&rule_f);

    let mut rule_v = map_mul(&h.to_map(), &lin_v, &q);
    let top = rule_v
        .remove(&-((d + 1) as i64))
        .unwrap_or_else(BigInt::zero);
    debug_assert!(top.is_one());
    let rule_v = map_negate(&rule_v);

    let basis_exps: Vec<i64> = (-(d as i64)..=d as i64).rev().collect();
    finish_order(
        w,
        h,
        Some(t),
        d,
        basis_exps,
        (d + 1) as i64,
        rule_f,
        (d + 1) as i64,
        rule_v,
    )
}

#[allow(clippy::too_many_arguments)]
fn finish_order(
    w: WeilSet,
    h: SymPoly,
    augmented: Option<BigInt>,
    d_half: usize,
    basis_exps: Vec<i64>,
    rule_f_exp: i64,
    rule_f: ExpMap,
    rule_v_exp: i64,
    rule_v: ExpMap,
) -> Result<MinimalCentralOrder> {
    let rank = basis_exps.len();
    let q = w.prime_power().q().clone();
    let mut order = MinimalCentralOrder {
        w,
        h,
        augmented,
        d_half,
        rank,
        basis_exps,
        rule_f_exp,
        rule_f,
        rule_v_exp,
        rule_v,
        mult_table: Vec::new(),
        power_images: Vec::new(),
        embedding: IntMatrix::zero(rank, rank),
        index: BigInt::zero(),
        fingerprint: 0,
    };
    debug_assert_eq!(rank, order.w.total_degree());

    order.mult_table = (0..rank)
        .map(|i| {
            (0..rank)
                .map(|j| {
                    let prod = map_mul(
                        &monomial(order.basis_exps[i], BigInt::one()),
                        &monomial(order.basis_exps[j], BigInt::one()),
                        &q,
                    );
                    order.coords(&order.reduce(prod))
                })
                .collect()
        })
        .collect();

    // The defining relations must rewrite to zero.
    match &order.augmented {
        None => {
            debug_assert!(order.reduce(order.h.to_map()).is_empty());
            let fh = map_mul(&monomial(1, BigInt::one()), &order.h.to_map(), &q);
            debug_assert!(order.reduce(fh).is_empty());
        }
        Some(t) => {
            for e in [1i64, -1] {
                let mut lin = monomial(e, BigInt::one());
                map_add_term(&mut lin, 0, -t.clone());
                let rel = map_mul(&order.h.to_map(), &lin, &q);
                debug_assert!(order.reduce(rel).is_empty());
            }
        }
    }

    order.build_embedding()?;
    order.fingerprint = order.compute_fingerprint();
    Ok(order)
}

impl MinimalCentralOrder {
    pub fn weil_set(&self) -> &WeilSet {
        &self.w
    }

    pub fn h_poly(&self) -> &SymPoly {
        &self.h
    }

    /// Half the total degree of the non-rational part.
    pub fn d_half(&self) -> usize {
        self.d_half
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The rational augmentation value t = +-sqrt(q), when present.
    pub fn augmented_value(&self) -> Option<&BigInt> {
        self.augmented.as_ref()
    }

    pub fn basis_exponents(&self) -> &[i64] {
        &self.basis_exps
    }

    pub fn basis_labels(&self) -> Vec<String> {
        self.basis_exps
            .iter()
            .map(|&e| match e {
                0 => "1".to_string(),
                1 => "F".to_string(),
                -1 => "V".to_string(),
                e if e > 1 => format!("F^{e}"),
                e => format!("V^{}", -e),
            })
            .collect()
    }

    pub fn mult_table(&self) -> &Vec<Vec<Vec<BigInt>>> {
        &self.mult_table
    }

    /// Change of basis into the product of single-class orders: column j
    /// holds the coordinates of the j-th basis monomial, rows grouped by
    /// class in canonical order.
    pub fn embedding_matrix(&self) -> &IntMatrix {
        &self.embedding
    }

    pub fn index(&self) -> &BigInt {
        &self.index
    }

    fn reduce(&self, mut m: ExpMap) -> ExpMap {
        let q = self.w.prime_power().q().clone();
        loop {
            if let Some(&e) = m.keys().rev().find(|&&e| e >= self.rule_f_exp) {
                let c = m.remove(&e).unwrap();
                let lowered = map_mul(&monomial(e - self.rule_f_exp, c), &self.rule_f, &q);
                for (e2, c2) in lowered {
                    map_add_term(&mut m, e2, c2);
                }
                continue;
            }
            if let Some(&e) = m.keys().find(|&&e| e <= -self.rule_v_exp) {
                let c = m.remove(&e).unwrap();
                let lowered = map_mul(&monomial(e + self.rule_v_exp, c), &self.rule_v, &q);
                for (e2, c2) in lowered {
                    map_add_term(&mut m, e2, c2);
                }
                continue;
            }
            return m;
        }
    }

    fn coords(&self, m: &ExpMap) -> Vec<BigInt> {
        debug_assert!(
            m.keys().all(|e| self.basis_exps.contains(e)),
            "unreduced monomial"
        );
        self.basis_exps
            .iter()
            .map(|e| m.get(e).cloned().unwrap_or_else(BigInt::zero))
            .collect()
    }

    pub fn element(&self, coeffs: Vec<BigInt>) -> Result<OrderElement> {
        if coeffs.len() != self.rank {
            return Err(CoreError::DimensionMismatch(format!(
                "expected {} coordinates, got {}",
                self.rank,
                coeffs.len()
            )));
        }
        Ok(OrderElement {
            parent: self.fingerprint,
            coeffs,
        })
    }

    fn element_of_map(&self, m: ExpMap) -> OrderElement {
        OrderElement {
            parent: self.fingerprint,
            coeffs: self.coords(&self.reduce(m)),
        }
    }

    pub fn zero_element(&self) -> OrderElement {
        OrderElement {
            parent: self.fingerprint,
            coeffs: vec![BigInt::zero(); self.rank],
        }
    }

    pub fn one(&self) -> OrderElement {
        self.element_of_map(monomial(0, BigInt::one()))
    }

    pub fn frobenius(&self) -> OrderElement {
        self.element_of_map(monomial(1, BigInt::one()))
    }

    pub fn verschiebung(&self) -> OrderElement {
        self.element_of_map(monomial(-1, BigInt::one()))
    }

    fn check_parent(&self, a: &OrderElement) -> Result<()> {
        if a.parent != self.fingerprint || a.coeffs.len() != self.rank {
            return Err(CoreError::Invalid(
                "element does not belong to this order".into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, a: &OrderElement, b: &OrderElement) -> Result<OrderElement> {
        self.check_parent(a)?;
        self.check_parent(b)?;
        Ok(OrderElement {
            parent: self.fingerprint,
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
        })
    }

    pub fn scalar_mul(&self, c: &BigInt, a: &OrderElement) -> Result<OrderElement> {
        self.check_parent(a)?;
        Ok(OrderElement {
            parent: self.fingerprint,
            coeffs: a.coeffs.iter().map(|x| x * c).collect(),
        })
    }

    pub fn mult(&self, a: &OrderElement, b: &OrderElement) -> Result<OrderElement> {
        self.check_parent(a)?;
        self.check_parent(b)?;
        let mut out = vec![BigInt::zero(); self.rank];
        for (i, ai) in a.coeffs.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.coeffs.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let scale = ai * bj;
                for (k, t) in self.mult_table[i][j].iter().enumerate() {
                    if !t.is_zero() {
                        out[k] += &scale * t;
                    }
                }
            }
        }
        Ok(OrderElement {
            parent: self.fingerprint,
            coeffs: out,
        })
    }

    /// Evaluate the canonical-form symmetric polynomial on (F, V) inside the
    /// order.
    pub fn eval_sym(&self, h: &SymPoly) -> OrderElement {
        self.element_of_map(self.reduce(h.to_map()))
    }

    /// Image of an element in each `Q[x]/(P_pi)`, power-basis coordinates.
    pub fn embed(&self, a: &OrderElement) -> Result<Vec<Vec<Rational>>> {
        self.check_parent(a)?;
        let mut out = Vec::with_capacity(self.power_images.len());
        for img in &self.power_images {
            let mut col = RatMatrix::zero(self.rank, 1);
            for (i, c) in a.coeffs.iter().enumerate() {
                col[(i, 0)] = Rational::from(c.clone());
            }
            let v = img.mul(&col);
            out.push((0..v.rows()).map(|i| v[(i, 0)].clone()).collect());
        }
        Ok(out)
    }

    fn compute_fingerprint(&self) -> u64 {
        let mut hasher = DefaultHasher::new();
        self.w.prime_power().q().to_string().hash(&mut hasher);
        for class in self.w.classes() {
            for c in class.minpoly().coeffs() {
                c.to_string().hash(&mut hasher);
            }
            "/".hash(&mut hasher);
        }
        if let Some(t) = &self.augmented {
            t.to_string().hash(&mut hasher);
        }
        hasher.finish()
    }

    /// Power-basis coordinates (length = class degree) of F^e / V^(-e) / 1
    /// in `Q[x]/(P_pi)`.
    fn class_image_of_exp(class: &WeilClass, e: i64) -> Vec<Rational> {
        let p = class.minpoly();
        let m = p.deg();
        let q = class.prime_power().q();
        if e == 0 {
            let mut u = vec![Rational::zero(); m];
            u[0] = Rational::one();
            return u;
        }
        let base = if e > 0 {
            // x
            let mut u = vec![Rational::zero(); m];
            if m == 1 {
                u[0] = Rational::from(-p.coeff(0));
            } else {
                u[1] = Rational::one();
            }
            u
        } else {
            // V = q * x^(-1): from P(x) = 0,
            // x^(-1) = -(x^(m-1) + c_{m-1} x^(m-2) + ... + c_1) / c_0.
            let c0 = p.coeff(0);
            let mut u = vec![Rational::zero(); m];
            for k in 1..=m {
                let num = -p.coeff(k) * q;
                u[k - 1] = Rational::new(num, c0.clone());
            }
            u
        };
        let mut acc = base.clone();
        for _ in 1..e.abs() {
            acc = rat_poly_mul_mod(&acc, &base, p);
        }
        acc
    }

    fn build_embedding(&mut self) -> Result<()> {
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(self.rank);
        let mut power_images = Vec::new();
        for class in self.w.classes() {
            let m = class.degree();
            // images of the order basis in the power basis of Q[x]/(P_pi)
            let mut images = RatMatrix::zero(m, self.rank);
            for (j, &e) in self.basis_exps.iter().enumerate() {
                let u = Self::class_image_of_exp(class, e);
                for i in 0..m {
                    images[(i, j)] = u[i].clone();
                }
            }
            // single-class canonical basis: exps d, ..., 1, 0, -1, ..., -(d-1)
            // (just 0 for a rational class)
            let class_exps: Vec<i64> = if m == 1 {
                vec![0]
            } else {
                let d = (m / 2) as i64;
                (-(d - 1)..=d).rev().collect()
            };
            let mut basis_mat = RatMatrix::zero(m, m);
            for (j, &e) in class_exps.iter().enumerate() {
                let u = Self::class_image_of_exp(class, e);
                for i in 0..m {
                    basis_mat[(i, j)] = u[i].clone();
                }
            }
            let coords = basis_mat.inverse()?.mul(&images);
            let int_coords = coords.to_integer().ok_or_else(|| {
                CoreError::Invalid("non-integral coordinates in class order".into())
            })?;
            for i in 0..m {
                rows.push((0..self.rank).map(|j| int_coords[(i, j)].clone()).collect());
            }
            power_images.push(images);
        }
        self.embedding = IntMatrix::from_rows(rows);
        self.power_images = power_images;
        self.index = self.embedding.det()?.abs();
        if self.index.is_zero() {
            return Err(CoreError::SingularMatrix);
        }
        Ok(())
    }
}

/// `[prod_pi R_pi : R_w]`, the order of the cokernel of the canonical
/// embedding.
pub fn conductor_index(order: &MinimalCentralOrder) -> BigInt {
    order.index.clone()
}

/// Matrix of the natural surjection R_w -> R_v on the canonical bases, for
/// v a subset of w (both even-degree constructions).
pub fn project(src: &MinimalCentralOrder, dst: &MinimalCentralOrder) -> Result<IntMatrix> {
    if src.augmented.is_some() || dst.augmented.is_some() {
        return Err(CoreError::Invalid(
            "projection is defined between even-degree orders".into(),
        ));
    }
    if src.w.prime_power().q() != dst.w.prime_power().q() {
        return Err(CoreError::MixedPrimePowers);
    }
    if !dst.w.is_subset_of(&src.w) {
        return Err(CoreError::NotSubset);
    }
    let mut m = IntMatrix::zero(dst.rank, src.rank);
    for (j, &e) in src.basis_exps.iter().enumerate() {
        let col = dst.coords(&dst.reduce(monomial(e, BigInt::one())));
        for (i, c) in col.into_iter().enumerate() {
            m[(i, j)] = c;
        }
    }
    Ok(m)
}

/// Multiplication-by-F^e (or V^(-e)) matrix on R_w/pR_w.
fn mult_matrix_mod_p(order: &MinimalCentralOrder, e: i64, field: Fp) -> FpMatrix {
    use num_integer::Integer;
    let q = order.w.prime_power().q().clone();
    let p_big = BigInt::from(field.p);
    let mut m = FpMatrix::zero(field, order.rank, order.rank);
    for (j, &b) in order.basis_exps.iter().enumerate() {
        let prod = map_mul(&monomial(e, BigInt::one()), &monomial(b, BigInt::one()), &q);
        let col = order.coords(&order.reduce(prod));
        for (i, c) in col.iter().enumerate() {
            let r = c.mod_floor(&p_big).to_u64().expect("residue fits");
            m.set(i, j, r);
        }
    }
    m
}

/// Basis of `{x : Mx in span(cols)}` over F_p.
fn preimage_of_span(m: &FpMatrix, span: &[Vec<u64>], field: Fp, dim: usize) -> Vec<Vec<u64>> {
    if span.is_empty() {
        return m.nullspace();
    }
    let b = FpMatrix::from_cols(field, dim, span);
    // rows annihilating the span
    let left_null = b.transpose().nullspace();
    if left_null.is_empty() {
        // the span is the whole space; so is the preimage
        return (0..dim)
            .map(|i| {
                let mut v = vec![0u64; dim];
                v[i] = 1;
                v
            })
            .collect();
    }
    let p_rows = FpMatrix::from_cols(field, dim, &left_null).transpose();
    p_rows.mat_mul(m).nullspace()
}

/// Dimension over F_p of the socle of the local factor of R_w/pR_w at the
/// ideal (p, F, V): the simultaneous kernel of F and V inside the
/// (F, V)-torsion part. When that torsion part is zero (no point of this
/// type lies on the fiber, the ordinary even-degree case) the socle is
/// reported as 1: there is nothing to obstruct the Gorenstein property.
pub fn socle_dim_at_p(order: &MinimalCentralOrder) -> Result<usize> {
    let p_big = order.weil_set().prime_power().p().clone();
    let p = p_big
        .to_u64()
        .filter(|&p| p < (1 << 31))
        .ok_or_else(|| CoreError::Invalid("p too large for the socle computation".into()))?;
    let field = Fp::new(p);
    let n = order.rank;
    let mf = mult_matrix_mod_p(order, 1, field);
    let mv = mult_matrix_mod_p(order, -1, field);
    let kernel = FpMatrix::stack(&[&mf, &mv]).nullspace();

    // (F,V)-torsion part by iterated preimage of the span under both maps.
    let mut torsion: Vec<Vec<u64>> = Vec::new();
    loop {
        let pre_f = preimage_of_span(&mf, &torsion, field, n);
        let pre_v = preimage_of_span(&mv, &torsion, field, n);
        // intersect: nullspace of stacked annihilator conditions
        let next = intersect_spans(&pre_f, &pre_v, field, n);
        if next.len() == torsion.len() {
            break;
        }
        torsion = next;
    }
    if torsion.is_empty() {
        return Ok(1);
    }
    debug_assert!(!kernel.is_empty());
    Ok(kernel.len())
}

/// Basis of the intersection of two column spans.
fn intersect_spans(a: &[Vec<u64>], b: &[Vec<u64>], field: Fp, dim: usize) -> Vec<Vec<u64>> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let ma = FpMatrix::from_cols(field, dim, a);
    let mb = FpMatrix::from_cols(field, dim, b);
    // solve ma u = mb v: nullspace of [ma | -mb]
    let mut neg = mb.clone();
    for x in neg.data.iter_mut() {
        *x = field.neg(*x);
    }
    let joint = FpMatrix::hcat(&[&ma, &neg]);
    let mut out = Vec::new();
    let mut seen = FpMatrix::zero(field, dim, 0);
    for sol in joint.nullspace() {
        let u = &sol[..a.len()];
        let vec = ma.mul_vec(u);
        if vec.iter().all(|&c| c == 0) {
            continue;
        }
        // keep independent representatives only
        let mut cols: Vec<Vec<u64>> = (0..seen.cols)
            .map(|j| (0..dim).map(|i| seen.at(i, j)).collect())
            .collect();
        cols.push(vec.clone());
        let cand = FpMatrix::from_cols(field, dim, &cols);
        if cand.rank() > seen.cols {
            seen = cand;
            out.push(vec);
        }
    }
    out
}

/// Even-degree orders are complete intersections, so always Gorenstein; the
/// augmented construction is Gorenstein exactly when the socle at p is
/// one-dimensional.
pub fn is_gorenstein(order: &MinimalCentralOrder) -> Result<bool> {
    Ok(socle_dim_at_p(order)? == 1)
}

fn rat_poly_mul_mod(a: &[Rational], b: &[Rational], p: &IntPoly) -> Vec<Rational> {
    let m = p.deg();
    let mut prod = vec![Rational::zero(); a.len() + b.len()];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let t = x * y;
            prod[i + j] += t;
        }
    }
    // reduce modulo monic p
    for i in (m..prod.len()).rev() {
        let c = std::mem::replace(&mut prod[i], Rational::zero());
        if c.is_zero() {
            continue;
        }
        for k in 0..m {
            let sub = &c * Rational::from(p.coeff(k));
            prod[i - m + k] -= sub;
        }
    }
    prod.truncate(m);
    prod
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weil::PrimePower;

    fn pp(q: u64) -> PrimePower {
        PrimePower::from_u64(q).unwrap()
    }

    fn cls(cs: &[i64], q: u64) -> WeilClass {
        classify(&IntPoly::from_i64s(cs), &pp(q)).unwrap()
    }

    fn set(polys: &[&[i64]], q: u64) -> WeilSet {
        let classes = polys.iter().map(|cs| cls(cs, q)).collect();
        WeilSet::new(pp(q), classes).unwrap()
    }

    #[test]
    fn sym_poly_examples() {
        let h = sym_poly(&cls(&[5, 0, 1], 5)).unwrap();
        assert_eq!(h.to_string(), "F + V");
        assert_eq!(h.coeff(1), BigInt::one());
        assert_eq!(*h.constant_term(), BigInt::zero());
        let h = sym_poly(&cls(&[5, -1, 1], 5)).unwrap();
        assert_eq!(h.to_string(), "F - 1 + V");
        let h = sym_poly(&cls(&[-5, 0, 1], 5)).unwrap();
        assert_eq!(h.to_string(), "F - V");
        assert!(matches!(
            sym_poly(&cls(&[-5, 1], 25)),
            Err(CoreError::RationalClassAlone)
        ));
    }

    #[test]
    fn sym_poly_product_reduces_cross_terms() {
        let w = set(&[&[5, 0, 1], &[5, -1, 1]], 5);
        let h = sym_poly_product(&w).unwrap();
        assert_eq!(h.to_string(), "F^2 - F + 10 - V + V^2");
        assert_eq!(*h.constant_term(), BigInt::from(10));
        assert_eq!(h.deg_f(), 2);
        assert_eq!(h.deg_v(), 2);
    }

    #[test]
    fn sym_poly_product_empty_and_real() {
        let w = WeilSet::new(pp(5), vec![]).unwrap();
        assert_eq!(sym_poly_product(&w).unwrap(), SymPoly::one());
        let w = set(&[&[-5, 0, 1]], 5);
        assert_eq!(sym_poly_product(&w).unwrap().to_string(), "F - V");
    }

    #[test]
    fn order_single_quadratic_is_monogenic() {
        let order = build_order(&set(&[&[5, -1, 1]], 5)).unwrap();
        assert_eq!(order.rank(), 2);
        assert_eq!(order.index(), &BigInt::one());
        assert_eq!(order.basis_labels(), vec!["F", "1"]);
        // V = 1 - F here
        let v = order.verschiebung();
        assert_eq!(v.coeffs, vec![BigInt::from(-1), BigInt::from(1)]);
        // F V = q
        let f = order.frobenius();
        let prod = order.mult(&f, &v).unwrap();
        let q_one = order.scalar_mul(&BigInt::from(5), &order.one()).unwrap();
        assert_eq!(prod, q_one);
    }

    #[test]
    fn order_pair_of_quadratics_index_is_trace_gap_squared() {
        for (b1, b2) in [(1i64, 3i64), (0, 1), (-2, 4)] {
            let w = set(&[&[5, -b1, 1], &[5, -b2, 1]], 5);
            let order = build_order(&w).unwrap();
            assert_eq!(order.rank(), 4);
            let delta = BigInt::from(b1 - b2);
            assert_eq!(*order.index(), (&delta * &delta).abs(), "b1={b1} b2={b2}");
            // defining relations hold inside the order
            assert_eq!(order.eval_sym(order.h_poly()), order.zero_element());
        }
    }

    #[test]
    fn order_with_real_class() {
        let w = set(&[&[-5, 0, 1], &[5, -1, 1]], 5);
        let order = build_order(&w).unwrap();
        assert_eq!(order.rank(), 4);
        let f = order.frobenius();
        let v = order.verschiebung();
        let prod = order.mult(&f, &v).unwrap();
        assert_eq!(
            prod,
            order.scalar_mul(&BigInt::from(5), &order.one()).unwrap()
        );
        assert_eq!(order.eval_sym(order.h_poly()), order.zero_element());
    }

    #[test]
    fn order_guards() {
        assert!(matches!(
            build_order(&WeilSet::new(pp(5), vec![]).unwrap()),
            Err(CoreError::EmptySet)
        ));
        let odd = WeilSet::new(pp(25), vec![cls(&[-5, 1], 25)]).unwrap();
        assert!(matches!(build_order(&odd), Err(CoreError::OddDegreeSet)));
        let not_square = WeilSet::new(pp(5), vec![]).unwrap();
        assert!(matches!(
            build_order_with_rational(&not_square, 1),
            Err(CoreError::QNotSquare(_))
        ));
    }

    #[test]
    fn augmented_order_rank_and_relations() {
        let v = set(&[&[25, 1, 1]], 25);
        let order = build_order_with_rational(&v, 1).unwrap();
        assert_eq!(order.rank(), 3);
        assert_eq!(order.basis_labels(), vec!["F", "1", "V"]);
        assert_eq!(order.augmented_value(), Some(&BigInt::from(5)));
        let f = order.frobenius();
        let v_el = order.verschiebung();
        let prod = order.mult(&f, &v_el).unwrap();
        assert_eq!(
            prod,
            order.scalar_mul(&BigInt::from(25), &order.one()).unwrap()
        );
        assert_eq!(order.weil_set().total_degree(), 3);
    }

    #[test]
    fn augmented_order_degenerate_is_z() {
        let v = WeilSet::new(pp(25), vec![]).unwrap();
        let order = build_order_with_rational(&v, 1).unwrap();
        assert_eq!(order.rank(), 1);
        // F = V = 5 in Z
        assert_eq!(order.frobenius().coeffs, vec![BigInt::from(5)]);
        assert_eq!(order.verschiebung().coeffs, vec![BigInt::from(5)]);
    }

    #[test]
    fn mult_agrees_with_embedding() {
        let w = set(&[&[5, 0, 1], &[5, -1, 1]], 5);
        let order = build_order(&w).unwrap();
        let a = order
            .element(vec![
                BigInt::from(2),
                BigInt::from(-1),
                BigInt::from(3),
                BigInt::from(1),
            ])
            .unwrap();
        let b = order
            .element(vec![
                BigInt::from(1),
                BigInt::from(4),
                BigInt::from(0),
                BigInt::from(-2),
            ])
            .unwrap();
        let prod = order.mult(&a, &b).unwrap();
        let ia = order.embed(&a).unwrap();
        let ib = order.embed(&b).unwrap();
        let ip = order.embed(&prod).unwrap();
        for (k, class) in order.weil_set().classes().iter().enumerate() {
            let expect = rat_poly_mul_mod(&ia[k], &ib[k], class.minpoly());
            assert_eq!(expect, ip[k]);
        }
    }

    #[test]
    fn projection_drops_classes() {
        let w = set(&[&[5, 0, 1], &[5, -1, 1]], 5);
        let v = set(&[&[5, -1, 1]], 5);
        let big = build_order(&w).unwrap();
        let small = build_order(&v).unwrap();
        let m = project(&big, &small).unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 4));
        // F_w maps to F_v
        let f_col = big.basis_exponents().iter().position(|&e| e == 1).unwrap();
        let img: Vec<BigInt> = (0..2).map(|i| m[(i, f_col)].clone()).collect();
        assert_eq!(img, small.frobenius().coeffs);
        // identity projection
        let idm = project(&big, &big).unwrap();
        assert_eq!(idm, IntMatrix::identity(4));
        // kernel rank = 2 by rank-nullity over Q
        assert_eq!(m.to_rational().nullity(), 2);
        assert!(matches!(project(&small, &big), Err(CoreError::NotSubset)));
    }

    #[test]
    fn socle_examples() {
        // single ordinary class: Gorenstein, socle 1
        let order = build_order(&set(&[&[5, -1, 1]], 5)).unwrap();
        assert_eq!(socle_dim_at_p(&order).unwrap(), 1);
        assert!(is_gorenstein(&order).unwrap());
        // supersingular even-degree: complete intersection, still socle 1
        let order = build_order(&set(&[&[5, 0, 1]], 5)).unwrap();
        assert_eq!(socle_dim_at_p(&order).unwrap(), 1);
        // ordinary augmented: Gorenstein
        let v = set(&[&[25, 1, 1]], 25);
        let order = build_order_with_rational(&v, 1).unwrap();
        assert_eq!(socle_dim_at_p(&order).unwrap(), 1);
        assert!(is_gorenstein(&order).unwrap());
        // non-ordinary augmented: socle 2, not Gorenstein
        let v = set(&[&[25, 5, 1]], 25);
        let order = build_order_with_rational(&v, 1).unwrap();
        assert_eq!(socle_dim_at_p(&order).unwrap(), 2);
        assert!(!is_gorenstein(&order).unwrap());
    }

    #[test]
    fn element_parent_guard() {
        let o1 = build_order(&set(&[&[5, -1, 1]], 5)).unwrap();
        let o2 = build_order(&set(&[&[5, 0, 1]], 5)).unwrap();
        let a = o1.one();
        assert!(o2.mult(&a, &o2.one()).is_err());
    }
}
