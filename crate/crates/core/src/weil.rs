//! Weil q-numbers via their minimal polynomials: recognition (every complex
//! root of modulus sqrt(q)), classification into real / rational / ordinary
//! kinds, and exhaustive enumeration in a fixed degree.

use crate::error::{CoreError, Result};
use crate::factor;
use crate::poly::IntPoly;
use crate::sturm::{count_all_real_roots, sturm_count};
use crate::Rational;
use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_traits::{One, Signed, Zero};

pub const DEFAULT_ENUM_CAP: usize = 12;

/// A prime power `q = p^e` with `p` prime and `e >= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimePower {
    p: BigInt,
    e: u32,
    q: BigInt,
    sqrt_q: Option<BigInt>,
}

impl PrimePower {
    pub fn new(q: BigInt) -> Result<PrimePower> {
        if q < BigInt::from(2) {
            return Err(CoreError::NotPrimePower(q.to_string()));
        }
        let mag = q.magnitude().clone();
        let bits = mag.bits() as u32;
        for e in (1..=bits).rev() {
            let root = mag.nth_root(e);
            if root.pow(e) == mag && is_prime(&root) {
                let p = BigInt::from(root);
                let sqrt_q = if e % 2 == 0 { Some(p.pow(e / 2)) } else { None };
                return Ok(PrimePower { p, e, q, sqrt_q });
            }
        }
        Err(CoreError::NotPrimePower(q.to_string()))
    }

    pub fn from_u64(q: u64) -> Result<PrimePower> {
        PrimePower::new(BigInt::from(q))
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    /// `sqrt(q)` when `e` is even.
    pub fn sqrt(&self) -> Option<&BigInt> {
        self.sqrt_q.as_ref()
    }

    pub fn is_square(&self) -> bool {
        self.sqrt_q.is_some()
    }
}

/// Trial division below 1000, then Miller-Rabin with a fixed base set
/// (deterministic far past desk scale, probabilistic beyond).
pub fn is_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    let mut d = 2u64;
    while d < 1000 {
        let db = BigUint::from(d);
        if db.pow(2) > *n {
            return true;
        }
        if (n % db).is_zero() {
            return *n == BigUint::from(d);
        }
        d += 1;
    }
    // n odd, > 10^6 here
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let m = &n_minus_1 >> s;
    'base: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let ab = BigUint::from(a);
        if &ab % n == BigUint::zero() {
            continue;
        }
        let mut x = ab.modpow(&m, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

/// First violated coefficient pair of `a_{d-r} = q^r a_{d+r}`, if any.
fn functional_equation_violation(p: &IntPoly, q: &BigInt) -> Option<(usize, usize)> {
    let two_d = p.deg();
    let d = two_d / 2;
    for r in 1..=d {
        if p.coeff(d - r) != q.pow(r as u32) * p.coeff(d + r) {
            return Some((d - r, d + r));
        }
    }
    None
}

/// Coefficient symmetry `a_{d-r} = q^r a_{d+r}` for monic even-degree input;
/// equivalently `x^{2d} P(q/x) = q^d P(x)`.
pub fn check_functional_equation(p: &IntPoly, pp: &PrimePower) -> Result<bool> {
    if !p.is_monic() {
        return Err(CoreError::NotMonic);
    }
    if !p.deg().is_multiple_of(2) || p.is_constant() {
        return Err(CoreError::OddDegree);
    }
    Ok(functional_equation_violation(p, pp.q()).is_none())
}

/// The monic degree-d polynomial `Q` with `x^d Q(x + q/x) = P(x)`, for monic
/// `P` of degree 2d satisfying the functional equation.
pub fn real_counterpart(p: &IntPoly, pp: &PrimePower) -> Result<IntPoly> {
    if !p.is_monic() {
        return Err(CoreError::NotMonic);
    }
    if !p.deg().is_multiple_of(2) || p.is_constant() {
        return Err(CoreError::OddDegree);
    }
    if let Some((low, high)) = functional_equation_violation(p, pp.q()) {
        return Err(CoreError::FunctionalEquation { low, high });
    }
    extract_real_counterpart(p, pp.q()).ok_or(CoreError::NotWeil)
}

/// Solve `P = sum b_k x^{d-k} (x^2+q)^k` for the b_k, top coefficient first;
/// returns None when a nonzero remainder survives.
fn extract_real_counterpart(p: &IntPoly, q: &BigInt) -> Option<IntPoly> {
    let two_d = p.deg();
    let d = two_d / 2;
    let x2q = IntPoly::from_coeffs(vec![q.clone(), BigInt::zero(), BigInt::one()]);
    let mut rem = p.clone();
    let mut b = vec![BigInt::zero(); d + 1];
    for k in (0..=d).rev() {
        let c = rem.coeff(d + k);
        if !c.is_zero() {
            let term = x2q.pow(k as u32).shift_up(d - k).mul_scalar(&c);
            rem = rem.sub(&term);
        }
        b[k] = c;
    }
    if rem.is_zero() {
        Some(IntPoly::from_coeffs(b))
    } else {
        None
    }
}

/// Even/odd split `s(y) = a(y^2) + y b(y^2)`.
fn even_odd_parts(s: &IntPoly) -> (IntPoly, IntPoly) {
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (i, c) in s.coeffs().iter().enumerate() {
        if i % 2 == 0 {
            a.push(c.clone());
        } else {
            b.push(c.clone());
        }
    }
    (IntPoly::from_coeffs(a), IntPoly::from_coeffs(b))
}

/// Whether every complex root of the monic polynomial has modulus sqrt(q).
///
/// Real-root factors (`x -+ sqrt(q)` for square q, and `x^2 - q`) are divided
/// out first; they are Weil but sit outside the coefficient symmetry that the
/// remaining test relies on. What survives must be of even degree, satisfy
/// the functional equation, and have a real counterpart whose roots are all
/// real in `[-2 sqrt(q), 2 sqrt(q)]`; that last condition is decided exactly
/// by Sturm-counting the root-squares polynomial on `(0, 4q]` together with
/// a separate sign test at 0.
pub fn is_weil_poly(p: &IntPoly, pp: &PrimePower) -> Result<bool> {
    if !p.is_monic() {
        return Err(CoreError::NotMonic);
    }
    if p.is_constant() {
        return Err(CoreError::Invalid(
            "constant polynomial has no roots".into(),
        ));
    }
    let q = pp.q();
    let mut f = p.clone();
    if let Some(s) = pp.sqrt() {
        for root in [s.clone(), -s.clone()] {
            let lin = IntPoly::from_coeffs(vec![-root, BigInt::one()]);
            while let Some(g) = f.div_exact(&lin) {
                f = g;
            }
        }
    }
    let real_quad = IntPoly::from_coeffs(vec![-q.clone(), BigInt::zero(), BigInt::one()]);
    while let Some(g) = f.div_exact(&real_quad) {
        f = g;
    }
    if f.is_constant() {
        return Ok(true);
    }
    if !f.deg().is_multiple_of(2) {
        return Ok(false);
    }
    if functional_equation_violation(&f, q).is_some() {
        return Ok(false);
    }
    let counterpart = match extract_real_counterpart(&f, q) {
        Some(c) => c,
        None => return Ok(false),
    };
    // pi = +-sqrt(q) pairs map to y^2 - 4q; gone after the strip above, but
    // divide defensively so the Sturm endpoints stay root-free.
    let y2m4q = IntPoly::from_coeffs(vec![BigInt::from(-4) * q, BigInt::zero(), BigInt::one()]);
    let mut counterpart = counterpart;
    while let Some(g) = counterpart.div_exact(&y2m4q) {
        counterpart = g;
    }
    let mut s = counterpart.squarefree_part();
    if let Some(r) = pp.sqrt() {
        for root in [BigInt::from(2) * r, BigInt::from(-2) * r] {
            let lin = IntPoly::from_coeffs(vec![-root, BigInt::one()]);
            if let Some(g) = s.div_exact(&lin) {
                s = g;
            }
        }
    }
    if s.is_constant() {
        return Ok(true);
    }
    if count_all_real_roots(&s)? != s.deg() {
        return Ok(false);
    }
    // Root squares: w(z) = a(z)^2 - z b(z)^2 has w(y^2) = s(y) s(-y), so the
    // roots of w are exactly the squares of the roots of s.
    let (a, b) = even_odd_parts(&s);
    let z = IntPoly::x();
    let w = a.mul(&a).sub(&z.mul(&b).mul(&b));
    let mut w_sf = w.squarefree_part();
    if w_sf.coeff(0).is_zero() {
        // z = 0 comes from y | s, i.e. an x^2 + q factor: modulus sqrt(q).
        w_sf = w_sf.div_exact(&z).expect("zero constant term");
    }
    if w_sf.is_constant() {
        return Ok(true);
    }
    let four_q = BigInt::from(4) * q;
    if w_sf.eval_int(&four_q).is_zero() {
        return Ok(false);
    }
    let lo = Rational::from(BigInt::zero());
    let hi = Rational::from(four_q);
    Ok(sturm_count(&w_sf, &lo, &hi)? == w_sf.deg())
}

/// A conjugacy class of Weil q-numbers: a normalized monic irreducible
/// minimal polynomial plus its classification flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeilClass {
    pp: PrimePower,
    minpoly: IntPoly,
    two_d: usize,
    is_real: bool,
    is_rational: bool,
    is_ordinary: bool,
    half_degree_convention: bool,
}

/// Classify a monic irreducible Weil polynomial.
pub fn classify(p: &IntPoly, pp: &PrimePower) -> Result<WeilClass> {
    if !p.is_monic() {
        return Err(CoreError::NotMonic);
    }
    if !is_weil_poly(p, pp)? {
        return Err(CoreError::NotWeil);
    }
    if !factor::is_irreducible(p)? {
        return Err(CoreError::Reducible);
    }
    let q = pp.q();
    let two_d = p.deg();
    let real_quad = IntPoly::from_coeffs(vec![-q.clone(), BigInt::zero(), BigInt::one()]);
    let is_rational = two_d == 1;
    let is_real = is_rational || *p == real_quad;
    let is_ordinary = if is_real {
        false
    } else {
        let d = two_d / 2;
        !(p.coeff(d) % pp.p()).is_zero()
    };
    Ok(WeilClass {
        pp: pp.clone(),
        minpoly: p.clone(),
        two_d,
        is_real,
        is_rational,
        is_ordinary,
        half_degree_convention: two_d == 1,
    })
}

impl WeilClass {
    pub fn new(p: &IntPoly, pp: &PrimePower) -> Result<WeilClass> {
        classify(p, pp)
    }

    pub fn minpoly(&self) -> &IntPoly {
        &self.minpoly
    }

    pub fn prime_power(&self) -> &PrimePower {
        &self.pp
    }

    pub fn degree(&self) -> usize {
        self.two_d
    }

    pub fn is_real(&self) -> bool {
        self.is_real
    }

    pub fn is_rational(&self) -> bool {
        self.is_rational
    }

    pub fn is_ordinary(&self) -> bool {
        self.is_ordinary
    }

    pub fn half_degree_convention(&self) -> bool {
        self.half_degree_convention
    }

    /// `+1` for the class of `x - sqrt(q)`, `-1` for `x + sqrt(q)`.
    pub fn rational_sign(&self) -> Option<i8> {
        if !self.is_rational {
            return None;
        }
        Some(if self.minpoly.coeff(0).is_negative() {
            1
        } else {
            -1
        })
    }

    /// Constant-term ordinariness criterion; rejects real classes, for which
    /// the middle coefficient is not defined.
    pub fn ordinary_criterion(&self) -> Result<bool> {
        if self.is_real {
            return Err(CoreError::RealClassPresent);
        }
        Ok(self.is_ordinary)
    }
}

/// A finite set of distinct Weil classes over one q, canonically ordered by
/// (degree, coefficients).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeilSet {
    pp: PrimePower,
    classes: Vec<WeilClass>,
}

impl WeilSet {
    pub fn new(pp: PrimePower, mut classes: Vec<WeilClass>) -> Result<WeilSet> {
        for c in &classes {
            if c.pp.q() != pp.q() {
                return Err(CoreError::MixedPrimePowers);
            }
        }
        classes.sort_by(|a, b| compare_polys(&a.minpoly, &b.minpoly));
        for pair in classes.windows(2) {
            if pair[0].minpoly == pair[1].minpoly {
                return Err(CoreError::DuplicateClass);
            }
        }
        Ok(WeilSet { pp, classes })
    }

    /// Build from raw polynomials, classifying each.
    pub fn from_polys(pp: &PrimePower, polys: &[IntPoly]) -> Result<WeilSet> {
        let classes = polys
            .iter()
            .map(|p| classify(p, pp))
            .collect::<Result<Vec<_>>>()?;
        WeilSet::new(pp.clone(), classes)
    }

    pub fn prime_power(&self) -> &PrimePower {
        &self.pp
    }

    pub fn classes(&self) -> &[WeilClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn total_degree(&self) -> usize {
        self.classes.iter().map(|c| c.two_d).sum()
    }

    /// True when the set contains both rational classes or neither, which is
    /// exactly when the total degree is even.
    pub fn even_degree(&self) -> bool {
        self.classes.iter().filter(|c| c.is_rational).count() % 2 == 0
    }

    pub fn contains(&self, other: &WeilClass) -> bool {
        self.classes.iter().any(|c| c.minpoly == other.minpoly)
    }

    pub fn is_subset_of(&self, other: &WeilSet) -> bool {
        self.classes.iter().all(|c| other.contains(c))
    }

    /// p does not divide any middle coefficient; rejects sets with a real
    /// class.
    pub fn is_ordinary(&self) -> Result<bool> {
        if self.classes.iter().any(|c| c.is_real) {
            return Err(CoreError::RealClassPresent);
        }
        Ok(self.classes.iter().all(|c| c.is_ordinary))
    }
}

pub fn compare_polys(a: &IntPoly, b: &IntPoly) -> std::cmp::Ordering {
    a.deg().cmp(&b.deg()).then_with(|| {
        for i in (0..=a.deg()).rev() {
            let ord = a.coeff(i).cmp(&b.coeff(i));
            if ord != std::cmp::Ordering::Equal {
                return ord;
            }
        }
        std::cmp::Ordering::Equal
    })
}

/// `floor(C(2d, d+r) * q^((d-r)/2))`: the elementary-symmetric bound on
/// `|a_{d+r}|` when every root has modulus `sqrt(q)`.
pub fn coefficient_bound(pp: &PrimePower, two_d: usize, r: usize) -> BigInt {
    let d = two_d / 2;
    let c = binomial(BigInt::from(two_d), BigInt::from(d + r));
    let m = d - r;
    if m.is_multiple_of(2) {
        c * pp.q().pow((m / 2) as u32)
    } else {
        (c.pow(2) * pp.q().pow(m as u32)).sqrt()
    }
}

fn validate_enum_args(two_d: usize, cap: usize) -> Result<usize> {
    if two_d == 0 || !two_d.is_multiple_of(2) {
        return Err(CoreError::OddDegree);
    }
    if two_d > cap {
        return Err(CoreError::DegreeCap { degree: two_d, cap });
    }
    Ok(two_d / 2)
}

/// Inclusive range of the leading free coefficient `a_{2d-1}` scanned by the
/// enumerator; shards partition this range.
pub fn leading_coefficient_range(
    pp: &PrimePower,
    two_d: usize,
    cap: usize,
) -> Result<(BigInt, BigInt)> {
    let d = validate_enum_args(two_d, cap)?;
    let b = coefficient_bound(pp, two_d, d - 1);
    Ok((-b.clone(), b))
}

/// All monic degree-2d Weil polynomials (reducible ones included), in
/// lexicographic order of the free coefficients `(a_{2d-1}, ..., a_d)`.
pub fn enumerate_weil_polys(pp: &PrimePower, two_d: usize) -> Result<Vec<IntPoly>> {
    enumerate_weil_polys_with_cap(pp, two_d, DEFAULT_ENUM_CAP)
}

pub fn enumerate_weil_polys_with_cap(
    pp: &PrimePower,
    two_d: usize,
    cap: usize,
) -> Result<Vec<IntPoly>> {
    let (lo, hi) = leading_coefficient_range(pp, two_d, cap)?;
    enumerate_weil_polys_in_lead_range(pp, two_d, &lo, &hi, cap)
}

/// The enumeration restricted to `a_{2d-1}` in `[lead_lo, lead_hi]`;
/// concatenating consecutive restrictions reproduces the full list.
pub fn enumerate_weil_polys_in_lead_range(
    pp: &PrimePower,
    two_d: usize,
    lead_lo: &BigInt,
    lead_hi: &BigInt,
    cap: usize,
) -> Result<Vec<IntPoly>> {
    let d = validate_enum_args(two_d, cap)?;
    let bounds: Vec<BigInt> = (0..d).map(|r| coefficient_bound(pp, two_d, r)).collect();
    let mut free = vec![BigInt::zero(); d];
    let mut out = Vec::new();
    scan_free_coeffs(
        pp,
        two_d,
        &bounds,
        d - 1,
        lead_lo,
        lead_hi,
        &mut free,
        &mut out,
    )?;
    Ok(out)
}

/// Recursive lexicographic scan over `a_{d+r}` for `r = d-1, ..., 0`.
#[allow(clippy::too_many_arguments)]
fn scan_free_coeffs(
    pp: &PrimePower,
    two_d: usize,
    bounds: &[BigInt],
    r: usize,
    lead_lo: &BigInt,
    lead_hi: &BigInt,
    free: &mut Vec<BigInt>,
    out: &mut Vec<IntPoly>,
) -> Result<()> {
    let d = two_d / 2;
    let (lo, hi) = if r == d - 1 {
        (
            lead_lo.clone().max(-bounds[r].clone()),
            lead_hi.clone().min(bounds[r].clone()),
        )
    } else {
        (-bounds[r].clone(), bounds[r].clone())
    };
    let mut a = lo;
    while a <= hi {
        free[r] = a.clone();
        if r == 0 {
            let cand = assemble_from_free(pp.q(), two_d, free);
            if is_weil_poly(&cand, pp)? {
                out.push(cand);
            }
        } else {
            scan_free_coeffs(pp, two_d, bounds, r - 1, lead_lo, lead_hi, free, out)?;
        }
        a += 1;
    }
    Ok(())
}

/// Monic degree-`two_d` polynomial with the given upper coefficients
/// `(a_{2d-1}, ..., a_d)`, the lower half completed by the functional
/// equation. Inverse of `upper_coeffs` on enumerated polynomials.
pub fn poly_from_upper_coeffs(pp: &PrimePower, two_d: usize, upper: &[BigInt]) -> Result<IntPoly> {
    if two_d == 0 || !two_d.is_multiple_of(2) {
        return Err(CoreError::OddDegree);
    }
    let d = two_d / 2;
    if upper.len() != d {
        return Err(CoreError::DimensionMismatch(format!(
            "expected {} upper coefficients, got {}",
            d,
            upper.len()
        )));
    }
    let free: Vec<BigInt> = upper.iter().rev().cloned().collect();
    Ok(assemble_from_free(pp.q(), two_d, &free))
}

/// The upper coefficients `(a_{2d-1}, ..., a_d)` of a monic even-degree
/// polynomial, the ones not forced by the functional equation.
pub fn upper_coeffs(p: &IntPoly) -> Result<Vec<BigInt>> {
    if !p.is_monic() {
        return Err(CoreError::NotMonic);
    }
    let two_d = p.deg();
    if two_d == 0 || !two_d.is_multiple_of(2) {
        return Err(CoreError::OddDegree);
    }
    let d = two_d / 2;
    Ok((d..two_d).rev().map(|i| p.coeff(i)).collect())
}

/// Monic polynomial from free coefficients `a_{d+r} = free[r]`, the rest
/// forced by `a_{d-r} = q^r a_{d+r}`.
fn assemble_from_free(q: &BigInt, two_d: usize, free: &[BigInt]) -> IntPoly {
    let d = two_d / 2;
    let mut coeffs = vec![BigInt::zero(); two_d + 1];
    coeffs[two_d] = BigInt::one();
    for (r, a) in free.iter().enumerate() {
        coeffs[d + r] = a.clone();
    }
    for r in 1..=d {
        coeffs[d - r] = q.pow(r as u32) * &coeffs[d + r];
    }
    IntPoly::from_coeffs(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(q: u64) -> PrimePower {
        PrimePower::from_u64(q).unwrap()
    }

    fn poly(cs: &[i64]) -> IntPoly {
        IntPoly::from_i64s(cs)
    }

    #[test]
    fn prime_power_recognition() {
        let q = pp(25);
        assert_eq!(q.p(), &BigInt::from(5));
        assert_eq!(q.e(), 2);
        assert_eq!(q.sqrt(), Some(&BigInt::from(5)));
        let q = pp(8);
        assert_eq!(q.p(), &BigInt::from(2));
        assert_eq!(q.e(), 3);
        assert!(!q.is_square());
        assert!(PrimePower::from_u64(6).is_err());
        assert!(PrimePower::from_u64(1).is_err());
        assert!(PrimePower::from_u64(0).is_err());
    }

    #[test]
    fn functional_equation_examples() {
        let q5 = pp(5);
        assert!(check_functional_equation(&poly(&[5, -1, 1]), &q5).unwrap());
        assert!(check_functional_equation(&poly(&[25, 5, 2, 1, 1]), &q5).unwrap());
        assert!(!check_functional_equation(&poly(&[7, -1, 1]), &q5).unwrap());
        assert!(matches!(
            check_functional_equation(&poly(&[1, 1]), &q5),
            Err(CoreError::OddDegree)
        ));
    }

    #[test]
    fn real_counterpart_examples() {
        let q5 = pp(5);
        // x^2 - bx + q -> y - b
        assert_eq!(
            real_counterpart(&poly(&[5, -3, 1]), &q5).unwrap(),
            poly(&[-3, 1])
        );
        // x^2 + 5 -> y
        assert_eq!(
            real_counterpart(&poly(&[5, 0, 1]), &q5).unwrap(),
            poly(&[0, 1])
        );
        // x^4 + a3 x^3 + a2 x^2 + q a3 x + q^2 -> y^2 + a3 y + (a2 - 2q)
        assert_eq!(
            real_counterpart(&poly(&[25, 5, 2, 1, 1]), &q5).unwrap(),
            poly(&[2 - 10, 1, 1])
        );
        assert!(matches!(
            real_counterpart(&poly(&[7, -1, 1]), &q5),
            Err(CoreError::FunctionalEquation { .. })
        ));
    }

    #[test]
    fn weil_recognition_q5() {
        let q5 = pp(5);
        assert!(is_weil_poly(&poly(&[5, -1, 1]), &q5).unwrap());
        assert!(!is_weil_poly(&poly(&[5, -5, 1]), &q5).unwrap());
        assert!(!is_weil_poly(&poly(&[-1, 1]), &q5).unwrap());
        // real class x^2 - 5
        assert!(is_weil_poly(&poly(&[-5, 0, 1]), &q5).unwrap());
        // x^2 + 5: supersingular, roots +-i sqrt(5)
        assert!(is_weil_poly(&poly(&[5, 0, 1]), &q5).unwrap());
        // products including the real class
        let prod = poly(&[-5, 0, 1]).mul(&poly(&[5, -1, 1]));
        assert!(is_weil_poly(&prod, &q5).unwrap());
    }

    #[test]
    fn weil_recognition_square_q() {
        let q4 = pp(4);
        assert!(is_weil_poly(&poly(&[-2, 1]), &q4).unwrap());
        assert!(is_weil_poly(&poly(&[2, 1]), &q4).unwrap());
        assert!(!is_weil_poly(&poly(&[-1, 1]), &q4).unwrap());
        let q25 = pp(25);
        assert!(is_weil_poly(&poly(&[25, 5, 1]), &q25).unwrap());
        assert!(is_weil_poly(&poly(&[25, 1, 1]), &q25).unwrap());
    }

    #[test]
    fn classify_examples() {
        let q5 = pp(5);
        let c = classify(&poly(&[5, 0, 1]), &q5).unwrap();
        assert!(!c.is_real() && !c.is_ordinary() && !c.is_rational());
        let c = classify(&poly(&[5, -1, 1]), &q5).unwrap();
        assert!(!c.is_real() && c.is_ordinary());
        let c = classify(&poly(&[-5, 0, 1]), &q5).unwrap();
        assert!(c.is_real() && !c.is_rational());
        assert!(matches!(
            c.ordinary_criterion(),
            Err(CoreError::RealClassPresent)
        ));
        // x^2 - 25 over q = 25 splits; classifier must reject it as reducible
        let q25 = pp(25);
        assert!(matches!(
            classify(&poly(&[-25, 0, 1]), &q25),
            Err(CoreError::Reducible)
        ));
        let c = classify(&poly(&[-5, 1]), &q25).unwrap();
        assert!(c.is_rational() && c.is_real() && c.half_degree_convention());
        assert_eq!(c.rational_sign(), Some(1));
        let c = classify(&poly(&[5, 1]), &q25).unwrap();
        assert_eq!(c.rational_sign(), Some(-1));
    }

    #[test]
    fn weil_set_ordering_and_flags() {
        let q25 = pp(25);
        let a = classify(&poly(&[25, 1, 1]), &q25).unwrap();
        let plus = classify(&poly(&[-5, 1]), &q25).unwrap();
        let minus = classify(&poly(&[5, 1]), &q25).unwrap();
        let w = WeilSet::new(q25.clone(), vec![a.clone(), plus.clone()]).unwrap();
        assert!(!w.even_degree());
        assert_eq!(w.total_degree(), 3);
        let w = WeilSet::new(q25.clone(), vec![a.clone(), plus.clone(), minus]).unwrap();
        assert!(w.even_degree());
        assert_eq!(w.total_degree(), 4);
        let w = WeilSet::new(q25.clone(), vec![a.clone()]).unwrap();
        assert!(w.even_degree());
        assert!(matches!(
            WeilSet::new(q25, vec![a.clone(), a]),
            Err(CoreError::DuplicateClass)
        ));
    }

    #[test]
    fn ordinary_set_criterion() {
        let q5 = pp(5);
        let ord = classify(&poly(&[5, -1, 1]), &q5).unwrap();
        let ss = classify(&poly(&[5, 0, 1]), &q5).unwrap();
        let real = classify(&poly(&[-5, 0, 1]), &q5).unwrap();
        let w = WeilSet::new(q5.clone(), vec![ord.clone()]).unwrap();
        assert!(w.is_ordinary().unwrap());
        let w = WeilSet::new(q5.clone(), vec![ord.clone(), ss]).unwrap();
        assert!(!w.is_ordinary().unwrap());
        let w = WeilSet::new(q5, vec![ord, real]).unwrap();
        assert!(matches!(w.is_ordinary(), Err(CoreError::RealClassPresent)));
    }

    #[test]
    fn enumerate_degree_two_counts() {
        // 2 floor(2 sqrt(q)) + 1 monic quadratics x^2 - bx + q
        for (q, n) in [(2u64, 5usize), (3, 7), (5, 9), (7, 11), (11, 13), (13, 15)] {
            let list = enumerate_weil_polys(&pp(q), 2).unwrap();
            assert_eq!(list.len(), n, "q = {q}");
            for f in &list {
                assert_eq!(f.coeff(0), BigInt::from(q));
            }
        }
    }

    #[test]
    fn enumerate_is_lex_sorted_and_shardable() {
        let q = pp(3);
        let whole = enumerate_weil_polys(&q, 4).unwrap();
        assert!(!whole.is_empty());
        for pair in whole.windows(2) {
            // lex on (a3, a2): compare from the top free coefficient down
            let key = |f: &IntPoly| (f.coeff(3), f.coeff(2));
            assert!(key(&pair[0]) < key(&pair[1]));
        }
        let (lo, hi) = leading_coefficient_range(&q, 4, DEFAULT_ENUM_CAP).unwrap();
        let mid = BigInt::zero();
        let first = enumerate_weil_polys_in_lead_range(&q, 4, &lo, &mid, DEFAULT_ENUM_CAP).unwrap();
        let second =
            enumerate_weil_polys_in_lead_range(&q, 4, &(mid + 1), &hi, DEFAULT_ENUM_CAP).unwrap();
        let merged: Vec<IntPoly> = first.into_iter().chain(second).collect();
        assert_eq!(merged, whole);
    }

    #[test]
    fn enumeration_respects_cap() {
        assert!(matches!(
            enumerate_weil_polys(&pp(2), 14),
            Err(CoreError::DegreeCap { .. })
        ));
        assert!(matches!(
            enumerate_weil_polys(&pp(2), 3),
            Err(CoreError::OddDegree)
        ));
    }
}
