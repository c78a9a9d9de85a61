//! Factorization in `Z[x]`: squarefree decomposition, then mod-p
//! factorization (distinct-degree plus equal-degree splitting), quadratic
//! Hensel lifting past the coefficient bound, and subset recombination.
//!
//! Inputs are capped at a configurable degree; the default suits the
//! desk-scale polynomials that show up here (degree <= 16).

use crate::error::{CoreError, Result};
use crate::modp::{poly as fpoly, Fp};
use crate::poly::IntPoly;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

pub const DEFAULT_DEGREE_CAP: usize = 16;

/// `p = content * prod factors[i].0 ^ factors[i].1` exactly, with primitive,
/// positive-leading, pairwise-distinct irreducible factors sorted by degree
/// and then by coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub content: BigInt,
    pub factors: Vec<(IntPoly, u32)>,
}

impl Factorization {
    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }

    pub fn reassemble(&self) -> IntPoly {
        let mut acc = IntPoly::constant(self.content.clone());
        for (f, m) in &self.factors {
            acc = acc.mul(&f.pow(*m));
        }
        acc
    }
}

pub fn factor_int_poly(p: &IntPoly) -> Result<Factorization> {
    factor_int_poly_with_cap(p, DEFAULT_DEGREE_CAP)
}

pub fn factor_int_poly_with_cap(p: &IntPoly, cap: usize) -> Result<Factorization> {
    if p.is_zero() {
        return Err(CoreError::Invalid(
            "cannot factor the zero polynomial".into(),
        ));
    }
    let degree = p.deg();
    if degree > cap {
        return Err(CoreError::DegreeCap { degree, cap });
    }
    let content = p.signed_content();
    let pp = p.primitive_part();
    let mut factors: Vec<(IntPoly, u32)> = Vec::new();
    for (part, mult) in pp.squarefree_decomposition() {
        for f in factor_squarefree(&part) {
            factors.push((f, mult));
        }
    }
    factors.sort_by(|a, b| compare_polys(&a.0, &b.0));
    let result = Factorization { content, factors };
    debug_assert_eq!(result.reassemble(), *p);
    Ok(result)
}

/// Convenience: whether a nonconstant polynomial is irreducible over `Q`.
pub fn is_irreducible(p: &IntPoly) -> Result<bool> {
    if p.is_constant() {
        return Ok(false);
    }
    Ok(factor_int_poly(p)?.is_irreducible())
}

fn compare_polys(a: &IntPoly, b: &IntPoly) -> std::cmp::Ordering {
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

/// Factor a primitive, squarefree, positive-leading polynomial of degree >= 1.
fn factor_squarefree(s: &IntPoly) -> Vec<IntPoly> {
    debug_assert!(s.deg() >= 1);
    if s.deg() == 1 {
        return vec![s.clone()];
    }
    if s.is_monic() {
        return factor_squarefree_monic(s);
    }
    // Reduce to the monic case: t(x) = lc^(n-1) * s(x/lc) is monic with the
    // roots scaled by lc; factors map back via the primitive part of t_i(lc*x).
    let n = s.deg();
    let lc = s.leading();
    let t = IntPoly::from_coeffs(
        (0..=n)
            .map(|i| {
                if i == n {
                    BigInt::one()
                } else {
                    s.coeff(i) * lc.pow((n - 1 - i) as u32)
                }
            })
            .collect(),
    );
    debug_assert!(t.is_monic());
    let mut out = Vec::new();
    for ti in factor_squarefree_monic(&t) {
        let scaled = IntPoly::from_coeffs(
            (0..=ti.deg())
                .map(|i| ti.coeff(i) * lc.pow(i as u32))
                .collect(),
        );
        out.push(scaled.primitive_part());
    }
    let check: IntPoly = out
        .iter()
        .fold(IntPoly::one(), |acc, f| acc.mul(f))
        .mul_scalar(&s.signed_content());
    debug_assert_eq!(check.primitive_part(), s.primitive_part());
    out
}

fn factor_squarefree_monic(s: &IntPoly) -> Vec<IntPoly> {
    let p = choose_good_prime(s);
    let field = Fp::new(p);
    let s_mod = reduce_mod_p(s, &field);
    let modular = factor_mod_p(&field, &s_mod);
    if modular.len() == 1 {
        return vec![s.clone()];
    }
    // Lift until the modulus clears twice the factor coefficient bound.
    let bound = factor_coeff_bound(s);
    let target: BigInt = BigInt::from(2) * bound + 1;
    let lifted = hensel_lift_list(s, &modular, &field, &target);
    let modulus = lifted.modulus;
    recombine(s, lifted.factors, &modulus)
}

/// Odd prime where the polynomial stays squarefree of full degree.
fn choose_good_prime(s: &IntPoly) -> u64 {
    let lc = s.leading();
    let mut p = 3u64;
    loop {
        if is_small_prime(p) && !(&lc % BigInt::from(p)).is_zero() {
            let field = Fp::new(p);
            let reduced = reduce_mod_p(s, &field);
            if fpoly::deg(&reduced) == Some(s.deg()) {
                let der = fpoly::derivative(&field, &reduced);
                let g = fpoly::gcd(&field, &reduced, &der);
                if g.len() == 1 {
                    return p;
                }
            }
        }
        p += 2;
    }
}

fn is_small_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn reduce_mod_p(s: &IntPoly, field: &Fp) -> Vec<u64> {
    let p = BigInt::from(field.p);
    fpoly::trim(
        s.coeffs()
            .iter()
            .map(|c| c.mod_floor(&p).to_u64().expect("fits"))
            .collect(),
    )
}

/// 2^n * ceil(sqrt(sum of squared coefficients)): every irreducible factor of
/// `s` has coefficients bounded by this in absolute value.
fn factor_coeff_bound(s: &IntPoly) -> BigInt {
    let norm_sq: BigInt = s.coeffs().iter().map(|c| c * c).sum();
    let norm = norm_sq.sqrt() + 1;
    norm << s.deg()
}

/// Monic irreducible factors mod p, deterministic.
fn factor_mod_p(field: &Fp, s: &[u64]) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let x = vec![0u64, 1];
    let mut v = fpoly::monic(field, s);
    let mut h = x.clone();
    let mut rng = SplitMix::new(0x5eed ^ field.p);
    let mut d = 0usize;
    while fpoly::deg(&v).unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = fpoly::pow_mod_u64(field, &h, field.p, &v);
        let diff = fpoly::sub(field, &h, &x);
        let g = fpoly::gcd(field, &diff, &v);
        if fpoly::deg(&g).unwrap_or(0) > 0 {
            equal_degree_split(field, &g, d, &mut rng, &mut out);
            v = fpoly::divrem(field, &v, &g).0;
            h = fpoly::rem(field, &h, &v);
        }
    }
    if fpoly::deg(&v).unwrap_or(0) > 0 {
        out.push(fpoly::monic(field, &v));
    }
    out.sort_by(|a, b| compare_fp_polys(a, b));
    out
}

fn compare_fp_polys(a: &[u64], b: &[u64]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| {
        for i in (0..a.len()).rev() {
            let ord = a[i].cmp(&b[i]);
            if ord != std::cmp::Ordering::Equal {
                return ord;
            }
        }
        std::cmp::Ordering::Equal
    })
}

/// Cantor-Zassenhaus equal-degree splitting for odd p.
fn equal_degree_split(
    field: &Fp,
    g: &[u64],
    d: usize,
    rng: &mut SplitMix,
    out: &mut Vec<Vec<u64>>,
) {
    let dg = fpoly::deg(g).expect("nonzero");
    if dg == d {
        out.push(fpoly::monic(field, g));
        return;
    }
    let exponent = (BigUint::from(field.p).pow(d as u32) - 1u32) / 2u32;
    let bits: Vec<bool> = (0..exponent.bits())
        .rev()
        .map(|i| exponent.bit(i))
        .collect();
    loop {
        let r: Vec<u64> = fpoly::trim((0..dg).map(|_| rng.next_below(field.p)).collect());
        if fpoly::deg(&r).unwrap_or(0) < 1 {
            continue;
        }
        let shared = fpoly::gcd(field, &r, g);
        let split = if fpoly::deg(&shared).unwrap_or(0) > 0 && fpoly::deg(&shared) != fpoly::deg(g)
        {
            shared
        } else {
            let b = fpoly::pow_mod_bits(field, &r, &bits, g);
            let b1 = fpoly::sub(field, &b, &[1]);
            fpoly::gcd(field, &b1, g)
        };
        let ds = fpoly::deg(&split).unwrap_or(0);
        if ds > 0 && ds < dg {
            let rest = fpoly::divrem(field, g, &split).0;
            equal_degree_split(field, &split, d, rng, out);
            equal_degree_split(field, &rest, d, rng, out);
            return;
        }
    }
}

struct SplitMix {
    state: u64,
}

impl SplitMix {
    fn new(seed: u64) -> SplitMix {
        SplitMix { state: seed }
    }

    fn next(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn next_below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

// ---- Hensel lifting over Z/p^k ----------------------------------------

/// Polynomials mod m: dense `BigInt` coefficients reduced into `[0, m)`.
fn mod_reduce(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = a.iter().map(|c| c.mod_floor(m)).collect();
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn mod_mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            v[i + j] += x * y;
        }
    }
    mod_reduce(&v, m)
}

fn mod_add(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let mut v = vec![BigInt::zero(); n];
    for (i, slot) in v.iter_mut().enumerate() {
        let mut s = BigInt::zero();
        if let Some(x) = a.get(i) {
            s += x;
        }
        if let Some(y) = b.get(i) {
            s += y;
        }
        *slot = s;
    }
    mod_reduce(&v, m)
}

fn mod_sub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let neg: Vec<BigInt> = b.iter().map(|c| -c).collect();
    mod_add(a, &neg, m)
}

/// Division with remainder by a monic divisor, mod m.
fn mod_divrem_monic(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    let db = b.len() - 1;
    debug_assert!(
        b.last().is_some_and(|c| c.is_one()),
        "divisor must be monic"
    );
    let mut rem: Vec<BigInt> = a.to_vec();
    if rem.len() <= db {
        return (Vec::new(), mod_reduce(&rem, m));
    }
    let mut quot = vec![BigInt::zero(); rem.len() - db];
    for i in (db..rem.len()).rev() {
        let q = rem[i].mod_floor(m);
        if q.is_zero() {
            rem[i] = BigInt::zero();
            continue;
        }
        let shift = i - db;
        for (j, c) in b.iter().enumerate() {
            let t = &q * c;
            rem[shift + j] -= t;
        }
        debug_assert!(rem[i].mod_floor(m).is_zero());
        quot[shift] = q;
    }
    (mod_reduce(&quot, m), mod_reduce(&rem, m))
}

struct LiftedFactors {
    modulus: BigInt,
    factors: Vec<Vec<BigInt>>,
}

/// Lift the factorization `s = prod base` from mod p to a modulus `>= target`.
fn hensel_lift_list(s: &IntPoly, base: &[Vec<u64>], field: &Fp, target: &BigInt) -> LiftedFactors {
    // Final modulus: smallest p^(2^j) tower value >= target, shared by all.
    let mut modulus = BigInt::from(field.p);
    while &modulus < target {
        modulus = &modulus * &modulus;
    }
    let mut factors = Vec::with_capacity(base.len());
    lift_recursive(s.coeffs(), base, field, &modulus, &mut factors);
    LiftedFactors { modulus, factors }
}

fn lift_recursive(
    s: &[BigInt],
    base: &[Vec<u64>],
    field: &Fp,
    modulus: &BigInt,
    out: &mut Vec<Vec<BigInt>>,
) {
    if base.len() == 1 {
        out.push(mod_reduce(s, modulus));
        return;
    }
    let split = base.len() / 2;
    let (left, right) = base.split_at(split);
    let g0 = product_mod_p(field, left);
    let h0 = product_mod_p(field, right);
    let (one, s_bez, t_bez) = fpoly::xgcd(field, &g0, &h0);
    debug_assert_eq!(one, vec![1u64]);
    let (g, h) = hensel_pair(
        s,
        &to_big(&g0),
        &to_big(&h0),
        &to_big(&s_bez),
        &to_big(&t_bez),
        &BigInt::from(field.p),
        modulus,
    );
    lift_recursive(&g, left, field, modulus, out);
    lift_recursive(&h, right, field, modulus, out);
}

fn product_mod_p(field: &Fp, fs: &[Vec<u64>]) -> Vec<u64> {
    fs.iter()
        .fold(vec![1u64], |acc, f| fpoly::mul(field, &acc, f))
}

fn to_big(a: &[u64]) -> Vec<BigInt> {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// Quadratic Hensel: from `s = g h (mod p)` with Bezout data, climb the tower
/// `p, p^2, p^4, ...` up to `modulus`, returning the lifted monic pair.
fn hensel_pair(
    s: &[BigInt],
    g0: &[BigInt],
    h0: &[BigInt],
    s0: &[BigInt],
    t0: &[BigInt],
    p: &BigInt,
    modulus: &BigInt,
) -> (Vec<BigInt>, Vec<BigInt>) {
    let mut m = p.clone();
    let mut g = g0.to_vec();
    let mut h = h0.to_vec();
    let mut sb = s0.to_vec();
    let mut tb = t0.to_vec();
    while &m < modulus {
        let m2 = &m * &m;
        let e = mod_sub(&mod_reduce(s, &m2), &mod_mul(&g, &h, &m2), &m2);
        let se = mod_mul(&sb, &e, &m2);
        let (q, r) = mod_divrem_monic(&se, &h, &m2);
        let g_new = mod_add(
            &mod_add(&g, &mod_mul(&tb, &e, &m2), &m2),
            &mod_mul(&q, &g, &m2),
            &m2,
        );
        let h_new = mod_add(&h, &r, &m2);
        let b = mod_sub(
            &mod_add(&mod_mul(&sb, &g_new, &m2), &mod_mul(&tb, &h_new, &m2), &m2),
            &[BigInt::one()],
            &m2,
        );
        let sbb = mod_mul(&sb, &b, &m2);
        let (c, d) = mod_divrem_monic(&sbb, &h_new, &m2);
        sb = mod_sub(&sb, &d, &m2);
        tb = mod_sub(
            &mod_sub(&tb, &mod_mul(&tb, &b, &m2), &m2),
            &mod_mul(&c, &g_new, &m2),
            &m2,
        );
        g = g_new;
        h = h_new;
        m = m2;
    }
    (mod_reduce(&g, modulus), mod_reduce(&h, modulus))
}

// ---- Recombination ------------------------------------------------------

/// Centered representative in `(-m/2, m/2]`.
fn symmetric_poly(a: &[BigInt], m: &BigInt) -> IntPoly {
    let half = m / 2;
    IntPoly::from_coeffs(
        a.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn recombine(s: &IntPoly, lifted: Vec<Vec<BigInt>>, modulus: &BigInt) -> Vec<IntPoly> {
    let mut live: Vec<Vec<BigInt>> = lifted;
    let mut remaining = s.clone();
    let mut found = Vec::new();
    let mut size = 1usize;
    'outer: while 2 * size <= live.len() {
        let combos = combinations(live.len(), size);
        for combo in combos {
            let prod = combo.iter().fold(vec![BigInt::one()], |acc, &i| {
                mod_mul(&acc, &live[i], modulus)
            });
            let candidate = symmetric_poly(&prod, modulus);
            if candidate.is_constant() {
                continue;
            }
            if let Some(quot) = remaining.div_exact(&candidate) {
                found.push(candidate.primitive_part());
                remaining = quot;
                let mut removal: Vec<usize> = combo.clone();
                removal.sort_unstable_by(|a, b| b.cmp(a));
                for i in removal {
                    live.remove(i);
                }
                continue 'outer;
            }
        }
        size += 1;
    }
    if !remaining.is_constant() {
        found.push(remaining.primitive_part());
    }
    found
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut combo: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(combo.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if combo[i] != i + n - k {
                break;
            }
        }
        if combo[i] == i + n - k {
            return out;
        }
        combo[i] += 1;
        for j in i + 1..k {
            combo[j] = combo[j - 1] + 1;
        }
    }
}
