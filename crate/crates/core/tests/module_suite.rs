//! Randomized checks for Frobenius lattice pairs: validation, hom lattices
//! against a rational-nullity oracle, duality, cokernel orders, and the
//! reflexivity tests on regular representations and their conjugates.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use weil_core::factor::is_irreducible;
use weil_core::modules::{
    coker_order, conjugate_pair, direct_sum, double_dual_check, end_ring_is_minimal,
    ext1_vanishing_check, hom_lattice, is_isogeny, regular_representation, tau_dual, tau_dual_map,
    validate_pair, ModuleMap,
};
use weil_core::orders::{build_order, MinimalCentralOrder};
use weil_core::weil::{classify, enumerate_weil_polys, PrimePower, WeilClass, WeilSet};
use weil_core::{DelignePair, IntMatrix};

fn quadratic_pool(q: u64) -> Vec<WeilClass> {
    let pp = PrimePower::from_u64(q).unwrap();
    enumerate_weil_polys(&pp, 2)
        .unwrap()
        .into_iter()
        .filter(|p| is_irreducible(p).unwrap())
        .map(|p| classify(&p, &pp).unwrap())
        .filter(|c| !c.is_rational())
        .collect()
}

fn random_order(q: u64, rng: &mut ChaCha8Rng) -> MinimalCentralOrder {
    let pp = PrimePower::from_u64(q).unwrap();
    let pool = quadratic_pool(q);
    let size = rng.gen_range(1..=3.min(pool.len()));
    let mut idx: Vec<usize> = (0..pool.len()).collect();
    idx.shuffle(rng);
    let classes: Vec<WeilClass> = idx[..size].iter().map(|&i| pool[i].clone()).collect();
    build_order(&WeilSet::new(pp, classes).unwrap()).unwrap()
}

/// Random element of GL_n(Z) built from elementary row operations.
fn random_unimodular(n: usize, rng: &mut ChaCha8Rng) -> IntMatrix {
    let mut rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    for _ in 0..3 * n {
        match rng.gen_range(0..3) {
            0 => {
                let i = rng.gen_range(0..n);
                let j = rng.gen_range(0..n);
                if i != j {
                    let c = BigInt::from(rng.gen_range(-2i64..=2));
                    let src = rows[i].clone();
                    for (t, s) in rows[j].iter_mut().zip(src) {
                        *t += &c * s;
                    }
                }
            }
            1 => {
                let i = rng.gen_range(0..n);
                let j = rng.gen_range(0..n);
                rows.swap(i, j);
            }
            _ => {
                let i = rng.gen_range(0..n);
                for t in rows[i].iter_mut() {
                    *t = -t.clone();
                }
            }
        }
    }
    IntMatrix::from_rows(rows)
}

/// Independent rank oracle: dimension of the intertwiner space over Q, read
/// off a rational Gaussian elimination of the stacked Kronecker conditions.
fn hom_rank_oracle(src: &DelignePair, dst: &DelignePair) -> usize {
    let conditions = |a: &IntMatrix, b: &IntMatrix| -> IntMatrix {
        let left = a.transpose().kronecker(&IntMatrix::identity(b.rows()));
        let right = IntMatrix::identity(a.rows()).kronecker(b);
        left.sub(&right)
    };
    let cf = conditions(src.frobenius_matrix(), dst.frobenius_matrix());
    let cv = conditions(src.verschiebung_matrix(), dst.verschiebung_matrix());
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for i in 0..cf.rows() {
        rows.push(cf.row(i).to_vec());
    }
    for i in 0..cv.rows() {
        rows.push(cv.row(i).to_vec());
    }
    let stacked = IntMatrix::from_rows(rows);
    stacked.to_rational().nullity()
}

fn random_pairs(rng: &mut ChaCha8Rng) -> Vec<DelignePair> {
    let mut pairs = Vec::new();
    for q in [2u64, 3, 5, 7] {
        for _ in 0..3 {
            let order = random_order(q, rng);
            if order.rank() > 6 {
                continue;
            }
            let base = regular_representation(&order).unwrap();
            let u = random_unimodular(base.rank(), rng);
            pairs.push(conjugate_pair(&base, &u).unwrap());
            pairs.push(base);
        }
    }
    pairs
}

#[test]
fn validation_accepts_conjugates_and_sums() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xab1e_0001);
    let pairs = random_pairs(&mut rng);
    for p in &pairs {
        let again = validate_pair(p.frobenius_matrix().clone(), p.prime_power(), false).unwrap();
        assert_eq!(again.charpoly(), p.charpoly());
        assert!(again.support().is_subset_of(p.support()));
        assert!(p.support().is_subset_of(again.support()));
    }
    for chunk in pairs.chunks(2) {
        if chunk.len() < 2 || chunk[0].prime_power() != chunk[1].prime_power() {
            continue;
        }
        let s = direct_sum(&chunk[0], &chunk[1]).unwrap();
        assert_eq!(s.rank(), chunk[0].rank() + chunk[1].rank());
        assert!(chunk[0].support().is_subset_of(s.support()));
        assert!(chunk[1].support().is_subset_of(s.support()));
    }
}

#[test]
fn hom_rank_matches_rational_oracle_and_is_symmetric() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xab1e_0002);
    for q in [3u64, 5] {
        let mut local: Vec<DelignePair> = Vec::new();
        for _ in 0..4 {
            let order = random_order(q, &mut rng);
            if order.rank() > 6 {
                continue;
            }
            let base = regular_representation(&order).unwrap();
            let u = random_unimodular(base.rank(), &mut rng);
            local.push(conjugate_pair(&base, &u).unwrap());
        }
        for a in &local {
            for b in &local {
                let basis = hom_lattice(a, b).unwrap();
                assert_eq!(basis.len(), hom_rank_oracle(a, b));
                assert_eq!(basis.len(), hom_lattice(b, a).unwrap().len());
                for f in &basis {
                    // Membership survives re-checking through the constructor.
                    ModuleMap::new(a, b, f.matrix().clone()).unwrap();
                }
            }
        }
    }
}

#[test]
fn tau_duality_is_an_involution() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xab1e_0003);
    for p in random_pairs(&mut rng) {
        let d = tau_dual(&p);
        assert_eq!(tau_dual(&d), p);
        assert_eq!(d.charpoly(), p.charpoly());
        assert!(d.support().is_subset_of(p.support()));
        assert_eq!(d.frobenius_matrix(), p.verschiebung_matrix());

        for f in hom_lattice(&p, &p).unwrap() {
            let g = tau_dual_map(&f);
            assert_eq!(g.matrix(), f.matrix());
            assert_eq!(coker_order(&g), coker_order(&f));
            assert_eq!(g.source().frobenius_matrix(), p.verschiebung_matrix());
        }
    }
}

#[test]
fn coker_order_is_multiplicative_on_isogenies() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xab1e_0004);
    let mut tried = 0usize;
    for q in [2u64, 5, 7] {
        let order = random_order(q, &mut rng);
        let pair = regular_representation(&order).unwrap();
        let basis = hom_lattice(&pair, &pair).unwrap();
        for _ in 0..12 {
            let rand_endo = |rng: &mut ChaCha8Rng| -> ModuleMap {
                let mut m = IntMatrix::zero(pair.rank(), pair.rank());
                for b in &basis {
                    let c = BigInt::from(rng.gen_range(-2i64..=2));
                    m = m.add(&b.matrix().mul_scalar(&c));
                }
                ModuleMap::new(&pair, &pair, m).unwrap()
            };
            let f = rand_endo(&mut rng);
            let g = rand_endo(&mut rng);
            if !is_isogeny(&f) || !is_isogeny(&g) {
                continue;
            }
            tried += 1;
            let fg = f.compose(&g).unwrap();
            assert!(is_isogeny(&fg));
            assert_eq!(
                coker_order(&fg).unwrap(),
                coker_order(&f).unwrap() * coker_order(&g).unwrap()
            );
        }
    }
    assert!(tried >= 10, "only {} isogeny samples drawn", tried);
}

#[test]
fn regular_representations_are_reflexive_with_minimal_endomorphisms() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xab1e_0005);
    for q in [3u64, 5, 9] {
        for _ in 0..3 {
            let order = random_order(q, &mut rng);
            let base = regular_representation(&order).unwrap();
            let u = random_unimodular(base.rank(), &mut rng);
            let twisted = conjugate_pair(&base, &u).unwrap();

            for pair in [&base, &twisted] {
                assert!(double_dual_check(pair, &order).unwrap());
                assert!(ext1_vanishing_check(pair, &order).unwrap());
                assert!(end_ring_is_minimal(pair, &order).unwrap());
            }

            let doubled = direct_sum(&base, &base).unwrap();
            assert!(!end_ring_is_minimal(&doubled, &order).unwrap());
        }
    }
}

#[test]
fn product_order_lattice_has_larger_endomorphism_ring() {
    // Two quadratic classes with distinct traces: the product of the two
    // single-class orders strictly contains the joint order, so the block
    // diagonal lattice has endomorphism ring bigger than R_w.
    let pp = PrimePower::from_u64(5).unwrap();
    let pool = quadratic_pool(5);
    let a = pool
        .iter()
        .find(|c| c.minpoly().coeff(1) == BigInt::from(-1))
        .unwrap();
    let b = pool
        .iter()
        .find(|c| c.minpoly().coeff(1) == BigInt::from(1))
        .unwrap();
    let w = WeilSet::new(pp.clone(), vec![a.clone(), b.clone()]).unwrap();
    let joint = build_order(&w).unwrap();
    assert_eq!(joint.index(), &BigInt::from(4));

    let pa = regular_representation(
        &build_order(&WeilSet::new(pp.clone(), vec![a.clone()]).unwrap()).unwrap(),
    )
    .unwrap();
    let pb =
        regular_representation(&build_order(&WeilSet::new(pp, vec![b.clone()]).unwrap()).unwrap())
            .unwrap();
    let product = direct_sum(&pa, &pb).unwrap();

    assert!(!end_ring_is_minimal(&product, &joint).unwrap());
    assert!(double_dual_check(&product, &joint).unwrap());

    let joint_pair = regular_representation(&joint).unwrap();
    assert!(end_ring_is_minimal(&joint_pair, &joint).unwrap());
    assert_eq!(
        hom_lattice(&joint_pair, &product).unwrap().len(),
        hom_lattice(&product, &joint_pair).unwrap().len()
    );
}
