//! Randomized structural checks for minimal central orders: the defining
//! relations hold inside the constructed ring, ring axioms survive the
//! monomial reduction, and the socle/Gorenstein bookkeeping is consistent.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use weil_core::factor::is_irreducible;
use weil_core::orders::{
    build_order, build_order_with_rational, is_gorenstein, socle_dim_at_p, MinimalCentralOrder,
};
use weil_core::weil::{classify, enumerate_weil_polys, PrimePower, WeilClass, WeilSet};
use weil_core::OrderElement;

fn class_pool(q: u64) -> Vec<WeilClass> {
    let pp = PrimePower::from_u64(q).unwrap();
    let mut pool = Vec::new();
    for two_d in [2usize, 4] {
        for p in enumerate_weil_polys(&pp, two_d).unwrap() {
            if is_irreducible(&p).unwrap() {
                let c = classify(&p, &pp).unwrap();
                if !c.is_rational() {
                    pool.push(c);
                }
            }
        }
    }
    pool
}

fn random_set(pool: &[WeilClass], pp: &PrimePower, rng: &mut ChaCha8Rng) -> WeilSet {
    let size = rng.gen_range(1..=3.min(pool.len()));
    let mut idx: Vec<usize> = (0..pool.len()).collect();
    idx.shuffle(rng);
    let classes: Vec<WeilClass> = idx[..size].iter().map(|&i| pool[i].clone()).collect();
    WeilSet::new(pp.clone(), classes).unwrap()
}

fn random_element(order: &MinimalCentralOrder, rng: &mut ChaCha8Rng) -> OrderElement {
    let coeffs = (0..order.rank())
        .map(|_| BigInt::from(rng.gen_range(-3i64..=3)))
        .collect();
    order.element(coeffs).unwrap()
}

fn check_ring_axioms(order: &MinimalCentralOrder, rng: &mut ChaCha8Rng) {
    let x = random_element(order, rng);
    let y = random_element(order, rng);
    let z = random_element(order, rng);
    let xy = order.mult(&x, &y).unwrap();
    assert_eq!(xy, order.mult(&y, &x).unwrap(), "commutativity");
    assert_eq!(
        order.mult(&xy, &z).unwrap(),
        order.mult(&x, &order.mult(&y, &z).unwrap()).unwrap(),
        "associativity"
    );
    assert_eq!(
        order.mult(&x, &order.add(&y, &z).unwrap()).unwrap(),
        order.add(&xy, &order.mult(&x, &z).unwrap()).unwrap(),
        "distributivity"
    );
    assert_eq!(order.mult(&x, &order.one()).unwrap(), x, "unit");
}

#[test]
fn even_orders_satisfy_defining_relations() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    for q in [2u64, 3, 5, 7, 9, 13] {
        let pp = PrimePower::from_u64(q).unwrap();
        let pool = class_pool(q);
        assert!(pool.len() >= 3, "pool too small for q = {}", q);
        for _ in 0..10 {
            let w = random_set(&pool, &pp, &mut rng);
            let order = build_order(&w).unwrap();
            assert_eq!(order.rank(), w.total_degree(), "rank is the total degree");
            assert_eq!(order.eval_sym(order.h_poly()), order.zero_element());
            let fv = order
                .mult(&order.frobenius(), &order.verschiebung())
                .unwrap();
            let q_one = order.scalar_mul(pp.q(), &order.one()).unwrap();
            assert_eq!(fv, q_one, "F V = q");
            assert!(order.index() >= &BigInt::one(), "index is positive");
            check_ring_axioms(&order, &mut rng);
        }
    }
}

#[test]
fn augmented_orders_satisfy_defining_relations() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    for q in [4u64, 9, 25] {
        let pp = PrimePower::from_u64(q).unwrap();
        let pool = class_pool(q);
        for sign in [1i8, -1] {
            for _ in 0..6 {
                let size = rng.gen_range(1..=2.min(pool.len()));
                let mut idx: Vec<usize> = (0..pool.len()).collect();
                idx.shuffle(&mut rng);
                let classes: Vec<WeilClass> =
                    idx[..size].iter().map(|&i| pool[i].clone()).collect();
                let v = WeilSet::new(pp.clone(), classes).unwrap();
                let order = build_order_with_rational(&v, sign).unwrap();
                assert_eq!(order.rank(), v.total_degree() + 1);
                let t = order.augmented_value().expect("augmented order").clone();
                assert_eq!(t.abs(), pp.sqrt().unwrap().clone());

                // h_v (F - t) = 0 and h_v (V - t) = 0 inside the order.
                let h_elem = order.eval_sym(order.h_poly());
                let minus_t = order.scalar_mul(&-&t, &order.one()).unwrap();
                let f_shift = order.add(&order.frobenius(), &minus_t).unwrap();
                let v_shift = order.add(&order.verschiebung(), &minus_t).unwrap();
                assert_eq!(order.mult(&h_elem, &f_shift).unwrap(), order.zero_element());
                assert_eq!(order.mult(&h_elem, &v_shift).unwrap(), order.zero_element());

                let fv = order
                    .mult(&order.frobenius(), &order.verschiebung())
                    .unwrap();
                assert_eq!(fv, order.scalar_mul(pp.q(), &order.one()).unwrap());
                check_ring_axioms(&order, &mut rng);
            }
        }
    }
}

#[test]
fn socle_and_gorenstein_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let mut orders: Vec<MinimalCentralOrder> = Vec::new();
    for q in [2u64, 5, 9] {
        let pp = PrimePower::from_u64(q).unwrap();
        let pool = class_pool(q);
        for _ in 0..5 {
            orders.push(build_order(&random_set(&pool, &pp, &mut rng)).unwrap());
        }
    }
    for q in [4u64, 25] {
        let pp = PrimePower::from_u64(q).unwrap();
        let pool = class_pool(q);
        for sign in [1i8, -1] {
            let mut idx: Vec<usize> = (0..pool.len()).collect();
            idx.shuffle(&mut rng);
            let v = WeilSet::new(pp.clone(), vec![pool[idx[0]].clone()]).unwrap();
            orders.push(build_order_with_rational(&v, sign).unwrap());
        }
    }
    for order in &orders {
        let socle = socle_dim_at_p(order).unwrap();
        assert!(socle >= 1, "socle dimension is positive");
        assert_eq!(is_gorenstein(order).unwrap(), socle == 1);
    }
}

#[test]
fn single_class_orders_have_trivial_index() {
    for q in [3u64, 7, 13] {
        let pp = PrimePower::from_u64(q).unwrap();
        for p in enumerate_weil_polys(&pp, 4).unwrap() {
            if !is_irreducible(&p).unwrap() {
                continue;
            }
            let c = classify(&p, &pp).unwrap();
            let w = WeilSet::new(pp.clone(), vec![c]).unwrap();
            let order = build_order(&w).unwrap();
            assert!(order.index().is_one(), "one class means index 1");
        }
    }
}
