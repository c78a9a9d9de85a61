//! Order reports for `order-info`.

use num_traits::ToPrimitive;
use serde::Serialize;

use weil_core::orders::{build_order, build_order_with_rational, is_gorenstein, socle_dim_at_p};
use weil_core::weil::classify;
use weil_core::{CoreError, MinimalCentralOrder, WeilSet};

use crate::error::{AtlasError, Result};
use crate::labels::parse_label;

#[derive(Serialize, Clone, Debug)]
pub struct OrderReport {
    pub labels: Vec<String>,
    pub q: u64,
    /// Minimal polynomials of the classes, coefficients descending from the
    /// leading 1, as decimal strings.
    pub classes: Vec<Vec<String>>,
    pub d: usize,
    pub rank: usize,
    pub h: String,
    /// `[exponent, coefficient]` pairs of h, exponent > 0 for powers of F
    /// and < 0 for powers of V, highest exponent first.
    pub h_coefficients: Vec<(i64, String)>,
    pub basis: Vec<String>,
    /// `mult_table[i][j]` holds the coordinates of basis[i] * basis[j].
    pub mult_table: Vec<Vec<Vec<String>>>,
    /// Rows are the basis coordinates inside the product of the
    /// single-class orders.
    pub embedding: Vec<Vec<String>>,
    pub index: String,
    pub socle_dim: usize,
    pub gorenstein: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub augmented: Option<String>,
}

/// Resolve labels, assemble the order, and compute its invariants. A single
/// rational class routes to the augmented construction; zero or both
/// rational classes use the even-degree construction.
pub fn build_order_from_labels(labels: &[String]) -> Result<MinimalCentralOrder> {
    if labels.is_empty() {
        return Err(AtlasError::Core(CoreError::EmptySet));
    }
    let mut pp = None;
    let mut rational_signs = Vec::new();
    let mut others = Vec::new();
    for label in labels {
        let (p, poly) = parse_label(label)?;
        match &pp {
            None => pp = Some(p.clone()),
            Some(prev) if *prev != p => return Err(AtlasError::Core(CoreError::MixedPrimePowers)),
            Some(_) => {}
        }
        let class = classify(&poly, &p)?;
        match class.rational_sign() {
            Some(sign) => rational_signs.push(sign),
            None => others.push(class),
        }
    }
    let pp = pp.expect("labels nonempty");
    let order = if rational_signs.len() == 1 {
        let v = WeilSet::new(pp, others)?;
        build_order_with_rational(&v, rational_signs[0])?
    } else {
        let mut classes = others;
        for sign in rational_signs {
            let t = pp
                .sqrt()
                .cloned()
                .expect("rational class exists only for square q");
            let c = if sign > 0 { -t } else { t };
            let poly = weil_core::IntPoly::from_coeffs(vec![c, num_bigint::BigInt::from(1)]);
            classes.push(classify(&poly, &pp)?);
        }
        let w = WeilSet::new(pp, classes)?;
        build_order(&w)?
    };
    Ok(order)
}

pub fn order_report(labels: &[String]) -> Result<OrderReport> {
    let order = build_order_from_labels(labels)?;
    let w = order.weil_set();
    let q =
        w.prime_power().q().to_u64().ok_or_else(|| {
            AtlasError::Core(CoreError::Invalid("q exceeds the report range".into()))
        })?;
    let mut sorted = labels.to_vec();
    sorted.sort();
    sorted.dedup();
    let h = order.h_poly();
    let mut h_coefficients = Vec::new();
    for e in (1..=h.deg_f() as i64).rev() {
        h_coefficients.push((e, h.coeff(e).to_string()));
    }
    h_coefficients.push((0, h.constant_term().to_string()));
    for e in 1..=h.deg_v() as i64 {
        h_coefficients.push((-e, h.coeff(-e).to_string()));
    }
    let socle_dim = socle_dim_at_p(&order)?;
    let classes = w
        .classes()
        .iter()
        .map(|c| {
            c.minpoly()
                .coeffs()
                .iter()
                .rev()
                .map(|x| x.to_string())
                .collect()
        })
        .collect();
    let mult_table = order
        .mult_table()
        .iter()
        .map(|row| {
            row.iter()
                .map(|cell| cell.iter().map(|x| x.to_string()).collect())
                .collect()
        })
        .collect();
    let emb = order.embedding_matrix();
    let embedding = (0..emb.rows())
        .map(|i| emb.row(i).iter().map(|x| x.to_string()).collect())
        .collect();
    Ok(OrderReport {
        labels: sorted,
        q,
        classes,
        d: order.d_half(),
        rank: order.rank(),
        h: h.to_string(),
        h_coefficients,
        basis: order.basis_labels(),
        mult_table,
        embedding,
        index: order.index().to_string(),
        socle_dim,
        gorenstein: is_gorenstein(&order)?,
        augmented: order.augmented_value().map(|t| t.to_string()),
    })
}

pub fn render_text(r: &OrderReport) -> String {
    let mut s = String::new();
    s.push_str(&format!("classes: {}\n", r.labels.join(" ")));
    s.push_str(&format!("q: {}\n", r.q));
    s.push_str(&format!("rank: {}\n", r.rank));
    s.push_str(&format!("h: {}\n", r.h));
    if let Some(t) = &r.augmented {
        s.push_str(&format!("augmented by: {t}\n"));
    }
    s.push_str(&format!("index: {}\n", r.index));
    s.push_str(&format!("socle dimension: {}\n", r.socle_dim));
    s.push_str(&format!(
        "gorenstein: {}\n",
        if r.gorenstein { "yes" } else { "no" }
    ));
    s
}

pub fn report_json(r: &OrderReport) -> Result<String> {
    let mut s = serde_json::to_string_pretty(r)?;
    s.push('\n');
    Ok(s)
}
