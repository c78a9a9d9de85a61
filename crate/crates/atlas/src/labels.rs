//! Class labels `g.q.code`.
//!
//! For an even-degree polynomial satisfying the functional equation the code
//! lists the upper coefficients `a_{2g-1}_..._a_g`, negatives prefixed by
//! `m`, so `x^2 - x + 5` over q = 5 is `1.5.m1`. Three special codes cover
//! the classes outside that shape: `sqrt` for x^2 - q (q not a square),
//! and `s` / `ms` for the rational classes x - sqrt(q) / x + sqrt(q).

use num_bigint::BigInt;
use num_traits::{One, Zero};

use weil_core::weil::{poly_from_upper_coeffs, upper_coeffs};
use weil_core::{IntPoly, PrimePower};

use crate::error::{AtlasError, Result};

fn encode_int(a: &BigInt) -> String {
    if a.sign() == num_bigint::Sign::Minus {
        format!("m{}", -a)
    } else {
        a.to_string()
    }
}

fn decode_int(s: &str) -> Result<BigInt> {
    let (neg, digits) = match s.strip_prefix('m') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(AtlasError::Malformed(format!(
            "invalid coefficient code {s:?}"
        )));
    }
    let v: BigInt = digits
        .parse()
        .map_err(|_| AtlasError::Malformed(format!("invalid coefficient code {s:?}")))?;
    Ok(if neg { -v } else { v })
}

/// Label for any monic polynomial the catalog can address.
pub fn label_for_poly(pp: &PrimePower, p: &IntPoly) -> Result<String> {
    let q = pp.q();
    if let Some(t) = pp.sqrt() {
        let plus = IntPoly::from_coeffs(vec![-t.clone(), BigInt::one()]);
        if p == &plus {
            return Ok(format!("0.{q}.s"));
        }
        let minus = IntPoly::from_coeffs(vec![t.clone(), BigInt::one()]);
        if p == &minus {
            return Ok(format!("0.{q}.ms"));
        }
    }
    let real_quadratic = IntPoly::from_coeffs(vec![-q.clone(), BigInt::zero(), BigInt::one()]);
    if p == &real_quadratic {
        return Ok(format!("1.{q}.sqrt"));
    }
    let upper = upper_coeffs(p)?;
    let g = upper.len();
    let code: Vec<String> = upper.iter().map(encode_int).collect();
    Ok(format!("{g}.{q}.{}", code.join("_")))
}

/// Inverse of `label_for_poly`; checks the reconstructed polynomial matches
/// the claimed dimension and field size.
pub fn parse_label(label: &str) -> Result<(PrimePower, IntPoly)> {
    let parts: Vec<&str> = label.split('.').collect();
    if parts.len() != 3 {
        return Err(AtlasError::Malformed(format!(
            "label {label:?} is not of the form g.q.code"
        )));
    }
    let g: usize = parts[0]
        .parse()
        .map_err(|_| AtlasError::Malformed(format!("invalid dimension in label {label:?}")))?;
    let q: BigInt = parts[1]
        .parse()
        .map_err(|_| AtlasError::Malformed(format!("invalid field size in label {label:?}")))?;
    let pp = PrimePower::new(q.clone())?;
    let code = parts[2];
    match code {
        "sqrt" => {
            if g != 1 {
                return Err(AtlasError::Malformed(format!(
                    "label {label:?}: the sqrt code requires dimension 1"
                )));
            }
            Ok((
                pp,
                IntPoly::from_coeffs(vec![-q, BigInt::zero(), BigInt::one()]),
            ))
        }
        "s" | "ms" => {
            if g != 0 {
                return Err(AtlasError::Malformed(format!(
                    "label {label:?}: rational codes require dimension 0"
                )));
            }
            let t = pp
                .sqrt()
                .cloned()
                .ok_or_else(|| weil_core::CoreError::QNotSquare(pp.q().to_string()))?;
            let c = if code == "s" { -t } else { t };
            Ok((pp, IntPoly::from_coeffs(vec![c, BigInt::one()])))
        }
        _ => {
            if g == 0 {
                return Err(AtlasError::Malformed(format!(
                    "label {label:?}: dimension 0 takes the codes s or ms"
                )));
            }
            let upper: Vec<BigInt> = code
                .split('_')
                .map(decode_int)
                .collect::<Result<Vec<_>>>()?;
            if upper.len() != g {
                return Err(AtlasError::Malformed(format!(
                    "label {label:?}: expected {g} coefficients, found {}",
                    upper.len()
                )));
            }
            let p = poly_from_upper_coeffs(&pp, 2 * g, &upper)?;
            Ok((pp, p))
        }
    }
}
