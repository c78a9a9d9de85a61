//! Enumeration records and shard files.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use weil_core::factor::factor_int_poly;
use weil_core::weil::{classify, enumerate_weil_polys_in_lead_range, leading_coefficient_range};
use weil_core::{IntPoly, PrimePower};

use crate::error::{AtlasError, Result};
use crate::labels::label_for_poly;

/// One enumerated polynomial. Coefficients are decimal strings from the
/// leading 1 down to the constant term; `dimension` is set only for
/// irreducible non-real classes, where the degree is twice the dimension.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct ClassRecord {
    pub label: String,
    pub q: u64,
    pub degree: usize,
    pub coefficients: Vec<String>,
    pub irreducible: bool,
    pub real: bool,
    pub rational: bool,
    pub ordinary: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    #[serde(default)]
    pub dimension: Option<usize>,
}

impl ClassRecord {
    pub fn poly(&self) -> Result<IntPoly> {
        let mut coeffs = Vec::with_capacity(self.coefficients.len());
        for s in self.coefficients.iter().rev() {
            let c: BigInt = s
                .parse()
                .map_err(|_| AtlasError::Malformed(format!("invalid coefficient {s:?}")))?;
            coeffs.push(c);
        }
        Ok(IntPoly::from_coeffs(coeffs))
    }
}

/// A contiguous slice of one enumeration, addressed by the inclusive range
/// of the leading free coefficient; `complete` marks a whole-range run.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct CatalogShard {
    pub q: u64,
    pub degree: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    #[serde(default)]
    pub shard: Option<String>,
    pub lead_range: [String; 2],
    pub complete: bool,
    pub records: Vec<ClassRecord>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Filter {
    Ordinary,
    Irreducible,
}

pub fn record_for_poly(pp: &PrimePower, p: &IntPoly) -> Result<ClassRecord> {
    let fac = factor_int_poly(p)?;
    let mut classes = Vec::new();
    for (part, _) in &fac.factors {
        classes.push(classify(part, pp)?);
    }
    let irreducible = fac.is_irreducible();
    let real = classes.iter().all(|c| c.is_real());
    let rational = classes.iter().all(|c| c.is_rational());
    let ordinary = classes.iter().all(|c| c.is_ordinary());
    let degree = p.deg();
    let dimension = if irreducible && !real {
        Some(degree / 2)
    } else {
        None
    };
    let q_u64 = u64::try_from(pp.q().magnitude().clone())
        .map_err(|_| AtlasError::Malformed("field size exceeds the catalog range".into()))?;
    Ok(ClassRecord {
        label: label_for_poly(pp, p)?,
        q: q_u64,
        degree,
        coefficients: (0..=degree).rev().map(|i| p.coeff(i).to_string()).collect(),
        irreducible,
        real,
        rational,
        ordinary,
        dimension,
    })
}

fn keep(record: &ClassRecord, filter: Option<Filter>) -> bool {
    match filter {
        None => true,
        Some(Filter::Ordinary) => record.ordinary,
        Some(Filter::Irreducible) => record.irreducible,
    }
}

/// Split the inclusive range into `n` contiguous chunks; chunk `i` (1-based).
/// Concatenating the chunks in order restores the range.
pub fn shard_range(lo: &BigInt, hi: &BigInt, i: u32, n: u32) -> Result<(BigInt, BigInt)> {
    if n == 0 || i == 0 || i > n {
        return Err(AtlasError::Malformed(format!(
            "shard index {i}/{n} out of range"
        )));
    }
    let width = hi - lo + 1;
    let (i, n) = (BigInt::from(i), BigInt::from(n));
    let start = lo + (&width * (&i - 1)) / &n;
    let end = lo + (&width * &i) / &n - 1;
    Ok((start, end))
}

/// Run the enumeration for one degree, optionally restricted to one shard,
/// and package the records. Whole-range runs split the leading-coefficient
/// range across threads; the chunks are concatenated in order, so the output
/// is identical to a single-threaded scan.
pub fn build_shard(
    q: u64,
    degree: usize,
    shard: Option<(u32, u32)>,
    filter: Option<Filter>,
    cap: usize,
) -> Result<CatalogShard> {
    let pp = PrimePower::from_u64(q)?;
    let (lo, hi) = leading_coefficient_range(&pp, degree, cap)?;
    let (range, shard_name, complete) = match shard {
        None => ((lo.clone(), hi.clone()), None, true),
        Some((i, n)) => {
            let r = shard_range(&lo, &hi, i, n)?;
            (r, Some(format!("{i}/{n}")), n == 1)
        }
    };
    let polys = enumerate_range_threaded(&pp, degree, &range.0, &range.1, cap)?;
    let mut records = Vec::with_capacity(polys.len());
    for p in &polys {
        let rec = record_for_poly(&pp, p)?;
        if keep(&rec, filter) {
            records.push(rec);
        }
    }
    Ok(CatalogShard {
        q,
        degree,
        shard: shard_name,
        lead_range: [range.0.to_string(), range.1.to_string()],
        complete,
        records,
    })
}

fn enumerate_range_threaded(
    pp: &PrimePower,
    degree: usize,
    lo: &BigInt,
    hi: &BigInt,
    cap: usize,
) -> Result<Vec<IntPoly>> {
    let width: BigInt = (hi - lo + BigInt::from(1)).max(BigInt::from(0));
    let parallel = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(8);
    let chunks = BigInt::from(parallel).min(width.clone());
    let chunks_u32 = u32::try_from(chunks.magnitude().clone())
        .unwrap_or(1)
        .max(1);
    if chunks_u32 <= 1 {
        return Ok(enumerate_weil_polys_in_lead_range(pp, degree, lo, hi, cap)?);
    }
    let mut parts: Vec<weil_core::error::Result<Vec<IntPoly>>> = Vec::new();
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for i in 1..=chunks_u32 {
            let (slo, shi) = shard_range(lo, hi, i, chunks_u32).expect("chunk index in range");
            handles
                .push(scope.spawn(move || {
                    enumerate_weil_polys_in_lead_range(pp, degree, &slo, &shi, cap)
                }));
        }
        for h in handles {
            parts.push(h.join().expect("enumeration worker panicked"));
        }
    });
    let mut out = Vec::new();
    for part in parts {
        out.extend(part?);
    }
    Ok(out)
}

pub const CSV_HEADER: &str = "label,q,degree,coefficients,irreducible,real,rational,ordinary";

pub fn to_csv(shard: &CatalogShard) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in &shard.records {
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.label,
            r.q,
            r.degree,
            r.coefficients.join(";"),
            r.irreducible,
            r.real,
            r.rational,
            r.ordinary
        ));
    }
    s
}

pub fn to_json(shard: &CatalogShard) -> Result<String> {
    let mut s = serde_json::to_string_pretty(shard)?;
    s.push('\n');
    Ok(s)
}

pub fn from_json(s: &str) -> Result<CatalogShard> {
    Ok(serde_json::from_str(s)?)
}
