//! Pair and map files.
//!
//! A pair file is a JSON record `{q, rank, F}` with F the row-major integer
//! entries of the Frobenius matrix; Verschiebung and support are recomputed
//! and verified on load. A map file carries its two endpoint pairs inline
//! plus the row-major matrix.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use weil_core::modules::{validate_pair, DelignePair, ModuleMap};
use weil_core::{CoreError, IntMatrix, PrimePower};

use crate::error::{AtlasError, Result};

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct PairRecord {
    pub q: u64,
    pub rank: usize,
    #[serde(rename = "F")]
    pub f: Vec<i64>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct MapRecord {
    pub source: PairRecord,
    pub target: PairRecord,
    pub matrix: Vec<i64>,
}

impl PairRecord {
    pub fn parse(s: &str) -> Result<PairRecord> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn for_pair(pair: &DelignePair) -> Result<PairRecord> {
        let q = pair.prime_power().q().to_u64().ok_or_else(|| {
            AtlasError::Core(CoreError::Invalid("q exceeds the file range".into()))
        })?;
        let f = matrix_to_i64(pair.frobenius_matrix())?;
        Ok(PairRecord {
            q,
            rank: pair.rank(),
            f,
        })
    }

    pub fn validate(&self, p_restricted: bool) -> Result<DelignePair> {
        let pp = PrimePower::from_u64(self.q)?;
        if self.f.len() != self.rank * self.rank {
            return Err(AtlasError::Malformed(format!(
                "F must list {} entries for rank {}, found {}",
                self.rank * self.rank,
                self.rank,
                self.f.len()
            )));
        }
        let data: Vec<BigInt> = self.f.iter().map(|&x| BigInt::from(x)).collect();
        let m = IntMatrix::from_flat(self.rank, self.rank, data)?;
        Ok(validate_pair(m, &pp, p_restricted)?)
    }
}

impl MapRecord {
    pub fn parse(s: &str) -> Result<MapRecord> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn validate(&self) -> Result<ModuleMap> {
        let src = self.source.validate(false)?;
        let dst = self.target.validate(false)?;
        if self.matrix.len() != src.rank() * dst.rank() {
            return Err(AtlasError::Malformed(format!(
                "matrix must list {} entries, found {}",
                src.rank() * dst.rank(),
                self.matrix.len()
            )));
        }
        let data: Vec<BigInt> = self.matrix.iter().map(|&x| BigInt::from(x)).collect();
        let m = IntMatrix::from_flat(dst.rank(), src.rank(), data)?;
        Ok(ModuleMap::new(&src, &dst, m)?)
    }
}

fn matrix_to_i64(m: &IntMatrix) -> Result<Vec<i64>> {
    m.entries()
        .iter()
        .map(|e| {
            e.to_i64().ok_or_else(|| {
                AtlasError::Core(CoreError::Invalid(
                    "matrix entry exceeds the file range".into(),
                ))
            })
        })
        .collect()
}

pub fn pair_to_json(rec: &PairRecord) -> Result<String> {
    let mut s = serde_json::to_string_pretty(rec)?;
    s.push('\n');
    Ok(s)
}
