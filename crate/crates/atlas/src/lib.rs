//! Catalog and inspection commands over the exact kernel: enumeration of
//! Weil polynomial classes into shard files, order invariant reports, and
//! Frobenius lattice pair computations driven by JSON records.

pub mod catalog;
pub mod error;
pub mod labels;
pub mod pairs;
pub mod report;

pub use error::{AtlasError, Result};
