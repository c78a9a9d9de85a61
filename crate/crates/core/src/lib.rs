//! Exact computational kernel for isogeny-class arithmetic over finite fields.
//!
//! Everything here is integer-exact: polynomial arithmetic and root counting
//! over `Z[x]`, integer matrix normal forms, Weil polynomial classification
//! and enumeration, the minimal central orders attached to sets of Weil
//! classes, and the category of Frobenius lattice pairs `(T, F)`.

pub mod error;
pub mod factor;
pub mod matrix;
pub mod modp;
pub mod modules;
pub mod normal_form;
pub mod orders;
pub mod poly;
pub mod sturm;
pub mod weil;

pub use error::CoreError;
pub use matrix::IntMatrix;
pub use modules::{DelignePair, ModuleMap, OrderModuleView};
pub use orders::{MinimalCentralOrder, OrderElement, SymPoly};
pub use poly::IntPoly;
pub use weil::{PrimePower, WeilClass, WeilSet};

pub use num_bigint::BigInt;
/// Arbitrary-precision rational, always kept in reduced form by the backing crate.
pub type Rational = num_rational::BigRational;
