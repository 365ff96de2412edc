//! Finite-group Chern–Simons style arithmetic invariants with exact cochain
//! arithmetic over `Z/N` and cyclotomic partition values.

pub mod cochain;
pub mod config;
pub mod cohomology;
pub mod cyclotomic;
pub mod error;
pub mod group;
pub mod global;
pub mod linalg;
pub mod local;
pub mod quantum;
pub mod suite;
pub mod torsor;

pub use cochain::Cochain;
pub use cyclotomic::Cyclotomic;
pub use error::{Error, Result};
pub use group::{FiniteGroup, GroupHom, HomSpace};

/// Cyclotomic values with arbitrary-precision coefficients.
pub type CyclotomicValue = Cyclotomic<num_bigint::BigInt>;
/// Cyclotomic values with machine-word coefficients, for small models.
pub type Cyclotomic64 = Cyclotomic<i64>;
