//! Exact character sums over finite commutative rings.

pub mod characters;
pub mod cyclotomic;
pub mod error;
pub mod group;
pub mod identities;
pub mod ring;
pub mod sums;

pub use cyclotomic::Cyclotomic;
pub use error::{Error, Result};
pub use ring::{make_ring, parse_ring, Elem, FiniteRing, Ideal, Ring, RingSpec};

/// Cyclotomic integers with arbitrary-precision coefficients.
pub type Cyc = Cyclotomic<num_bigint::BigInt>;
/// Cyclotomic integers with machine-word coefficients.
pub type Cyc64 = Cyclotomic<i64>;
