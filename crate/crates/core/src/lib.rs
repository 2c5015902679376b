//! Demand-private hotplug coded caching laboratory.
//!
//! A server with N files serves K cache-equipped users over a shared link,
//! but only K' of them are active when delivery starts, and no user may
//! learn anything about the others' demanded linear combinations — even by
//! colluding. This crate implements the privacy-keys scheme and its hotplug
//! baselines, two MDS-coded hotplug schemes, exact brute-force oracles for
//! decodability and demand privacy at desk scale, and the exact-rational
//! memory–load tradeoff machinery behind the comparison figures.
//!
//! The linear-algebra kernel is generic over the scalar [`field::Field`];
//! the two instantiations used throughout are GF(q) with a runtime prime
//! modulus and arbitrary-precision rationals.

pub mod combin;
pub mod error;
pub mod field;
pub mod library;
pub mod matrix;
pub mod oracles;
pub mod rng;
pub mod scheme;
pub mod tradeoff;

pub use error::{Error, Result};
pub use field::{Gf, Rationals};
pub use library::{bilinear, demanded_function, functional_of, Functional, Library};
pub use scheme::{
    scheme_by_id, CacheContent, DeliveryPayload, MaskedDemand, Multicast, Scheme, SchemeConfig,
    SchemeId,
};
pub use tradeoff::{Curve, Rat, Subpacketization, TradeoffPoint};

/// Matrix over GF(q) with a runtime modulus.
pub type GfMatrix = matrix::Matrix<field::Gf>;
/// Matrix over the exact rationals.
pub type RatMatrix = matrix::Matrix<field::Rationals>;
