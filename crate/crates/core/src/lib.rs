//! Exact certification of flat orbifold connections on `T^8 / Gamma`.
//!
//! The crate builds the Cayley four-form and the splitting of two-forms, the
//! affine group `Gamma` acting on the eight-torus with its singular strata,
//! and decides for a representation of the orbifold fundamental group whether
//! the associated flat connection is irreducible, infinitesimally rigid and
//! unobstructed as a `Spin(7)`-instanton. On top of that sit orbit
//! enumerations of commuting diagonal representations into `SO(n)`, the
//! topology of the Eguchi-Hanson bundles used at the type (i) strata, and
//! the compatibility checks for gluing data.

pub mod ale;
pub mod certify;
pub mod cli;
pub mod enumeration;
pub mod error;
pub mod exterior;
pub mod linalg;
pub mod orbifold;
pub mod rational;
pub mod selftest;

pub use error::{Error, Result};
