//! Minimal-ramification toolkit for nilpotent Galois groups over Q and
//! imaginary quadratic fields.
//!
//! The library has three layers:
//!
//! * a finite l-group engine on polycyclic presentations ([`group`]) that
//!   computes lower central series, generator ranks, central tower plans and
//!   the ramification bounds they imply;
//! * explicit abelian realizations over Q ([`cyclotomic`]) via Dirichlet
//!   characters and Gaussian-period minimal polynomials, together with
//!   imaginary quadratic class-group data ([`quadfield`]);
//! * prime searches for Scholz conditions and exceptional sets, and the
//!   machine-checkable certificates they produce ([`scholz`]), independently
//!   re-verified by discriminant/ramification analysis ([`certify`]).
//!
//! Everything is exact integer arithmetic and fully deterministic: all prime
//! searches return the least qualifying prime, so outputs are reproducible
//! byte for byte.

pub mod arith;
pub mod certify;
pub mod cli;
pub mod cyclotomic;
pub mod field;
pub mod group;
pub mod poly;
pub mod quadfield;
pub mod scholz;

mod error;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Schema tag stamped on every JSON payload this crate emits.
pub const SCHEMA: &str = "minram/1";

/// Default cap for all prime scans; override per call or with `MINRAM_LIMIT`.
pub const DEFAULT_SCAN_LIMIT: u64 = 10_000_000;
