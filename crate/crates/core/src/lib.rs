//! Relative canonical resolutions of genus-9 curves with a degree-6 pencil,
//! the K3 surfaces cut out by their linear syzygies, and the lattice
//! computations attached to them. All algebra happens over a prime field,
//! all lattice work over the integers.

pub mod error;
pub mod ffield;
pub mod k3_syzygy;
pub mod lattice;
pub mod pipeline;
pub mod plane_curve;
pub mod poly;
pub mod quartic_net;
pub mod rational;
pub mod resolution;
pub mod rng;
pub mod scroll;

pub use error::{Error, Result};
pub use ffield::{PrimeField, PrimeFieldMatrix, DEFAULT_PRIME};
