//! Exact polar-code laboratory for classical and classical-quantum channels.
//!
//! Everything in this crate is computed exactly at small block lengths: split
//! channels are enumerated rather than estimated, entropies and fidelities come
//! from dense (or diagonal) eigendecompositions, and the decoders expand the
//! full measurement outcome tree. The crate is `no_std` and only needs an
//! allocator; file formats, the experiment runner and parallel drivers live in
//! the `polarlab` companion crate.
//!
//! Module map:
//!
//! - [`qmath`]: Hermitian-matrix kernel (square roots, entropies, fidelity,
//!   eigenspace projectors, Holevo quantities).
//! - [`channels`]: classical, classical-quantum, multiple-access, Kraus and
//!   broadcast channel models.
//! - [`polar`]: the transform, split channels, code construction, source
//!   polarization and broadcast polarization sets.
//! - [`sc`]: classical and quantum successive-cancellation decoding, block
//!   error bounds, Monte Carlo estimation.
//! - [`multiuser`]: monotone chain-rule paths for MAC coding.
//! - [`compound`]: good/bad partitions and chained alignment schedules.
//! - [`regions`]: MAC, Han-Kobayashi and Marton-type rate regions.
//! - [`qpolar`]: amplitude/phase channels of a qubit channel.

#![no_std]
#![allow(clippy::needless_range_loop)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bits;
pub mod budget;
pub mod channels;
pub mod compound;
pub mod error;
pub mod fmath;
pub mod multiuser;
pub mod polar;
pub mod qmath;
pub mod qpolar;
pub mod regions;
pub mod sc;

pub use budget::Budget;
pub use error::{Error, Result};

/// Tolerance for chain-rule and conservation identities between sums of
/// exactly computed information quantities.
pub const TOL_CHAIN: f64 = 1e-6;
