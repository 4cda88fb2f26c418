//! Successive-cancellation decoding.
//!
//! The classical decoder runs the usual likelihood recursion; the quantum
//! decoder is simulated exactly by expanding the sequential binary
//! measurements `{sqrt(rho_{p0}) - sqrt(rho_{p1}) >= 0}` over the block
//! output space. Block error is averaged uniformly over all `2^N` inputs,
//! frozen positions included, and reported together with the Gao, Sen and
//! fidelity bounds.

mod classical;
mod montecarlo;
mod quantum;

pub(crate) use quantum::sequential_bytes;

pub use classical::{classical_block_error_exact, classical_sc_decode, classical_sc_decode_pairs};
pub use montecarlo::{mc_block_error, mc_block_errors, wilson_interval, McEstimate, MC_BLOCK};
pub use quantum::{
    block_error, quantum_sc_decode_exact, BlockError, ChainCheck, DecodingTranscript, ExactDecode,
    InputTerms, QuantumScDecoder, SequentialDecoder,
};
