//! Bit-vector helpers shared by the enumeration kernels.
//!
//! Bit vectors are `&[u8]` holding 0/1. Integer encodings put the first
//! element in the most significant position, so that enumerating integers in
//! order enumerates vectors in lexicographic order and a prefix `u_1..u_k`
//! is the integer shifted right by `len - k`.

use alloc::vec::Vec;

/// Expands the low `len` bits of `value` into a vector, first bit = MSB.
pub fn to_bits(value: usize, len: usize) -> Vec<u8> {
    (0..len)
        .map(|k| ((value >> (len - 1 - k)) & 1) as u8)
        .collect()
}

/// Inverse of [`to_bits`].
pub fn from_bits(bits: &[u8]) -> usize {
    bits.iter()
        .fold(0usize, |acc, &b| (acc << 1) | (b & 1) as usize)
}

/// `log2(n)` for powers of two, `None` otherwise.
pub fn log2_exact(n: usize) -> Option<u32> {
    if n == 0 || !n.is_power_of_two() {
        None
    } else {
        Some(n.trailing_zeros())
    }
}
