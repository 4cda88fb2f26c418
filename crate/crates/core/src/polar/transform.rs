use alloc::vec::Vec;

use crate::bits::log2_exact;
use crate::error::{Error, Result};

/// The transform `G_N = B_N F^{(x)n}` with `F = [[1,0],[1,1]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PolarTransform {
    n: u32,
}

impl PolarTransform {
    pub fn new(len: usize) -> Result<Self> {
        log2_exact(len)
            .map(|n| PolarTransform { n })
            .ok_or(Error::BadLength { len })
    }

    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn levels(&self) -> u32 {
        self.n
    }

    /// `x = u G_N` in place.
    pub fn apply(&self, u: &mut [u8]) {
        let len = self.len();
        assert_eq!(u.len(), len, "PolarTransform::apply: length mismatch");
        let mut h = 1;
        while h < len {
            for start in (0..len).step_by(2 * h) {
                for j in start..start + h {
                    u[j] ^= u[j + h];
                }
            }
            h *= 2;
        }
        bit_reverse_permute(u, self.n);
    }
}

fn bit_reverse_permute<T>(v: &mut [T], n: u32) {
    if n == 0 {
        return;
    }
    for i in 0..v.len() {
        let j = i.reverse_bits() >> (usize::BITS - n);
        if i < j {
            v.swap(i, j);
        }
    }
}

/// `x^N = u^N G_N`. Self-inverse.
pub fn encode(u: &[u8]) -> Result<Vec<u8>> {
    let t = PolarTransform::new(u.len())?;
    let mut x = u.to_vec();
    t.apply(&mut x);
    Ok(x)
}

/// How the information set of a [`PolarCode`] was chosen.
#[derive(Clone, Debug, PartialEq)]
pub enum CodeOrigin {
    /// Polar coding rule on per-index `sqrtF` values.
    Fidelity { sqrt_fidelity: Vec<f64> },
    /// Supplied by the caller.
    Explicit,
}

/// `(N, K, A, u_{A^c})`. Indices are 0-based: position `i` is the synthesized
/// channel `W_N^(i+1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolarCode {
    len: usize,
    info: Vec<usize>,
    is_info: Vec<bool>,
    frozen: Vec<u8>,
    origin: CodeOrigin,
}

impl PolarCode {
    /// Frozen values are read from `frozen` at non-information positions.
    pub fn new(
        len: usize,
        mut info: Vec<usize>,
        frozen: Vec<u8>,
        origin: CodeOrigin,
    ) -> Result<Self> {
        PolarTransform::new(len)?;
        if frozen.len() != len {
            return Err(Error::LengthMismatch {
                expected: len,
                found: frozen.len(),
            });
        }
        info.sort_unstable();
        info.dedup();
        if let Some(&bad) = info.iter().find(|&&i| i >= len) {
            return Err(Error::InvalidArgument(alloc::format!(
                "information index {bad} out of range"
            )));
        }
        let mut is_info = alloc::vec![false; len];
        for &i in &info {
            is_info[i] = true;
        }
        let frozen = frozen
            .iter()
            .zip(&is_info)
            .map(|(&b, &inf)| if inf { 0 } else { b & 1 })
            .collect();
        Ok(PolarCode {
            len,
            info,
            is_info,
            frozen,
            origin,
        })
    }

    /// Code with all-zero frozen bits.
    pub fn with_info_set(len: usize, info: Vec<usize>) -> Result<Self> {
        Self::new(len, info, alloc::vec![0; len], CodeOrigin::Explicit)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn k(&self) -> usize {
        self.info.len()
    }

    pub fn info_set(&self) -> &[usize] {
        &self.info
    }

    pub fn frozen_set(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| !self.is_info[i]).collect()
    }

    pub fn is_info(&self, i: usize) -> bool {
        self.is_info[i]
    }

    pub fn info_mask(&self) -> &[bool] {
        &self.is_info
    }

    /// Frozen values (zero at information positions).
    pub fn frozen_values(&self) -> &[u8] {
        &self.frozen
    }

    pub fn origin(&self) -> &CodeOrigin {
        &self.origin
    }

    /// Copy with different frozen values.
    pub fn with_frozen(&self, frozen: Vec<u8>) -> Result<Self> {
        Self::new(self.len, self.info.clone(), frozen, self.origin.clone())
    }

    /// `u` with information bits scattered into `A` and frozen values elsewhere.
    pub fn scatter(&self, info_bits: &[u8]) -> Result<Vec<u8>> {
        if info_bits.len() != self.info.len() {
            return Err(Error::LengthMismatch {
                expected: self.info.len(),
                found: info_bits.len(),
            });
        }
        let mut u = self.frozen.clone();
        for (&i, &b) in self.info.iter().zip(info_bits) {
            u[i] = b & 1;
        }
        Ok(u)
    }

    /// `x = u_A G_N(A) + u_{A^c} G_N(A^c)`.
    pub fn coset_encode(&self, info_bits: &[u8]) -> Result<Vec<u8>> {
        encode(&self.scatter(info_bits)?)
    }
}

pub fn coset_encode(code: &PolarCode, info_bits: &[u8]) -> Result<Vec<u8>> {
    code.coset_encode(info_bits)
}
