use alloc::vec;
use alloc::vec::Vec;

use crate::bits::to_bits;
use crate::budget::Budget;
use crate::channels::ClassicalDmc;
use crate::error::{Error, Result};
use crate::polar::{PolarCode, PolarTransform};

/// Relative gap under which two likelihoods count as a tie (decided as 0).
const TIE_REL: f64 = 1e-12;

fn normalize(p: [f64; 2]) -> [f64; 2] {
    let s = p[0] + p[1];
    if s > 0.0 {
        [p[0] / s, p[1] / s]
    } else {
        p
    }
}

fn decide(p: [f64; 2]) -> u8 {
    u8::from(p[1] - p[0] > TIE_REL * (p[0] + p[1]))
}

// Decodes `u` for the sub-transform `x' = u F^{(x)n}`; returns `x'`.
fn recurse(l: &[[f64; 2]], info: &[bool], frozen: &[u8], u: &mut [u8]) -> Vec<u8> {
    let n = l.len();
    if n == 1 {
        let b = if info[0] { decide(l[0]) } else { frozen[0] };
        u[0] = b;
        return vec![b];
    }
    let h = n / 2;
    let minus: Vec<[f64; 2]> = (0..h)
        .map(|j| {
            let (a, b) = (l[j], l[j + h]);
            normalize([a[0] * b[0] + a[1] * b[1], a[1] * b[0] + a[0] * b[1]])
        })
        .collect();
    let (u_lo, u_hi) = u.split_at_mut(h);
    let s = recurse(&minus, &info[..h], &frozen[..h], u_lo);
    let plus: Vec<[f64; 2]> = (0..h)
        .map(|j| {
            let (a, b) = (l[j], l[j + h]);
            let sj = s[j] as usize;
            normalize([a[sj] * b[0], a[sj ^ 1] * b[1]])
        })
        .collect();
    let t = recurse(&plus, &info[h..], &frozen[h..], u_hi);
    let mut x = Vec::with_capacity(n);
    x.extend(s.iter().zip(&t).map(|(a, b)| a ^ b));
    x.extend_from_slice(&t);
    x
}

/// SC decoding from per-position likelihood pairs `(W(y_j|0), W(y_j|1))`.
/// Ties decide 0; frozen positions take the code's frozen values.
pub fn classical_sc_decode_pairs(code: &PolarCode, pairs: &[[f64; 2]]) -> Result<Vec<u8>> {
    let len = code.len();
    if pairs.len() != len {
        return Err(Error::LengthMismatch {
            expected: len,
            found: pairs.len(),
        });
    }
    let n = PolarTransform::new(len)?.levels();
    // G_N = B_N F^{(x)n}: undo the bit reversal on the received side.
    let l: Vec<[f64; 2]> = (0..len)
        .map(|j| {
            let r = if n == 0 {
                0
            } else {
                j.reverse_bits() >> (usize::BITS - n)
            };
            normalize(pairs[r])
        })
        .collect();
    let mut u = vec![0u8; len];
    recurse(&l, code.info_mask(), code.frozen_values(), &mut u);
    Ok(u)
}

/// SC estimate of `u^N` from received output symbols.
pub fn classical_sc_decode(
    code: &PolarCode,
    dmc: &ClassicalDmc,
    received: &[usize],
) -> Result<Vec<u8>> {
    if dmc.inputs() != 2 {
        return Err(Error::NonBinaryInput {
            alphabet: dmc.inputs(),
        });
    }
    if received.len() != code.len() {
        return Err(Error::LengthMismatch {
            expected: code.len(),
            found: received.len(),
        });
    }
    let rows = dmc.rows();
    let mut pairs = Vec::with_capacity(received.len());
    for &y in received {
        if y >= dmc.outputs() {
            return Err(Error::InvalidArgument(alloc::format!(
                "output symbol {y} out of range"
            )));
        }
        pairs.push([rows[0][y], rows[1][y]]);
    }
    classical_sc_decode_pairs(code, &pairs)
}

/// Exact block error of SC decoding, averaged uniformly over all `u^N`
/// (frozen positions take the values of `u`), by enumerating every output
/// sequence.
pub fn classical_block_error_exact(
    code: &PolarCode,
    dmc: &ClassicalDmc,
    budget: &Budget,
) -> Result<f64> {
    if dmc.inputs() != 2 {
        return Err(Error::NonBinaryInput {
            alphabet: dmc.inputs(),
        });
    }
    let len = code.len();
    let t = PolarTransform::new(len)?;
    let q = dmc.outputs();
    let outputs = (q as u64).checked_pow(len as u32).unwrap_or(u64::MAX);
    // Work, not memory, is the limit here; charge 8 bytes per (u, y) pair.
    budget.check(
        outputs
            .saturating_mul(1u64 << len.min(63))
            .saturating_mul(8),
    )?;
    let rows = dmc.rows();
    let mut success = 0.0;
    let mut y = vec![0usize; len];
    for ui in 0..1usize << len {
        let u = to_bits(ui, len);
        let c = code.with_frozen(u.clone())?;
        let mut x = u.clone();
        t.apply(&mut x);
        let mut acc = 0.0;
        for yi in 0..outputs {
            let mut r = yi;
            for slot in y.iter_mut().rev() {
                *slot = (r % q as u64) as usize;
                r /= q as u64;
            }
            let p: f64 = y
                .iter()
                .zip(&x)
                .map(|(&yj, &xj)| rows[xj as usize][yj])
                .product();
            if p == 0.0 {
                continue;
            }
            if classical_sc_decode(&c, dmc, &y)? == u {
                acc += p;
            }
        }
        success += acc;
    }
    Ok(1.0 - success / (1u64 << len) as f64)
}
