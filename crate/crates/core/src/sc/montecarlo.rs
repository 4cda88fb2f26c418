use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::classical::classical_sc_decode;
use crate::channels::ClassicalDmc;
use crate::error::{Error, Result};
use crate::fmath;
use crate::polar::PolarCode;

/// Trials per seeded block. Block `b` draws from ChaCha8 stream `b` of the
/// run seed, so any partition of blocks over workers gives the same counts.
pub const MC_BLOCK: u64 = 1024;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub trials: u64,
    pub errors: u64,
    pub p_error: f64,
    /// Wilson 95% interval.
    pub ci95: (f64, f64),
}

impl McEstimate {
    pub fn from_counts(errors: u64, trials: u64) -> Self {
        McEstimate {
            trials,
            errors,
            p_error: errors as f64 / trials as f64,
            ci95: wilson_interval(errors, trials),
        }
    }
}

/// Wilson score interval at z = 1.96.
pub fn wilson_interval(errors: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054;
    let n = trials as f64;
    let p = errors as f64 / n;
    let denom = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / denom;
    let half = z * fmath::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
    // The endpoints at 0 and N errors are exactly 0 and 1; rounding would leave dust.
    let lo = if errors == 0 {
        0.0
    } else {
        (centre - half).max(0.0)
    };
    let hi = if errors == trials {
        1.0
    } else {
        (centre + half).min(1.0)
    };
    (lo, hi)
}

fn sample(row: &[f64], r: f64) -> usize {
    let mut acc = 0.0;
    for (y, &p) in row.iter().enumerate() {
        acc += p;
        if r < acc {
            return y;
        }
    }
    // Rounding left `r` above the last partial sum: take the last live symbol.
    row.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}

/// Block errors in `trials` transmissions drawn from stream `block` of `seed`.
/// Information bits are uniform; frozen bits are the code's.
pub fn mc_block_errors(
    code: &PolarCode,
    dmc: &ClassicalDmc,
    seed: u64,
    block: u64,
    trials: u64,
) -> Result<u64> {
    if dmc.inputs() != 2 {
        return Err(Error::NonBinaryInput {
            alphabet: dmc.inputs(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    let k = code.k();
    let mut info = alloc::vec![0u8; k];
    let mut y: Vec<usize> = alloc::vec![0; code.len()];
    let mut errors = 0;
    for _ in 0..trials {
        for b in &mut info {
            *b = rng.gen::<u8>() & 1;
        }
        let u = code.scatter(&info)?;
        let x = code.coset_encode(&info)?;
        for (slot, &xj) in y.iter_mut().zip(&x) {
            *slot = sample(&dmc.rows()[xj as usize], rng.gen::<f64>());
        }
        if classical_sc_decode(code, dmc, &y)? != u {
            errors += 1;
        }
    }
    Ok(errors)
}

/// Sequential Monte Carlo estimate over `ceil(trials / MC_BLOCK)` blocks.
pub fn mc_block_error(
    code: &PolarCode,
    dmc: &ClassicalDmc,
    trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    if trials == 0 {
        return Err(Error::InvalidArgument(
            "Monte Carlo needs at least one trial".into(),
        ));
    }
    let mut errors = 0;
    let mut done = 0;
    let mut block = 0;
    while done < trials {
        let n = MC_BLOCK.min(trials - done);
        errors += mc_block_errors(code, dmc, seed, block, n)?;
        done += n;
        block += 1;
    }
    Ok(McEstimate::from_counts(errors, trials))
}
