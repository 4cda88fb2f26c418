//! Binary-input classical channels as likelihood-pair lists, with the exact
//! minus/plus recursion. Outputs with equal posterior are merged after each
//! step, which preserves every quantity computed here.

use alloc::vec::Vec;

use crate::bits::log2_exact;
use crate::error::{Error, Result};
use crate::fmath;

/// Posteriors closer than this are treated as equal when merging outputs.
const MERGE_TOL: f64 = 1e-13;

/// Binary-input channel given as `(W(y|0), W(y|1))` per output `y`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairChannel {
    pairs: Vec<(f64, f64)>,
}

impl PairChannel {
    pub fn new(pairs: Vec<(f64, f64)>) -> Self {
        let mut c = PairChannel { pairs };
        c.merge();
        c
    }

    /// From the two rows of a binary-input transition matrix.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.len() != 2 {
            return Err(Error::NonBinaryInput {
                alphabet: rows.len(),
            });
        }
        Ok(Self::new(
            rows[0]
                .iter()
                .copied()
                .zip(rows[1].iter().copied())
                .collect(),
        ))
    }

    pub fn pairs(&self) -> &[(f64, f64)] {
        &self.pairs
    }

    pub fn output_count(&self) -> usize {
        self.pairs.len()
    }

    fn merge(&mut self) {
        self.pairs.retain(|&(a, b)| a + b > 0.0);
        self.pairs.sort_by(|p, q| post(*p).total_cmp(&post(*q)));
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(self.pairs.len());
        for &(a, b) in &self.pairs {
            if let Some(last) = out.last_mut() {
                if (post(*last) - post((a, b))).abs() <= MERGE_TOL {
                    last.0 += a;
                    last.1 += b;
                    continue;
                }
            }
            out.push((a, b));
        }
        self.pairs = out;
    }

    /// `W^-(y1 y2 | u1) = 1/2 sum_{u2} W(y1|u1+u2) W(y2|u2)`.
    pub fn minus(&self) -> Self {
        let mut out = Vec::with_capacity(self.pairs.len() * self.pairs.len());
        for &(a1, b1) in &self.pairs {
            for &(a2, b2) in &self.pairs {
                out.push((0.5 * (a1 * a2 + b1 * b2), 0.5 * (b1 * a2 + a1 * b2)));
            }
        }
        Self::new(out)
    }

    /// `W^+(y1 y2 u1 | u2) = 1/2 W(y1|u1+u2) W(y2|u2)`.
    pub fn plus(&self) -> Self {
        let mut out = Vec::with_capacity(2 * self.pairs.len() * self.pairs.len());
        for &(a1, b1) in &self.pairs {
            for &(a2, b2) in &self.pairs {
                out.push((0.5 * a1 * a2, 0.5 * b1 * b2));
                out.push((0.5 * b1 * a2, 0.5 * a1 * b2));
            }
        }
        Self::new(out)
    }

    /// `W_N^(i+1)` for 0-based `i`: the bits of `i`, most significant first,
    /// select minus (0) or plus (1).
    pub fn split(&self, len: usize, i: usize) -> Result<Self> {
        let n = log2_exact(len).ok_or(Error::BadLength { len })?;
        if i >= len {
            return Err(Error::InvalidArgument(alloc::format!(
                "index {i} out of range for N = {len}"
            )));
        }
        let mut w = self.clone();
        for k in (0..n).rev() {
            w = if (i >> k) & 1 == 0 {
                w.minus()
            } else {
                w.plus()
            };
        }
        Ok(w)
    }

    /// Mutual information under uniform input, in bits.
    pub fn mutual_information(&self) -> f64 {
        self.pairs
            .iter()
            .map(|&(a, b)| {
                let m = 0.5 * (a + b);
                let t = |p: f64| {
                    if p > 0.0 {
                        0.5 * p * fmath::log2(p / m)
                    } else {
                        0.0
                    }
                };
                t(a) + t(b)
            })
            .sum()
    }

    /// `sum_y sqrt(W(y|0) W(y|1))`.
    pub fn bhattacharyya(&self) -> f64 {
        self.pairs.iter().map(|&(a, b)| fmath::sqrt(a * b)).sum()
    }
}

fn post((a, b): (f64, f64)) -> f64 {
    a / (a + b)
}

/// Erasure probabilities of the synthesized channels of BEC(`eps`), from
/// `e^- = 2e - e^2`, `e^+ = e^2`.
pub fn bec_erasures(eps: f64, len: usize) -> Result<Vec<f64>> {
    let n = log2_exact(len).ok_or(Error::BadLength { len })?;
    let mut level = alloc::vec![eps];
    for _ in 0..n {
        let mut next = Vec::with_capacity(level.len() * 2);
        for &e in &level {
            next.push(2.0 * e - e * e);
            next.push(e * e);
        }
        level = next;
    }
    Ok(level)
}
