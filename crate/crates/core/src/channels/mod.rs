//! Channel models. Every constructor validates its invariants, so downstream
//! code can assume well-formed states.

mod kraus;
mod multi;

pub use kraus::QubitChannel;
pub use multi::{BroadcastChannel, CompoundSet, CqMac, InterferenceChannel, Receiver};

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fmath;
use crate::qmath::{holevo_information, shannon_mutual_information, DensityMatrix, Hermitian, TOL};

/// Classical-quantum channel `x -> rho_x`.
#[derive(Clone, Debug, PartialEq)]
pub struct CqChannel {
    outputs: Vec<DensityMatrix>,
}

impl CqChannel {
    pub fn new(outputs: Vec<DensityMatrix>) -> Result<Self> {
        let first = outputs.first().ok_or(Error::InvariantViolation {
            index: 0,
            detail: "no outputs".into(),
        })?;
        let dim = first.dim();
        for (k, rho) in outputs.iter().enumerate() {
            if rho.dim() != dim {
                return Err(Error::InvariantViolation {
                    index: k,
                    detail: alloc::format!("output dim {} differs from {dim}", rho.dim()),
                });
            }
        }
        Ok(CqChannel { outputs })
    }

    /// Binary cq channel with pure outputs `|0>` and `cos t |0> + sin t |1>`,
    /// where `cos t = overlap`.
    pub fn pure_pair(overlap: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&overlap) {
            return Err(Error::InvalidArgument(alloc::format!(
                "overlap {overlap} outside [0,1]"
            )));
        }
        let s = fmath::sqrt(1.0 - overlap * overlap);
        Self::new(alloc::vec![
            DensityMatrix::pure_real(&[1.0, 0.0])?,
            DensityMatrix::pure_real(&[overlap, s])?
        ])
    }

    /// The pure pair of [`CqChannel::pure_pair`] followed by amplitude damping.
    pub fn amplitude_damped_pair(overlap: f64, gamma: f64) -> Result<Self> {
        let ad = QubitChannel::amplitude_damping(gamma)?;
        degrade(&Self::pure_pair(overlap)?, &ad)
    }

    pub fn alphabet_size(&self) -> usize {
        self.outputs.len()
    }

    pub fn output_dim(&self) -> usize {
        self.outputs[0].dim()
    }

    pub fn outputs(&self) -> &[DensityMatrix] {
        &self.outputs
    }

    pub fn output(&self, x: usize) -> &DensityMatrix {
        &self.outputs[x]
    }

    pub fn is_binary(&self) -> bool {
        self.outputs.len() == 2
    }

    pub(crate) fn require_binary(&self) -> Result<()> {
        if self.is_binary() {
            Ok(())
        } else {
            Err(Error::NonBinaryInput {
                alphabet: self.outputs.len(),
            })
        }
    }

    /// Transition rows when every output is diagonal.
    pub fn diagonal_rows(&self) -> Option<Vec<Vec<f64>>> {
        self.outputs
            .iter()
            .map(|rho| rho.as_diagonal().map(|d| d.to_vec()))
            .collect()
    }

    /// Holevo information under the uniform input distribution.
    pub fn symmetric_holevo(&self) -> f64 {
        let n = self.outputs.len();
        holevo_information(&alloc::vec![1.0 / n as f64; n], &self.outputs).unwrap_or(f64::NAN)
    }
}

/// Row-stochastic classical channel.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalDmc {
    rows: Vec<Vec<f64>>,
}

impl ClassicalDmc {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let width = rows.first().map_or(0, |r| r.len());
        if rows.is_empty() || width == 0 {
            return Err(Error::InvariantViolation {
                index: 0,
                detail: "empty transition matrix".into(),
            });
        }
        for (k, row) in rows.iter().enumerate() {
            if row.len() != width {
                return Err(Error::InvariantViolation {
                    index: k,
                    detail: "ragged transition matrix".into(),
                });
            }
            if row.iter().any(|&p| p.is_nan() || p < 0.0) {
                return Err(Error::InvariantViolation {
                    index: k,
                    detail: "negative transition probability".into(),
                });
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > TOL.trace {
                return Err(Error::InvariantViolation {
                    index: k,
                    detail: alloc::format!("row sums to {s}"),
                });
            }
        }
        Ok(ClassicalDmc { rows })
    }

    pub fn bsc(p: f64) -> Result<Self> {
        Self::new(alloc::vec![
            alloc::vec![1.0 - p, p],
            alloc::vec![p, 1.0 - p]
        ])
    }

    /// Binary erasure channel with outputs `(0, erased, 1)`.
    pub fn bec(eps: f64) -> Result<Self> {
        Self::new(alloc::vec![
            alloc::vec![1.0 - eps, eps, 0.0],
            alloc::vec![0.0, eps, 1.0 - eps]
        ])
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn inputs(&self) -> usize {
        self.rows.len()
    }

    pub fn outputs(&self) -> usize {
        self.rows[0].len()
    }

    /// Embedding with diagonal output states.
    pub fn to_cq(&self) -> CqChannel {
        let outs = self
            .rows
            .iter()
            .map(|r| DensityMatrix::from_hermitian_unchecked(Hermitian::diagonal(r.clone())))
            .collect();
        CqChannel { outputs: outs }
    }

    /// Inverse of [`ClassicalDmc::to_cq`] for diagonal channels.
    pub fn from_cq(w: &CqChannel) -> Option<Self> {
        w.diagonal_rows().map(|rows| ClassicalDmc { rows })
    }

    pub fn mutual_information(&self, prior: &[f64]) -> f64 {
        shannon_mutual_information(prior, &self.rows)
    }
}

/// Partial trace keeping the listed tensor factors (in increasing order).
pub fn partial_trace(rho: &DensityMatrix, dims: &[usize], keep: &[usize]) -> Result<DensityMatrix> {
    Ok(DensityMatrix::from_hermitian_unchecked(
        rho.partial_trace(dims, keep)?,
    ))
}

/// Channel with outputs `D(rho_x)`.
pub fn degrade(n2: &CqChannel, d: &QubitChannel) -> Result<CqChannel> {
    let outs = n2
        .outputs
        .iter()
        .map(|rho| d.apply(rho))
        .collect::<Result<Vec<_>>>()?;
    CqChannel::new(outs)
}
