use alloc::vec::Vec;
use core::ops::Deref;

use super::operator::{Hermitian, C64};
use super::spectral::check_psd;
use super::TOL;
use crate::error::{Error, Result};

/// Unit-trace positive semi-definite Hermitian operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(Hermitian);

impl DensityMatrix {
    /// Validates trace and positivity.
    pub fn new(h: Hermitian) -> Result<Self> {
        let tr = h.trace();
        if (tr - 1.0).abs() > TOL.trace {
            return Err(Error::InvalidArgument(alloc::format!(
                "trace {tr} is not 1"
            )));
        }
        check_psd(&h.eigenvalues())?;
        Ok(DensityMatrix(h))
    }

    pub fn from_rows(dim: usize, entries: &[C64]) -> Result<Self> {
        Self::new(Hermitian::from_rows(dim, entries)?)
    }

    pub fn from_real_rows(dim: usize, entries: &[f64]) -> Result<Self> {
        Self::new(Hermitian::from_real_rows(dim, entries)?)
    }

    /// Diagonal state from a probability vector.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        Self::new(Hermitian::diagonal(probs.to_vec()))
    }

    /// `|psi><psi|` for a unit vector `psi`.
    pub fn pure(ket: &[C64]) -> Result<Self> {
        let norm: f64 = ket.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > TOL.trace {
            return Err(Error::InvalidArgument(alloc::format!(
                "ket has squared norm {norm}"
            )));
        }
        let d = ket.len();
        let mut rows = Vec::with_capacity(d * d);
        for a in ket {
            for b in ket {
                rows.push(a * b.conj());
            }
        }
        Self::from_rows(d, &rows)
    }

    pub fn pure_real(ket: &[f64]) -> Result<Self> {
        let k: Vec<C64> = ket.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::pure(&k)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix(Hermitian::diagonal(alloc::vec![1.0 / dim as f64; dim]))
    }

    /// Wraps an operator produced by a trace- and positivity-preserving
    /// computation without re-validating it.
    pub(crate) fn from_hermitian_unchecked(h: Hermitian) -> Self {
        DensityMatrix(h)
    }

    pub fn as_hermitian(&self) -> &Hermitian {
        &self.0
    }

    pub fn into_hermitian(self) -> Hermitian {
        self.0
    }

    pub fn kron(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix(self.0.kron(&other.0))
    }

    /// Convex combination `sum w_k rho_k`; weights must sum to one.
    pub fn mixture(weights: &[f64], states: &[&DensityMatrix]) -> Result<DensityMatrix> {
        if weights.len() != states.len() || states.is_empty() {
            return Err(Error::LengthMismatch {
                expected: states.len(),
                found: weights.len(),
            });
        }
        check_distribution(weights)?;
        let dim = states[0].dim();
        let mut acc = Hermitian::zeros(dim);
        for (w, s) in weights.iter().zip(states) {
            if s.dim() != dim {
                return Err(Error::DimMismatch {
                    expected: dim,
                    found: s.dim(),
                });
            }
            if *w != 0.0 {
                acc.add_scaled(*w, s);
            }
        }
        Ok(DensityMatrix(acc.recanonicalize()))
    }
}

impl Deref for DensityMatrix {
    type Target = Hermitian;
    fn deref(&self) -> &Hermitian {
        &self.0
    }
}

/// Orthogonal projector.
#[derive(Clone, Debug, PartialEq)]
pub struct Projector(Hermitian);

impl Projector {
    /// Validates idempotence within `tol_num`.
    pub fn new(h: Hermitian) -> Result<Self> {
        let dev = square(&h).max_abs_diff(&h);
        if dev > TOL.num {
            return Err(Error::InvalidArgument(alloc::format!(
                "projector not idempotent (deviation {dev:e})"
            )));
        }
        Ok(Projector(h))
    }

    pub(crate) fn from_hermitian_unchecked(h: Hermitian) -> Self {
        Projector(h)
    }

    pub fn identity(dim: usize) -> Self {
        Projector(Hermitian::identity(dim))
    }

    /// `I - P`.
    pub fn complement(&self) -> Projector {
        Projector(Hermitian::identity(self.dim()).sub(&self.0))
    }

    /// Largest entry of `|P^2 - P|`.
    pub fn idempotence_defect(&self) -> f64 {
        square(&self.0).max_abs_diff(&self.0)
    }

    pub fn as_hermitian(&self) -> &Hermitian {
        &self.0
    }
}

impl Deref for Projector {
    type Target = Hermitian;
    fn deref(&self) -> &Hermitian {
        &self.0
    }
}

fn square(h: &Hermitian) -> Hermitian {
    // P^2 = P I P; sandwich keeps the storage class.
    Hermitian::identity(h.dim()).sandwich(h)
}

pub(crate) fn check_distribution(p: &[f64]) -> Result<()> {
    if let Some(x) = p.iter().find(|&&x| !x.is_finite() || x < 0.0) {
        return Err(Error::InvalidDistribution(alloc::format!(
            "entry {x} is not a probability"
        )));
    }
    let s: f64 = p.iter().sum();
    if (s - 1.0).abs() > TOL.trace {
        return Err(Error::InvalidDistribution(alloc::format!(
            "entries sum to {s}"
        )));
    }
    Ok(())
}
