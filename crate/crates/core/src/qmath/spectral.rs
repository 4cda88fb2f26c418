use alloc::vec::Vec;
use nalgebra::DMatrix;

use super::eigen;
use super::operator::{symmetrize_complex, Hermitian, Repr};
use super::state::{DensityMatrix, Projector};
use super::{SQRT_FLOOR, TOL};
use crate::error::{Error, Result};
use crate::fmath;

pub(crate) enum Basis {
    Identity,
    Real(DMatrix<f64>),
    /// Eigenvectors of the real embedding together with its (doubled)
    /// spectrum.
    Embedded {
        vectors: DMatrix<f64>,
        values: Vec<f64>,
    },
}

/// Eigendecomposition `A = V diag(values) V^dagger`.
pub struct Spectrum {
    pub values: Vec<f64>,
    pub(crate) basis: Basis,
}

impl Spectrum {
    /// Rebuilds `V diag(f(values)) V^dagger`.
    pub fn apply<F: Fn(f64) -> f64>(&self, f: F) -> Hermitian {
        match &self.basis {
            Basis::Identity => Hermitian::diagonal(self.values.iter().map(|&x| f(x)).collect()),
            Basis::Real(v) => {
                let mapped: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
                Hermitian::from_repr(Repr::Real(scaled_outer(v, &mapped)))
            }
            Basis::Embedded { vectors, values } => {
                let mapped: Vec<f64> = values.iter().map(|&x| f(x)).collect();
                let m = scaled_outer(vectors, &mapped);
                Hermitian::from_repr(Repr::Complex(symmetrize_complex(eigen::unembed(&m))))
            }
        }
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

fn scaled_outer(v: &DMatrix<f64>, d: &[f64]) -> DMatrix<f64> {
    let mut vd = v.clone();
    for (j, &s) in d.iter().enumerate() {
        vd.column_mut(j).scale_mut(s);
    }
    let mut out = vd * v.transpose();
    eigen::symmetrize_in_place(&mut out);
    out
}

impl Hermitian {
    pub fn spectrum(&self) -> Spectrum {
        match &self.repr {
            Repr::Diag(d) => Spectrum {
                values: d.clone(),
                basis: Basis::Identity,
            },
            Repr::Real(m) => {
                let e = eigen::real_eigen(m, true);
                let v = DMatrix::from_vec(e.n, e.n, e.vectors);
                Spectrum {
                    values: e.values,
                    basis: Basis::Real(v),
                }
            }
            Repr::Complex(m) => {
                let e = eigen::real_eigen(&eigen::embed(m), true);
                let values = e.values.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect();
                let vectors = DMatrix::from_vec(e.n, e.n, e.vectors);
                Spectrum {
                    values,
                    basis: Basis::Embedded {
                        vectors,
                        values: e.values,
                    },
                }
            }
        }
    }

    /// Eigenvalues in ascending order (diagonal operators keep their order).
    pub fn eigenvalues(&self) -> Vec<f64> {
        match &self.repr {
            Repr::Diag(d) => d.clone(),
            Repr::Real(m) => eigen::real_eigen(m, false).values,
            Repr::Complex(m) => eigen::complex_eigenvalues(m),
        }
    }
}

pub(crate) fn check_psd(values: &[f64]) -> Result<()> {
    match values.iter().copied().find(|&v| v < -TOL.psd) {
        Some(v) => Err(Error::NegativeEigenvalue { value: v }),
        None => Ok(()),
    }
}

fn clamped_sqrt(values: &[f64]) -> impl Fn(f64) -> f64 {
    let radius = values.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    let floor = radius * SQRT_FLOOR;
    move |x| if x <= floor { 0.0 } else { fmath::sqrt(x) }
}

/// Square root of a positive semi-definite operator (not necessarily
/// normalized).
pub fn psd_sqrt(a: &Hermitian) -> Result<Hermitian> {
    if let Some(d) = a.as_diagonal() {
        check_psd(d)?;
        return Ok(Hermitian::diagonal(
            d.iter()
                .map(|&x| if x > 0.0 { fmath::sqrt(x) } else { 0.0 })
                .collect(),
        ));
    }
    let s = a.spectrum();
    check_psd(&s.values)?;
    Ok(s.apply(clamped_sqrt(&s.values)))
}

pub fn matrix_sqrt(rho: &DensityMatrix) -> Result<Hermitian> {
    psd_sqrt(rho)
}

/// Sum of absolute eigenvalues.
pub fn trace_norm(a: &Hermitian) -> f64 {
    a.eigenvalues().iter().map(|x| x.abs()).sum()
}

/// `-sum lambda log2 lambda` over the spectrum of a PSD operator.
pub fn spectral_entropy(a: &Hermitian) -> Result<f64> {
    let ev = a.eigenvalues();
    check_psd(&ev)?;
    Ok(ev.iter().map(|&x| fmath::xlog2x(x)).sum())
}

/// Projector onto the span of eigenvectors with eigenvalue `>= -tol_eig`.
pub fn nonneg_eigenspace_projector(a: &Hermitian) -> Projector {
    let s = a.spectrum();
    let p = s.apply(|x| if x >= -TOL.eig { 1.0 } else { 0.0 });
    Projector::from_hermitian_unchecked(p)
}
