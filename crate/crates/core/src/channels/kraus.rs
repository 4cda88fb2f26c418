use alloc::vec::Vec;
use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::fmath;
use crate::qmath::{DensityMatrix, Hermitian, C64, TOL};

/// Quantum channel in Kraus form, `N(rho) = sum_j K_j rho K_j^dagger`.
#[derive(Clone, Debug, PartialEq)]
pub struct QubitChannel {
    kraus: Vec<DMatrix<C64>>,
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

impl QubitChannel {
    /// Validates shapes and completeness `sum_j K_j^dagger K_j = I`.
    pub fn new(kraus: Vec<DMatrix<C64>>) -> Result<Self> {
        let first = kraus.first().ok_or(Error::InvariantViolation {
            index: 0,
            detail: "no Kraus operators".into(),
        })?;
        let (dout, din) = first.shape();
        let mut acc = DMatrix::<C64>::zeros(din, din);
        for (j, k) in kraus.iter().enumerate() {
            if k.shape() != (dout, din) {
                return Err(Error::InvariantViolation {
                    index: j,
                    detail: alloc::format!(
                        "Kraus shape {:?} differs from {:?}",
                        k.shape(),
                        (dout, din)
                    ),
                });
            }
            acc += k.adjoint() * k;
        }
        let id = DMatrix::<C64>::identity(din, din);
        let dev = (acc - id)
            .iter()
            .fold(0.0f64, |m, z| m.max(fmath::sqrt(z.norm_sqr())));
        if dev > TOL.num {
            return Err(Error::InvariantViolation {
                index: 0,
                detail: alloc::format!("Kraus completeness violated by {dev:e}"),
            });
        }
        Ok(QubitChannel { kraus })
    }

    pub fn identity(dim: usize) -> Self {
        QubitChannel {
            kraus: alloc::vec![DMatrix::identity(dim, dim)],
        }
    }

    /// Qubit dephasing: off-diagonals scaled by `1 - p`.
    pub fn dephasing(p: f64) -> Result<Self> {
        let a = fmath::sqrt(1.0 - p / 2.0);
        let b = fmath::sqrt(p / 2.0);
        Self::new(alloc::vec![
            DMatrix::from_row_slice(2, 2, &[c(a), c(0.0), c(0.0), c(a)]),
            DMatrix::from_row_slice(2, 2, &[c(b), c(0.0), c(0.0), c(-b)]),
        ])
    }

    /// Qubit depolarizing channel `rho -> (1-p) rho + p I/2`.
    pub fn depolarizing(p: f64) -> Result<Self> {
        let a = fmath::sqrt(1.0 - 3.0 * p / 4.0);
        let b = fmath::sqrt(p / 4.0);
        Self::new(alloc::vec![
            DMatrix::from_row_slice(2, 2, &[c(a), c(0.0), c(0.0), c(a)]),
            DMatrix::from_row_slice(2, 2, &[c(0.0), c(b), c(b), c(0.0)]),
            DMatrix::from_row_slice(2, 2, &[c(0.0), C64::new(0.0, -b), C64::new(0.0, b), c(0.0)]),
            DMatrix::from_row_slice(2, 2, &[c(b), c(0.0), c(0.0), c(-b)]),
        ])
    }

    pub fn amplitude_damping(gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::InvalidArgument(alloc::format!(
                "damping {gamma} outside [0,1]"
            )));
        }
        Self::new(alloc::vec![
            DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(fmath::sqrt(1.0 - gamma))]),
            DMatrix::from_row_slice(2, 2, &[c(0.0), c(fmath::sqrt(gamma)), c(0.0), c(0.0)]),
        ])
    }

    /// Bit flip with probability `p`.
    pub fn bit_flip(p: f64) -> Result<Self> {
        Self::new(alloc::vec![
            DMatrix::from_row_slice(
                2,
                2,
                &[
                    c(fmath::sqrt(1.0 - p)),
                    c(0.0),
                    c(0.0),
                    c(fmath::sqrt(1.0 - p))
                ]
            ),
            DMatrix::from_row_slice(
                2,
                2,
                &[c(0.0), c(fmath::sqrt(p)), c(fmath::sqrt(p)), c(0.0)]
            ),
        ])
    }

    pub fn kraus(&self) -> &[DMatrix<C64>] {
        &self.kraus
    }

    pub fn input_dim(&self) -> usize {
        self.kraus[0].ncols()
    }

    pub fn output_dim(&self) -> usize {
        self.kraus[0].nrows()
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.input_dim() {
            return Err(Error::DimMismatch {
                expected: self.input_dim(),
                found: rho.dim(),
            });
        }
        let mut acc = Hermitian::zeros(self.output_dim());
        for k in &self.kraus {
            acc.add_scaled(1.0, &rho.conjugate_by(k)?);
        }
        Ok(DensityMatrix::from_hermitian_unchecked(
            acc.recanonicalize(),
        ))
    }

    /// `(N (x) id_d)` acting on the first factor of a `dA * d` system.
    pub fn apply_first(&self, rho: &DensityMatrix, d: usize) -> Result<DensityMatrix> {
        if rho.dim() != self.input_dim() * d {
            return Err(Error::DimMismatch {
                expected: self.input_dim() * d,
                found: rho.dim(),
            });
        }
        let id = DMatrix::<C64>::identity(d, d);
        let mut acc = Hermitian::zeros(self.output_dim() * d);
        for k in &self.kraus {
            acc.add_scaled(1.0, &rho.conjugate_by(&k.kronecker(&id))?);
        }
        Ok(DensityMatrix::from_hermitian_unchecked(
            acc.recanonicalize(),
        ))
    }

    /// `D after self`.
    pub fn then(&self, d: &QubitChannel) -> Result<QubitChannel> {
        if d.input_dim() != self.output_dim() {
            return Err(Error::DimMismatch {
                expected: self.output_dim(),
                found: d.input_dim(),
            });
        }
        let mut ks = Vec::new();
        for b in &d.kraus {
            for a in &self.kraus {
                ks.push(b * a);
            }
        }
        QubitChannel::new(ks)
    }

    /// Isometric dilation `V = sum_j K_j (x) |j>_E`, mapping the input to the
    /// output (first factor) and the environment (second factor).
    pub fn isometry(&self) -> DMatrix<C64> {
        let e = self.kraus.len();
        let (dout, din) = (self.output_dim(), self.input_dim());
        let mut v = DMatrix::<C64>::zeros(dout * e, din);
        for (j, k) in self.kraus.iter().enumerate() {
            for b in 0..dout {
                for a in 0..din {
                    v[(b * e + j, a)] = k[(b, a)];
                }
            }
        }
        v
    }
}
