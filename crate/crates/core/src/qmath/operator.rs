use alloc::vec;
use alloc::vec::Vec;
use nalgebra::{Complex, ComplexField, DMatrix};

use crate::error::{Error, Result};
use crate::qmath::TOL;

pub type C64 = Complex<f64>;

/// Storage class of a Hermitian operator. Construction canonicalizes to the
/// cheapest exact representation: a complex matrix with vanishing imaginary
/// parts becomes real, a real matrix with vanishing off-diagonals becomes
/// diagonal. Classical (commuting) computations therefore never touch a dense
/// eigensolver.
#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Repr {
    Diag(Vec<f64>),
    Real(DMatrix<f64>),
    Complex(DMatrix<C64>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum Kind {
    Diag,
    Real,
    Complex,
}

/// Hermitian operator on a finite-dimensional space, with no trace or
/// positivity constraint.
#[derive(Clone, Debug, PartialEq)]
pub struct Hermitian {
    pub(crate) repr: Repr,
}

pub type HermitianObservable = Hermitian;

impl Hermitian {
    /// Builds from row-major complex entries, rejecting matrices that are not
    /// Hermitian within `tol_hermitian`. The stored matrix is the Hermitian
    /// part `(A + A^dagger)/2`.
    pub fn from_rows(dim: usize, entries: &[C64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        let m = DMatrix::from_row_slice(dim, dim, entries);
        Self::from_complex_matrix(m)
    }

    pub fn from_real_rows(dim: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        let m = DMatrix::from_row_slice(dim, dim, entries);
        let dev = max_asym_real(&m);
        if dev > TOL.hermitian {
            return Err(Error::NonHermitianInput { deviation: dev });
        }
        let sym = (&m + m.transpose()) * 0.5;
        Ok(Self::from_repr(Repr::Real(sym)))
    }

    pub fn from_complex_matrix(m: DMatrix<C64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        let dev = max_asym_complex(&m);
        if dev > TOL.hermitian {
            return Err(Error::NonHermitianInput { deviation: dev });
        }
        let herm = (&m + m.adjoint()) * C64::new(0.5, 0.0);
        Ok(Self::from_repr(Repr::Complex(herm)))
    }

    pub fn diagonal(values: Vec<f64>) -> Self {
        Hermitian {
            repr: Repr::Diag(values),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::diagonal(vec![0.0; dim])
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(vec![1.0; dim])
    }

    /// Canonicalizing constructor for operators already known to be Hermitian.
    pub(crate) fn from_repr(repr: Repr) -> Self {
        let repr = match repr {
            Repr::Complex(m) => {
                if m.iter().all(|z| z.im == 0.0) {
                    canon_real(m.map(|z| z.re))
                } else {
                    Repr::Complex(m)
                }
            }
            Repr::Real(m) => canon_real(m),
            d => d,
        };
        Hermitian { repr }
    }

    pub fn dim(&self) -> usize {
        match &self.repr {
            Repr::Diag(d) => d.len(),
            Repr::Real(m) => m.nrows(),
            Repr::Complex(m) => m.nrows(),
        }
    }

    pub(crate) fn kind(&self) -> Kind {
        match &self.repr {
            Repr::Diag(_) => Kind::Diag,
            Repr::Real(_) => Kind::Real,
            Repr::Complex(_) => Kind::Complex,
        }
    }

    /// True when every off-diagonal entry is exactly zero.
    pub fn is_diagonal(&self) -> bool {
        matches!(self.repr, Repr::Diag(_))
    }

    /// Diagonal entries when the operator is stored diagonally.
    pub fn as_diagonal(&self) -> Option<&[f64]> {
        match &self.repr {
            Repr::Diag(d) => Some(d),
            _ => None,
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        match &self.repr {
            Repr::Diag(d) => {
                if i == j {
                    C64::new(d[i], 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }
            Repr::Real(m) => C64::new(m[(i, j)], 0.0),
            Repr::Complex(m) => m[(i, j)],
        }
    }

    pub fn diag_entries(&self) -> Vec<f64> {
        match &self.repr {
            Repr::Diag(d) => d.clone(),
            Repr::Real(m) => (0..m.nrows()).map(|i| m[(i, i)]).collect(),
            Repr::Complex(m) => (0..m.nrows()).map(|i| m[(i, i)].re).collect(),
        }
    }

    pub fn to_complex_matrix(&self) -> DMatrix<C64> {
        match &self.repr {
            Repr::Diag(d) => {
                let mut m = DMatrix::zeros(d.len(), d.len());
                for (i, &v) in d.iter().enumerate() {
                    m[(i, i)] = C64::new(v, 0.0);
                }
                m
            }
            Repr::Real(m) => m.map(|x| C64::new(x, 0.0)),
            Repr::Complex(m) => m.clone(),
        }
    }

    /// Real matrix view; `None` if the operator has imaginary entries.
    pub(crate) fn to_real_matrix(&self) -> Option<DMatrix<f64>> {
        match &self.repr {
            Repr::Diag(d) => Some(DMatrix::from_diagonal(
                &nalgebra::DVector::from_column_slice(d),
            )),
            Repr::Real(m) => Some(m.clone()),
            Repr::Complex(_) => None,
        }
    }

    pub fn trace(&self) -> f64 {
        self.diag_entries().iter().sum()
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        let repr = match &self.repr {
            Repr::Diag(d) => Repr::Diag(d.iter().map(|x| x * alpha).collect()),
            Repr::Real(m) => Repr::Real(m * alpha),
            Repr::Complex(m) => Repr::Complex(m * C64::new(alpha, 0.0)),
        };
        Hermitian { repr }
    }

    /// `self += alpha * other`, promoting the storage class when needed.
    pub fn add_scaled(&mut self, alpha: f64, other: &Hermitian) {
        assert_eq!(self.dim(), other.dim(), "add_scaled: dimension mismatch");
        let target = self.kind().max(other.kind());
        self.promote(target);
        match (&mut self.repr, &other.repr) {
            (Repr::Diag(a), Repr::Diag(b)) => {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += alpha * y;
                }
            }
            (Repr::Real(a), Repr::Diag(b)) => {
                for (i, y) in b.iter().enumerate() {
                    a[(i, i)] += alpha * y;
                }
            }
            (Repr::Real(a), Repr::Real(b)) => *a += b * alpha,
            (Repr::Complex(a), Repr::Diag(b)) => {
                for (i, y) in b.iter().enumerate() {
                    a[(i, i)].re += alpha * y;
                }
            }
            (Repr::Complex(a), Repr::Real(b)) => {
                for (x, y) in a.iter_mut().zip(b.iter()) {
                    x.re += alpha * y;
                }
            }
            (Repr::Complex(a), Repr::Complex(b)) => *a += b * C64::new(alpha, 0.0),
            _ => unreachable!("storage promoted to the larger kind"),
        }
    }

    pub fn add(&self, other: &Hermitian) -> Hermitian {
        let mut out = self.clone();
        out.add_scaled(1.0, other);
        out.recanonicalize()
    }

    pub fn sub(&self, other: &Hermitian) -> Hermitian {
        let mut out = self.clone();
        out.add_scaled(-1.0, other);
        out.recanonicalize()
    }

    pub(crate) fn recanonicalize(self) -> Hermitian {
        Hermitian::from_repr(self.repr)
    }

    pub(crate) fn promote(&mut self, to: Kind) {
        if self.kind() >= to {
            return;
        }
        let repr = core::mem::replace(&mut self.repr, Repr::Diag(Vec::new()));
        self.repr = match (repr, to) {
            (Repr::Diag(d), Kind::Real) => {
                Repr::Real(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(d)))
            }
            (Repr::Diag(d), Kind::Complex) => Repr::Complex(DMatrix::from_diagonal(
                &nalgebra::DVector::from_iterator(d.len(), d.iter().map(|&x| C64::new(x, 0.0))),
            )),
            (Repr::Real(m), Kind::Complex) => Repr::Complex(m.map(|x| C64::new(x, 0.0))),
            (r, _) => r,
        };
    }

    /// Tensor product `self ⊗ other`.
    pub fn kron(&self, other: &Hermitian) -> Hermitian {
        match (&self.repr, &other.repr) {
            (Repr::Diag(a), Repr::Diag(b)) => {
                let mut out = Vec::with_capacity(a.len() * b.len());
                for &x in a {
                    for &y in b {
                        out.push(x * y);
                    }
                }
                Hermitian {
                    repr: Repr::Diag(out),
                }
            }
            _ => {
                if self.kind() <= Kind::Real && other.kind() <= Kind::Real {
                    let a = self.to_real_matrix().unwrap();
                    let b = other.to_real_matrix().unwrap();
                    Hermitian {
                        repr: Repr::Real(a.kronecker(&b)),
                    }
                } else {
                    let a = self.to_complex_matrix();
                    let b = other.to_complex_matrix();
                    Hermitian {
                        repr: Repr::Complex(a.kronecker(&b)),
                    }
                }
            }
        }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Hermitian) -> f64 {
        assert_eq!(self.dim(), other.dim(), "max_abs_diff: dimension mismatch");
        if let (Repr::Diag(a), Repr::Diag(b)) = (&self.repr, &other.repr) {
            return a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
        }
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.entry(i, j) - other.entry(i, j)).modulus());
            }
        }
        worst
    }

    /// `Re tr(self * other)`.
    pub fn trace_product(&self, other: &Hermitian) -> f64 {
        assert_eq!(self.dim(), other.dim(), "trace_product: dimension mismatch");
        match (&self.repr, &other.repr) {
            (Repr::Diag(a), Repr::Diag(b)) => a.iter().zip(b).map(|(x, y)| x * y).sum(),
            (Repr::Diag(a), _) => a
                .iter()
                .enumerate()
                .map(|(i, x)| x * other.entry(i, i).re)
                .sum(),
            (_, Repr::Diag(b)) => b
                .iter()
                .enumerate()
                .map(|(i, y)| y * self.entry(i, i).re)
                .sum(),
            (Repr::Real(a), Repr::Real(b)) => a.dot(b),
            _ => {
                // tr(AB) = sum_ij A_ij B_ji = sum_ij A_ij conj(B_ij) for Hermitian B.
                let a = self.to_complex_matrix();
                let b = other.to_complex_matrix();
                a.iter().zip(b.iter()).map(|(x, y)| (x * y.conj()).re).sum()
            }
        }
    }

    /// `p * self * p` for Hermitian `p`.
    pub fn sandwich(&self, p: &Hermitian) -> Hermitian {
        assert_eq!(self.dim(), p.dim(), "sandwich: dimension mismatch");
        match (&self.repr, &p.repr) {
            (Repr::Diag(r), Repr::Diag(q)) => Hermitian {
                repr: Repr::Diag(r.iter().zip(q).map(|(x, y)| x * y * y).collect()),
            },
            _ => {
                if self.kind() <= Kind::Real && p.kind() <= Kind::Real {
                    let r = self.to_real_matrix().unwrap();
                    let q = p.to_real_matrix().unwrap();
                    let out = &q * &r * &q;
                    Hermitian::from_repr(Repr::Real(symmetrize_real(out)))
                } else {
                    let r = self.to_complex_matrix();
                    let q = p.to_complex_matrix();
                    let out = &q * &r * &q;
                    Hermitian::from_repr(Repr::Complex(symmetrize_complex(out)))
                }
            }
        }
    }

    /// `k * self * k^dagger` for a general (possibly rectangular) matrix `k`.
    pub fn conjugate_by(&self, k: &DMatrix<C64>) -> Result<Hermitian> {
        if k.ncols() != self.dim() {
            return Err(Error::DimMismatch {
                expected: self.dim(),
                found: k.ncols(),
            });
        }
        let r = self.to_complex_matrix();
        let out = k * r * k.adjoint();
        Ok(Hermitian::from_repr(Repr::Complex(symmetrize_complex(out))))
    }

    /// Partial trace over the factors not listed in `keep` of a space with the
    /// given tensor factor dimensions. `keep` lists factor indices in
    /// increasing order.
    pub fn partial_trace(&self, dims: &[usize], keep: &[usize]) -> Result<Hermitian> {
        let total: usize = dims.iter().product();
        if total != self.dim() {
            return Err(Error::DimMismatch {
                expected: self.dim(),
                found: total,
            });
        }
        if keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|&k| k >= dims.len()) {
            return Err(Error::InvalidArgument(alloc::format!(
                "bad keep list {keep:?}"
            )));
        }
        let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep.contains(k)).collect();
        let kept_dim: usize = keep.iter().map(|&k| dims[k]).product();
        let traced_dim: usize = traced.iter().map(|&k| dims[k]).product();
        // strides for a row-major multi-index with factor 0 most significant
        let mut stride = vec![1usize; dims.len()];
        for k in (0..dims.len().saturating_sub(1)).rev() {
            stride[k] = stride[k + 1] * dims[k + 1];
        }
        let index_of = |kept_idx: usize, traced_idx: usize| -> usize {
            let mut idx = 0;
            let mut rem = kept_idx;
            for &k in keep.iter().rev() {
                idx += (rem % dims[k]) * stride[k];
                rem /= dims[k];
            }
            let mut rem = traced_idx;
            for &k in traced.iter().rev() {
                idx += (rem % dims[k]) * stride[k];
                rem /= dims[k];
            }
            idx
        };
        if let Repr::Diag(d) = &self.repr {
            let mut out = vec![0.0; kept_dim];
            for (a, o) in out.iter_mut().enumerate() {
                for t in 0..traced_dim {
                    *o += d[index_of(a, t)];
                }
            }
            return Ok(Hermitian::diagonal(out));
        }
        let mut out = DMatrix::<C64>::zeros(kept_dim, kept_dim);
        for a in 0..kept_dim {
            for b in 0..kept_dim {
                let mut acc = C64::new(0.0, 0.0);
                for t in 0..traced_dim {
                    acc += self.entry(index_of(a, t), index_of(b, t));
                }
                out[(a, b)] = acc;
            }
        }
        Ok(Hermitian::from_repr(Repr::Complex(out)))
    }
}

fn canon_real(m: DMatrix<f64>) -> Repr {
    let n = m.nrows();
    let off_zero = (0..n).all(|j| (0..n).all(|i| i == j || m[(i, j)] == 0.0));
    if off_zero {
        Repr::Diag((0..n).map(|i| m[(i, i)]).collect())
    } else {
        Repr::Real(m)
    }
}

fn max_asym_complex(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).modulus());
        }
    }
    worst
}

fn max_asym_real(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i + 1..n {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

pub(crate) fn symmetrize_real(m: DMatrix<f64>) -> DMatrix<f64> {
    (&m + m.transpose()) * 0.5
}

pub(crate) fn symmetrize_complex(m: DMatrix<C64>) -> DMatrix<C64> {
    (&m + m.adjoint()) * C64::new(0.5, 0.0)
}

impl Hermitian {
    /// `||self * other||_1`, the sum of singular values of the product.
    pub fn product_trace_norm(&self, other: &Hermitian) -> f64 {
        assert_eq!(
            self.dim(),
            other.dim(),
            "product_trace_norm: dimension mismatch"
        );
        match (&self.repr, &other.repr) {
            (Repr::Diag(a), Repr::Diag(b)) => a.iter().zip(b).map(|(x, y)| (x * y).abs()).sum(),
            _ => {
                if self.kind() <= Kind::Real && other.kind() <= Kind::Real {
                    super::eigen::nuclear_norm_real(
                        &(self.to_real_matrix().unwrap() * other.to_real_matrix().unwrap()),
                    )
                } else {
                    super::eigen::nuclear_norm_complex(
                        &(self.to_complex_matrix() * other.to_complex_matrix()),
                    )
                }
            }
        }
    }
}
