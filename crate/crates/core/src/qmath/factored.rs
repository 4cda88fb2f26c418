use alloc::vec::Vec;
use nalgebra::DMatrix;

use super::eigen;
use super::operator::{Hermitian, Repr, C64};
use super::spectral::{check_psd, Basis};
use super::SQRT_FLOOR;
use crate::error::Result;
use crate::fmath;

#[derive(Clone, Debug)]
enum Cols {
    Real(DMatrix<f64>),
    Complex(DMatrix<C64>),
}

/// PSD operator held as `M M^dagger` with `M` of shape `dim x width`.
///
/// Low-rank operators (pure-state outputs and their short mixtures) stay
/// cheap: entropy uses the `width x width` Gram matrix and the fidelity term
/// `||sqrt(A) sqrt(B)||_1` equals `||M_A^dagger M_B||_1`.
#[derive(Clone, Debug)]
pub struct Factored {
    cols: Cols,
}

impl Factored {
    /// Factor of a PSD operator through its eigendecomposition.
    pub fn from_hermitian(a: &Hermitian) -> Result<Self> {
        let s = a.spectrum();
        check_psd(&s.values)?;
        let radius = s.values.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
        let keep: Vec<usize> = (0..s.values.len())
            .filter(|&k| s.values[k] > radius * SQRT_FLOOR)
            .collect();
        let dim = a.dim();
        let cols = match &s.basis {
            Basis::Identity => {
                let mut m = DMatrix::zeros(dim, keep.len());
                for (c, &k) in keep.iter().enumerate() {
                    m[(k, c)] = fmath::sqrt(s.values[k]);
                }
                Cols::Real(m)
            }
            Basis::Real(v) => {
                let mut m = DMatrix::zeros(dim, keep.len());
                for (c, &k) in keep.iter().enumerate() {
                    m.set_column(c, &(v.column(k) * fmath::sqrt(s.values[k])));
                }
                Cols::Real(m)
            }
            Basis::Embedded { vectors, values } => {
                // The embedding `[[P], [Q]]` of a real factor gives the complex
                // factor `(P + iQ) / sqrt(2)`, twice as wide as the rank.
                let keep2: Vec<usize> = (0..values.len())
                    .filter(|&k| values[k] > radius * SQRT_FLOOR)
                    .collect();
                let mut m = DMatrix::zeros(dim, keep2.len());
                for (c, &k) in keep2.iter().enumerate() {
                    let s = fmath::sqrt(0.5 * values[k]);
                    for r in 0..dim {
                        m[(r, c)] = C64::new(vectors[(r, k)] * s, vectors[(r + dim, k)] * s);
                    }
                }
                Cols::Complex(m)
            }
        };
        Ok(Factored { cols })
    }

    /// `|psi><psi|` as a single column.
    pub fn from_ket(ket: &[C64]) -> Self {
        if ket.iter().all(|z| z.im == 0.0) {
            Factored {
                cols: Cols::Real(DMatrix::from_iterator(
                    ket.len(),
                    1,
                    ket.iter().map(|z| z.re),
                )),
            }
        } else {
            Factored {
                cols: Cols::Complex(DMatrix::from_column_slice(ket.len(), 1, ket)),
            }
        }
    }

    pub fn dim(&self) -> usize {
        match &self.cols {
            Cols::Real(m) => m.nrows(),
            Cols::Complex(m) => m.nrows(),
        }
    }

    pub fn width(&self) -> usize {
        match &self.cols {
            Cols::Real(m) => m.ncols(),
            Cols::Complex(m) => m.ncols(),
        }
    }

    fn complex(&self) -> DMatrix<C64> {
        match &self.cols {
            Cols::Real(m) => m.map(|x| C64::new(x, 0.0)),
            Cols::Complex(m) => m.clone(),
        }
    }

    pub fn kron(&self, other: &Factored) -> Factored {
        match (&self.cols, &other.cols) {
            (Cols::Real(a), Cols::Real(b)) => Factored {
                cols: Cols::Real(a.kronecker(b)),
            },
            _ => Factored {
                cols: Cols::Complex(self.complex().kronecker(&other.complex())),
            },
        }
    }

    /// `sum_k w_k A_k` by horizontal concatenation of `sqrt(w_k) M_k`.
    pub fn mixture(weights: &[f64], parts: &[&Factored]) -> Factored {
        let dim = parts[0].dim();
        let width: usize = parts.iter().map(|p| p.width()).sum();
        let all_real = parts.iter().all(|p| matches!(p.cols, Cols::Real(_)));
        if all_real {
            let mut m = DMatrix::zeros(dim, width);
            let mut c = 0;
            for (w, p) in weights.iter().zip(parts) {
                if let Cols::Real(a) = &p.cols {
                    let s = fmath::sqrt(*w);
                    m.columns_mut(c, a.ncols()).copy_from(&(a * s));
                    c += a.ncols();
                }
            }
            Factored {
                cols: Cols::Real(m),
            }
        } else {
            let mut m = DMatrix::zeros(dim, width);
            let mut c = 0;
            for (w, p) in weights.iter().zip(parts) {
                let a = p.complex();
                let s = C64::new(fmath::sqrt(*w), 0.0);
                m.columns_mut(c, a.ncols()).copy_from(&(a * s));
                c += p.width();
            }
            Factored {
                cols: Cols::Complex(m),
            }
        }
    }

    /// The smaller of `M^dagger M` and `M M^dagger`; both share the nonzero
    /// spectrum of the operator.
    fn small_gram(&self) -> Hermitian {
        let repr = match &self.cols {
            Cols::Real(m) if m.ncols() <= m.nrows() => Repr::Real(m.transpose() * m),
            Cols::Real(m) => Repr::Real(m * m.transpose()),
            Cols::Complex(m) if m.ncols() <= m.nrows() => Repr::Complex(m.adjoint() * m),
            Cols::Complex(m) => Repr::Complex(m * m.adjoint()),
        };
        Hermitian::from_repr(repr)
    }

    pub fn trace(&self) -> f64 {
        match &self.cols {
            Cols::Real(m) => m.norm_squared(),
            Cols::Complex(m) => m.norm_squared(),
        }
    }

    /// Spectral entropy `-sum lambda log2 lambda` in bits.
    pub fn entropy(&self) -> f64 {
        self.small_gram()
            .eigenvalues()
            .iter()
            .map(|&x| fmath::xlog2x(x))
            .sum()
    }

    /// `||sqrt(self) sqrt(other)||_1`.
    pub fn sqrt_fidelity(&self, other: &Factored) -> f64 {
        match (&self.cols, &other.cols) {
            (Cols::Real(a), Cols::Real(b)) => eigen::nuclear_norm_real(&(a.transpose() * b)),
            _ => eigen::nuclear_norm_complex(&(self.complex().adjoint() * other.complex())),
        }
    }

    pub fn to_hermitian(&self) -> Hermitian {
        let repr = match &self.cols {
            Cols::Real(m) => Repr::Real(m * m.transpose()),
            Cols::Complex(m) => Repr::Complex(m * m.adjoint()),
        };
        Hermitian::from_repr(repr)
    }
}
