//! Dense Hermitian kernel: spectral functions, fidelity, entropy and the
//! eigenspace projectors used by the SC measurements.
//!
//! All entropies are in bits. Eigenvalues in `[-tol_psd, 0)` count as zero;
//! anything more negative is rejected.

mod eigen;
mod factored;
mod info;
mod operator;
mod spectral;
mod state;

pub use factored::Factored;
pub use info::{
    conditional_quantities, fidelity, holevo_information, shannon_mutual_information,
    sqrt_fidelity, von_neumann_entropy, ConditionalQuantities, CqEnsemble, CqEntry,
};
pub use operator::{Hermitian, HermitianObservable, C64};
pub use spectral::{
    matrix_sqrt, nonneg_eigenspace_projector, psd_sqrt, spectral_entropy, trace_norm, Spectrum,
};
pub(crate) use state::check_distribution;
pub use state::{DensityMatrix, Projector};

#[allow(unused_imports)]
pub(crate) use operator::{Kind, Repr};

/// Numerical tolerance policy shared by every module.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub hermitian: f64,
    pub trace: f64,
    pub psd: f64,
    pub eig: f64,
    pub num: f64,
}

pub const TOL: Tolerances = Tolerances {
    hermitian: 1e-10,
    trace: 1e-10,
    psd: 1e-9,
    eig: 1e-10,
    num: 1e-8,
};

/// Eigenvalues at or below this fraction of the spectral radius are
/// eigensolver noise; they are zeroed before square roots are taken.
pub(crate) const SQRT_FLOOR: f64 = 1e-14;
