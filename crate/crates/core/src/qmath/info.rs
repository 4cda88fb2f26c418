use alloc::vec::Vec;

use super::operator::Hermitian;
use super::spectral::{psd_sqrt, spectral_entropy};
use super::state::{check_distribution, DensityMatrix};
use crate::error::{Error, Result};
use crate::fmath;

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    // Density matrices are validated PSD at construction.
    spectral_entropy(rho).unwrap_or(f64::NAN)
}

/// `||sqrt(a) sqrt(b)||_1` for PSD operators of any trace.
pub(crate) fn psd_sqrt_fidelity(a: &Hermitian, b: &Hermitian) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    if let (Some(p), Some(q)) = (a.as_diagonal(), b.as_diagonal()) {
        return Ok(p
            .iter()
            .zip(q)
            .map(|(&x, &y)| {
                if x > 0.0 && y > 0.0 {
                    fmath::sqrt(x * y)
                } else {
                    0.0
                }
            })
            .sum());
    }
    let sa = psd_sqrt(a)?;
    let sb = psd_sqrt(b)?;
    Ok(sa.product_trace_norm(&sb))
}

/// `||sqrt(rho0) sqrt(rho1)||_1`. Reduces to the Bhattacharyya coefficient
/// `sum_i sqrt(p_i q_i)` on commuting states.
pub fn sqrt_fidelity(rho0: &DensityMatrix, rho1: &DensityMatrix) -> Result<f64> {
    Ok(psd_sqrt_fidelity(rho0, rho1)?.min(1.0))
}

/// `F = ||sqrt(rho0) sqrt(rho1)||_1^2`.
pub fn fidelity(rho0: &DensityMatrix, rho1: &DensityMatrix) -> Result<f64> {
    let s = sqrt_fidelity(rho0, rho1)?;
    Ok(s * s)
}

/// `H(sum p_x rho_x) - sum p_x H(rho_x)`.
pub fn holevo_information(prior: &[f64], outputs: &[DensityMatrix]) -> Result<f64> {
    if prior.len() != outputs.len() || outputs.is_empty() {
        return Err(Error::LengthMismatch {
            expected: outputs.len(),
            found: prior.len(),
        });
    }
    check_distribution(prior)?;
    let refs: Vec<&DensityMatrix> = outputs.iter().collect();
    let avg = DensityMatrix::mixture(prior, &refs)?;
    let mut chi = von_neumann_entropy(&avg);
    for (p, rho) in prior.iter().zip(outputs) {
        if *p > 0.0 {
            chi -= p * von_neumann_entropy(rho);
        }
    }
    Ok(chi.max(0.0))
}

/// Classical mutual information of input distribution `prior` through a
/// row-stochastic transition matrix.
pub fn shannon_mutual_information(prior: &[f64], rows: &[Vec<f64>]) -> f64 {
    let ny = rows.first().map_or(0, |r| r.len());
    let mut py = alloc::vec![0.0; ny];
    for (p, row) in prior.iter().zip(rows) {
        for (acc, w) in py.iter_mut().zip(row) {
            *acc += p * w;
        }
    }
    let mut h_y_given_x = 0.0;
    for (p, row) in prior.iter().zip(rows) {
        h_y_given_x += p * fmath::shannon_entropy(row);
    }
    fmath::shannon_entropy(&py) - h_y_given_x
}

/// One term of a classical-quantum ensemble: classical labels `(x, y)` held
/// with probability `prob` alongside quantum state `state`.
#[derive(Clone, Debug)]
pub struct CqEntry {
    pub x: usize,
    pub y: usize,
    pub prob: f64,
    pub state: DensityMatrix,
}

/// Ensemble `sum p(x,y) |x,y><x,y| (x) rho_{x,y}`. Repeated labels are merged.
#[derive(Clone, Debug, Default)]
pub struct CqEnsemble {
    pub entries: Vec<CqEntry>,
}

impl CqEnsemble {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: usize, y: usize, prob: f64, state: DensityMatrix) {
        self.entries.push(CqEntry { x, y, prob, state });
    }

    /// Ensemble without side register: `y = 0` everywhere.
    pub fn from_prior(prior: &[f64], outputs: &[DensityMatrix]) -> Self {
        let mut e = Self::new();
        for (x, (p, rho)) in prior.iter().zip(outputs).enumerate() {
            e.push(x, 0, *p, rho.clone());
        }
        e
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConditionalQuantities {
    pub h_x_given_b: f64,
    pub h_x_given_yb: f64,
    pub i_x_b: f64,
    pub i_x_b_given_y: f64,
    /// `2 sqrt(p0 p1) ||sqrt(rho0) sqrt(rho1)||_1` over the `y`-averaged
    /// conditional states; `None` unless `x` is binary.
    pub z_x_given_b: Option<f64>,
    /// Same with `y` as additional classical side information.
    pub z_x_given_yb: Option<f64>,
}

struct Group {
    prob: f64,
    state: Hermitian,
}

fn group_by<F: Fn(&CqEntry) -> usize>(
    entries: &[CqEntry],
    key: F,
    dim: usize,
) -> Vec<Option<Group>> {
    let n = entries.iter().map(&key).max().map_or(0, |m| m + 1);
    let mut out: Vec<Option<Group>> = (0..n).map(|_| None).collect();
    for e in entries {
        if e.prob == 0.0 {
            continue;
        }
        let g = out[key(e)].get_or_insert_with(|| Group {
            prob: 0.0,
            state: Hermitian::zeros(dim),
        });
        g.prob += e.prob;
        g.state.add_scaled(e.prob, &e.state);
    }
    out
}

/// Joint entropy `H(K) + sum_k p_k H(rho_k)` of a classical register and the
/// quantum system, which equals the summed spectral entropy of the
/// unnormalized blocks `p_k rho_k`.
fn joint_entropy(groups: &[Option<Group>]) -> Result<f64> {
    groups
        .iter()
        .flatten()
        .map(|g| spectral_entropy(&g.state))
        .sum()
}

/// Entropic quantities of a cq ensemble over labels `(x, y)`.
pub fn conditional_quantities(joint: &CqEnsemble) -> Result<ConditionalQuantities> {
    let entries = &joint.entries;
    let dim = entries
        .first()
        .ok_or_else(|| Error::InvalidDistribution("empty ensemble".into()))?
        .state
        .dim();
    if let Some(e) = entries.iter().find(|e| e.state.dim() != dim) {
        return Err(Error::DimMismatch {
            expected: dim,
            found: e.state.dim(),
        });
    }
    let probs: Vec<f64> = entries.iter().map(|e| e.prob).collect();
    check_distribution(&probs)?;

    let ny = entries.iter().map(|e| e.y).max().unwrap() + 1;
    let xy = group_by(entries, |e| e.x * ny + e.y, dim);
    let xs = group_by(entries, |e| e.x, dim);
    let ys = group_by(entries, |e| e.y, dim);
    let all = group_by(entries, |_| 0, dim);

    let h_xyb = joint_entropy(&xy)?;
    let h_xb = joint_entropy(&xs)?;
    let h_yb = joint_entropy(&ys)?;
    let h_b = joint_entropy(&all)?;
    let h_y: f64 = ys.iter().flatten().map(|g| fmath::xlog2x(g.prob)).sum();
    let h_xy: f64 = xy.iter().flatten().map(|g| fmath::xlog2x(g.prob)).sum();
    let h_x: f64 = xs.iter().flatten().map(|g| fmath::xlog2x(g.prob)).sum();

    let binary = entries.iter().all(|e| e.x < 2);
    let (z_b, z_yb) = if binary {
        let zb = match (
            xs.first().and_then(|g| g.as_ref()),
            xs.get(1).and_then(|g| g.as_ref()),
        ) {
            // sqrt(p0 p1) ||sqrt(rho0) sqrt(rho1)||_1 = ||sqrt(p0 rho0) sqrt(p1 rho1)||_1
            (Some(g0), Some(g1)) => 2.0 * psd_sqrt_fidelity(&g0.state, &g1.state)?,
            _ => 0.0,
        };
        let mut zyb = 0.0;
        for y in 0..ny {
            if let (Some(Some(g0)), Some(Some(g1))) = (xy.get(y), xy.get(ny + y)) {
                zyb += 2.0 * psd_sqrt_fidelity(&g0.state, &g1.state)?;
            }
        }
        (Some(zb), Some(zyb))
    } else {
        (None, None)
    };

    Ok(ConditionalQuantities {
        h_x_given_b: h_xb - h_b,
        h_x_given_yb: h_xyb - h_yb,
        i_x_b: h_x + h_b - h_xb,
        i_x_b_given_y: h_xy + h_yb - h_y - h_xyb,
        z_x_given_b: z_b,
        z_x_given_yb: z_yb,
    })
}
