use alloc::vec::Vec;

use super::classical::PairChannel;
use super::prefix::{tree_stats, Letters, TreeStats};
use super::transform::PolarTransform;
use crate::bits::to_bits;
use crate::budget::Budget;
use crate::channels::CqChannel;
use crate::error::{Error, Result};
use crate::qmath::{holevo_information, sqrt_fidelity, DensityMatrix, Hermitian};

/// Per-index parameters of a synthesized channel `W_N^(i)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SplitParams {
    /// Holevo information `I(U_i; U^{i-1} B^N)` under uniform inputs.
    pub mutual_information: f64,
    /// `||sqrt(rho_{(i),0}) sqrt(rho_{(i),1})||_1` between the block states.
    pub sqrt_fidelity: f64,
}

/// One classical branch `u_1..u_{i-1}` of a synthesized channel.
#[derive(Clone, Debug)]
pub struct Branch {
    pub prefix: Vec<u8>,
    /// Joint probabilities `P(prefix, u_i = 0)`, `P(prefix, u_i = 1)`.
    pub weight: [f64; 2],
    /// Normalized tail-averaged states on `B^N` for `u_i = 0, 1`.
    pub states: [DensityMatrix; 2],
}

/// Exact output ensemble of `W_N^(i)`.
#[derive(Clone, Debug)]
pub struct SplitChannel {
    pub len: usize,
    /// 0-based index.
    pub index: usize,
    pub branches: Vec<Branch>,
}

impl SplitChannel {
    /// Holevo information of the `u_i` ensemble with the branch register.
    pub fn mutual_information(&self) -> Result<f64> {
        let mut total = 0.0;
        let mut p_u = [0.0; 2];
        for b in &self.branches {
            let w = b.weight[0] + b.weight[1];
            if w == 0.0 {
                continue;
            }
            p_u[0] += b.weight[0];
            p_u[1] += b.weight[1];
            let prior = [b.weight[0] / w, b.weight[1] / w];
            total += w * holevo_information(&prior, &b.states)?;
        }
        // I(U_i; U^{i-1} B) = I(U_i; U^{i-1}) + I(U_i; B | U^{i-1}).
        let h_u = crate::fmath::shannon_entropy(&p_u);
        let h_u_given_prefix: f64 = self
            .branches
            .iter()
            .map(|b| {
                let w = b.weight[0] + b.weight[1];
                if w == 0.0 {
                    0.0
                } else {
                    w * crate::fmath::binary_entropy(b.weight[0] / w)
                }
            })
            .sum();
        Ok(h_u - h_u_given_prefix + total)
    }

    /// `sum_b sqrt(P(b,0) P(b,1)) ||sqrt(rho_b0) sqrt(rho_b1)||_1 * 2`, which is
    /// the trace-norm overlap of the two block states under uniform weights.
    pub fn sqrt_fidelity(&self) -> Result<f64> {
        let mut z = 0.0;
        for b in &self.branches {
            z += 2.0
                * crate::fmath::sqrt(b.weight[0] * b.weight[1])
                * sqrt_fidelity(&b.states[0], &b.states[1])?;
        }
        Ok(z)
    }

    /// Block-diagonal states `sum_b P(b|u) |b><b| (x) rho_{b,u}` on
    /// `U^{i-1} B^N`.
    pub fn block_states(&self) -> Result<[DensityMatrix; 2]> {
        let mut out = Vec::with_capacity(2);
        for u in 0..2 {
            let total: f64 = self.branches.iter().map(|b| b.weight[u]).sum();
            let mut acc: Option<Hermitian> = None;
            for (k, b) in self.branches.iter().enumerate() {
                let mut e = alloc::vec![0.0; self.branches.len()];
                e[k] = b.weight[u] / total;
                let block = Hermitian::diagonal(e).kron(&b.states[u]);
                match &mut acc {
                    Some(a) => a.add_scaled(1.0, &block),
                    None => acc = Some(block),
                }
            }
            out.push(DensityMatrix::new(acc.unwrap().recanonicalize())?);
        }
        let s1 = out.pop().unwrap();
        let s0 = out.pop().unwrap();
        Ok([s0, s1])
    }
}

fn check_len_index(len: usize, i: usize) -> Result<PolarTransform> {
    let t = PolarTransform::new(len)?;
    if i >= len {
        return Err(Error::InvalidArgument(alloc::format!(
            "index {i} out of range for N = {len}"
        )));
    }
    Ok(t)
}

/// Explicit split channel with all branch states, under input prior
/// `P(x = 1) = q` per letter (`q = 1/2` gives the usual uniform split).
pub fn split_channel_shaped(
    w: &CqChannel,
    len: usize,
    i: usize,
    q: f64,
    budget: &Budget,
) -> Result<SplitChannel> {
    w.require_binary()?;
    check_len_index(len, i)?;
    let d = (w.output_dim() as u64).saturating_pow(len as u32);
    budget.check(Budget::dense_states(1u64 << (i + 1), d))?;
    let letters = Letters::from_channel(w.output(0), w.output(1), q)?;
    let mut branches = Vec::with_capacity(1 << i);
    for b in 0..1usize << i {
        let prefix = to_bits(b, i);
        let mut states = Vec::with_capacity(2);
        let mut weight = [0.0; 2];
        for u in 0..2u8 {
            let mut p = prefix.clone();
            p.push(u);
            let node = letters.node(len, &p)?;
            let t = node.trace();
            weight[u as usize] = t;
            let rho = if t > 0.0 {
                node.scaled(1.0 / t)
            } else {
                Hermitian::identity(node.dim()).scaled(1.0 / node.dim() as f64)
            };
            states.push(DensityMatrix::from_hermitian_unchecked(rho));
        }
        let s1 = states.pop().unwrap();
        let s0 = states.pop().unwrap();
        branches.push(Branch {
            prefix,
            weight,
            states: [s0, s1],
        });
    }
    Ok(SplitChannel {
        len,
        index: i,
        branches,
    })
}

/// `W_N^(i+1)` for 0-based `i` under uniform inputs.
pub fn split_channel(w: &CqChannel, len: usize, i: usize, budget: &Budget) -> Result<SplitChannel> {
    split_channel_shaped(w, len, i, 0.5, budget)
}

/// Per-index parameters from the polarization tree of a uniform-input channel.
pub fn params_from_tree(stats: &TreeStats) -> Vec<SplitParams> {
    (0..stats.len())
        .map(|i| SplitParams {
            mutual_information: stats.mutual_information(i),
            sqrt_fidelity: stats.bhattacharyya(i),
        })
        .collect()
}

/// Parameters by exact evaluation of the polarization tree (any output type).
pub fn tree_split_params(w: &CqChannel, len: usize, budget: &Budget) -> Result<Vec<SplitParams>> {
    w.require_binary()?;
    let letters = Letters::from_channel(w.output(0), w.output(1), 0.5)?;
    Ok(params_from_tree(&tree_stats(&letters, len, budget)?))
}

/// Parameters by the classical minus/plus recursion (diagonal channels only).
pub fn classical_split_params(w: &CqChannel, len: usize) -> Result<Vec<SplitParams>> {
    w.require_binary()?;
    let rows = w
        .diagonal_rows()
        .ok_or_else(|| Error::InvalidArgument("channel outputs are not diagonal".into()))?;
    let base = PairChannel::from_rows(&rows)?;
    PolarTransform::new(len)?;
    let n = len.trailing_zeros();
    // Breadth-first over the recursion tree shares every intermediate channel.
    let mut level = alloc::vec![base];
    for _ in 0..n {
        let mut next = Vec::with_capacity(level.len() * 2);
        for c in &level {
            next.push(c.minus());
            next.push(c.plus());
        }
        level = next;
    }
    Ok(level
        .iter()
        .map(|c| SplitParams {
            mutual_information: c.mutual_information(),
            sqrt_fidelity: c.bhattacharyya(),
        })
        .collect())
}

/// `I(W_N^(i))` and `sqrtF(W_N^(i))` for every index. Diagonal channels use
/// the classical recursion; others the exact polarization tree.
pub fn split_params(w: &CqChannel, len: usize, budget: &Budget) -> Result<Vec<SplitParams>> {
    if w.diagonal_rows().is_some() {
        classical_split_params(w, len)
    } else {
        tree_split_params(w, len, budget)
    }
}

/// `(sum_i I(W_N^(i)), N I(W))`.
pub fn conservation_check(w: &CqChannel, len: usize, budget: &Budget) -> Result<(f64, f64)> {
    let p = split_params(w, len, budget)?;
    let sum: f64 = p.iter().map(|s| s.mutual_information).sum();
    Ok((sum, len as f64 * w.symmetric_holevo()))
}
