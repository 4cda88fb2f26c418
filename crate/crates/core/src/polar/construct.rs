use alloc::vec::Vec;

use super::split::{split_params, SplitParams};
use super::transform::{CodeOrigin, PolarCode};
use crate::budget::Budget;
use crate::channels::CqChannel;
use crate::error::{Error, Result};

/// Indices of the `k` smallest values, ties to the lower index, sorted.
pub fn smallest_k(values: &[f64], k: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let mut chosen: Vec<usize> = order.into_iter().take(k).collect();
    chosen.sort_unstable();
    chosen
}

/// Polar coding rule applied to precomputed parameters.
pub fn construct_from_params(params: &[SplitParams], k: usize) -> Result<PolarCode> {
    let len = params.len();
    if k > len {
        return Err(Error::InvalidArgument(alloc::format!(
            "K = {k} exceeds N = {len}"
        )));
    }
    let sf: Vec<f64> = params.iter().map(|p| p.sqrt_fidelity).collect();
    let info = smallest_k(&sf, k);
    PolarCode::new(
        len,
        info,
        alloc::vec![0; len],
        CodeOrigin::Fidelity { sqrt_fidelity: sf },
    )
}

/// Information set = the `k` indices with the smallest `sqrtF(W_N^(i))`.
pub fn construct(w: &CqChannel, len: usize, k: usize, budget: &Budget) -> Result<PolarCode> {
    let params = split_params(w, len, budget)?;
    construct_from_params(&params, k)
}

/// `max_{i in A} sqrtF(i) <= min_{j not in A} sqrtF(j)`.
pub fn satisfies_coding_rule(code: &PolarCode, sqrt_fidelity: &[f64]) -> bool {
    let max_in = code
        .info_set()
        .iter()
        .map(|&i| sqrt_fidelity[i])
        .fold(f64::NEG_INFINITY, f64::max);
    let min_out = code
        .frozen_set()
        .iter()
        .map(|&j| sqrt_fidelity[j])
        .fold(f64::INFINITY, f64::min);
    max_in <= min_out
}
