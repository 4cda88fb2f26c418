//! Monotone chain rules for the binary-input cq multiple-access channel.
//!
//! A [`DecodePath`] interleaves the senders' polarized bits `U^N, V^N, ..`
//! into a single decoding order `S^{kN}`. With uniform inputs and `x = u G_N`
//! per sender, every term `I(S_k; B^N | S^{k-1})` is computed from the exact
//! prefix-averaged states `rho_bar_{s^k}`:
//! `I(S_k; B^N | S^{k-1}) = avg S(rho_bar_{s^{k-1}}) - avg S(rho_bar_{s^k})`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::bits::to_bits;
use crate::budget::Budget;
use crate::channels::CqMac;
use crate::error::{Error, Result};
use crate::polar::{Branch, PolarCode, PolarTransform};
use crate::qmath::{holevo_information, psd_sqrt, spectral_entropy, DensityMatrix, Hermitian};
use crate::sc::{sequential_bytes, BlockError, ExactDecode, SequentialDecoder};
use crate::TOL_CHAIN;

/// Interleaving of `users` senders' bit sequences, each of length `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DecodePath {
    symbols: Vec<u8>,
    users: usize,
}

impl DecodePath {
    /// Every sender in `0..users` must appear the same number of times.
    pub fn new(symbols: Vec<u8>, users: usize) -> Result<Self> {
        if users == 0 || symbols.is_empty() {
            return Err(Error::NonMonotonePath("empty path".into()));
        }
        if let Some(&b) = symbols.iter().find(|&&b| b as usize >= users) {
            return Err(Error::NonMonotonePath(alloc::format!(
                "symbol {b} with {users} senders"
            )));
        }
        let mut counts = vec![0usize; users];
        for &b in &symbols {
            counts[b as usize] += 1;
        }
        if counts.iter().any(|&c| c != counts[0]) {
            return Err(Error::NonMonotonePath(alloc::format!(
                "unequal sender counts {counts:?}"
            )));
        }
        Ok(DecodePath { symbols, users })
    }

    /// Parses a string over the digits `0..users`.
    pub fn parse(s: &str, users: usize) -> Result<Self> {
        let mut symbols = Vec::with_capacity(s.len());
        for c in s.chars() {
            let d = c
                .to_digit(10)
                .ok_or_else(|| Error::NonMonotonePath(alloc::format!("bad symbol {c:?}")))?;
            symbols.push(d as u8);
        }
        Self::new(symbols, users)
    }

    /// `s_0^n s_1^n ..`: senders decoded one after another in `order`.
    pub fn sequential(order: &[u8], n: usize) -> Result<Self> {
        let symbols = order
            .iter()
            .flat_map(|&b| core::iter::repeat_n(b, n))
            .collect();
        Self::new(symbols, order.len())
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn users(&self) -> usize {
        self.users
    }

    /// Bits per sender.
    pub fn n(&self) -> usize {
        self.symbols.len() / self.users
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// `(sender, index within sender)` of every step.
    pub fn positions(&self) -> Vec<(usize, usize)> {
        let mut seen = vec![0usize; self.users];
        self.symbols
            .iter()
            .map(|&b| {
                let b = b as usize;
                seen[b] += 1;
                (b, seen[b] - 1)
            })
            .collect()
    }

    /// Neighbors differ by one transposition `b_i <-> b_j` (`b_i != b_j`)
    /// whose interior `b_{i+1} .. b_{j-1}` is constant.
    pub fn is_neighbor(&self, other: &DecodePath) -> bool {
        if self.users != other.users || self.len() != other.len() {
            return false;
        }
        let diff: Vec<usize> = (0..self.len())
            .filter(|&k| self.symbols[k] != other.symbols[k])
            .collect();
        if diff.len() != 2 {
            return false;
        }
        let (i, j) = (diff[0], diff[1]);
        let swapped = self.symbols[i] == other.symbols[j] && self.symbols[j] == other.symbols[i];
        let inner = &self.symbols[i + 1..j];
        swapped
            && inner
                .iter()
                .all(|&b| b == inner.first().copied().unwrap_or(b))
    }

    /// Step bits `s^{kN}` from per-sender inputs.
    pub fn interleave(&self, inputs: &[Vec<u8>]) -> Result<Vec<u8>> {
        if inputs.len() != self.users {
            return Err(Error::LengthMismatch {
                expected: self.users,
                found: inputs.len(),
            });
        }
        if let Some(u) = inputs.iter().find(|u| u.len() != self.n()) {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                found: u.len(),
            });
        }
        Ok(self
            .positions()
            .into_iter()
            .map(|(b, i)| inputs[b][i])
            .collect())
    }

    /// Inverse of [`DecodePath::interleave`].
    pub fn deinterleave(&self, bits: &[u8]) -> Vec<Vec<u8>> {
        let mut out = vec![vec![0u8; self.n()]; self.users];
        for ((b, i), &s) in self.positions().into_iter().zip(bits) {
            out[b][i] = s;
        }
        out
    }
}

impl fmt::Display for DecodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.symbols {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// Per-sender rates of a path and the chain-rule terms behind them.
#[derive(Clone, Debug, PartialEq)]
pub struct RatePoint {
    /// `R_b = (1/N) sum_{k: b_k = b} I(S_k; B^N | S^{k-1})`.
    pub rates: Vec<f64>,
    /// `I(S_k; B^N | S^{k-1})` per step.
    pub terms: Vec<f64>,
    /// Single-letter `I(X_1 .. X_k; B)` under uniform inputs.
    pub sum_information: f64,
}

impl RatePoint {
    pub fn sum_rate(&self) -> f64 {
        self.rates.iter().sum()
    }
}

fn check_mac(mac: &CqMac, path: &DecodePath) -> Result<()> {
    if !mac.is_binary() {
        let a = mac
            .alphabets()
            .iter()
            .copied()
            .find(|&a| a != 2)
            .unwrap_or(0);
        return Err(Error::NonBinaryInput { alphabet: a });
    }
    if mac.users() != path.users() {
        return Err(Error::DimMismatch {
            expected: mac.users(),
            found: path.users(),
        });
    }
    PolarTransform::new(path.n())?;
    Ok(())
}

fn block_dim(mac: &CqMac, n: usize, budget: &Budget) -> Result<usize> {
    mac.output_dim()
        .checked_pow(n as u32)
        .ok_or(Error::BudgetExceeded {
            required: u64::MAX,
            budget: budget.bytes,
        })
}

fn is_diagonal(mac: &CqMac) -> bool {
    mac.outputs().iter().all(|r| r.is_diagonal())
}

/// Output states `rho_{x(s)}` on `B^N` for every step-bit vector `s`, in
/// path order.
pub fn path_leaves(mac: &CqMac, path: &DecodePath, budget: &Budget) -> Result<Vec<Hermitian>> {
    check_mac(mac, path)?;
    let n = path.n();
    let steps = path.len();
    if steps >= usize::BITS as usize - 1 {
        return Err(Error::BudgetExceeded {
            required: u64::MAX,
            budget: budget.bytes,
        });
    }
    let dim = block_dim(mac, n, budget)?;
    budget.check(sequential_bytes(steps, dim, is_diagonal(mac)))?;
    let t = PolarTransform::new(n)?;
    let users = path.users();
    let mut out = Vec::with_capacity(1 << steps);
    for s in 0..1usize << steps {
        let mut xs = path.deinterleave(&to_bits(s, steps));
        for x in &mut xs {
            t.apply(x);
        }
        let mut acc = Hermitian::diagonal(vec![1.0]);
        let mut tuple = vec![0usize; users];
        for j in 0..n {
            for (b, x) in xs.iter().enumerate() {
                tuple[b] = x[j] as usize;
            }
            acc = acc.kron(mac.output(&tuple));
        }
        out.push(acc);
    }
    Ok(out)
}

/// `I(X_1 .. X_k; B)` for uniform independent inputs.
pub fn sum_information(mac: &CqMac) -> Result<f64> {
    let m = mac.outputs().len();
    holevo_information(&vec![1.0 / m as f64; m], mac.outputs())
}

fn average_pairs(level: &[Hermitian]) -> Vec<Hermitian> {
    (0..level.len() / 2)
        .map(|p| {
            let mut s = level[2 * p].scaled(0.5);
            s.add_scaled(0.5, &level[2 * p + 1]);
            s.recanonicalize()
        })
        .collect()
}

fn mean_entropy(level: &[Hermitian]) -> Result<f64> {
    let mut acc = 0.0;
    for h in level {
        acc += spectral_entropy(h)?;
    }
    Ok(acc / level.len() as f64)
}

/// Exact rates of a monotone chain rule; fails with `InvariantViolation` if
/// the terms do not sum to `N I(X..;B)` within `TOL_CHAIN`.
pub fn chain_rule_rates(mac: &CqMac, path: &DecodePath, budget: &Budget) -> Result<RatePoint> {
    let mut level = path_leaves(mac, path, budget)?;
    let steps = path.len();
    let mut avg = vec![0.0; steps + 1];
    avg[steps] = mean_entropy(&level)?;
    for d in (0..steps).rev() {
        level = average_pairs(&level);
        avg[d] = mean_entropy(&level)?;
    }
    let terms: Vec<f64> = (0..steps).map(|k| avg[k] - avg[k + 1]).collect();
    let n = path.n() as f64;
    let mut rates = vec![0.0; path.users()];
    for (&b, t) in path.symbols().iter().zip(&terms) {
        rates[b as usize] += t / n;
    }
    let sum_information = sum_information(mac)?;
    let total: f64 = terms.iter().sum();
    if (total - n * sum_information).abs() > TOL_CHAIN {
        return Err(Error::InvariantViolation {
            index: 0,
            detail: alloc::format!(
                "chain rule sums to {total}, expected {}",
                n * sum_information
            ),
        });
    }
    Ok(RatePoint {
        rates,
        terms,
        sum_information,
    })
}

/// `avg_p ||sqrt(rho_bar_{p0}) sqrt(rho_bar_{p1})||_1` at every step of the
/// path, the fidelity parameter of each step's split channel.
pub fn path_sqrt_fidelity(mac: &CqMac, path: &DecodePath, budget: &Budget) -> Result<Vec<f64>> {
    let mut level = path_leaves(mac, path, budget)?;
    let mut out = vec![0.0; path.len()];
    for d in (0..path.len()).rev() {
        let mut acc = 0.0;
        for pair in level.chunks(2) {
            acc += psd_sqrt(&pair[0])?.product_trace_norm(&psd_sqrt(&pair[1])?);
        }
        out[d] = (acc / (level.len() / 2) as f64).min(1.0);
        level = average_pairs(&level);
    }
    Ok(out)
}

/// `|R_u - R'_u|` for two-sender paths, after checking it equals
/// `|R_v - R'_v|` within `TOL_CHAIN`.
pub fn path_distance(
    p1: &DecodePath,
    p2: &DecodePath,
    mac: &CqMac,
    budget: &Budget,
) -> Result<f64> {
    if p1.users() != 2 || p2.users() != 2 || p1.len() != p2.len() {
        return Err(Error::InvalidArgument(
            "path distance needs two-sender paths of equal length".into(),
        ));
    }
    let a = chain_rule_rates(mac, p1, budget)?;
    let b = chain_rule_rates(mac, p2, budget)?;
    let du = (a.rates[0] - b.rates[0]).abs();
    let dv = (a.rates[1] - b.rates[1]).abs();
    if (du - dv).abs() > TOL_CHAIN {
        return Err(Error::InvariantViolation {
            index: 0,
            detail: alloc::format!("|dR_u| = {du} but |dR_v| = {dv}"),
        });
    }
    Ok(du)
}

/// `{ 0^i 1^N 0^{N-i} : 0 <= i <= N }` in increasing `i`.
pub fn nu_class_paths(n: usize) -> Result<Vec<DecodePath>> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    (0..=n)
        .map(|i| {
            let mut s = vec![0u8; i];
            s.extend(core::iter::repeat_n(1u8, n));
            s.extend(core::iter::repeat_n(0u8, n - i));
            DecodePath::new(s, 2)
        })
        .collect()
}

/// Every symbol repeated `k` times.
pub fn scale_path(path: &DecodePath, k: usize) -> Result<DecodePath> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "scale factor must be positive".into(),
        ));
    }
    DecodePath::new(
        path.symbols()
            .iter()
            .flat_map(|&b| core::iter::repeat_n(b, k))
            .collect(),
        path.users(),
    )
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingCheck {
    pub rates_b: RatePoint,
    pub rates_2b: RatePoint,
}

/// Rates of `b` at `N` and of `2b` at `2N`; fails if they differ by more than
/// `TOL_CHAIN`.
pub fn scaling_rate_invariance(
    mac: &CqMac,
    path: &DecodePath,
    budget: &Budget,
) -> Result<ScalingCheck> {
    let rates_b = chain_rule_rates(mac, path, budget)?;
    let rates_2b = chain_rule_rates(mac, &scale_path(path, 2)?, budget)?;
    for (k, (a, b)) in rates_b.rates.iter().zip(&rates_2b.rates).enumerate() {
        if (a - b).abs() > TOL_CHAIN {
            return Err(Error::InvariantViolation {
                index: k,
                detail: alloc::format!("rate {a} at N vs {b} at 2N"),
            });
        }
    }
    Ok(ScalingCheck { rates_b, rates_2b })
}

/// The channel decoded at one step of a path: branches over the previously
/// decoded bits, each with the two conditioned average states.
#[derive(Clone, Debug)]
pub struct MacSplitChannel {
    pub step: usize,
    pub sender: usize,
    /// Index of the decoded bit within its sender's sequence.
    pub index: usize,
    /// Bits of each sender decoded before this step.
    pub decoded_before: Vec<usize>,
    pub branches: Vec<Branch>,
}

pub fn mac_split_channel(
    mac: &CqMac,
    path: &DecodePath,
    step: usize,
    budget: &Budget,
) -> Result<MacSplitChannel> {
    if step >= path.len() {
        return Err(Error::InvalidArgument(alloc::format!(
            "step {step} out of range"
        )));
    }
    let mut level = path_leaves(mac, path, budget)?;
    for _ in step + 1..path.len() {
        level = average_pairs(&level);
    }
    let w = 1.0 / (1u64 << (step + 1)) as f64;
    let branches = (0..1usize << step)
        .map(|p| Branch {
            prefix: to_bits(p, step),
            weight: [w, w],
            states: [
                DensityMatrix::from_hermitian_unchecked(level[2 * p].clone()),
                DensityMatrix::from_hermitian_unchecked(level[2 * p + 1].clone()),
            ],
        })
        .collect();
    let positions = path.positions();
    let (sender, index) = positions[step];
    let mut decoded_before = vec![0usize; path.users()];
    for &(b, _) in &positions[..step] {
        decoded_before[b] += 1;
    }
    Ok(MacSplitChannel {
        step,
        sender,
        index,
        decoded_before,
        branches,
    })
}

/// Per-sender codes decoded jointly along a path.
#[derive(Clone, Debug, PartialEq)]
pub struct MacCode {
    pub codes: Vec<PolarCode>,
    pub path: DecodePath,
}

impl MacCode {
    pub fn new(codes: Vec<PolarCode>, path: DecodePath) -> Result<Self> {
        if codes.len() != path.users() {
            return Err(Error::LengthMismatch {
                expected: path.users(),
                found: codes.len(),
            });
        }
        if let Some(c) = codes.iter().find(|c| c.len() != path.n()) {
            return Err(Error::LengthMismatch {
                expected: path.n(),
                found: c.len(),
            });
        }
        Ok(MacCode { codes, path })
    }

    /// Information flags in path order.
    pub fn step_info(&self) -> Vec<bool> {
        self.path
            .positions()
            .into_iter()
            .map(|(b, i)| self.codes[b].is_info(i))
            .collect()
    }

    pub fn decoder(&self, mac: &CqMac, budget: &Budget) -> Result<SequentialDecoder> {
        let leaves = path_leaves(mac, &self.path, budget)?;
        SequentialDecoder::new(leaves, self.step_info())
    }
}

/// Exact joint SC decoding of per-sender inputs, which must agree with each
/// code's frozen values.
pub fn mac_sc_decode_exact(
    code: &MacCode,
    mac: &CqMac,
    inputs: &[Vec<u8>],
    budget: &Budget,
) -> Result<ExactDecode> {
    let bits = code.path.interleave(inputs)?;
    for (b, (c, u)) in code.codes.iter().zip(inputs).enumerate() {
        for i in c.frozen_set() {
            if u[i] != c.frozen_values()[i] {
                return Err(Error::InvalidArgument(alloc::format!(
                    "sender {b}: u[{i}] differs from the frozen value"
                )));
            }
        }
    }
    code.decoder(mac, budget)?.decode_tree(&bits)
}

/// Joint block error averaged over all inputs of all senders.
pub fn mac_block_error(code: &MacCode, mac: &CqMac, budget: &Budget) -> Result<BlockError> {
    let dec = code.decoder(mac, budget)?;
    let steps = code.path.len();
    let terms = (0..1usize << steps)
        .map(|s| dec.input_terms(&to_bits(s, steps)))
        .collect::<Result<Vec<_>>>()?;
    Ok(dec.summarize(&terms, code.codes.iter().map(|c| c.k()).sum()))
}

/// Monotone interleavings of `k` senders with `n` bits each, in
/// lexicographic order.
#[derive(Clone, Debug)]
pub struct KUserPaths {
    next: Option<Vec<u8>>,
    users: usize,
}

impl Iterator for KUserPaths {
    type Item = DecodePath;

    fn next(&mut self) -> Option<DecodePath> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        if next_permutation(&mut succ) {
            self.next = Some(succ);
        }
        Some(DecodePath {
            symbols: cur,
            users: self.users,
        })
    }
}

fn next_permutation(v: &mut [u8]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len())
        .rev()
        .find(|&j| v[j] > v[i - 1])
        .expect("pivot has a successor");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Largest `k N` for which the path lattice is enumerated.
pub const MAX_LATTICE_STEPS: usize = 20;

pub fn kuser_paths(k: usize, n: usize) -> Result<KUserPaths> {
    if k < 2 || n == 0 {
        return Err(Error::InvalidArgument(
            "path lattice needs k >= 2 and N >= 1".into(),
        ));
    }
    if k * n > MAX_LATTICE_STEPS {
        return Err(Error::BudgetExceeded {
            required: (k * n) as u64,
            budget: MAX_LATTICE_STEPS as u64,
        });
    }
    let first = (0..k as u8)
        .flat_map(|b| core::iter::repeat_n(b, n))
        .collect();
    Ok(KUserPaths {
        next: Some(first),
        users: k,
    })
}

/// `(kN)! / (N!)^k`.
pub fn lattice_size(k: usize, n: usize) -> u128 {
    let mut total: u128 = 1;
    let mut placed = 0u128;
    for _ in 0..k {
        for j in 1..=n as u128 {
            placed += 1;
            total = total * placed / j;
        }
    }
    total
}

/// Path literal for CSV export.
pub fn path_literal(path: &DecodePath) -> String {
    alloc::format!("{path}")
}
