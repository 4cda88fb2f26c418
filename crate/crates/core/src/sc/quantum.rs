use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::bits::{from_bits, to_bits};
use crate::budget::Budget;
use crate::channels::CqChannel;
use crate::error::{Error, Result};
use crate::fmath;
use crate::polar::{PolarCode, PolarTransform};
use crate::qmath::{nonneg_eigenspace_projector, psd_sqrt, Hermitian, Projector};
use crate::TOL_CHAIN;

/// Sequential binary measurements over `L` steps with leaf states indexed by
/// the step bits (MSB-first).
///
/// `pi0[i][p]` is the projector deciding bit `i` = 0 after the prefix `p`;
/// the projector for 1 is its complement. Only information steps carry
/// projectors: frozen steps measure the identity and take the true value.
#[derive(Clone, Debug)]
pub struct SequentialDecoder {
    info: Vec<bool>,
    dim: usize,
    leaves: Vec<Hermitian>,
    pi0: Vec<Vec<Projector>>,
    /// `sqrtF` of the step channel at information steps.
    sqrt_fidelity: Vec<Option<f64>>,
    /// `avg_p tr((I - Pi_{p,b}) rho_{pb})` over prefixes and `b`, per step.
    averaged_error: Vec<f64>,
}

/// Exact sequential-measurement SC decoder for a binary cq channel.
#[derive(Clone, Debug)]
pub struct QuantumScDecoder {
    code: PolarCode,
    seq: SequentialDecoder,
}

/// One leaf of the measurement outcome tree.
#[derive(Clone, Debug, PartialEq)]
pub struct DecodingTranscript {
    pub input: Vec<u8>,
    pub decoded: Vec<u8>,
    /// Conditional probability of each step's outcome (1 at frozen steps).
    pub step_probabilities: Vec<f64>,
    pub probability: f64,
    pub success: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExactDecode {
    /// `tr(Pi_N .. Pi_1 rho Pi_1 .. Pi_N)` with projectors conditioned on the
    /// true prior bits.
    pub genie_success: f64,
    /// Total probability of the leaves with `u_hat = u`.
    pub success: f64,
    pub leaves: Vec<DecodingTranscript>,
}

/// Per-input ingredients of the block-error average.
#[derive(Clone, Debug, PartialEq)]
pub struct InputTerms {
    pub success: f64,
    /// `tr((I - Pi_i) rho_{u^N})` per step.
    pub step_error: Vec<f64>,
}

/// A numerically checked step of the bound derivation.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainCheck {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockError {
    pub len: usize,
    pub k: usize,
    /// Uniform average over `u^N` of `1 - success`.
    pub p_error: f64,
    /// `4 sum_i avg_u tr((I - Pi_i) rho)`.
    pub gao_bound: f64,
    /// `avg_u 2 sqrt(sum_i tr((I - Pi_i) rho))`.
    pub sen_bound: f64,
    /// `2 sum_{i in A} sqrtF(W_N^(i))`.
    pub fidelity_bound: f64,
    pub step_error: Vec<f64>,
    pub sqrt_fidelity: Vec<Option<f64>>,
    pub chain: Vec<ChainCheck>,
}

impl BlockError {
    pub fn chain_holds(&self) -> bool {
        self.chain.iter().all(|c| c.holds)
    }
}

fn check_le(label: &str, lhs: f64, rhs: f64, tol: f64) -> ChainCheck {
    ChainCheck {
        label: label.into(),
        lhs,
        rhs,
        holds: lhs <= rhs + tol,
    }
}

/// Bytes for the prefix tree and projectors of `2^steps` leaves of `dim`.
pub(crate) fn sequential_bytes(steps: usize, dim: usize, diagonal: bool) -> u64 {
    let per_state = if diagonal {
        8 * dim as u64
    } else {
        16 * (dim as u64).saturating_mul(dim as u64)
    };
    per_state.saturating_mul(4u64.checked_shl(steps as u32).unwrap_or(u64::MAX))
}

impl SequentialDecoder {
    /// `leaves[s]` is the (normalized) output state when the step bits are
    /// `s`; `info[i]` marks the measured steps.
    pub fn new(leaves: Vec<Hermitian>, info: Vec<bool>) -> Result<Self> {
        let steps = info.len();
        if leaves.len() != 1usize << steps {
            return Err(Error::LengthMismatch {
                expected: 1 << steps,
                found: leaves.len(),
            });
        }
        let dim = leaves[0].dim();
        let mut level = leaves.clone();
        let mut pi0: Vec<Vec<Projector>> = vec![Vec::new(); steps];
        let mut sqrt_fidelity = vec![None; steps];
        let mut averaged_error = vec![0.0; steps];
        for i in (0..steps).rev() {
            // `level` holds rho_bar for prefixes of length i + 1.
            if info[i] {
                let mut projs = Vec::with_capacity(1 << i);
                let mut fid = 0.0;
                let mut err = 0.0;
                for p in 0..1usize << i {
                    let (r0, r1) = (&level[2 * p], &level[2 * p + 1]);
                    let s0 = psd_sqrt(r0)?;
                    let s1 = psd_sqrt(r1)?;
                    let proj = nonneg_eigenspace_projector(&s0.sub(&s1));
                    fid += s0.product_trace_norm(&s1);
                    err += 0.5 * ((r0.trace() - proj.trace_product(r0)) + proj.trace_product(r1));
                    projs.push(proj);
                }
                let branches = (1usize << i) as f64;
                sqrt_fidelity[i] = Some(fid / branches);
                averaged_error[i] = err / branches;
                pi0[i] = projs;
            }
            level = (0..1usize << i)
                .map(|p| {
                    let mut s = level[2 * p].scaled(0.5);
                    s.add_scaled(0.5, &level[2 * p + 1]);
                    s.recanonicalize()
                })
                .collect();
        }
        Ok(SequentialDecoder {
            info,
            dim,
            leaves,
            pi0,
            sqrt_fidelity,
            averaged_error,
        })
    }

    pub fn steps(&self) -> usize {
        self.info.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn info(&self) -> &[bool] {
        &self.info
    }

    /// `sqrtF` of each information step's channel (averaged over prefixes).
    pub fn sqrt_fidelity(&self) -> &[Option<f64>] {
        &self.sqrt_fidelity
    }

    /// Projector for outcome `value` at step `i` after `prefix`; the identity
    /// at frozen steps.
    pub fn projector(&self, i: usize, prefix: &[u8], value: u8) -> Projector {
        if !self.info[i] {
            return Projector::identity(self.dim);
        }
        let p0 = &self.pi0[i][from_bits(&prefix[..i])];
        if value == 0 {
            p0.clone()
        } else {
            p0.complement()
        }
    }

    fn projector_ref(&self, i: usize, prefix_int: usize, value: u8) -> Option<Hermitian> {
        if !self.info[i] {
            return None;
        }
        let p0 = &self.pi0[i][prefix_int];
        Some(if value == 0 {
            p0.as_hermitian().clone()
        } else {
            p0.complement().as_hermitian().clone()
        })
    }

    fn check_bits(&self, bits: &[u8]) -> Result<()> {
        if bits.len() != self.steps() {
            return Err(Error::LengthMismatch {
                expected: self.steps(),
                found: bits.len(),
            });
        }
        Ok(())
    }

    pub fn leaf(&self, bits: &[u8]) -> Result<&Hermitian> {
        self.check_bits(bits)?;
        Ok(&self.leaves[from_bits(bits)])
    }

    /// Genie success and per-step error terms for true step bits `bits`.
    pub fn input_terms(&self, bits: &[u8]) -> Result<InputTerms> {
        let rho = self.leaf(bits)?;
        let mut sigma = rho.clone();
        let mut step_error = vec![0.0; self.steps()];
        let total = rho.trace();
        for i in 0..self.steps() {
            if let Some(p) = self.projector_ref(i, from_bits(&bits[..i]), bits[i]) {
                step_error[i] = total - p.trace_product(rho);
                sigma = sigma.sandwich(&p);
            }
        }
        Ok(InputTerms {
            success: sigma.trace(),
            step_error,
        })
    }

    /// Full outcome tree for true step bits `bits`; frozen steps take their
    /// true values, which the decoder knows.
    pub fn decode_tree(&self, bits: &[u8]) -> Result<ExactDecode> {
        let rho = self.leaf(bits)?.clone();
        let genie_success = self.input_terms(bits)?.success;
        let steps = self.steps();
        let mut leaves = Vec::new();
        let mut stack: Vec<(usize, Vec<u8>, Hermitian, Vec<f64>)> =
            vec![(0, Vec::new(), rho, Vec::new())];
        while let Some((i, prefix, sigma, probs)) = stack.pop() {
            if i == steps {
                let probability = sigma.trace();
                let success = prefix == bits;
                leaves.push(DecodingTranscript {
                    input: bits.to_vec(),
                    decoded: prefix,
                    step_probabilities: probs,
                    probability,
                    success,
                });
                continue;
            }
            if !self.info[i] {
                let mut next = prefix.clone();
                next.push(bits[i]);
                let mut pr = probs.clone();
                pr.push(1.0);
                stack.push((i + 1, next, sigma, pr));
                continue;
            }
            let mass = sigma.trace();
            let pint = from_bits(&prefix);
            for value in [1u8, 0] {
                let p = self
                    .projector_ref(i, pint, value)
                    .expect("information step");
                let s = sigma.sandwich(&p);
                let m = s.trace();
                if m <= 0.0 {
                    continue;
                }
                let mut next = prefix.clone();
                next.push(value);
                let mut pr = probs.clone();
                pr.push(if mass > 0.0 { m / mass } else { 0.0 });
                stack.push((i + 1, next, s, pr));
            }
        }
        leaves.sort_by(|a, b| a.decoded.cmp(&b.decoded));
        let success = leaves
            .iter()
            .filter(|l| l.success)
            .map(|l| l.probability)
            .sum();
        Ok(ExactDecode {
            genie_success,
            success,
            leaves,
        })
    }

    /// Block error and bounds from per-input terms of every leaf, in order.
    pub fn summarize(&self, terms: &[InputTerms], k: usize) -> BlockError {
        let len = self.steps();
        let count = terms.len() as f64;
        let mut p_error = 0.0;
        let mut sen = 0.0;
        let mut step_error = vec![0.0; len];
        let mut gao_each = true;
        let mut sen_each = true;
        for t in terms {
            let e: f64 = t.step_error.iter().sum();
            let fail = 1.0 - t.success;
            gao_each &= fail <= 4.0 * e + 1e-12;
            sen_each &= fail <= 2.0 * fmath::sqrt(e.max(0.0)) + 1e-12;
            p_error += fail;
            sen += 2.0 * fmath::sqrt(e.max(0.0));
            for (acc, x) in step_error.iter_mut().zip(&t.step_error) {
                *acc += x;
            }
        }
        p_error /= count;
        sen /= count;
        for s in &mut step_error {
            *s /= count;
        }
        let gao_bound = 4.0 * step_error.iter().sum::<f64>();
        let fidelity_bound = 2.0 * self.sqrt_fidelity.iter().flatten().sum::<f64>();
        let mut chain = vec![
            ChainCheck {
                label: "gao bound per input".into(),
                lhs: 0.0,
                rhs: 0.0,
                holds: gao_each,
            },
            ChainCheck {
                label: "sen bound per input".into(),
                lhs: 0.0,
                rhs: 0.0,
                holds: sen_each,
            },
            check_le("P_e <= gao", p_error, gao_bound, 1e-12),
            check_le("P_e <= sen", p_error, sen, 1e-12),
        ];
        for i in 0..len {
            if let Some(f) = self.sqrt_fidelity[i] {
                // Averaging over the later bits turns rho_{u^N} into rho_bar_{u^i}.
                let marg = self.averaged_error[i];
                chain.push(ChainCheck {
                    label: alloc::format!("step {i}: input average = prefix average"),
                    lhs: step_error[i],
                    rhs: marg,
                    holds: (step_error[i] - marg).abs() <= TOL_CHAIN,
                });
                chain.push(check_le(
                    &alloc::format!("step {i}: error <= sqrtF/2"),
                    step_error[i],
                    0.5 * f,
                    1e-12,
                ));
            }
        }
        chain.push(check_le(
            "gao <= fidelity",
            gao_bound,
            fidelity_bound,
            1e-12,
        ));
        BlockError {
            len,
            k,
            p_error,
            gao_bound,
            sen_bound: sen,
            fidelity_bound,
            step_error,
            sqrt_fidelity: self.sqrt_fidelity.clone(),
            chain,
        }
    }
}

impl QuantumScDecoder {
    pub fn new(code: &PolarCode, w: &CqChannel, budget: &Budget) -> Result<Self> {
        w.require_binary()?;
        let len = code.len();
        let t = PolarTransform::new(len)?;
        let d = w.output_dim();
        let dim = d.checked_pow(len as u32).ok_or(Error::BudgetExceeded {
            required: u64::MAX,
            budget: budget.bytes,
        })?;
        let diagonal = w.outputs().iter().all(|r| r.is_diagonal());
        budget.check(sequential_bytes(len, dim, diagonal))?;
        let letters = [
            w.output(0).as_hermitian().clone(),
            w.output(1).as_hermitian().clone(),
        ];
        let leaves: Vec<Hermitian> = (0..1usize << len)
            .map(|ui| {
                let mut x = to_bits(ui, len);
                t.apply(&mut x);
                product(&letters, &x)
            })
            .collect();
        let seq = SequentialDecoder::new(leaves, code.info_mask().to_vec())?;
        Ok(QuantumScDecoder {
            code: code.clone(),
            seq,
        })
    }

    pub fn code(&self) -> &PolarCode {
        &self.code
    }

    pub fn dim(&self) -> usize {
        self.seq.dim()
    }

    pub fn sequential(&self) -> &SequentialDecoder {
        &self.seq
    }

    /// `Pi_{(i), prefix, value}`; the identity at frozen steps.
    pub fn projector(&self, i: usize, prefix: &[u8], value: u8) -> Projector {
        self.seq.projector(i, prefix, value)
    }

    /// `rho_{x(u)}` on `B^N`.
    pub fn input_state(&self, u: &[u8]) -> Result<Hermitian> {
        self.seq.leaf(u).cloned()
    }

    /// Success and per-step error terms for one input. Frozen positions take
    /// the values in `u`.
    pub fn input_terms(&self, u: &[u8]) -> Result<InputTerms> {
        self.seq.input_terms(u)
    }

    /// Full outcome tree for input `u`. Frozen positions take the values in
    /// `u`, which the decoder knows.
    pub fn decode_tree(&self, u: &[u8]) -> Result<ExactDecode> {
        self.seq.decode_tree(u)
    }

    /// Block error and bounds from per-input terms listed in `u` order.
    pub fn summarize(&self, terms: &[InputTerms]) -> BlockError {
        self.seq.summarize(terms, self.code.k())
    }
}

fn product(letters: &[Hermitian; 2], x: &[u8]) -> Hermitian {
    let mut acc = Hermitian::diagonal(vec![1.0]);
    for &b in x {
        acc = acc.kron(&letters[b as usize]);
    }
    acc
}

fn check_frozen(code: &PolarCode, u: &[u8]) -> Result<()> {
    if u.len() != code.len() {
        return Err(Error::LengthMismatch {
            expected: code.len(),
            found: u.len(),
        });
    }
    for i in code.frozen_set() {
        if u[i] != code.frozen_values()[i] {
            return Err(Error::InvalidArgument(alloc::format!(
                "u[{i}] differs from the frozen value"
            )));
        }
    }
    Ok(())
}

/// Genie-aided and full-tree success probabilities for input `u`, which must
/// agree with the code's frozen values.
pub fn quantum_sc_decode_exact(
    code: &PolarCode,
    w: &CqChannel,
    u: &[u8],
    budget: &Budget,
) -> Result<ExactDecode> {
    check_frozen(code, u)?;
    QuantumScDecoder::new(code, w, budget)?.decode_tree(u)
}

/// Exact block error averaged over all `2^N` inputs, with the three bounds
/// and the checked derivation chain.
pub fn block_error(code: &PolarCode, w: &CqChannel, budget: &Budget) -> Result<BlockError> {
    let dec = QuantumScDecoder::new(code, w, budget)?;
    let len = code.len();
    let terms = (0..1usize << len)
        .map(|ui| dec.input_terms(&to_bits(ui, len)))
        .collect::<Result<Vec<_>>>()?;
    Ok(dec.summarize(&terms))
}
