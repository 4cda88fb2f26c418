//! Amplitude and phase channels of a qubit channel and the bookkeeping of
//! the simultaneous quantum polar code.
//!
//! A qubit channel `N` induces two binary cq channels. The amplitude channel
//! sends `|z>` through `N`; the phase channel sends half of
//! `(Z^x)^C |Phi>^{A'C}` through `N` and keeps `C` as side information.
//! Indices good for both carry qubits, indices bad for both consume ebits.

use alloc::vec::Vec;
use nalgebra::DMatrix;

use crate::budget::Budget;
use crate::channels::{degrade, partial_trace, CqChannel, QubitChannel};
use crate::error::{Error, Result};
use crate::fmath;
use crate::polar::split_params;
use crate::qmath::{von_neumann_entropy, DensityMatrix, C64};

/// The induced channels `W_A : z -> N(|z><z|)` and
/// `W_P : x -> sigma_x^{BC}`.
#[derive(Clone, Debug)]
pub struct AmplitudePhasePair {
    pub amplitude: CqChannel,
    /// Outputs on `B (x) C`, `B` first.
    pub phase: CqChannel,
    /// Isometric dilation `A' -> B (x) R` the phase outputs were built from.
    pub dilation: DMatrix<C64>,
    pub output_dim: usize,
}

impl AmplitudePhasePair {
    /// `I(W_A) = I(Z;B)` under uniform inputs.
    pub fn amplitude_information(&self) -> f64 {
        self.amplitude.symmetric_holevo()
    }

    /// `I(W_P) = I(X;BC)` under uniform inputs.
    pub fn phase_information(&self) -> f64 {
        self.phase.symmetric_holevo()
    }

    /// The pair of `D after N`: `D` acts on `B` and leaves `C` alone.
    pub fn degrade(&self, d: &QubitChannel) -> Result<Self> {
        if d.input_dim() != self.output_dim {
            return Err(Error::DimMismatch {
                expected: self.output_dim,
                found: d.input_dim(),
            });
        }
        let id = DMatrix::<C64>::identity(2, 2);
        let on_bc = QubitChannel::new(d.kraus().iter().map(|k| k.kronecker(&id)).collect())?;
        // Dilation of the composition: V_D (x) I_R after V_N.
        let e = self.dilation.nrows() / self.output_dim;
        let vd = d.isometry();
        let dilation = vd.kronecker(&DMatrix::<C64>::identity(e, e)) * &self.dilation;
        Ok(AmplitudePhasePair {
            amplitude: degrade(&self.amplitude, d)?,
            phase: degrade(&self.phase, &on_bc)?,
            dilation,
            output_dim: d.output_dim(),
        })
    }
}

pub fn induce_amplitude_phase(n: &QubitChannel) -> Result<AmplitudePhasePair> {
    if n.input_dim() != 2 {
        return Err(Error::DimMismatch {
            expected: 2,
            found: n.input_dim(),
        });
    }
    let db = n.output_dim();
    let amplitude = CqChannel::new(
        (0..2)
            .map(|z| {
                let mut ket = [C64::new(0.0, 0.0); 2];
                ket[z] = C64::new(1.0, 0.0);
                n.apply(&DensityMatrix::pure(&ket)?)
            })
            .collect::<Result<Vec<_>>>()?,
    )?;
    let v = n.isometry();
    let e = v.nrows() / db;
    let h = fmath::sqrt(0.5);
    let mut phase = Vec::with_capacity(2);
    for x in 0..2 {
        // (V (x) I_C) (Z^x)^C (|00> + |11>)/sqrt 2 on B (x) R (x) C.
        let mut ket = alloc::vec![C64::new(0.0, 0.0); db * e * 2];
        for a in 0..2 {
            let sign = if x == 1 && a == 1 { -h } else { h };
            for row in 0..db * e {
                ket[row * 2 + a] += v[(row, a)] * sign;
            }
        }
        let brc = DensityMatrix::pure(&ket)?;
        phase.push(partial_trace(&brc, &[db, e, 2], &[0, 2])?);
    }
    Ok(AmplitudePhasePair {
        amplitude,
        phase: CqChannel::new(phase)?,
        dilation: v,
        output_dim: db,
    })
}

/// Coherent information `I(A>B) = S(B) - S(AB)` of `N` on half of `|Phi>`.
pub fn coherent_information(n: &QubitChannel) -> Result<f64> {
    let h = fmath::sqrt(0.5);
    let phi = DensityMatrix::pure_real(&[h, 0.0, 0.0, h])?;
    let ab = n.apply_first(&phi, 2)?;
    let b = n.apply(&DensityMatrix::maximally_mixed(2))?;
    Ok(von_neumann_entropy(&b) - von_neumann_entropy(&ab))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum IndexClass {
    /// Good in amplitude and phase.
    A,
    /// Good in amplitude only.
    X,
    /// Good in phase only.
    Z,
    /// Bad in both.
    B,
}

impl IndexClass {
    fn of(amp_good: bool, phase_good: bool) -> Self {
        match (amp_good, phase_good) {
            (true, true) => IndexClass::A,
            (true, false) => IndexClass::X,
            (false, true) => IndexClass::Z,
            (false, false) => IndexClass::B,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            IndexClass::A => "A",
            IndexClass::X => "X",
            IndexClass::Z => "Z",
            IndexClass::B => "B",
        }
    }
}

/// Four-way split of `0..N`. An index is good for a channel when its
/// synthesized `sqrtF` is below `threshold`.
#[derive(Clone, Debug, PartialEq)]
pub struct IndexClassification {
    pub len: usize,
    pub threshold: f64,
    pub sqrt_fidelity_amplitude: Vec<f64>,
    /// Phase-channel parameters under the transposed transform, by index.
    pub sqrt_fidelity_phase: Vec<f64>,
    pub classes: Vec<IndexClass>,
}

impl IndexClassification {
    pub fn set(&self, class: IndexClass) -> Vec<usize> {
        (0..self.len)
            .filter(|&i| self.classes[i] == class)
            .collect()
    }

    pub fn count(&self, class: IndexClass) -> usize {
        self.classes.iter().filter(|&&c| c == class).count()
    }

    pub fn amplitude_good(&self) -> Vec<usize> {
        (0..self.len)
            .filter(|&i| self.sqrt_fidelity_amplitude[i] < self.threshold)
            .collect()
    }

    /// The same parameters cut at another threshold.
    pub fn with_threshold(&self, threshold: f64) -> Self {
        let classes = (0..self.len)
            .map(|i| {
                IndexClass::of(
                    self.sqrt_fidelity_amplitude[i] < threshold,
                    self.sqrt_fidelity_phase[i] < threshold,
                )
            })
            .collect();
        IndexClassification {
            threshold,
            classes,
            ..self.clone()
        }
    }

    pub fn phase_good(&self) -> Vec<usize> {
        (0..self.len)
            .filter(|&i| self.sqrt_fidelity_phase[i] < self.threshold)
            .collect()
    }
}

/// Per-index `sqrtF` of both induced channels at length `len`.
///
/// The phase channel is polarized by the transposed transform. Since
/// `G^T = J G J` with `J` the index reversal, its synthesized channel at
/// index `i` (which knows the later bits) is the usual split channel at
/// `N - 1 - i`.
pub fn classify_indices(
    pair: &AmplitudePhasePair,
    len: usize,
    threshold: f64,
    budget: &Budget,
) -> Result<IndexClassification> {
    let amp: Vec<f64> = split_params(&pair.amplitude, len, budget)?
        .iter()
        .map(|p| p.sqrt_fidelity)
        .collect();
    let mut phase: Vec<f64> = split_params(&pair.phase, len, budget)?
        .iter()
        .map(|p| p.sqrt_fidelity)
        .collect();
    phase.reverse();
    let classes = (0..len)
        .map(|i| IndexClass::of(amp[i] < threshold, phase[i] < threshold))
        .collect();
    Ok(IndexClassification {
        len,
        threshold,
        sqrt_fidelity_amplitude: amp,
        sqrt_fidelity_phase: phase,
        classes,
    })
}

/// `R_Q(N) = (|A_N| - |B_N|) / N`; negative values are reported as they are.
pub fn net_rate(cls: &IndexClassification) -> f64 {
    (cls.count(IndexClass::A) as f64 - cls.count(IndexClass::B) as f64) / cls.len as f64
}

/// What the weaker member's code sends at an index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Assignment {
    Info,
    /// Frozen in the phase basis.
    Plus,
    /// Frozen in the amplitude basis.
    Zero,
    /// Half of an ebit.
    Phi,
}

impl Assignment {
    pub fn label(self) -> &'static str {
        match self {
            Assignment::Info => "info",
            Assignment::Plus => "|+>",
            Assignment::Zero => "|0>",
            Assignment::Phi => "|Phi>",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CombinationRow {
    pub index: usize,
    /// Good flags `(A1, P1, A2, P2)`.
    pub good: [bool; 4],
    /// `None` when the row breaks `G(W_1) ⊆ G(W_2)`.
    pub assignment: Option<Assignment>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CombinationTable {
    pub rows: Vec<CombinationRow>,
    pub member1: IndexClassification,
    pub member2: IndexClassification,
}

impl CombinationTable {
    pub fn anomalies(&self) -> Vec<usize> {
        self.rows
            .iter()
            .filter(|r| r.assignment.is_none())
            .map(|r| r.index)
            .collect()
    }

    /// `(|info| - |Phi|) / N`, the rate the weaker member supports.
    pub fn rate(&self) -> f64 {
        let count = |a| self.rows.iter().filter(|r| r.assignment == Some(a)).count() as f64;
        (count(Assignment::Info) - count(Assignment::Phi)) / self.rows.len() as f64
    }
}

/// Coding table for a degraded pair `N1 = D after N2`: each index is coded
/// for the weaker member 1, which is safe for member 2 whenever member 1's
/// good sets are subsets of member 2's.
pub fn degraded_combination_table(
    pair1: &AmplitudePhasePair,
    pair2: &AmplitudePhasePair,
    len: usize,
    threshold: f64,
    budget: &Budget,
) -> Result<CombinationTable> {
    let member1 = classify_indices(pair1, len, threshold, budget)?;
    let member2 = classify_indices(pair2, len, threshold, budget)?;
    combine(member1, member2)
}

/// The table from two classifications at the same length and threshold.
pub fn combine(
    member1: IndexClassification,
    member2: IndexClassification,
) -> Result<CombinationTable> {
    if member1.len != member2.len {
        return Err(Error::LengthMismatch {
            expected: member1.len,
            found: member2.len,
        });
    }
    if member1.threshold != member2.threshold {
        return Err(Error::InvalidArgument(
            "members classified at different thresholds".into(),
        ));
    }
    let t = member1.threshold;
    let rows = (0..member1.len)
        .map(|i| {
            let good = [
                member1.sqrt_fidelity_amplitude[i] < t,
                member1.sqrt_fidelity_phase[i] < t,
                member2.sqrt_fidelity_amplitude[i] < t,
                member2.sqrt_fidelity_phase[i] < t,
            ];
            let nested = (!good[0] || good[2]) && (!good[1] || good[3]);
            let assignment = nested.then_some(match (good[0], good[1]) {
                (true, true) => Assignment::Info,
                (true, false) => Assignment::Plus,
                (false, true) => Assignment::Zero,
                (false, false) => Assignment::Phi,
            });
            CombinationRow {
                index: i,
                good,
                assignment,
            }
        })
        .collect();
    Ok(CombinationTable {
        rows,
        member1,
        member2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_of_flags() {
        assert_eq!(IndexClass::of(true, true), IndexClass::A);
        assert_eq!(IndexClass::of(true, false), IndexClass::X);
        assert_eq!(IndexClass::of(false, true), IndexClass::Z);
        assert_eq!(IndexClass::of(false, false), IndexClass::B);
    }

    #[test]
    fn net_rate_arithmetic() {
        let mut classes = alloc::vec![IndexClass::A; 6];
        classes.extend([IndexClass::B, IndexClass::B]);
        let cls = IndexClassification {
            len: 8,
            threshold: 0.1,
            sqrt_fidelity_amplitude: alloc::vec![0.0; 8],
            sqrt_fidelity_phase: alloc::vec![0.0; 8],
            classes,
        };
        assert_eq!(net_rate(&cls), 0.5);
    }
}
