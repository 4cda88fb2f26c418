use alloc::vec::Vec;

use super::{partial_trace, CqChannel};
use crate::error::{Error, Result};
use crate::qmath::DensityMatrix;

fn check_table(outputs: &[DensityMatrix], expected: usize) -> Result<usize> {
    if outputs.len() != expected {
        return Err(Error::InvariantViolation {
            index: outputs.len(),
            detail: alloc::format!("expected {expected} outputs, found {}", outputs.len()),
        });
    }
    let dim = outputs[0].dim();
    if let Some(k) = outputs.iter().position(|r| r.dim() != dim) {
        return Err(Error::InvariantViolation {
            index: k,
            detail: "output dimensions differ".into(),
        });
    }
    Ok(dim)
}

/// Multiple-access cq channel `(x_1, .., x_k) -> rho`. Outputs are stored in
/// mixed radix with user 1 most significant.
#[derive(Clone, Debug, PartialEq)]
pub struct CqMac {
    alphabets: Vec<usize>,
    outputs: Vec<DensityMatrix>,
}

impl CqMac {
    pub fn new(alphabets: Vec<usize>, outputs: Vec<DensityMatrix>) -> Result<Self> {
        if alphabets.is_empty() || alphabets.contains(&0) {
            return Err(Error::InvariantViolation {
                index: 0,
                detail: "empty input alphabet".into(),
            });
        }
        check_table(&outputs, alphabets.iter().product())?;
        Ok(CqMac { alphabets, outputs })
    }

    /// Two binary users with outputs listed as `(0,0), (0,1), (1,0), (1,1)`.
    pub fn binary(outputs: Vec<DensityMatrix>) -> Result<Self> {
        Self::new(alloc::vec![2, 2], outputs)
    }

    /// `rho_{x,y} = rho_x (x) sigma_y`.
    pub fn product(w1: &CqChannel, w2: &CqChannel) -> Result<Self> {
        let mut outs = Vec::new();
        for a in w1.outputs() {
            for b in w2.outputs() {
                outs.push(a.kron(b));
            }
        }
        Self::new(alloc::vec![w1.alphabet_size(), w2.alphabet_size()], outs)
    }

    pub fn users(&self) -> usize {
        self.alphabets.len()
    }

    pub fn alphabets(&self) -> &[usize] {
        &self.alphabets
    }

    pub fn output_dim(&self) -> usize {
        self.outputs[0].dim()
    }

    pub fn outputs(&self) -> &[DensityMatrix] {
        &self.outputs
    }

    pub fn index(&self, xs: &[usize]) -> usize {
        xs.iter()
            .zip(&self.alphabets)
            .fold(0, |acc, (&x, &a)| acc * a + x)
    }

    pub fn output(&self, xs: &[usize]) -> &DensityMatrix {
        &self.outputs[self.index(xs)]
    }

    pub fn is_binary(&self) -> bool {
        self.alphabets.iter().all(|&a| a == 2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Receiver {
    First,
    Second,
}

/// Two-sender, two-receiver cq interference channel with joint outputs on
/// `B1 (x) B2`.
#[derive(Clone, Debug, PartialEq)]
pub struct InterferenceChannel {
    mac: CqMac,
    dims: [usize; 2],
}

impl InterferenceChannel {
    pub fn new(
        alphabets: [usize; 2],
        dims: [usize; 2],
        outputs: Vec<DensityMatrix>,
    ) -> Result<Self> {
        let mac = CqMac::new(alphabets.to_vec(), outputs)?;
        if mac.output_dim() != dims[0] * dims[1] {
            return Err(Error::DimMismatch {
                expected: dims[0] * dims[1],
                found: mac.output_dim(),
            });
        }
        Ok(InterferenceChannel { mac, dims })
    }

    pub fn dims(&self) -> [usize; 2] {
        self.dims
    }

    pub fn joint(&self) -> &CqMac {
        &self.mac
    }

    /// MAC seen by one receiver.
    pub fn induced_mac(&self, receiver: Receiver) -> Result<CqMac> {
        let keep = match receiver {
            Receiver::First => [0],
            Receiver::Second => [1],
        };
        let outs = self
            .mac
            .outputs()
            .iter()
            .map(|rho| partial_trace(rho, &self.dims, &keep))
            .collect::<Result<Vec<_>>>()?;
        CqMac::new(self.mac.alphabets().to_vec(), outs)
    }
}

/// Broadcast channel `x -> rho_x` on `B1 (x) B2`.
#[derive(Clone, Debug, PartialEq)]
pub struct BroadcastChannel {
    outputs: Vec<DensityMatrix>,
    dims: [usize; 2],
}

impl BroadcastChannel {
    pub fn new(dims: [usize; 2], outputs: Vec<DensityMatrix>) -> Result<Self> {
        if outputs.is_empty() {
            return Err(Error::InvariantViolation {
                index: 0,
                detail: "no outputs".into(),
            });
        }
        let dim = check_table(&outputs, outputs.len())?;
        if dim != dims[0] * dims[1] {
            return Err(Error::DimMismatch {
                expected: dims[0] * dims[1],
                found: dim,
            });
        }
        Ok(BroadcastChannel { outputs, dims })
    }

    /// `x -> rho_x (x) sigma_x`.
    pub fn product(w1: &CqChannel, w2: &CqChannel) -> Result<Self> {
        if w1.alphabet_size() != w2.alphabet_size() {
            return Err(Error::DimMismatch {
                expected: w1.alphabet_size(),
                found: w2.alphabet_size(),
            });
        }
        let outs = w1
            .outputs()
            .iter()
            .zip(w2.outputs())
            .map(|(a, b)| a.kron(b))
            .collect();
        Self::new([w1.output_dim(), w2.output_dim()], outs)
    }

    pub fn dims(&self) -> [usize; 2] {
        self.dims
    }

    pub fn outputs(&self) -> &[DensityMatrix] {
        &self.outputs
    }

    pub fn alphabet_size(&self) -> usize {
        self.outputs.len()
    }

    /// Channel to one receiver.
    pub fn marginal(&self, receiver: Receiver) -> Result<CqChannel> {
        let keep = match receiver {
            Receiver::First => [0],
            Receiver::Second => [1],
        };
        let outs = self
            .outputs
            .iter()
            .map(|rho| partial_trace(rho, &self.dims, &keep))
            .collect::<Result<Vec<_>>>()?;
        CqChannel::new(outs)
    }

    pub fn swapped(&self) -> Result<Self> {
        let [d1, d2] = self.dims;
        let mut perm = nalgebra::DMatrix::<crate::qmath::C64>::zeros(d1 * d2, d1 * d2);
        for a in 0..d1 {
            for b in 0..d2 {
                perm[(b * d1 + a, a * d2 + b)] = crate::qmath::C64::new(1.0, 0.0);
            }
        }
        let outs = self
            .outputs
            .iter()
            .map(|rho| {
                rho.conjugate_by(&perm)
                    .map(DensityMatrix::from_hermitian_unchecked)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BroadcastChannel {
            outputs: outs,
            dims: [d2, d1],
        })
    }
}

/// Non-empty set of channels sharing an input alphabet; output dims may differ.
#[derive(Clone, Debug, PartialEq)]
pub struct CompoundSet<T> {
    members: Vec<T>,
}

impl CompoundSet<CqChannel> {
    pub fn new(members: Vec<CqChannel>) -> Result<Self> {
        let a = members
            .first()
            .ok_or(Error::InvariantViolation {
                index: 0,
                detail: "empty compound set".into(),
            })?
            .alphabet_size();
        if let Some(k) = members.iter().position(|m| m.alphabet_size() != a) {
            return Err(Error::InvariantViolation {
                index: k,
                detail: "input alphabets differ".into(),
            });
        }
        Ok(CompoundSet { members })
    }
}

impl CompoundSet<CqMac> {
    pub fn new_mac(members: Vec<CqMac>) -> Result<Self> {
        let a = members
            .first()
            .ok_or(Error::InvariantViolation {
                index: 0,
                detail: "empty compound set".into(),
            })?
            .alphabets()
            .to_vec();
        if let Some(k) = members.iter().position(|m| m.alphabets() != a.as_slice()) {
            return Err(Error::InvariantViolation {
                index: k,
                detail: "input alphabets differ".into(),
            });
        }
        Ok(CompoundSet { members })
    }
}

impl<T> CompoundSet<T> {
    pub fn members(&self) -> &[T] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}
