//! Channel spec documents.
//!
//! A spec is a JSON object with a `kind` tag. Complex numbers are `[re, im]`
//! pairs and matrices are lists of rows:
//!
//! ```json
//! {"kind": "dmc", "rows": [[0.9, 0.1], [0.1, 0.9]]}
//! {"kind": "cq", "kets": [[[1, 0], [0, 0]], [[0.6, 0], [0.8, 0]]]}
//! {"kind": "cq", "matrices": [[[[1, 0], [0, 0]], [[0, 0], [0, 0]]], ...]}
//! {"kind": "cq_mac", "alphabets": [2, 2], "matrices": [...]}
//! {"kind": "cq_mac", "alphabets": [2, 2], "dims": [2, 2], "matrices": [...]}
//! {"kind": "qubit_kraus", "matrices": [...]}
//! {"kind": "broadcast", "dims": [2, 2], "matrices": [...]}
//! ```
//!
//! `cq_mac` outputs are listed with the first sender's symbol most
//! significant. A `cq_mac` with `dims` is an interference channel whose
//! outputs live on `B1 (x) B2`. `labels` is optional everywhere.
//!
//! Every density matrix is validated at load time; a failure names the
//! matrix index and the violated bound. [`dump`] writes the canonical form
//! (explicit matrices, never kets), and `load(dump(c)) == c` bit for bit.

use std::path::Path;

use nalgebra::DMatrix;
use polarlab_core::channels::{
    BroadcastChannel, ClassicalDmc, CqChannel, CqMac, InterferenceChannel, QubitChannel,
};
use polarlab_core::qmath::{DensityMatrix, Hermitian, C64};
use polarlab_core::Error as CoreError;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

pub type Complex = [f64; 2];
pub type Matrix = Vec<Vec<Complex>>;

/// Trace and positivity tolerances applied to loaded density matrices.
pub const TOL_TRACE: f64 = 1e-10;
pub const TOL_PSD: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChannelSpec {
    Dmc {
        rows: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
    Cq {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        matrices: Option<Vec<Matrix>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        kets: Option<Vec<Vec<Complex>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
    CqMac {
        alphabets: Vec<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dims: Option<[usize; 2]>,
        matrices: Vec<Matrix>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
    QubitKraus {
        matrices: Vec<Matrix>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
    Broadcast {
        dims: [usize; 2],
        matrices: Vec<Matrix>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
}

/// A validated channel.
#[derive(Clone, Debug, PartialEq)]
pub enum Channel {
    Dmc(ClassicalDmc),
    Cq(CqChannel),
    CqMac(CqMac),
    Interference(InterferenceChannel),
    Qubit(QubitChannel),
    Broadcast(BroadcastChannel),
}

impl Channel {
    pub fn kind(&self) -> &'static str {
        match self {
            Channel::Dmc(_) => "dmc",
            Channel::Cq(_) => "cq",
            Channel::CqMac(_) => "cq_mac",
            Channel::Interference(_) => "cq_mac (interference)",
            Channel::Qubit(_) => "qubit_kraus",
            Channel::Broadcast(_) => "broadcast",
        }
    }

    /// The channel as a cq channel; DMCs embed with diagonal outputs.
    pub fn to_cq(&self) -> Option<CqChannel> {
        match self {
            Channel::Dmc(d) => Some(d.to_cq()),
            Channel::Cq(c) => Some(c.clone()),
            _ => None,
        }
    }
}

fn violation(index: usize, detail: String) -> LabError {
    LabError::Core(CoreError::InvariantViolation { index, detail })
}

fn to_dmatrix(index: usize, m: &Matrix) -> Result<DMatrix<C64>> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    if rows == 0 || cols == 0 || m.iter().any(|r| r.len() != cols) {
        return Err(violation(index, "matrix is empty or ragged".into()));
    }
    Ok(DMatrix::from_fn(rows, cols, |i, j| {
        C64::new(m[i][j][0], m[i][j][1])
    }))
}

fn density(index: usize, m: &Matrix) -> Result<DensityMatrix> {
    let a = to_dmatrix(index, m)?;
    if !a.is_square() {
        return Err(violation(
            index,
            format!("matrix is {}x{}, not square", a.nrows(), a.ncols()),
        ));
    }
    let h = Hermitian::from_complex_matrix(a).map_err(|e| match e {
        CoreError::NonHermitianInput { deviation } => violation(
            index,
            format!("not Hermitian: deviation {deviation:e} exceeds 1e-10"),
        ),
        other => LabError::Core(other),
    })?;
    let tr = h.trace();
    if (tr - 1.0).abs() > TOL_TRACE {
        return Err(violation(
            index,
            format!("trace {tr} differs from 1 by more than {TOL_TRACE:e}"),
        ));
    }
    let min = h.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
    if min < -TOL_PSD {
        return Err(violation(
            index,
            format!("eigenvalue {min:e} is below -{TOL_PSD:e}"),
        ));
    }
    Ok(DensityMatrix::new(h)?)
}

fn densities(ms: &[Matrix]) -> Result<Vec<DensityMatrix>> {
    ms.iter().enumerate().map(|(k, m)| density(k, m)).collect()
}

fn ket_state(index: usize, ket: &[Complex]) -> Result<DensityMatrix> {
    let norm: f64 = ket.iter().map(|z| z[0] * z[0] + z[1] * z[1]).sum();
    if (norm - 1.0).abs() > TOL_TRACE {
        return Err(violation(
            index,
            format!("ket has squared norm {norm}, not 1 within {TOL_TRACE:e}"),
        ));
    }
    let k: Vec<C64> = ket.iter().map(|z| C64::new(z[0], z[1])).collect();
    Ok(DensityMatrix::pure(&k)?)
}

/// Validates a parsed spec.
pub fn build(spec: &ChannelSpec) -> Result<Channel> {
    Ok(match spec {
        ChannelSpec::Dmc { rows, .. } => Channel::Dmc(ClassicalDmc::new(rows.clone())?),
        ChannelSpec::Cq { matrices, kets, .. } => {
            let outs = match (matrices, kets) {
                (Some(ms), None) => densities(ms)?,
                (None, Some(ks)) => ks
                    .iter()
                    .enumerate()
                    .map(|(k, v)| ket_state(k, v))
                    .collect::<Result<_>>()?,
                _ => {
                    return Err(LabError::Config(
                        "a cq spec needs exactly one of `matrices` and `kets`".into(),
                    ))
                }
            };
            Channel::Cq(CqChannel::new(outs)?)
        }
        ChannelSpec::CqMac {
            alphabets,
            dims,
            matrices,
            ..
        } => {
            let outs = densities(matrices)?;
            match dims {
                Some(d) => {
                    let &[a1, a2] = alphabets.as_slice() else {
                        return Err(LabError::Config(
                            "an interference channel has exactly two senders".into(),
                        ));
                    };
                    Channel::Interference(InterferenceChannel::new([a1, a2], *d, outs)?)
                }
                None => Channel::CqMac(CqMac::new(alphabets.clone(), outs)?),
            }
        }
        ChannelSpec::QubitKraus { matrices, .. } => {
            let ks = matrices
                .iter()
                .enumerate()
                .map(|(k, m)| to_dmatrix(k, m))
                .collect::<Result<Vec<_>>>()?;
            Channel::Qubit(QubitChannel::new(ks)?)
        }
        ChannelSpec::Broadcast { dims, matrices, .. } => {
            Channel::Broadcast(BroadcastChannel::new(*dims, densities(matrices)?)?)
        }
    })
}

pub fn parse(text: &str, origin: &Path) -> Result<Channel> {
    let spec: ChannelSpec = serde_json::from_str(text).map_err(|e| LabError::Parse {
        path: origin.to_path_buf(),
        detail: e.to_string(),
    })?;
    build(&spec)
}

/// Reads and validates a spec file.
pub fn load_channel_spec(path: &Path) -> Result<Channel> {
    let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
    parse(&text, path)
}

fn matrix_of(h: &Hermitian) -> Matrix {
    let d = h.dim();
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let z = h.entry(i, j);
                    [z.re, z.im]
                })
                .collect()
        })
        .collect()
}

fn matrices(states: &[DensityMatrix]) -> Vec<Matrix> {
    states.iter().map(|s| matrix_of(s)).collect()
}

/// Canonical spec of a channel.
pub fn to_spec(channel: &Channel) -> ChannelSpec {
    match channel {
        Channel::Dmc(d) => ChannelSpec::Dmc {
            rows: d.rows().to_vec(),
            labels: None,
        },
        Channel::Cq(c) => ChannelSpec::Cq {
            matrices: Some(matrices(c.outputs())),
            kets: None,
            labels: None,
        },
        Channel::CqMac(m) => ChannelSpec::CqMac {
            alphabets: m.alphabets().to_vec(),
            dims: None,
            matrices: matrices(m.outputs()),
            labels: None,
        },
        Channel::Interference(ic) => ChannelSpec::CqMac {
            alphabets: ic.joint().alphabets().to_vec(),
            dims: Some(ic.dims()),
            matrices: matrices(ic.joint().outputs()),
            labels: None,
        },
        Channel::Qubit(q) => ChannelSpec::QubitKraus {
            matrices: q
                .kraus()
                .iter()
                .map(|k| {
                    (0..k.nrows())
                        .map(|i| {
                            (0..k.ncols())
                                .map(|j| [k[(i, j)].re, k[(i, j)].im])
                                .collect()
                        })
                        .collect()
                })
                .collect(),
            labels: None,
        },
        Channel::Broadcast(b) => ChannelSpec::Broadcast {
            dims: b.dims(),
            matrices: matrices(b.outputs()),
            labels: None,
        },
    }
}

/// Canonical JSON text.
pub fn dump(channel: &Channel) -> String {
    let mut s = serde_json::to_string_pretty(&to_spec(channel)).expect("specs always serialize");
    s.push('\n');
    s
}
