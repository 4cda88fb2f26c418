use alloc::vec::Vec;

use super::prefix::{tree_stats, Letters, TreeStats};
use crate::budget::Budget;
use crate::channels::{BroadcastChannel, CqChannel, Receiver};
use crate::error::{Error, Result};
use crate::fmath;
use crate::qmath::{DensityMatrix, Hermitian};

/// `2^{-N^beta}`.
pub fn beta_threshold(len: usize, beta: f64) -> f64 {
    fmath::exp2(-fmath::pow(len as f64, beta))
}

pub const DEFAULT_THRESHOLD: f64 = 0.01;
pub const DEFAULT_BETA: f64 = 0.49;

/// Per-index Bhattacharyya parameters of one polarized variable.
#[derive(Clone, Debug, PartialEq)]
pub struct ZProfile {
    pub z: Vec<f64>,
}

impl ZProfile {
    pub fn from_stats(stats: &TreeStats) -> Self {
        ZProfile {
            z: (0..stats.len()).map(|i| stats.bhattacharyya(i)).collect(),
        }
    }

    /// `{i : Z_i >= 1 - threshold}`.
    pub fn high(&self, threshold: f64) -> Vec<usize> {
        (0..self.z.len())
            .filter(|&i| self.z[i] >= 1.0 - threshold)
            .collect()
    }

    /// `{i : Z_i <= threshold}`.
    pub fn low(&self, threshold: f64) -> Vec<usize> {
        (0..self.z.len())
            .filter(|&i| self.z[i] <= threshold)
            .collect()
    }
}

/// Source polarization sets of `U = X G_N` for `X ~ Bernoulli(q)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShapingSets {
    pub z: Vec<f64>,
    /// Nearly uniform given the past: `Z >= 1 - threshold`.
    pub uniform: Vec<usize>,
    /// Nearly determined by the past: `Z <= threshold`.
    pub determined: Vec<usize>,
    /// `H(X)`, the limit of `|uniform| / N`.
    pub entropy: f64,
}

pub fn shaping_sets(q: f64, len: usize, threshold: f64, budget: &Budget) -> Result<ShapingSets> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::InvalidDistribution(alloc::format!("P(X=1) = {q}")));
    }
    let prof = ZProfile::from_stats(&tree_stats(&Letters::source(q), len, budget)?);
    Ok(ShapingSets {
        uniform: prof.high(threshold),
        determined: prof.low(threshold),
        z: prof.z,
        entropy: fmath::binary_entropy(q),
    })
}

/// Information set for shaped transmission over a cq channel.
#[derive(Clone, Debug, PartialEq)]
pub struct ShapingInfoSet {
    pub sets: ShapingSets,
    /// `Z(U_i | U^{i-1} B^N)`.
    pub z_side: Vec<f64>,
    /// `I = {i in F : Z(U_i | U^{i-1}, B^N) <= threshold}`.
    pub info: Vec<usize>,
    /// `F \ I`, uniform bits the receiver cannot resolve (frozen).
    pub frozen_uniform: Vec<usize>,
}

/// Tolerance for the per-index check `Z(U_i | U^{i-1} B) <= Z(U_i | U^{i-1})`.
const Z_ORDER_TOL: f64 = 1e-9;

pub fn shaping_info_set(
    w: &CqChannel,
    q: f64,
    len: usize,
    threshold: f64,
    budget: &Budget,
) -> Result<ShapingInfoSet> {
    w.require_binary()?;
    let sets = shaping_sets(q, len, threshold, budget)?;
    let letters = Letters::from_channel(w.output(0), w.output(1), q)?;
    let side = ZProfile::from_stats(&tree_stats(&letters, len, budget)?);
    for (i, (&zs, &z)) in side.z.iter().zip(&sets.z).enumerate() {
        if zs > z + Z_ORDER_TOL {
            return Err(Error::InvariantViolation {
                index: i,
                detail: alloc::format!("side information raised Z from {z} to {zs}"),
            });
        }
    }
    let info: Vec<usize> = sets
        .uniform
        .iter()
        .copied()
        .filter(|&i| side.z[i] <= threshold)
        .collect();
    let frozen_uniform = sets
        .uniform
        .iter()
        .copied()
        .filter(|i| !info.contains(i))
        .collect();
    Ok(ShapingInfoSet {
        sets,
        z_side: side.z,
        info,
        frozen_uniform,
    })
}

/// Joint law of binary auxiliaries `p(v) p(v2|v) p(v1|v2,v)` and the map
/// `x = phi(v, v1, v2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AuxiliaryLaw {
    /// `p[v][v1][v2]`.
    pub p: [[[f64; 2]; 2]; 2],
    /// `phi[v][v1][v2]` as an input symbol.
    pub phi: [[[usize; 2]; 2]; 2],
}

impl AuxiliaryLaw {
    /// From `P(V=1)`, `p_v2[v] = P(V2=1 | V=v)` and
    /// `p_v1[v][v2] = P(V1=1 | V=v, V2=v2)`.
    pub fn factorized(
        p_v: f64,
        p_v2: [f64; 2],
        p_v1: [[f64; 2]; 2],
        phi: [[[usize; 2]; 2]; 2],
    ) -> Result<Self> {
        let probs = [
            p_v, p_v2[0], p_v2[1], p_v1[0][0], p_v1[0][1], p_v1[1][0], p_v1[1][1],
        ];
        if probs.iter().any(|q| !(0.0..=1.0).contains(q)) {
            return Err(Error::InvalidFactorization(
                "conditional probabilities must lie in [0,1]".into(),
            ));
        }
        let bern = |q: f64, b: usize| if b == 1 { q } else { 1.0 - q };
        let mut p = [[[0.0; 2]; 2]; 2];
        for v in 0..2 {
            for v1 in 0..2 {
                for v2 in 0..2 {
                    p[v][v1][v2] = bern(p_v, v) * bern(p_v2[v], v2) * bern(p_v1[v][v2], v1);
                }
            }
        }
        Ok(AuxiliaryLaw { p, phi })
    }

    /// Validates a full joint table against the Markov factorization
    /// (any joint law of three binary variables factors this way).
    pub fn from_joint(p: [[[f64; 2]; 2]; 2], phi: [[[usize; 2]; 2]; 2]) -> Result<Self> {
        let flat: Vec<f64> = p.iter().flatten().flatten().copied().collect();
        crate::qmath::check_distribution(&flat)
            .map_err(|e| Error::InvalidFactorization(alloc::format!("{e}")))?;
        Ok(AuxiliaryLaw { p, phi })
    }

    pub fn p_v(&self, v: usize) -> f64 {
        self.p[v].iter().flatten().sum()
    }

    /// `sum_{v,v1,v2 : pred} p * rho_phi`, unnormalized.
    fn weighted_state<F: Fn(usize, usize, usize) -> bool>(
        &self,
        outputs: &[DensityMatrix],
        pred: F,
    ) -> Hermitian {
        let mut acc = Hermitian::zeros(outputs[0].dim());
        for v in 0..2 {
            for v1 in 0..2 {
                for v2 in 0..2 {
                    if pred(v, v1, v2) && self.p[v][v1][v2] > 0.0 {
                        acc.add_scaled(self.p[v][v1][v2], &outputs[self.phi[v][v1][v2]]);
                    }
                }
            }
        }
        acc.recanonicalize()
    }
}

/// The polarization sets of the broadcast construction, with the per-index
/// Bhattacharyya profiles they were cut from.
#[derive(Clone, Debug, PartialEq)]
pub struct PolarizationSets {
    pub threshold: f64,
    pub z_v: Vec<f64>,
    pub z_v_b: [Vec<f64>; 2],
    pub z_vl_v: [Vec<f64>; 2],
    pub z_vl_v_b: [Vec<f64>; 2],
    pub z_v1_v_v2: Vec<f64>,
    pub h_v: Vec<usize>,
    pub l_v: Vec<usize>,
    pub h_v_b: [Vec<usize>; 2],
    pub l_v_b: [Vec<usize>; 2],
    pub h_vl_v: [Vec<usize>; 2],
    pub l_vl_v: [Vec<usize>; 2],
    pub h_vl_v_b: [Vec<usize>; 2],
    pub l_vl_v_b: [Vec<usize>; 2],
    pub h_v1_v_v2: Vec<usize>,
    pub l_v1_v_v2: Vec<usize>,
    /// `H_V ∩ L_{V|B2}`.
    pub i_sup_2: Vec<usize>,
    /// `H_V ∩ L_{V|B1}`.
    pub i_v_1: Vec<usize>,
    /// `H_{V2|V} ∩ L_{V2|V,B2}`.
    pub i_bin_2: Vec<usize>,
    /// `H_{V1|V} ∩ L_{V1|V,B1}`.
    pub i_1: Vec<usize>,
    /// `L_{V1|V,V2} ∩ H_{V1|V} ∩ H_{V1|V,B1}`.
    pub f_1: Vec<usize>,
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|x| b.contains(x)).collect()
}

fn profile(a0: Hermitian, a1: Hermitian, len: usize, budget: &Budget) -> Result<Vec<f64>> {
    let letters = Letters::new(a0, a1)?;
    Ok(ZProfile::from_stats(&tree_stats(&letters, len, budget)?).z)
}

/// Basis projector `|k><k|` of dimension `d`, kron'd with `rho`.
fn tag(k: usize, d: usize, rho: &Hermitian) -> Hermitian {
    let mut e = alloc::vec![0.0; d];
    e[k] = 1.0;
    Hermitian::diagonal(e).kron(rho)
}

/// Computes every set by exact enumeration. `H` sets use `Z >= 1 - threshold`
/// and `L` sets `Z <= threshold`.
pub fn broadcast_sets(
    bc: &BroadcastChannel,
    law: &AuxiliaryLaw,
    len: usize,
    threshold: f64,
    budget: &Budget,
) -> Result<PolarizationSets> {
    if law
        .phi
        .iter()
        .flatten()
        .flatten()
        .any(|&x| x >= bc.alphabet_size())
    {
        return Err(Error::InvalidArgument(
            "map targets a symbol outside the input alphabet".into(),
        ));
    }
    let one = Hermitian::diagonal(alloc::vec![1.0]);
    let marg = [
        bc.marginal(Receiver::First)?,
        bc.marginal(Receiver::Second)?,
    ];
    let outs = |l: usize| marg[l].outputs();

    // V alone.
    let z_v = profile(one.scaled(law.p_v(0)), one.scaled(law.p_v(1)), len, budget)?;
    // V with B_l.
    let mut z_v_b: [Vec<f64>; 2] = Default::default();
    for l in 0..2 {
        let a = |v0: usize| law.weighted_state(outs(l), |v, _, _| v == v0);
        z_v_b[l] = profile(a(0), a(1), len, budget)?;
    }
    // V_l with V (classical side information), then additionally B_l.
    let mut z_vl_v: [Vec<f64>; 2] = Default::default();
    let mut z_vl_v_b: [Vec<f64>; 2] = Default::default();
    for l in 0..2 {
        let sel = |t: usize, v1: usize, v2: usize| if l == 0 { v1 == t } else { v2 == t };
        let classical = |t: usize| {
            let d: Vec<f64> = (0..2)
                .map(|v0| {
                    (0..2)
                        .flat_map(|a| (0..2).map(move |b| (a, b)))
                        .filter(|&(a, b)| sel(t, a, b))
                        .map(|(a, b)| law.p[v0][a][b])
                        .sum()
                })
                .collect();
            Hermitian::diagonal(d)
        };
        z_vl_v[l] = profile(classical(0), classical(1), len, budget)?;
        let quantum = |t: usize| {
            let mut acc = tag(
                0,
                2,
                &law.weighted_state(outs(l), |v, a, b| v == 0 && sel(t, a, b)),
            );
            acc.add_scaled(
                1.0,
                &tag(
                    1,
                    2,
                    &law.weighted_state(outs(l), |v, a, b| v == 1 && sel(t, a, b)),
                ),
            );
            acc.recanonicalize()
        };
        z_vl_v_b[l] = profile(quantum(0), quantum(1), len, budget)?;
    }
    // V1 with V and V2.
    let a = |t: usize| Hermitian::diagonal((0..4).map(|k| law.p[k >> 1][t][k & 1]).collect());
    let z_v1_v_v2 = profile(a(0), a(1), len, budget)?;

    let high =
        |z: &[f64]| -> Vec<usize> { (0..z.len()).filter(|&i| z[i] >= 1.0 - threshold).collect() };
    let low = |z: &[f64]| -> Vec<usize> { (0..z.len()).filter(|&i| z[i] <= threshold).collect() };
    let pair = |zs: &[Vec<f64>; 2], f: &dyn Fn(&[f64]) -> Vec<usize>| -> [Vec<usize>; 2] {
        [f(&zs[0]), f(&zs[1])]
    };

    let h_v = high(&z_v);
    let l_v = low(&z_v);
    let h_v_b = pair(&z_v_b, &high);
    let l_v_b = pair(&z_v_b, &low);
    let h_vl_v = pair(&z_vl_v, &high);
    let l_vl_v = pair(&z_vl_v, &low);
    let h_vl_v_b = pair(&z_vl_v_b, &high);
    let l_vl_v_b = pair(&z_vl_v_b, &low);
    let h_v1_v_v2 = high(&z_v1_v_v2);
    let l_v1_v_v2 = low(&z_v1_v_v2);

    Ok(PolarizationSets {
        threshold,
        i_sup_2: intersect(&h_v, &l_v_b[1]),
        i_v_1: intersect(&h_v, &l_v_b[0]),
        i_bin_2: intersect(&h_vl_v[1], &l_vl_v_b[1]),
        i_1: intersect(&h_vl_v[0], &l_vl_v_b[0]),
        f_1: intersect(&intersect(&l_v1_v_v2, &h_vl_v[0]), &h_vl_v_b[0]),
        z_v,
        z_v_b,
        z_vl_v,
        z_vl_v_b,
        z_v1_v_v2,
        h_v,
        l_v,
        h_v_b,
        l_v_b,
        h_vl_v,
        l_vl_v,
        h_vl_v_b,
        l_vl_v_b,
        h_v1_v_v2,
        l_v1_v_v2,
    })
}
