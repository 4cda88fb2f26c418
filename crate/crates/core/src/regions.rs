//! Achievable rate regions as systems of linear inequalities.
//!
//! Every bound is an exactly evaluated (conditional) information quantity of
//! a classical-quantum state built from explicit input distributions. Regions
//! keep their inequalities with small integer coefficients and a provenance
//! string; vertices and planar projections are derived on demand.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::budget::Budget;
use crate::channels::{BroadcastChannel, CqMac, InterferenceChannel, Receiver};
use crate::error::{Error, Result};
use crate::fmath;
use crate::polar::AuxiliaryLaw;
use crate::qmath::{check_distribution, spectral_entropy, DensityMatrix, Hermitian};
use crate::TOL_CHAIN;

/// Tolerance for vertex feasibility and deduplication.
pub const VERTEX_TOL: f64 = 1e-9;

/// `sum_j coeffs[j] R_j <= bound`.
#[derive(Clone, Debug, PartialEq)]
pub struct Inequality {
    pub coeffs: Vec<i32>,
    pub bound: f64,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RateRegion {
    pub names: Vec<String>,
    pub inequalities: Vec<Inequality>,
    pub provenance: String,
}

/// Result of a membership test.
#[derive(Clone, Debug, PartialEq)]
pub struct Membership {
    pub inside: bool,
    /// `bound - sum_j c_j R_j` per inequality.
    pub slacks: Vec<f64>,
}

impl RateRegion {
    /// Builds a region. Bounds must be finite; values below zero (numerical
    /// noise, or a sum bound made negative by strongly dependent auxiliaries)
    /// are clamped to zero, leaving only rates the trivial code achieves.
    pub fn new(
        names: Vec<String>,
        mut inequalities: Vec<Inequality>,
        provenance: String,
    ) -> Result<Self> {
        if inequalities.is_empty() {
            return Err(Error::InvariantViolation {
                index: 0,
                detail: "region without inequalities".into(),
            });
        }
        for (k, q) in inequalities.iter_mut().enumerate() {
            if q.coeffs.len() != names.len() {
                return Err(Error::DimMismatch {
                    expected: names.len(),
                    found: q.coeffs.len(),
                });
            }
            if !q.bound.is_finite() {
                return Err(Error::InvariantViolation {
                    index: k,
                    detail: format!("bound of {} is not finite", q.label),
                });
            }
            q.bound = q.bound.max(0.0);
        }
        Ok(RateRegion {
            names,
            inequalities,
            provenance,
        })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    /// Bound of the inequality whose coefficient vector is `coeffs`.
    pub fn bound_for(&self, coeffs: &[i32]) -> Option<f64> {
        self.inequalities
            .iter()
            .find(|q| q.coeffs == coeffs)
            .map(|q| q.bound)
    }

    pub fn slacks(&self, point: &[f64]) -> Result<Vec<f64>> {
        if point.len() != self.dim() {
            return Err(Error::DimMismatch {
                expected: self.dim(),
                found: point.len(),
            });
        }
        Ok(self
            .inequalities
            .iter()
            .map(|q| q.bound - dot(&q.coeffs, point))
            .collect())
    }

    /// Membership with nonnegative rates and every slack at least `-tol`.
    pub fn contains(&self, point: &[f64], tol: f64) -> Result<Membership> {
        let slacks = self.slacks(point)?;
        let inside = point.iter().all(|&r| r >= -tol) && slacks.iter().all(|&s| s >= -tol);
        Ok(Membership { inside, slacks })
    }

    /// Vertices of `{R >= 0} ∩ region`: every basic solution of `dim` tight
    /// constraints that satisfies the rest within [`VERTEX_TOL`], deduplicated.
    pub fn vertices(&self) -> Vec<Vec<f64>> {
        let d = self.dim();
        let mut rows: Vec<(Vec<f64>, f64)> = self
            .inequalities
            .iter()
            .map(|q| (q.coeffs.iter().map(|&c| c as f64).collect(), q.bound))
            .collect();
        for j in 0..d {
            let mut e = vec![0.0; d];
            e[j] = -1.0;
            rows.push((e, 0.0));
        }
        let mut out: Vec<Vec<f64>> = Vec::new();
        let mut pick: Vec<usize> = (0..d).collect();
        loop {
            let a: Vec<Vec<f64>> = pick.iter().map(|&i| rows[i].0.clone()).collect();
            let b: Vec<f64> = pick.iter().map(|&i| rows[i].1).collect();
            if let Some(x) = solve(a, b) {
                let feasible = rows.iter().all(|(c, bound)| {
                    let lhs: f64 = c.iter().zip(&x).map(|(c, x)| c * x).sum();
                    lhs <= bound + VERTEX_TOL
                });
                let fresh = out
                    .iter()
                    .all(|v| v.iter().zip(&x).any(|(p, q)| (p - q).abs() > VERTEX_TOL));
                if feasible && fresh {
                    out.push(
                        x.into_iter()
                            .map(|v| if v.abs() < VERTEX_TOL { 0.0 } else { v })
                            .collect(),
                    );
                }
            }
            if !next_combination(&mut pick, rows.len()) {
                break;
            }
        }
        out.sort_by(|p, q| p.partial_cmp(q).unwrap_or(core::cmp::Ordering::Equal));
        out
    }

    /// Convex hull (counter-clockwise) of the vertices mapped by the two
    /// integer rows, e.g. `[[1,0,1,0],[0,1,0,1]]` for `(S1+T1, S2+T2)`.
    pub fn project(&self, rows: [&[i32]; 2]) -> Result<Vec<[f64; 2]>> {
        for r in rows {
            if r.len() != self.dim() {
                return Err(Error::DimMismatch {
                    expected: self.dim(),
                    found: r.len(),
                });
            }
        }
        let pts: Vec<[f64; 2]> = self
            .vertices()
            .iter()
            .map(|v| [dot(rows[0], v), dot(rows[1], v)])
            .collect();
        Ok(convex_hull(pts))
    }
}

/// Membership at tolerance [`TOL_CHAIN`](crate::TOL_CHAIN).
pub fn point_in_region(region: &RateRegion, point: &[f64]) -> Result<Membership> {
    region.contains(point, TOL_CHAIN)
}

fn dot(c: &[i32], x: &[f64]) -> f64 {
    c.iter().zip(x).map(|(&c, x)| c as f64 * x).sum()
}

fn next_combination(pick: &mut [usize], n: usize) -> bool {
    let k = pick.len();
    for i in (0..k).rev() {
        if pick[i] < n - k + i {
            pick[i] += 1;
            for j in i + 1..k {
                pick[j] = pick[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Gaussian elimination with partial pivoting; `None` for singular systems.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for c in col..n {
                    a[r][c] -= f * a[col][c];
                }
                b[r] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

fn convex_hull(mut pts: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    pts.sort_by(|p, q| p[0].total_cmp(&q[0]).then(p[1].total_cmp(&q[1])));
    pts.dedup_by(|p, q| (p[0] - q[0]).abs() <= VERTEX_TOL && (p[1] - q[1]).abs() <= VERTEX_TOL);
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut hull: Vec<[f64; 2]> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Vec<[f64; 2]> = if pass == 0 {
            pts.clone()
        } else {
            pts.iter().rev().copied().collect()
        };
        for p in iter {
            while hull.len() >= start + 2
                && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= VERTEX_TOL
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Joint law of classical registers with one quantum output per tuple.
/// Tuples are in mixed radix with the first register most significant.
struct CqTable<'a> {
    alphabets: Vec<usize>,
    probs: Vec<f64>,
    states: Vec<&'a Hermitian>,
}

impl<'a> CqTable<'a> {
    fn new(
        alphabets: Vec<usize>,
        probs: Vec<f64>,
        states: Vec<&'a Hermitian>,
        budget: &Budget,
    ) -> Result<Self> {
        let dim = states.first().map_or(0, |s| s.dim()) as u64;
        // One accumulator per group of the finest conditioning.
        budget.check(Budget::dense_states(probs.len() as u64, dim))?;
        Ok(CqTable {
            alphabets,
            probs,
            states,
        })
    }

    fn key(&self, mut t: usize, vars: &[usize]) -> usize {
        let mut digits = vec![0; self.alphabets.len()];
        for (i, &a) in self.alphabets.iter().enumerate().rev() {
            digits[i] = t % a;
            t /= a;
        }
        vars.iter()
            .fold(0, |k, &v| k * self.alphabets[v] + digits[v])
    }

    fn groups(&self, vars: &[usize]) -> usize {
        vars.iter().map(|&v| self.alphabets[v]).product()
    }

    /// `H(vars)` in bits.
    fn classical_entropy(&self, vars: &[usize]) -> f64 {
        let mut p = vec![0.0; self.groups(vars)];
        for (t, &q) in self.probs.iter().enumerate() {
            p[self.key(t, vars)] += q;
        }
        fmath::shannon_entropy(&p)
    }

    /// `H(B | vars)`: the summed entropy of the unnormalized blocks minus
    /// the entropy of the conditioning registers.
    fn entropy_given(&self, vars: &[usize]) -> Result<f64> {
        let dim = self.states[0].dim();
        let mut blocks: Vec<Option<Hermitian>> = (0..self.groups(vars)).map(|_| None).collect();
        let mut p = vec![0.0; blocks.len()];
        for (t, &q) in self.probs.iter().enumerate() {
            if q == 0.0 {
                continue;
            }
            let k = self.key(t, vars);
            p[k] += q;
            blocks[k]
                .get_or_insert_with(|| Hermitian::zeros(dim))
                .add_scaled(q, self.states[t]);
        }
        let mut h = 0.0;
        for b in blocks.into_iter().flatten() {
            h += spectral_entropy(&b.recanonicalize())?;
        }
        Ok(h - fmath::shannon_entropy(&p))
    }

    /// `I(A; B | C)` with `B` the quantum output.
    fn info(&self, a: &[usize], c: &[usize]) -> Result<f64> {
        let mut ac = c.to_vec();
        ac.extend_from_slice(a);
        Ok(self.entropy_given(c)? - self.entropy_given(&ac)?)
    }

    /// Classical `I(A; B | C)` between registers.
    fn classical_info(&self, a: &[usize], b: &[usize], c: &[usize]) -> f64 {
        let join = |x: &[usize]| {
            let mut v = c.to_vec();
            v.extend_from_slice(x);
            v
        };
        let ab: Vec<usize> = a.iter().chain(b).copied().collect();
        self.classical_entropy(&join(a)) + self.classical_entropy(&join(b))
            - self.classical_entropy(&join(&ab))
            - self.classical_entropy(c)
    }
}

fn product_law(dists: &[&[f64]]) -> Vec<f64> {
    dists.iter().fold(vec![1.0], |acc, d| {
        acc.iter()
            .flat_map(|&a| d.iter().map(move |&p| a * p))
            .collect()
    })
}

fn var_list(prefix: &str, vars: &[usize], names: &[&str]) -> String {
    let mut s = String::from(prefix);
    for &v in vars {
        s.push_str(names[v]);
    }
    s
}

fn info_label(lhs: &str, a: &[usize], out: &str, c: &[usize], names: &[&str]) -> String {
    let mut s = format!("{lhs} <= I({};{out}", var_list("", a, names));
    if !c.is_empty() {
        s.push('|');
        s.push_str(&var_list("", c, names));
    }
    s.push(')');
    s
}

/// A MAC region with the corner point of every decoding order.
#[derive(Clone, Debug, PartialEq)]
pub struct MacRegion {
    pub region: RateRegion,
    /// `(order, rates)`: decoding `order[0]` first gives it `I(X_a;B)`, the
    /// next `I(X_b;B|X_a)`, and so on.
    pub corners: Vec<(Vec<usize>, Vec<f64>)>,
}

/// `sum_{j in S} R_j <= I(X_S; B | X_{S^c})` for every nonempty `S`, under
/// the product input law `inputs`.
pub fn mac_region(mac: &CqMac, inputs: &[Vec<f64>], budget: &Budget) -> Result<MacRegion> {
    let k = mac.users();
    if inputs.len() != k {
        return Err(Error::DimMismatch {
            expected: k,
            found: inputs.len(),
        });
    }
    for (d, &a) in inputs.iter().zip(mac.alphabets()) {
        if d.len() != a {
            return Err(Error::DimMismatch {
                expected: a,
                found: d.len(),
            });
        }
        check_distribution(d)?;
    }
    let dists: Vec<&[f64]> = inputs.iter().map(|d| d.as_slice()).collect();
    let table = CqTable::new(
        mac.alphabets().to_vec(),
        product_law(&dists),
        mac.outputs().iter().map(|r| r.as_hermitian()).collect(),
        budget,
    )?;
    let names: Vec<String> = (1..=k).map(|j| format!("R{j}")).collect();
    let xs: Vec<String> = (1..=k).map(|j| format!("X{j}")).collect();
    let xr: Vec<&str> = xs.iter().map(|s| s.as_str()).collect();
    let mut ineqs = Vec::new();
    for mask in 1usize..1 << k {
        let s: Vec<usize> = (0..k).filter(|j| mask >> j & 1 == 1).collect();
        let c: Vec<usize> = (0..k).filter(|j| mask >> j & 1 == 0).collect();
        let lhs = s
            .iter()
            .map(|&j| names[j].as_str())
            .collect::<Vec<_>>()
            .join("+");
        ineqs.push(Inequality {
            coeffs: (0..k).map(|j| (mask >> j & 1) as i32).collect(),
            bound: table.info(&s, &c)?,
            label: info_label(&lhs, &s, "B", &c, &xr),
        });
    }
    let mut corners = Vec::new();
    let mut order: Vec<usize> = (0..k).collect();
    loop {
        let mut rates = vec![0.0; k];
        for (pos, &j) in order.iter().enumerate() {
            rates[j] = table.info(&[j], &order[..pos])?;
        }
        corners.push((order.clone(), rates));
        if !next_permutation(&mut order) {
            break;
        }
    }
    let region = RateRegion::new(names, ineqs, format!("mac: {k} users, inputs {inputs:?}"))?;
    Ok(MacRegion { region, corners })
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap_or(i + 1);
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

/// Auxiliary laws and encoding maps of a Han-Kobayashi code.
///
/// Sender 1 splits its message into a private part `V1` (rate `S1`) and a
/// common part `V3` (rate `T1`) and sends `x1[v1][v3]`; sender 2 uses `V2`
/// (rate `S2`) and `V4` (rate `T2`) and sends `x2[v2][v4]`. Receiver 1
/// decodes `V1, V3, V4`, receiver 2 decodes `V2, V3, V4`.
#[derive(Clone, Debug, PartialEq)]
pub struct HkInputs {
    /// Laws of `V1, V2, V3, V4`.
    pub aux: [Vec<f64>; 4],
    pub x1: Vec<Vec<usize>>,
    pub x2: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HkRegion {
    /// Over `(S1, S2, T1, T2)`: the 14 bounds, receiver 1 first.
    pub region: RateRegion,
    /// The 3-user MAC regions over `(S1, T1, T2)` and `(S2, T1, T2)`.
    pub receivers: [RateRegion; 2],
    /// Hull of the achievable `(S1 + T1, S2 + T2)` pairs.
    pub projection: Vec<[f64; 2]>,
}

fn check_map(map: &[Vec<usize>], rows: usize, cols: usize, alphabet: usize) -> Result<()> {
    if map.len() != rows {
        return Err(Error::DimMismatch {
            expected: rows,
            found: map.len(),
        });
    }
    for row in map {
        if row.len() != cols {
            return Err(Error::DimMismatch {
                expected: cols,
                found: row.len(),
            });
        }
        if let Some(&x) = row.iter().find(|&&x| x >= alphabet) {
            return Err(Error::DimMismatch {
                expected: alphabet,
                found: x + 1,
            });
        }
    }
    Ok(())
}

pub fn hk_region(ic: &InterferenceChannel, inputs: &HkInputs, budget: &Budget) -> Result<HkRegion> {
    let alph: Vec<usize> = inputs.aux.iter().map(|d| d.len()).collect();
    for d in &inputs.aux {
        check_distribution(d)?;
    }
    let xa = ic.joint().alphabets();
    check_map(&inputs.x1, alph[0], alph[2], xa[0])?;
    check_map(&inputs.x2, alph[1], alph[3], xa[1])?;
    let dists: Vec<&[f64]> = inputs.aux.iter().map(|d| d.as_slice()).collect();
    let law = product_law(&dists);
    let names4: Vec<String> = ["S1", "S2", "T1", "T2"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let vnames = ["V1", "V2", "V3", "V4"];
    let mut all = Vec::new();
    let mut receivers = Vec::new();
    for (r, receiver) in [Receiver::First, Receiver::Second].into_iter().enumerate() {
        let mac = ic.induced_mac(receiver)?;
        let states: Vec<&Hermitian> = (0..law.len())
            .map(|t| {
                let v4 = t % alph[3];
                let v3 = t / alph[3] % alph[2];
                let v2 = t / (alph[3] * alph[2]) % alph[1];
                let v1 = t / (alph[3] * alph[2] * alph[1]);
                mac.output(&[inputs.x1[v1][v3], inputs.x2[v2][v4]])
                    .as_hermitian()
            })
            .collect();
        let table = CqTable::new(alph.clone(), law.clone(), states, budget)?;
        // Decoded registers of this receiver and their coordinates in (S1,S2,T1,T2).
        let decoded = [r, 2, 3];
        let coord = [r, 2, 3];
        let local = [names4[r].clone(), "T1".into(), "T2".into()];
        let out = if r == 0 { "B1" } else { "B2" };
        let mut rx = Vec::new();
        for mask in [1usize, 2, 4, 3, 5, 6, 7] {
            let s: Vec<usize> = (0..3)
                .filter(|j| mask >> j & 1 == 1)
                .map(|j| decoded[j])
                .collect();
            let c: Vec<usize> = (0..3)
                .filter(|j| mask >> j & 1 == 0)
                .map(|j| decoded[j])
                .collect();
            let lhs = (0..3)
                .filter(|j| mask >> j & 1 == 1)
                .map(|j| local[j].as_str())
                .collect::<Vec<_>>()
                .join("+");
            let bound = table.info(&s, &c)?;
            let label = info_label(&lhs, &s, out, &c, &vnames);
            let mut coeffs = vec![0; 4];
            for j in 0..3 {
                coeffs[coord[j]] = (mask >> j & 1) as i32;
            }
            rx.push(Inequality {
                coeffs: (0..3).map(|j| (mask >> j & 1) as i32).collect(),
                bound,
                label: label.clone(),
            });
            all.push(Inequality {
                coeffs,
                bound,
                label,
            });
        }
        receivers.push(RateRegion::new(
            local.to_vec(),
            rx,
            format!("hk receiver {}", r + 1),
        )?);
    }
    let region = RateRegion::new(names4, all, format!("hk: aux {:?}", inputs.aux))?;
    let projection = region.project([&[1, 0, 1, 0], &[0, 1, 0, 1]])?;
    let [a, b]: [RateRegion; 2] = receivers
        .try_into()
        .map_err(|_| Error::InvariantViolation {
            index: 0,
            detail: "receiver count".into(),
        })?;
    Ok(HkRegion {
        region,
        receivers: [a, b],
        projection,
    })
}

fn broadcast_marginals(bc: &BroadcastChannel) -> Result<[Vec<DensityMatrix>; 2]> {
    Ok([
        bc.marginal(Receiver::First)?.outputs().to_vec(),
        bc.marginal(Receiver::Second)?.outputs().to_vec(),
    ])
}

/// Marton's binning region for the joint law `p[u1][u2]` and the encoder
/// `x = f[u1][u2]`:
/// `R1 <= I(U1;B1)`, `R2 <= I(U2;B2)`,
/// `R1 + R2 <= I(U1;B1) + I(U2;B2) - I(U1;U2)`.
pub fn marton_region(
    bc: &BroadcastChannel,
    joint: &[Vec<f64>],
    f: &[Vec<usize>],
    budget: &Budget,
) -> Result<RateRegion> {
    let a1 = joint.len();
    let a2 = joint.first().map_or(0, |r| r.len());
    check_map(f, a1, a2, bc.alphabet_size())?;
    if let Some(r) = joint.iter().find(|r| r.len() != a2) {
        return Err(Error::DimMismatch {
            expected: a2,
            found: r.len(),
        });
    }
    let law: Vec<f64> = joint.iter().flatten().copied().collect();
    check_distribution(&law)?;
    let outs = broadcast_marginals(bc)?;
    let mut info = [0.0; 2];
    let mut mutual = 0.0;
    for (l, o) in outs.iter().enumerate() {
        let states = (0..law.len())
            .map(|t| o[f[t / a2][t % a2]].as_hermitian())
            .collect();
        let table = CqTable::new(vec![a1, a2], law.clone(), states, budget)?;
        info[l] = table.info(&[l], &[])?;
        mutual = table.classical_info(&[0], &[1], &[]);
    }
    RateRegion::new(
        vec!["R1".into(), "R2".into()],
        vec![
            Inequality {
                coeffs: vec![1, 0],
                bound: info[0],
                label: "R1 <= I(U1;B1)".into(),
            },
            Inequality {
                coeffs: vec![0, 1],
                bound: info[1],
                label: "R2 <= I(U2;B2)".into(),
            },
            Inequality {
                coeffs: vec![1, 1],
                bound: info[0] + info[1] - mutual,
                label: "R1+R2 <= I(U1;B1)+I(U2;B2)-I(U1;U2)".into(),
            },
        ],
        format!("marton: p(u1,u2) {joint:?}, f {f:?}"),
    )
}

/// The information quantities behind the superposition-and-binning region.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MgpQuantities {
    pub i_v_v1_b1: f64,
    pub i_v_v2_b2: f64,
    pub i_v1_b1_given_v: f64,
    pub i_v2_b2_given_v: f64,
    pub i_v_b1: f64,
    pub i_v_b2: f64,
    pub i_v1_v2_given_v: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MgpRegion {
    /// Over `(R1, R2)`, or `(R0, R1, R2)` with a common message.
    pub region: RateRegion,
    pub quantities: MgpQuantities,
    /// The two constructive corner points, in the region's coordinates
    /// (`R0 = 0` when a common message is present).
    pub corners: [Vec<f64>; 2],
    /// Whether the construction ran with the receivers' roles exchanged
    /// because `I(V;B1) > I(V;B2)`.
    pub swapped: bool,
}

/// Moves a corner along its sum line until both rates are nonnegative.
fn onto_quadrant(mut r: [f64; 2]) -> [f64; 2] {
    for i in 0..2 {
        if r[i] < 0.0 {
            r[1 - i] = (r[1 - i] + r[i]).max(0.0);
            r[i] = 0.0;
        }
    }
    r
}

/// Superposition (`V`, decodable by both) with binning (`V1`, `V2`) for the
/// law `p(v) p(v2|v) p(v1|v2,v)` and encoder `x = phi(v, v1, v2)`.
///
/// The corner points follow the construction in which receiver 1 is the
/// weaker one for `V`; if `I(V;B1) > I(V;B2)` the roles are exchanged. A
/// negative corner rate is moved onto the axis along its sum-rate line.
pub fn mgp_region(
    bc: &BroadcastChannel,
    law: &AuxiliaryLaw,
    with_common: bool,
    budget: &Budget,
) -> Result<MgpRegion> {
    let flat: Vec<f64> = law.p.iter().flatten().flatten().copied().collect();
    check_distribution(&flat).map_err(|e| Error::InvalidFactorization(format!("{e}")))?;
    if let Some(&x) = law
        .phi
        .iter()
        .flatten()
        .flatten()
        .find(|&&x| x >= bc.alphabet_size())
    {
        return Err(Error::InvalidFactorization(format!(
            "phi maps to symbol {x}, alphabet has {}",
            bc.alphabet_size()
        )));
    }
    let outs = broadcast_marginals(bc)?;
    // Registers: 0 = V, 1 = V1, 2 = V2.
    let table_for = |o: &'_ [DensityMatrix], own: usize| -> Result<[f64; 3]> {
        let states = (0..8)
            .map(|t| o[law.phi[t >> 2][t >> 1 & 1][t & 1]].as_hermitian())
            .collect();
        let table = CqTable::new(vec![2, 2, 2], flat.clone(), states, budget)?;
        Ok([
            table.info(&[0, own], &[])?,
            table.info(&[own], &[0])?,
            table.info(&[0], &[])?,
        ])
    };
    let [i_v_v1_b1, i_v1_b1_given_v, i_v_b1] = table_for(&outs[0], 1)?;
    let [i_v_v2_b2, i_v2_b2_given_v, i_v_b2] = table_for(&outs[1], 2)?;
    let cls = CqTable {
        alphabets: vec![2, 2, 2],
        probs: flat.clone(),
        states: Vec::new(),
    };
    let i_v1_v2_given_v = cls.classical_info(&[1], &[2], &[0]);
    let q = MgpQuantities {
        i_v_v1_b1,
        i_v_v2_b2,
        i_v1_b1_given_v,
        i_v2_b2_given_v,
        i_v_b1,
        i_v_b2,
        i_v1_v2_given_v,
    };
    let sum1 = i_v_v1_b1 + i_v2_b2_given_v - i_v1_v2_given_v;
    let sum2 = i_v_v2_b2 + i_v1_b1_given_v - i_v1_v2_given_v;
    let swapped = i_v_b1 > i_v_b2 + TOL_CHAIN;
    let (c1, c2) = if !swapped {
        (
            [i_v_v1_b1 - i_v1_v2_given_v - i_v_b2, i_v_v2_b2],
            [i_v_v1_b1, i_v2_b2_given_v - i_v1_v2_given_v],
        )
    } else {
        (
            [i_v_v1_b1, i_v_v2_b2 - i_v1_v2_given_v - i_v_b1],
            [i_v1_b1_given_v - i_v1_v2_given_v, i_v_v2_b2],
        )
    };
    let (c1, c2) = (onto_quadrant(c1), onto_quadrant(c2));
    let r0 = i32::from(with_common);
    let pad = |c: &[i32]| -> Vec<i32> {
        if with_common {
            let mut v = vec![1];
            v.extend_from_slice(c);
            v
        } else {
            c.to_vec()
        }
    };
    let mut ineqs = Vec::new();
    if with_common {
        ineqs.push(Inequality {
            coeffs: vec![1, 0, 0],
            bound: i_v_b1.min(i_v_b2),
            label: "R0 <= min{I(V;B1),I(V;B2)}".into(),
        });
    }
    let prefix = if r0 == 1 { "R0+" } else { "" };
    ineqs.extend([
        Inequality {
            coeffs: pad(&[1, 0]),
            bound: i_v_v1_b1,
            label: format!("{prefix}R1 <= I(V,V1;B1)"),
        },
        Inequality {
            coeffs: pad(&[0, 1]),
            bound: i_v_v2_b2,
            label: format!("{prefix}R2 <= I(V,V2;B2)"),
        },
        Inequality {
            coeffs: pad(&[1, 1]),
            bound: sum1,
            label: format!("{prefix}R1+R2 <= I(V,V1;B1)+I(V2;B2|V)-I(V1;V2|V)"),
        },
        Inequality {
            coeffs: pad(&[1, 1]),
            bound: sum2,
            label: format!("{prefix}R1+R2 <= I(V,V2;B2)+I(V1;B1|V)-I(V1;V2|V)"),
        },
    ]);
    let mut names: Vec<String> = vec!["R1".into(), "R2".into()];
    if with_common {
        names.insert(0, "R0".into());
    }
    let region = RateRegion::new(
        names,
        ineqs,
        format!("mgp: p {:?}, phi {:?}", law.p, law.phi),
    )?;
    let lift = |c: [f64; 2]| -> Vec<f64> {
        if with_common {
            vec![0.0, c[0], c[1]]
        } else {
            c.to_vec()
        }
    };
    let corners = [lift(c1), lift(c2)];
    for (k, c) in corners.iter().enumerate() {
        let m = region.contains(c, TOL_CHAIN)?;
        if !m.inside {
            return Err(Error::InvariantViolation {
                index: k,
                detail: format!("corner {c:?} outside the region, slacks {:?}", m.slacks),
            });
        }
    }
    Ok(MgpRegion {
        region,
        quantities: q,
        corners,
        swapped,
    })
}
