//! Depth-first evaluation of the polarization tree.
//!
//! For per-letter PSD operators `A_0, A_1` (unnormalized, `tr A_x = p(x)`)
//! the node for a prefix `p = u_1..u_d` holds
//! `A_p = sum_{tail} A_{x_1} (x) .. (x) A_{x_N}` with `x = u G_N`.
//! Every conditional entropy and Bhattacharyya quantity of the synthesized
//! channels is a function of the node spectra and of the sibling fidelities
//! `||sqrt(A_{p0}) sqrt(A_{p1})||_1`, which this module records level by level.

use alloc::vec::Vec;

use super::transform::PolarTransform;
use crate::bits::to_bits;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fmath;
use crate::qmath::{Factored, Hermitian};

/// Per-letter operators of a binary source with (optional) side information.
#[derive(Clone, Debug)]
pub struct Letters {
    ops: [Hermitian; 2],
}

impl Letters {
    pub fn new(a0: Hermitian, a1: Hermitian) -> Result<Self> {
        if a0.dim() != a1.dim() {
            return Err(Error::DimMismatch {
                expected: a0.dim(),
                found: a1.dim(),
            });
        }
        Ok(Letters { ops: [a0, a1] })
    }

    /// Letters of a binary cq channel under prior `(1-q, q)`.
    pub fn from_channel(rho0: &Hermitian, rho1: &Hermitian, q: f64) -> Result<Self> {
        Self::new(rho0.scaled(1.0 - q), rho1.scaled(q))
    }

    /// Letters without side information.
    pub fn source(q: f64) -> Self {
        Letters {
            ops: [
                Hermitian::diagonal(alloc::vec![1.0 - q]),
                Hermitian::diagonal(alloc::vec![q]),
            ],
        }
    }

    pub fn dim(&self) -> usize {
        self.ops[0].dim()
    }

    pub fn op(&self, x: u8) -> &Hermitian {
        &self.ops[x as usize]
    }

    pub fn is_diagonal(&self) -> bool {
        self.ops.iter().all(|a| a.is_diagonal())
    }

    /// `A_{x_1} (x) .. (x) A_{x_N}`.
    pub fn product(&self, x: &[u8]) -> Hermitian {
        let mut acc = Hermitian::diagonal(alloc::vec![1.0]);
        for &b in x {
            acc = acc.kron(self.op(b));
        }
        acc
    }

    /// `A_p` for a prefix of `u`, by direct enumeration of the tail.
    pub fn node(&self, len: usize, prefix: &[u8]) -> Result<Hermitian> {
        let t = PolarTransform::new(len)?;
        let tail = len - prefix.len();
        let mut acc = Hermitian::zeros(self.dim().pow(len as u32));
        let mut u = alloc::vec![0u8; len];
        u[..prefix.len()].copy_from_slice(prefix);
        for v in 0..1usize << tail {
            for (k, b) in to_bits(v, tail).into_iter().enumerate() {
                u[prefix.len() + k] = b;
            }
            let mut x = u.clone();
            t.apply(&mut x);
            acc.add_scaled(1.0, &self.product(&x));
        }
        Ok(acc.recanonicalize())
    }
}

/// Level-indexed spectra and sibling fidelities of the polarization tree.
#[derive(Clone, Debug, PartialEq)]
pub struct TreeStats {
    len: usize,
    /// `entropy[d][p] = S(A_p)` over prefixes of length `d`, in bits.
    pub entropy: Vec<Vec<f64>>,
    /// `weight[d][p] = tr A_p`.
    pub weight: Vec<Vec<f64>>,
    /// `fidelity[i][b] = ||sqrt(A_{b0}) sqrt(A_{b1})||_1` for `|b| = i`.
    pub fidelity: Vec<Vec<f64>>,
}

fn ordered_sum(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, &x| a + x)
}

impl TreeStats {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `H(U^d B^N)`.
    pub fn joint_entropy(&self, d: usize) -> f64 {
        ordered_sum(&self.entropy[d])
    }

    /// `H(U^d)` from the node weights.
    pub fn classical_joint_entropy(&self, d: usize) -> f64 {
        self.weight[d]
            .iter()
            .map(|&w| fmath::xlog2x(w))
            .fold(0.0, |a, x| a + x)
    }

    /// `H(U_i | U^{i-1} B^N)`, 0-based `i`.
    pub fn cond_entropy(&self, i: usize) -> f64 {
        self.joint_entropy(i + 1) - self.joint_entropy(i)
    }

    /// `H(U_i | U^{i-1})`, 0-based `i`.
    pub fn classical_cond_entropy(&self, i: usize) -> f64 {
        self.classical_joint_entropy(i + 1) - self.classical_joint_entropy(i)
    }

    /// `I(U_i; B^N | U^{i-1})`.
    pub fn mutual_information(&self, i: usize) -> f64 {
        self.classical_cond_entropy(i) - self.cond_entropy(i)
    }

    /// `Z(U_i | U^{i-1} B^N) = 2 sum_b ||sqrt(A_{b0}) sqrt(A_{b1})||_1`.
    pub fn bhattacharyya(&self, i: usize) -> f64 {
        2.0 * ordered_sum(&self.fidelity[i])
    }

    /// `Z(U_i | U^{i-1})` from the node weights.
    pub fn classical_bhattacharyya(&self, i: usize) -> f64 {
        let w = &self.weight[i + 1];
        2.0 * (0..w.len() / 2)
            .map(|b| fmath::sqrt(w[2 * b] * w[2 * b + 1]))
            .fold(0.0, |a, x| a + x)
    }
}

enum Node {
    Diag(Vec<f64>),
    Low {
        f: Factored,
        entropy: f64,
        weight: f64,
    },
}

struct LetterData {
    entropy: [f64; 2],
    trace: [f64; 2],
    fid: [[f64; 2]; 2],
    factors: [Factored; 2],
}

/// Memory needed to evaluate the tree: live nodes along the search path.
pub fn tree_bytes(letters: &Letters, len: usize) -> u64 {
    let d = (letters.dim() as u64).saturating_pow(len as u32);
    let live = 2 * (len as u64 + 1);
    if letters.is_diagonal() {
        live.saturating_mul(d).saturating_mul(8)
    } else {
        Budget::dense_states(live, d)
    }
}

/// Evaluates the full tree by depth-first search. Node values are stored per
/// position so that sums are taken in a fixed order regardless of how the
/// tree was traversed.
pub fn tree_stats(letters: &Letters, len: usize, budget: &Budget) -> Result<TreeStats> {
    let mut stats = empty_stats(len)?;
    budget.check(tree_bytes(letters, len))?;
    let ctx = Ctx::new(letters, len)?;
    let root = ctx.visit(&mut alloc::vec![], &mut stats)?;
    let (e, w) = ctx.summarize(&root);
    stats.entropy[0][0] = e;
    stats.weight[0][0] = w;
    Ok(stats)
}

/// Evaluates only the subtree under `prefix`, filling entries at depths
/// `>= prefix.len()` of `stats` that belong to it. Returns the subtree root
/// operator so that callers can combine subtrees.
pub fn subtree_stats(
    letters: &Letters,
    len: usize,
    prefix: &[u8],
    stats: &mut TreeStats,
) -> Result<Hermitian> {
    let ctx = Ctx::new(letters, len)?;
    let mut p = prefix.to_vec();
    let node = ctx.visit(&mut p, stats)?;
    let (e, w) = ctx.summarize(&node);
    let idx = crate::bits::from_bits(prefix);
    stats.entropy[prefix.len()][idx] = e;
    stats.weight[prefix.len()][idx] = w;
    Ok(ctx.to_hermitian(&node))
}

/// Zero-filled statistics for a tree of length `len`.
pub fn empty_stats(len: usize) -> Result<TreeStats> {
    PolarTransform::new(len)?;
    Ok(TreeStats {
        len,
        entropy: (0..=len).map(|d| alloc::vec![0.0; 1 << d]).collect(),
        weight: (0..=len).map(|d| alloc::vec![0.0; 1 << d]).collect(),
        fidelity: (0..len).map(|d| alloc::vec![0.0; 1 << d]).collect(),
    })
}

/// Fills the levels above `cut` from the subtree roots at depth `cut`.
pub fn finish_top(
    letters: &Letters,
    roots: Vec<Hermitian>,
    cut: usize,
    stats: &mut TreeStats,
) -> Result<()> {
    let ctx = Ctx::new(letters, stats.len)?;
    let mut level: Vec<Node> = roots
        .iter()
        .map(|h| ctx.node_of(h))
        .collect::<Result<_>>()?;
    for d in (0..cut).rev() {
        let mut up = Vec::with_capacity(level.len() / 2);
        let mut it = level.into_iter();
        for b in 0..1usize << d {
            let (n0, n1) = (it.next().unwrap(), it.next().unwrap());
            stats.fidelity[d][b] = ctx.pair_fidelity(&n0, &n1);
            let parent = ctx.merge(n0, n1)?;
            let (e, w) = ctx.summarize(&parent);
            stats.entropy[d][b] = e;
            stats.weight[d][b] = w;
            up.push(parent);
        }
        level = up;
    }
    Ok(())
}

struct Ctx<'a> {
    letters: &'a Letters,
    len: usize,
    transform: PolarTransform,
    diag: bool,
    data: LetterData,
    full_dim: usize,
}

impl<'a> Ctx<'a> {
    fn new(letters: &'a Letters, len: usize) -> Result<Self> {
        let transform = PolarTransform::new(len)?;
        let ops = &letters.ops;
        let factors = [
            Factored::from_hermitian(&ops[0])?,
            Factored::from_hermitian(&ops[1])?,
        ];
        let mut fid = [[0.0; 2]; 2];
        for x in 0..2 {
            for y in 0..2 {
                fid[x][y] = factors[x].sqrt_fidelity(&factors[y]);
            }
        }
        let data = LetterData {
            entropy: [factors[0].entropy(), factors[1].entropy()],
            trace: [ops[0].trace(), ops[1].trace()],
            fid,
            factors,
        };
        Ok(Ctx {
            letters,
            len,
            transform,
            diag: letters.is_diagonal(),
            data,
            full_dim: letters.dim().pow(len as u32),
        })
    }

    fn leaf_x(&self, u: &[u8]) -> Vec<u8> {
        let mut x = u.to_vec();
        self.transform.apply(&mut x);
        x
    }

    /// `S(A_{x_1} (x) ..)` and its trace from per-letter data.
    fn leaf_summary(&self, x: &[u8]) -> (f64, f64) {
        let traces: Vec<f64> = x.iter().map(|&b| self.data.trace[b as usize]).collect();
        let total: f64 = traces.iter().product();
        let mut s = 0.0;
        for (k, &b) in x.iter().enumerate() {
            let others: f64 = traces
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, t)| t)
                .product();
            s += self.data.entropy[b as usize] * others;
        }
        (s, total)
    }

    fn leaf(&self, x: &[u8]) -> Node {
        if self.diag {
            let mut v = alloc::vec![1.0];
            for &b in x {
                let d = self.letters.op(b).as_diagonal().unwrap();
                let mut next = Vec::with_capacity(v.len() * d.len());
                for &a in &v {
                    for &c in d {
                        next.push(a * c);
                    }
                }
                v = next;
            }
            Node::Diag(v)
        } else {
            let mut f = self.data.factors[x[0] as usize].clone();
            for &b in &x[1..] {
                f = f.kron(&self.data.factors[b as usize]);
            }
            let (entropy, weight) = self.leaf_summary(x);
            Node::Low { f, entropy, weight }
        }
    }

    fn summarize(&self, n: &Node) -> (f64, f64) {
        match n {
            Node::Diag(v) => (
                v.iter().map(|&p| fmath::xlog2x(p)).fold(0.0, |a, x| a + x),
                v.iter().sum(),
            ),
            Node::Low {
                entropy, weight, ..
            } => (*entropy, *weight),
        }
    }

    fn pair_fidelity(&self, a: &Node, b: &Node) -> f64 {
        match (a, b) {
            (Node::Diag(p), Node::Diag(q)) => p
                .iter()
                .zip(q)
                .map(|(&x, &y)| {
                    if x > 0.0 && y > 0.0 {
                        fmath::sqrt(x * y)
                    } else {
                        0.0
                    }
                })
                .sum(),
            (Node::Low { f: fa, .. }, Node::Low { f: fb, .. }) => fa.sqrt_fidelity(fb),
            _ => unreachable!("tree nodes share one representation"),
        }
    }

    fn node_of(&self, h: &Hermitian) -> Result<Node> {
        if self.diag {
            return Ok(Node::Diag(h.diag_entries()));
        }
        let f = Factored::from_hermitian(h)?;
        let entropy = f.entropy();
        Ok(Node::Low {
            weight: h.trace(),
            f,
            entropy,
        })
    }

    fn to_hermitian(&self, n: &Node) -> Hermitian {
        match n {
            Node::Diag(v) => Hermitian::diagonal(v.clone()),
            Node::Low { f, .. } => f.to_hermitian(),
        }
    }

    fn merge(&self, a: Node, b: Node) -> Result<Node> {
        match (a, b) {
            (Node::Diag(mut p), Node::Diag(q)) => {
                for (x, y) in p.iter_mut().zip(q) {
                    *x += y;
                }
                Ok(Node::Diag(p))
            }
            (
                Node::Low {
                    f: fa, weight: wa, ..
                },
                Node::Low {
                    f: fb, weight: wb, ..
                },
            ) => {
                let f = Factored::mixture(&[1.0, 1.0], &[&fa, &fb]);
                if f.width() > self.full_dim {
                    let h = f.to_hermitian();
                    let g = Factored::from_hermitian(&h)?;
                    let entropy = g.entropy();
                    Ok(Node::Low {
                        f: g,
                        entropy,
                        weight: wa + wb,
                    })
                } else {
                    let entropy = f.entropy();
                    Ok(Node::Low {
                        f,
                        entropy,
                        weight: wa + wb,
                    })
                }
            }
            _ => unreachable!("tree nodes share one representation"),
        }
    }

    fn visit(&self, prefix: &mut Vec<u8>, stats: &mut TreeStats) -> Result<Node> {
        let d = prefix.len();
        if d == self.len {
            return Ok(self.leaf(&self.leaf_x(prefix)));
        }
        let idx = crate::bits::from_bits(prefix);
        let mut children = Vec::with_capacity(2);
        for bit in 0..2u8 {
            prefix.push(bit);
            let child = self.visit(prefix, stats)?;
            let cidx = 2 * idx + bit as usize;
            let (e, w) = self.summarize(&child);
            stats.entropy[d + 1][cidx] = e;
            stats.weight[d + 1][cidx] = w;
            prefix.pop();
            children.push(child);
        }
        let n1 = children.pop().unwrap();
        let n0 = children.pop().unwrap();
        stats.fidelity[d][idx] = if d + 1 == self.len && !self.diag {
            let mut x0 = prefix.clone();
            x0.push(0);
            let mut x1 = prefix.clone();
            x1.push(1);
            let (x0, x1) = (self.leaf_x(&x0), self.leaf_x(&x1));
            x0.iter()
                .zip(&x1)
                .map(|(&a, &b)| self.data.fid[a as usize][b as usize])
                .product()
        } else {
            self.pair_fidelity(&n0, &n1)
        };
        self.merge(n0, n1)
    }
}
