//! Universal polar coding for compound channels by chained alignment.
//!
//! Each member channel splits `[0, N)` into good and bad indices. Indices good
//! for one member only are aligned across polarized blocks: a CNOT between an
//! index of one block and an index of another, with the XOR input frozen,
//! makes both positions carry the same bit. A receiver that knows the active
//! member decodes the copy that is good for it and treats the other copy as
//! frozen.
//!
//! Schedules are built by doubling. At every level the current chain is
//! duplicated into a left and a right half, and the left half's unaligned
//! bits of the combined side are paired with the right half's unaligned bits
//! of the new member, first with first in `(block, index)` order. Whatever is
//! left over on the larger side at that level is frozen.

use alloc::vec;
use alloc::vec::Vec;

use crate::bits::to_bits;
use crate::budget::Budget;
use crate::channels::{CompoundSet, CqChannel, CqMac};
use crate::error::{Error, Result};
use crate::multiuser::{
    chain_rule_rates, kuser_paths, nu_class_paths, path_leaves, path_sqrt_fidelity, DecodePath,
};
use crate::polar::{split_params, PolarCode, PolarTransform};
use crate::sc::{QuantumScDecoder, SequentialDecoder};
use crate::TOL_CHAIN;

/// Good/bad split of two members at one threshold, and the four classes it
/// induces.
#[derive(Clone, Debug, PartialEq)]
pub struct GoodBadPartition {
    pub len: usize,
    pub threshold: f64,
    pub sqrt_fidelity: [Vec<f64>; 2],
    pub good: [Vec<usize>; 2],
    pub bad: [Vec<usize>; 2],
    /// Good for both.
    pub a_i: Vec<usize>,
    /// Good for member 1 only.
    pub a_ii: Vec<usize>,
    /// Good for member 2 only.
    pub a_iii: Vec<usize>,
    /// Bad for both.
    pub a_iv: Vec<usize>,
}

impl GoodBadPartition {
    /// Index `i` is good for a member when its `sqrtF < threshold`.
    pub fn from_sqrt_fidelity(sqrt_fidelity: [Vec<f64>; 2], threshold: f64) -> Result<Self> {
        let len = sqrt_fidelity[0].len();
        if sqrt_fidelity[1].len() != len {
            return Err(Error::LengthMismatch {
                expected: len,
                found: sqrt_fidelity[1].len(),
            });
        }
        let split =
            |sf: &[f64]| -> (Vec<usize>, Vec<usize>) { (0..len).partition(|&i| sf[i] < threshold) };
        let (g1, b1) = split(&sqrt_fidelity[0]);
        let (g2, b2) = split(&sqrt_fidelity[1]);
        let both = |a: &[usize], b: &[usize]| -> Vec<usize> {
            a.iter().copied().filter(|i| b.contains(i)).collect()
        };
        let p = GoodBadPartition {
            len,
            threshold,
            a_i: both(&g1, &g2),
            a_ii: both(&g1, &b2),
            a_iii: both(&b1, &g2),
            a_iv: both(&b1, &b2),
            good: [g1, g2],
            bad: [b1, b2],
            sqrt_fidelity,
        };
        p.check()?;
        Ok(p)
    }

    /// Coverage and disjointness of `G_l, B_l` per member and of the four
    /// classes.
    pub fn check(&self) -> Result<()> {
        for l in 0..2 {
            cover_once(&[&self.good[l], &self.bad[l]], self.len)?;
        }
        cover_once(&[&self.a_i, &self.a_ii, &self.a_iii, &self.a_iv], self.len)
    }

    pub fn good_mask(&self, member: usize) -> Vec<bool> {
        let mut m = vec![false; self.len];
        for &i in &self.good[member] {
            m[i] = true;
        }
        m
    }

    /// `G_sub ⊆ G_sup`.
    pub fn good_subset(&self, sub: usize, sup: usize) -> bool {
        self.good[sub].iter().all(|i| self.good[sup].contains(i))
    }
}

fn cover_once(parts: &[&Vec<usize>], len: usize) -> Result<()> {
    let mut seen = vec![0u8; len];
    for p in parts {
        for &i in p.iter() {
            if i >= len {
                return Err(Error::InvariantViolation {
                    index: i,
                    detail: "index outside [0, N)".into(),
                });
            }
            seen[i] += 1;
        }
    }
    match seen.iter().position(|&c| c != 1) {
        Some(i) => Err(Error::InvariantViolation {
            index: i,
            detail: alloc::format!("index lies in {} classes", seen[i]),
        }),
        None => Ok(()),
    }
}

/// Partition of a two-member compound set from exact split parameters.
pub fn partition(
    set: &CompoundSet<CqChannel>,
    len: usize,
    threshold: f64,
    budget: &Budget,
) -> Result<GoodBadPartition> {
    if set.len() != 2 {
        return Err(Error::InvalidArgument(alloc::format!(
            "partition needs 2 members, got {}",
            set.len()
        )));
    }
    let sf = member_sqrt_fidelity(set, len, budget)?;
    let mut it = sf.into_iter();
    GoodBadPartition::from_sqrt_fidelity([it.next().unwrap(), it.next().unwrap()], threshold)
}

fn member_sqrt_fidelity(
    set: &CompoundSet<CqChannel>,
    len: usize,
    budget: &Budget,
) -> Result<Vec<Vec<f64>>> {
    set.members()
        .iter()
        .map(|w| {
            Ok(split_params(w, len, budget)?
                .iter()
                .map(|p| p.sqrt_fidelity)
                .collect())
        })
        .collect()
}

/// A position in the chain: index `index` of sender `sender` in block `block`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position {
    pub block: usize,
    pub sender: usize,
    pub index: usize,
}

/// A CNOT between a position good for the combined side (in the left half)
/// and one good for the new member (in the right half).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AlignmentEdge {
    pub level: usize,
    pub sender: usize,
    pub source: Position,
    pub target: Position,
}

/// Counts of one doubling level, for the single merge that creates it (the
/// final chain repeats it `2^(levels - level)` times). `residual / total` is
/// the fraction of that sender's positions still incompatible afterwards.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LevelReport {
    pub level: usize,
    /// Alignment stage: member `stage` is being aligned with members
    /// `0..stage`.
    pub stage: usize,
    pub sender: usize,
    pub edges: usize,
    pub surplus: usize,
    pub residual: usize,
    pub total: usize,
}

/// Chained code over `2^levels` blocks of `len` positions per sender.
///
/// Every message bit is carried by one or more positions (its copies);
/// every other position is frozen to zero. `decode_orders[l]` is the order in
/// which a receiver that knows member `l` visits the positions: each block in
/// its own SC order, blocks interleaved so that every copy is reached after
/// the copy that is decoded fresh.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainingSchedule {
    pub len: usize,
    pub senders: usize,
    pub members: usize,
    pub levels: usize,
    pub edges: Vec<AlignmentEdge>,
    pub surplus: Vec<Position>,
    /// Positions still good for only part of the members at the end; frozen.
    pub residual: Vec<Position>,
    pub reports: Vec<LevelReport>,
    /// Copies of each message bit, sorted.
    pub bits: Vec<Vec<Position>>,
    pub decode_orders: Vec<Vec<Position>>,
    /// `good[l][s][i]`: index `i` of sender `s` is good for member `l`.
    pub good: Vec<Vec<Vec<bool>>>,
}

#[derive(Clone, Debug)]
struct Bit {
    carriers: Vec<Position>,
    decodable: u64,
    alive: bool,
}

struct Builder {
    len: usize,
    senders: usize,
    members: usize,
    good: Vec<Vec<Vec<bool>>>,
    blocks: usize,
    bits: Vec<Bit>,
    edges: Vec<AlignmentEdge>,
    surplus: Vec<Position>,
    reports: Vec<LevelReport>,
}

impl Builder {
    fn new(good: Vec<Vec<Vec<bool>>>) -> Result<Self> {
        let members = good.len();
        if !(2..=64).contains(&members) {
            return Err(Error::InvalidArgument(alloc::format!(
                "need 2..=64 members, got {members}"
            )));
        }
        let senders = good[0].len();
        let len = good[0].first().map_or(0, |g| g.len());
        if senders == 0 || len == 0 {
            return Err(Error::InvalidArgument("empty good sets".into()));
        }
        for g in &good {
            if g.len() != senders || g.iter().any(|s| s.len() != len) {
                return Err(Error::LengthMismatch {
                    expected: len,
                    found: g.iter().map(|s| s.len()).max().unwrap_or(0),
                });
            }
        }
        let mut bits = Vec::with_capacity(senders * len);
        for sender in 0..senders {
            for index in 0..len {
                let decodable = (0..members)
                    .filter(|&l| good[l][sender][index])
                    .fold(0u64, |m, l| m | 1 << l);
                bits.push(Bit {
                    carriers: vec![Position {
                        block: 0,
                        sender,
                        index,
                    }],
                    decodable,
                    alive: true,
                });
            }
        }
        Ok(Builder {
            len,
            senders,
            members,
            good,
            blocks: 1,
            bits,
            edges: Vec::new(),
            surplus: Vec::new(),
            reports: Vec::new(),
        })
    }

    fn double(&mut self, stage: usize, sender: usize) {
        let half = self.blocks;
        let copies: Vec<Bit> = self
            .bits
            .iter()
            .filter(|b| b.alive)
            .map(|b| Bit {
                carriers: b
                    .carriers
                    .iter()
                    .map(|p| Position {
                        block: p.block + half,
                        ..*p
                    })
                    .collect(),
                ..b.clone()
            })
            .collect();
        self.bits.extend(copies);
        let shift = |p: Position| Position {
            block: p.block + half,
            ..p
        };
        let edges: Vec<AlignmentEdge> = self
            .edges
            .iter()
            .map(|e| AlignmentEdge {
                source: shift(e.source),
                target: shift(e.target),
                ..*e
            })
            .collect();
        self.edges.extend(edges);
        let surplus: Vec<Position> = self.surplus.iter().map(|&p| shift(p)).collect();
        self.surplus.extend(surplus);
        self.blocks *= 2;
        let level = self.reports.len() + 1;

        let combined = (1u64 << stage) - 1;
        let new = 1u64 << stage;
        let class = |b: &Bit| -> u8 {
            let c = b.decodable & combined == combined;
            let n = b.decodable & new != 0;
            match (c, n) {
                (true, false) => 2,
                (false, true) => 3,
                _ => 0,
            }
        };
        let mut left: Vec<usize> = Vec::new();
        let mut right: Vec<usize> = Vec::new();
        for (k, b) in self.bits.iter().enumerate() {
            if !b.alive || b.carriers[0].sender != sender {
                continue;
            }
            let in_left = b.carriers[0].block < half;
            match (class(b), in_left) {
                (2, true) => left.push(k),
                (3, false) => right.push(k),
                _ => {}
            }
        }
        let key = |k: &usize| self.bits[*k].carriers[0];
        left.sort_by_key(key);
        right.sort_by_key(key);
        let pairs = left.len().min(right.len());
        for (&a, &b) in left.iter().zip(&right) {
            let moved = core::mem::take(&mut self.bits[b].carriers);
            let d = self.bits[b].decodable;
            self.bits[b].alive = false;
            self.edges.push(AlignmentEdge {
                level,
                sender,
                source: self.bits[a].carriers[0],
                target: moved[0],
            });
            let bit = &mut self.bits[a];
            bit.carriers.extend(moved);
            bit.carriers.sort_unstable();
            bit.decodable |= d;
        }
        let extra: Vec<usize> = left[pairs..]
            .iter()
            .chain(&right[pairs..])
            .copied()
            .collect();
        for k in &extra {
            self.bits[*k].alive = false;
            self.surplus.extend(self.bits[*k].carriers.iter().copied());
        }
        let residual = self
            .bits
            .iter()
            .filter(|b| b.alive && b.carriers[0].sender == sender && class(b) != 0)
            .count();
        self.reports.push(LevelReport {
            level,
            stage,
            sender,
            edges: pairs,
            surplus: extra.len(),
            residual,
            total: self.blocks * self.len,
        });
    }

    fn finish(mut self, sc_orders: &[Vec<(usize, usize)>]) -> Result<ChainingSchedule> {
        let all = if self.members == 64 {
            u64::MAX
        } else {
            (1u64 << self.members) - 1
        };
        let mut residual = Vec::new();
        let mut bits = Vec::new();
        for b in self.bits.iter_mut().filter(|b| b.alive) {
            if b.decodable == all {
                bits.push(core::mem::take(&mut b.carriers));
            } else if b.decodable != 0 {
                residual.extend(b.carriers.iter().copied());
            }
        }
        bits.sort();
        residual.sort_unstable();
        self.surplus.sort_unstable();
        let mut s = ChainingSchedule {
            len: self.len,
            senders: self.senders,
            members: self.members,
            levels: self.reports.len(),
            edges: self.edges,
            surplus: self.surplus,
            residual,
            reports: self.reports,
            bits,
            decode_orders: Vec::new(),
            good: self.good,
        };
        s.decode_orders = (0..s.members)
            .map(|l| s.greedy_order(l, &sc_orders[l]))
            .collect::<Result<_>>()?;
        Ok(s)
    }
}

fn identity_order(len: usize) -> Vec<(usize, usize)> {
    (0..len).map(|i| (0, i)).collect()
}

impl ChainingSchedule {
    pub fn blocks(&self) -> usize {
        1 << self.levels
    }

    /// Positions in the whole chain.
    pub fn total(&self) -> usize {
        self.blocks() * self.senders * self.len
    }

    /// Message bits per chain position.
    pub fn rate(&self) -> f64 {
        self.bits.len() as f64 / self.total() as f64
    }

    /// Message bits carried by one sender, per position of that sender.
    pub fn sender_rate(&self, sender: usize) -> f64 {
        let k = self.bits.iter().filter(|c| c[0].sender == sender).count();
        k as f64 / (self.blocks() * self.len) as f64
    }

    fn flat(&self, p: Position) -> usize {
        (p.block * self.senders + p.sender) * self.len + p.index
    }

    /// Message bit carried by each position (`None` when frozen).
    pub fn owners(&self) -> Vec<Option<usize>> {
        let mut o = vec![None; self.total()];
        for (k, c) in self.bits.iter().enumerate() {
            for &p in c {
                o[self.flat(p)] = Some(k);
            }
        }
        o
    }

    fn greedy_order(&self, member: usize, sc: &[(usize, usize)]) -> Result<Vec<Position>> {
        let owners = self.owners();
        let mut known = vec![false; self.bits.len()];
        let mut next = vec![0usize; self.blocks()];
        let mut order = Vec::with_capacity(self.total());
        while order.len() < self.total() {
            let ready = (0..self.blocks()).find(|&b| {
                next[b] < sc.len() && {
                    let (sender, index) = sc[next[b]];
                    let p = Position {
                        block: b,
                        sender,
                        index,
                    };
                    match owners[self.flat(p)] {
                        None => true,
                        Some(k) => known[k] || self.good[member][sender][index],
                    }
                }
            });
            let Some(b) = ready else {
                return Err(Error::InvariantViolation {
                    index: member,
                    detail: "no decodable position left for this member".into(),
                });
            };
            let (sender, index) = sc[next[b]];
            let p = Position {
                block: b,
                sender,
                index,
            };
            if let Some(k) = owners[self.flat(p)] {
                known[k] = true;
            }
            order.push(p);
            next[b] += 1;
        }
        Ok(order)
    }

    /// Replays member `l`'s decode order: each position visited once, blocks
    /// in their SC order, and every message bit first reached at a position
    /// good for `l`.
    pub fn check_decode_order(&self, member: usize, sc: &[(usize, usize)]) -> Result<()> {
        let order = &self.decode_orders[member];
        let owners = self.owners();
        let mut known = vec![false; self.bits.len()];
        let mut next = vec![0usize; self.blocks()];
        if order.len() != self.total() {
            return Err(Error::LengthMismatch {
                expected: self.total(),
                found: order.len(),
            });
        }
        for (t, &p) in order.iter().enumerate() {
            if p.block >= self.blocks()
                || next[p.block] >= sc.len()
                || sc[next[p.block]] != (p.sender, p.index)
            {
                return Err(Error::InvariantViolation {
                    index: t,
                    detail: "position out of SC order".into(),
                });
            }
            next[p.block] += 1;
            if let Some(k) = owners[self.flat(p)] {
                if !known[k] && !self.good[member][p.sender][p.index] {
                    return Err(Error::InvariantViolation {
                        index: t,
                        detail: alloc::format!("bit {k} first reached at a bad position"),
                    });
                }
                known[k] = true;
            }
        }
        Ok(())
    }

    /// Positions measured fresh by member `l`, as an information mask per
    /// block over the flat `sender * len + index` layout.
    pub fn fresh_masks(&self, member: usize) -> Vec<Vec<bool>> {
        let owners = self.owners();
        let mut known = vec![false; self.bits.len()];
        let mut masks = vec![vec![false; self.senders * self.len]; self.blocks()];
        for &p in &self.decode_orders[member] {
            if let Some(k) = owners[self.flat(p)] {
                if !known[k] {
                    masks[p.block][p.sender * self.len + p.index] = true;
                    known[k] = true;
                }
            }
        }
        masks
    }

    /// Block inputs for a message: every copy of bit `k` takes `message[k]`,
    /// frozen positions are zero. Layout per block is `sender * len + index`.
    pub fn block_inputs(&self, message: &[u8]) -> Result<Vec<Vec<u8>>> {
        if message.len() != self.bits.len() {
            return Err(Error::LengthMismatch {
                expected: self.bits.len(),
                found: message.len(),
            });
        }
        let mut u = vec![vec![0u8; self.senders * self.len]; self.blocks()];
        for (c, &m) in self.bits.iter().zip(message) {
            if m > 1 {
                return Err(Error::InvalidArgument("message bits must be 0 or 1".into()));
            }
            for p in c {
                u[p.block][p.sender * self.len + p.index] = m;
            }
        }
        Ok(u)
    }

    /// Channel inputs per block and sender, `x = u G_N`.
    pub fn encode(&self, message: &[u8]) -> Result<Vec<Vec<Vec<u8>>>> {
        let t = PolarTransform::new(self.len)?;
        Ok(self
            .block_inputs(message)?
            .into_iter()
            .map(|u| {
                u.chunks(self.len)
                    .map(|c| {
                        let mut x = c.to_vec();
                        t.apply(&mut x);
                        x
                    })
                    .collect()
            })
            .collect())
    }
}

/// Chained schedule for any number of single-sender members given their good
/// masks: members are aligned one at a time, `levels` doublings each.
pub fn chain_good_sets(good: &[Vec<bool>], levels: usize) -> Result<ChainingSchedule> {
    let nested: Vec<Vec<Vec<bool>>> = good.iter().map(|g| vec![g.clone()]).collect();
    let mut b = Builder::new(nested)?;
    for stage in 1..b.members {
        for _ in 0..levels {
            b.double(stage, 0);
        }
    }
    let order = identity_order(b.len);
    let orders = vec![order; b.members];
    b.finish(&orders)
}

/// Alignment of the two members of a partition over `2^levels` blocks.
pub fn build_chaining(partition: &GoodBadPartition, levels: usize) -> Result<ChainingSchedule> {
    chain_good_sets(&[partition.good_mask(0), partition.good_mask(1)], levels)
}

/// Rate of the chained code; at most the smaller good-set fraction.
pub fn compound_rate(partition: &GoodBadPartition, schedule: &ChainingSchedule) -> f64 {
    let r = schedule.rate();
    debug_assert!(
        r <= partition.good[0].len().min(partition.good[1].len()) as f64 / partition.len as f64
            + 1e-12
    );
    r
}

/// Pairwise alignment of `k` members, each stage with `levels` doublings.
pub fn extend_k_members(
    set: &CompoundSet<CqChannel>,
    len: usize,
    threshold: f64,
    levels: usize,
    budget: &Budget,
) -> Result<ChainingSchedule> {
    if set.len() < 2 {
        return Err(Error::InvalidArgument(
            "compound set needs at least 2 members".into(),
        ));
    }
    let good: Vec<Vec<bool>> = member_sqrt_fidelity(set, len, budget)?
        .iter()
        .map(|sf| sf.iter().map(|&z| z < threshold).collect())
        .collect();
    chain_good_sets(&good, levels)
}

/// Per-sender partitions and the alternating chain for a compound MAC.
#[derive(Clone, Debug, PartialEq)]
pub struct MacCompoundSchedule {
    pub paths: Vec<DecodePath>,
    /// `partitions[s]` is built from the step channels `P_i`, `Q_i` of
    /// sender `s` under each member's path.
    pub partitions: Vec<GoodBadPartition>,
    pub schedule: ChainingSchedule,
}

/// Alternating alignment for a two-member compound MAC: level `j` aligns
/// sender `j mod k`, so `levels` rounds take `k * levels` doublings.
pub fn compound_mac_schedule(
    set: &CompoundSet<CqMac>,
    paths: &[DecodePath],
    threshold: f64,
    levels: usize,
    budget: &Budget,
) -> Result<MacCompoundSchedule> {
    if set.len() != 2 || paths.len() != 2 {
        return Err(Error::InvalidArgument(
            "compound MAC schedule needs 2 members and 2 paths".into(),
        ));
    }
    let users = set.members()[0].users();
    let n = paths[0].n();
    if paths.iter().any(|p| p.users() != users || p.n() != n) {
        return Err(Error::InvalidArgument(
            "paths must share the sender count and N".into(),
        ));
    }
    let mut per_sender = vec![[vec![0.0; n], vec![0.0; n]]; users];
    for (l, (mac, path)) in set.members().iter().zip(paths).enumerate() {
        let sf = path_sqrt_fidelity(mac, path, budget)?;
        for (step, (s, i)) in path.positions().into_iter().enumerate() {
            per_sender[s][l][i] = sf[step];
        }
    }
    let partitions = per_sender
        .into_iter()
        .map(|sf| GoodBadPartition::from_sqrt_fidelity(sf, threshold))
        .collect::<Result<Vec<_>>>()?;
    let good = (0..2)
        .map(|l| partitions.iter().map(|p| p.good_mask(l)).collect())
        .collect();
    let mut b = Builder::new(good)?;
    for _ in 0..levels {
        for s in 0..users {
            b.double(1, s);
        }
    }
    let orders: Vec<Vec<(usize, usize)>> = paths.iter().map(|p| p.positions()).collect();
    let schedule = b.finish(&orders)?;
    Ok(MacCompoundSchedule {
        paths: paths.to_vec(),
        partitions,
        schedule,
    })
}

/// One path per member whose chain-rule rates reach `target` for every
/// sender (two senders scan the `nu` class, more senders the full lattice).
pub fn select_mac_paths(
    set: &CompoundSet<CqMac>,
    n: usize,
    target: &[f64],
    budget: &Budget,
) -> Result<Vec<DecodePath>> {
    let users = set.members().first().map_or(0, |m| m.users());
    if target.len() != users {
        return Err(Error::LengthMismatch {
            expected: users,
            found: target.len(),
        });
    }
    let candidates: Vec<DecodePath> = if users == 2 {
        nu_class_paths(n)?
    } else {
        kuser_paths(users, n)?.collect()
    };
    set.members()
        .iter()
        .enumerate()
        .map(|(l, mac)| {
            for p in &candidates {
                let r = chain_rule_rates(mac, p, budget)?;
                if r.rates.iter().zip(target).all(|(a, t)| *a >= t - TOL_CHAIN) {
                    return Ok(p.clone());
                }
            }
            Err(Error::RateInfeasible(alloc::format!(
                "no path of member {l} reaches {target:?}"
            )))
        })
        .collect()
}

/// Exact success probability of one chained message.
#[derive(Clone, Debug, PartialEq)]
pub struct CompoundDecode {
    pub p_success: f64,
    /// Success of each block given correct earlier decisions.
    pub block_success: Vec<f64>,
}

fn check_member(schedule: &ChainingSchedule, members: usize, active: usize) -> Result<()> {
    if members != schedule.members {
        return Err(Error::DimMismatch {
            expected: schedule.members,
            found: members,
        });
    }
    if active >= members {
        return Err(Error::InvalidArgument(alloc::format!(
            "active member {active} out of range"
        )));
    }
    Ok(())
}

/// Per-block sequential decoders of a chained code for one active member.
///
/// Blocks are separate channel uses, so the probability that every fresh
/// decision is right is the product over blocks of the genie success with
/// all other positions at their true values.
#[derive(Clone, Debug)]
pub struct ChainDecoder {
    schedule: ChainingSchedule,
    steps: Vec<(usize, usize)>,
    decoders: Vec<SequentialDecoder>,
    block_decoder: Vec<usize>,
}

impl ChainDecoder {
    fn build<F>(
        schedule: &ChainingSchedule,
        active: usize,
        steps: Vec<(usize, usize)>,
        mut make: F,
    ) -> Result<Self>
    where
        F: FnMut(Vec<bool>) -> Result<SequentialDecoder>,
    {
        let n = schedule.len;
        let mut masks: Vec<Vec<bool>> = Vec::new();
        let mut decoders = Vec::new();
        let mut block_decoder = Vec::with_capacity(schedule.blocks());
        for mask in schedule.fresh_masks(active) {
            let k = match masks.iter().position(|m| *m == mask) {
                Some(k) => k,
                None => {
                    decoders.push(make(steps.iter().map(|&(s, i)| mask[s * n + i]).collect())?);
                    masks.push(mask);
                    masks.len() - 1
                }
            };
            block_decoder.push(k);
        }
        Ok(ChainDecoder {
            schedule: schedule.clone(),
            steps,
            decoders,
            block_decoder,
        })
    }

    /// Member `active` of a single-sender compound set.
    pub fn new(
        schedule: &ChainingSchedule,
        set: &CompoundSet<CqChannel>,
        active: usize,
        budget: &Budget,
    ) -> Result<Self> {
        check_member(schedule, set.len(), active)?;
        if schedule.senders != 1 {
            return Err(Error::InvalidArgument(
                "single-sender decode on a multi-sender schedule".into(),
            ));
        }
        let w = &set.members()[active];
        let n = schedule.len;
        ChainDecoder::build(schedule, active, identity_order(n), |info| {
            let code = PolarCode::with_info_set(n, (0..n).filter(|&i| info[i]).collect())?;
            Ok(QuantumScDecoder::new(&code, w, budget)?
                .sequential()
                .clone())
        })
    }

    /// Member `active` of a compound MAC, each block decoded along that
    /// member's path.
    pub fn new_mac(
        mac_schedule: &MacCompoundSchedule,
        set: &CompoundSet<CqMac>,
        active: usize,
        budget: &Budget,
    ) -> Result<Self> {
        let schedule = &mac_schedule.schedule;
        check_member(schedule, set.len(), active)?;
        let path = &mac_schedule.paths[active];
        let leaves = path_leaves(&set.members()[active], path, budget)?;
        ChainDecoder::build(schedule, active, path.positions(), |info| {
            SequentialDecoder::new(leaves.clone(), info)
        })
    }

    pub fn success(&self, message: &[u8]) -> Result<CompoundDecode> {
        let n = self.schedule.len;
        let inputs = self.schedule.block_inputs(message)?;
        let mut block_success = Vec::with_capacity(inputs.len());
        for (u, &k) in inputs.iter().zip(&self.block_decoder) {
            let bits: Vec<u8> = self.steps.iter().map(|&(s, i)| u[s * n + i]).collect();
            block_success.push(self.decoders[k].input_terms(&bits)?.success);
        }
        Ok(CompoundDecode {
            p_success: block_success.iter().product(),
            block_success,
        })
    }

    /// Success averaged over all messages.
    pub fn average_success(&self) -> Result<f64> {
        let k = self.schedule.bits.len();
        if k > MAX_MESSAGE_BITS {
            return Err(Error::BudgetExceeded {
                required: 1 << k,
                budget: 1 << MAX_MESSAGE_BITS,
            });
        }
        let mut acc = 0.0;
        for m in 0..1usize << k {
            acc += self.success(&to_bits(m, k))?.p_success;
        }
        Ok(acc / (1usize << k) as f64)
    }
}

/// Exact success probability of the chained code on member `active` of a
/// single-sender compound set.
pub fn compound_decode_exact(
    schedule: &ChainingSchedule,
    set: &CompoundSet<CqChannel>,
    active: usize,
    message: &[u8],
    budget: &Budget,
) -> Result<CompoundDecode> {
    ChainDecoder::new(schedule, set, active, budget)?.success(message)
}

/// Exact success probability on member `active` of a compound MAC.
pub fn compound_mac_decode_exact(
    mac_schedule: &MacCompoundSchedule,
    set: &CompoundSet<CqMac>,
    active: usize,
    message: &[u8],
    budget: &Budget,
) -> Result<CompoundDecode> {
    ChainDecoder::new_mac(mac_schedule, set, active, budget)?.success(message)
}

/// Largest message length averaged over exhaustively.
pub const MAX_MESSAGE_BITS: usize = 16;

/// Success probability averaged over all messages.
pub fn compound_success_average(
    schedule: &ChainingSchedule,
    set: &CompoundSet<CqChannel>,
    active: usize,
    budget: &Budget,
) -> Result<f64> {
    ChainDecoder::new(schedule, set, active, budget)?.average_success()
}
