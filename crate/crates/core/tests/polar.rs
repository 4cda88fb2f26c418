#![allow(clippy::needless_range_loop)]

use polarlab_core::channels::{BroadcastChannel, ClassicalDmc, CqChannel};
use polarlab_core::fmath::binary_entropy;
use polarlab_core::polar::*;
use polarlab_core::qmath::{psd_sqrt, DensityMatrix, Hermitian};
use polarlab_core::{Budget, Error, TOL_CHAIN};
use proptest::prelude::*;

fn b() -> Budget {
    Budget::default()
}

fn bits(v: usize, n: usize) -> Vec<u8> {
    (0..n).rev().map(|k| ((v >> k) & 1) as u8).collect()
}

/// Generator matrix `B_N F^{(x)n}` built entry by entry.
fn generator(len: usize) -> Vec<Vec<u8>> {
    let n = len.trailing_zeros();
    let rev = |i: usize| (0..n).fold(0, |acc, k| (acc << 1) | ((i >> k) & 1));
    // (F^{(x)n})_{ij} = 1 iff the bits of j are a subset of the bits of i.
    let kron = |i: usize, j: usize| (i & j == j) as u8;
    (0..len)
        .map(|r| (0..len).map(|c| kron(rev(r), c)).collect())
        .collect()
}

fn mat_encode(u: &[u8]) -> Vec<u8> {
    let g = generator(u.len());
    (0..u.len())
        .map(|c| (0..u.len()).fold(0, |acc, r| acc ^ (u[r] & g[r][c])))
        .collect()
}

#[test]
fn encode_examples() {
    for u1 in 0..2 {
        for u2 in 0..2 {
            assert_eq!(encode(&[u1, u2]).unwrap(), vec![u1 ^ u2, u2]);
        }
    }
    assert_eq!(encode(&[0; 16]).unwrap(), vec![0; 16]);
    for v in 0..16 {
        let u = bits(v, 4);
        assert_eq!(encode(&u).unwrap(), mat_encode(&u), "u = {u:?}");
    }
    assert!(matches!(encode(&[0; 6]), Err(Error::BadLength { .. })));
}

#[test]
fn coset_encode_examples() {
    let u = [1, 0, 1, 1];
    let full = PolarCode::with_info_set(4, vec![0, 1, 2, 3]).unwrap();
    assert_eq!(coset_encode(&full, &u).unwrap(), encode(&u).unwrap());

    let frozen = vec![1, 0, 1, 0];
    let none = PolarCode::new(4, vec![], frozen.clone(), CodeOrigin::Explicit).unwrap();
    assert_eq!(coset_encode(&none, &[]).unwrap(), mat_encode(&frozen));

    // A = {2, 4} in 1-based terms: rows 2 and 4 of G_4 sum to the codeword.
    let code = PolarCode::with_info_set(4, vec![1, 3]).unwrap();
    let g = generator(4);
    let want: Vec<u8> = (0..4).map(|c| g[1][c] ^ g[3][c]).collect();
    assert_eq!(coset_encode(&code, &[1, 1]).unwrap(), want);
    assert!(matches!(
        coset_encode(&code, &[1]),
        Err(Error::LengthMismatch { .. })
    ));
}

fn pure(t: f64) -> DensityMatrix {
    DensityMatrix::pure_real(&[t.cos(), t.sin()]).unwrap()
}

#[test]
fn split_channel_of_length_one_is_the_channel() {
    let w = CqChannel::amplitude_damped_pair(0.4, 0.3).unwrap();
    let s = split_channel(&w, 1, 0, &b()).unwrap();
    assert_eq!(s.branches.len(), 1);
    for x in 0..2 {
        assert!(s.branches[0].states[x].max_abs_diff(w.output(x)) < 1e-12);
    }
    assert!((s.mutual_information().unwrap() - w.symmetric_holevo()).abs() < 1e-12);
}

#[test]
fn split_channel_second_index_at_length_two() {
    let w = CqChannel::new(vec![pure(0.2), pure(1.1)]).unwrap();
    let s = split_channel(&w, 2, 1, &b()).unwrap();
    for br in &s.branches {
        let u1 = br.prefix[0] as usize;
        assert!(br.weight.iter().all(|w| (w - 0.25).abs() < 1e-15));
        for u2 in 0..2 {
            let want = w.output(u1 ^ u2).kron(w.output(u2));
            assert!(br.states[u2].max_abs_diff(&want) < 1e-12);
        }
    }
}

fn bec_oracle(eps: f64, len: usize) -> Vec<f64> {
    let n = len.trailing_zeros() as usize;
    (0..len)
        .map(|i| {
            bits(i, n)
                .iter()
                .fold(eps, |e, &b| if b == 1 { e * e } else { 2.0 * e - e * e })
        })
        .collect()
}

#[test]
fn bec_split_information() {
    for eps in [0.1, 0.3, 0.5, 0.85] {
        let w = ClassicalDmc::bec(eps).unwrap().to_cq();
        let minus = split_channel(&w, 2, 0, &b())
            .unwrap()
            .mutual_information()
            .unwrap();
        let plus = split_channel(&w, 2, 1, &b())
            .unwrap()
            .mutual_information()
            .unwrap();
        assert!((minus - (1.0 - eps) * (1.0 - eps)).abs() < 1e-12);
        assert!((plus - (1.0 - eps * eps)).abs() < 1e-12);
        // Polarization direction.
        assert!(minus <= 1.0 - eps && 1.0 - eps <= plus);
        let (sum, total) = conservation_check(&w, 2, &b()).unwrap();
        assert!((sum - 2.0 * (1.0 - eps)).abs() < 1e-12);
        assert!((total - 2.0 * (1.0 - eps)).abs() < 1e-12);
    }
}

#[test]
fn split_params_extremes() {
    let perfect = CqChannel::pure_pair(0.0).unwrap();
    let useless = CqChannel::pure_pair(1.0).unwrap();
    for len in [1, 2, 4, 8] {
        for p in split_params(&perfect, len, &b()).unwrap() {
            assert!((p.mutual_information - 1.0).abs() < 1e-12);
            assert!(p.sqrt_fidelity.abs() < 1e-12);
        }
        for p in split_params(&useless, len, &b()).unwrap() {
            assert!(p.mutual_information.abs() < 1e-12);
            assert!((p.sqrt_fidelity - 1.0).abs() < 1e-12);
        }
    }
}

/// `(I, Z)` per index by enumerating every `(u, y)` of a binary-input DMC.
fn exhaustive_dmc(rows: &[Vec<f64>], len: usize) -> Vec<(f64, f64)> {
    let ny = rows[0].len();
    let outs = ny.pow(len as u32);
    let mut joint = vec![vec![0.0; outs]; 1 << len]; // P(u, y)
    for u in 0..1usize << len {
        let x = mat_encode(&bits(u, len));
        for (y, slot) in joint[u].iter_mut().enumerate() {
            let mut p = 1.0 / (1 << len) as f64;
            let mut yy = y;
            for xj in &x {
                p *= rows[*xj as usize][yy % ny];
                yy /= ny;
            }
            *slot = p;
        }
    }
    (0..len)
        .map(|i| {
            // Marginalize to (u_1..u_i, y).
            let mut m = vec![vec![0.0; outs]; 1 << (i + 1)];
            for u in 0..1usize << len {
                let head = u >> (len - i - 1);
                for y in 0..outs {
                    m[head][y] += joint[u][y];
                }
            }
            let (mut h_cond, mut z) = (0.0, 0.0);
            for prefix in 0..1usize << i {
                for y in 0..outs {
                    let p0 = m[prefix << 1][y];
                    let p1 = m[(prefix << 1) | 1][y];
                    let s = p0 + p1;
                    if s > 0.0 {
                        h_cond += s * binary_entropy(p1 / s);
                    }
                    z += 2.0 * (p0 * p1).sqrt();
                }
            }
            (1.0 - h_cond, z)
        })
        .collect()
}

#[test]
fn bsc_parameters_match_exhaustive_enumeration() {
    let dmc = ClassicalDmc::bsc(0.1).unwrap();
    let want = exhaustive_dmc(dmc.rows(), 4);
    let fast = split_params(&dmc.to_cq(), 4, &b()).unwrap();
    let tree = tree_split_params(&dmc.to_cq(), 4, &b()).unwrap();
    for i in 0..4 {
        for p in [fast[i], tree[i]] {
            assert!((p.mutual_information - want[i].0).abs() < 1e-12, "I at {i}");
            assert!((p.sqrt_fidelity - want[i].1).abs() < 1e-12, "Z at {i}");
        }
    }
}

#[test]
fn asymmetric_dmc_matches_exhaustive_enumeration() {
    let rows = vec![vec![0.7, 0.2, 0.1], vec![0.05, 0.35, 0.6]];
    let want = exhaustive_dmc(&rows, 4);
    let got = split_params(&ClassicalDmc::new(rows).unwrap().to_cq(), 4, &b()).unwrap();
    for i in 0..4 {
        assert!((got[i].mutual_information - want[i].0).abs() < 1e-12);
        assert!((got[i].sqrt_fidelity - want[i].1).abs() < 1e-12);
    }
}

#[test]
fn construct_examples() {
    let w = CqChannel::pure_pair(0.5).unwrap();
    assert_eq!(construct(&w, 4, 4, &b()).unwrap().info_set(), &[0, 1, 2, 3]);
    assert!(construct(&w, 4, 0, &b()).unwrap().info_set().is_empty());
    assert!(construct(&w, 4, 5, &b()).is_err());

    let bec = ClassicalDmc::bec(0.5).unwrap().to_cq();
    let code = construct(&bec, 8, 4, &b()).unwrap();
    let e = bec_oracle(0.5, 8);
    let mut order: Vec<usize> = (0..8).collect();
    order.sort_by(|&a, &c| e[a].total_cmp(&e[c]).then(a.cmp(&c)));
    let mut want = order[..4].to_vec();
    want.sort();
    assert_eq!(code.info_set(), want.as_slice());
    assert_eq!(code.info_set(), &[3, 5, 6, 7]);
    assert_eq!(bec_erasures(0.5, 8).unwrap(), e);
    assert!(code.frozen_values().iter().all(|&f| f == 0));
}

#[test]
fn construction_ties_go_to_the_lower_index() {
    assert_eq!(smallest_k(&[0.5, 0.2, 0.2, 0.2], 2), vec![1, 2]);
    // The useless channel ties every index.
    let code = construct(&CqChannel::pure_pair(1.0).unwrap(), 8, 3, &b()).unwrap();
    assert_eq!(code.info_set(), &[0, 1, 2]);
}

#[test]
fn coding_rule_on_quantum_channels() {
    for w in [
        CqChannel::pure_pair(0.7).unwrap(),
        CqChannel::amplitude_damped_pair(0.3, 0.4).unwrap(),
    ] {
        let params = split_params(&w, 8, &b()).unwrap();
        let sf: Vec<f64> = params.iter().map(|p| p.sqrt_fidelity).collect();
        for k in 0..=8 {
            let code = construct_from_params(&params, k).unwrap();
            assert!(satisfies_coding_rule(&code, &sf));
        }
    }
}

#[test]
fn conservation_examples() {
    let w = CqChannel::amplitude_damped_pair(0.5, 0.2).unwrap();
    let (s, t) = conservation_check(&w, 1, &b()).unwrap();
    assert!((s - w.symmetric_holevo()).abs() < 1e-12 && (t - s).abs() < 1e-12);

    let pure = CqChannel::pure_pair(0.6).unwrap();
    for len in [2, 4, 8] {
        let (s, t) = conservation_check(&pure, len, &b()).unwrap();
        assert!((s - t).abs() < TOL_CHAIN, "N = {len}: {s} vs {t}");
    }
}

#[test]
fn amplitude_damped_conservation_at_eight() {
    let w = CqChannel::amplitude_damped_pair(0.3, 0.5).unwrap();
    let (s, t) = conservation_check(&w, 8, &b()).unwrap();
    assert!((s - t).abs() < TOL_CHAIN, "{s} vs {t}");
}

#[test]
fn explicit_split_channel_matches_tree_values() {
    let w = CqChannel::amplitude_damped_pair(0.2, 0.3).unwrap();
    let tree = split_params(&w, 4, &b()).unwrap();
    for i in 0..4 {
        let s = split_channel(&w, 4, i, &b()).unwrap();
        assert!((s.mutual_information().unwrap() - tree[i].mutual_information).abs() < 1e-10);
        assert!((s.sqrt_fidelity().unwrap() - tree[i].sqrt_fidelity).abs() < 1e-10);
    }
}

#[test]
fn bad_inputs() {
    let w = CqChannel::pure_pair(0.5).unwrap();
    assert!(matches!(
        split_params(&w, 6, &b()),
        Err(Error::BadLength { .. })
    ));
    assert!(matches!(
        split_params(&w, 8, &Budget::new(1024)),
        Err(Error::BudgetExceeded { .. })
    ));
    let ternary = CqChannel::new(vec![DensityMatrix::maximally_mixed(2); 3]).unwrap();
    assert!(matches!(
        split_params(&ternary, 2, &b()),
        Err(Error::NonBinaryInput { .. })
    ));
}

/// `Z(U_i | U^{i-1}, side)` by enumerating full inputs: `a[x]` are the
/// unnormalized per-letter operators `p(x) rho_x`.
fn brute_z(a: [&Hermitian; 2], len: usize) -> Vec<f64> {
    let mut words: Vec<Hermitian> = Vec::with_capacity(1 << len);
    for u in 0..1usize << len {
        let x = mat_encode(&bits(u, len));
        let mut acc = a[x[0] as usize].clone();
        for &xj in &x[1..] {
            acc = acc.kron(a[xj as usize]);
        }
        words.push(acc);
    }
    (0..len)
        .map(|i| {
            let mut z = 0.0;
            for prefix in 0..1usize << i {
                let node = |ui: usize| {
                    let head = (prefix << 1) | ui;
                    let shift = len - i - 1;
                    let mut acc = Hermitian::zeros(words[0].dim());
                    for t in 0..1usize << shift {
                        acc.add_scaled(1.0, &words[(head << shift) | t]);
                    }
                    acc
                };
                let (n0, n1) = (node(0), node(1));
                z += 2.0
                    * psd_sqrt(&n0)
                        .unwrap()
                        .product_trace_norm(&psd_sqrt(&n1).unwrap());
            }
            z
        })
        .collect()
}

#[test]
fn shaping_set_examples() {
    let s = shaping_sets(0.5, 8, 0.01, &b()).unwrap();
    assert_eq!(s.uniform, (0..8).collect::<Vec<_>>());
    assert!(s.determined.is_empty());

    let s = shaping_sets(0.0, 8, 0.01, &b()).unwrap();
    assert!(s.uniform.is_empty());
    assert_eq!(s.determined, (0..8).collect::<Vec<_>>());

    let q = 0.11;
    let s = shaping_sets(q, 8, 0.2, &b()).unwrap();
    let src = [
        Hermitian::diagonal(vec![1.0 - q]),
        Hermitian::diagonal(vec![q]),
    ];
    let want = brute_z([&src[0], &src[1]], 8);
    for i in 0..8 {
        assert!((s.z[i] - want[i]).abs() < 1e-12, "Z at {i}");
    }
    let frac = s.uniform.len() as f64 / 8.0;
    assert!((frac - binary_entropy(q)).abs() <= 0.2, "|F|/N = {frac}");
    assert!(shaping_sets(1.5, 8, 0.1, &b()).is_err());
}

#[test]
fn shaping_info_set_examples() {
    let perfect = CqChannel::pure_pair(0.0).unwrap();
    let r = shaping_info_set(&perfect, 0.3, 8, 0.1, &b()).unwrap();
    assert_eq!(r.info, r.sets.uniform);
    assert!(r.frozen_uniform.is_empty());

    let useless = CqChannel::pure_pair(1.0).unwrap();
    let r = shaping_info_set(&useless, 0.3, 8, 0.1, &b()).unwrap();
    assert!(r.info.is_empty());
    assert_eq!(r.frozen_uniform, r.sets.uniform);

    // Uniform inputs reduce to the symmetric construction.
    let bsc = ClassicalDmc::bsc(0.1).unwrap().to_cq();
    let t = 0.2;
    let r = shaping_info_set(&bsc, 0.5, 8, t, &b()).unwrap();
    let good: Vec<usize> = split_params(&bsc, 8, &b())
        .unwrap()
        .iter()
        .enumerate()
        .filter(|(_, p)| p.sqrt_fidelity <= t)
        .map(|(i, _)| i)
        .collect();
    assert_eq!(r.info, good);
    assert!(!good.is_empty());
}

#[test]
fn shaped_side_information_matches_enumeration() {
    let w = CqChannel::amplitude_damped_pair(0.4, 0.3).unwrap();
    let q = 0.3;
    let r = shaping_info_set(&w, q, 4, 0.1, &b()).unwrap();
    let a0 = w.output(0).scaled(1.0 - q);
    let a1 = w.output(1).scaled(q);
    let want = brute_z([&a0, &a1], 4);
    for i in 0..4 {
        assert!((r.z_side[i] - want[i]).abs() < 1e-10);
        assert!(r.z_side[i] <= r.sets.z[i] + 1e-9);
    }
    assert!(r.info.iter().all(|i| r.sets.uniform.contains(i)));
}

fn product_broadcast(w1: &CqChannel, w2: &CqChannel) -> BroadcastChannel {
    BroadcastChannel::product(w1, w2).unwrap()
}

/// x = v xor v1 xor v2.
const XOR: [[[usize; 2]; 2]; 2] = [[[0, 1], [1, 0]], [[1, 0], [0, 1]]];

#[test]
fn broadcast_sets_with_perfect_receivers() {
    let perfect = CqChannel::pure_pair(0.0).unwrap();
    let bc = product_broadcast(&perfect, &perfect);
    let law = AuxiliaryLaw::factorized(0.5, [0.5, 0.5], [[0.5; 2]; 2], XOR).unwrap();
    let s = broadcast_sets(&bc, &law, 4, 0.01, &b()).unwrap();
    assert!(s.f_1.is_empty());
    assert_eq!(s.l_v_b[0], s.l_v_b[1]);
}

#[test]
fn broadcast_sets_with_constant_cloud() {
    let w = CqChannel::pure_pair(0.3).unwrap();
    let bc = product_broadcast(&w, &w);
    let law = AuxiliaryLaw::factorized(1.0, [0.5, 0.5], [[0.5; 2]; 2], XOR).unwrap();
    let s = broadcast_sets(&bc, &law, 4, 0.01, &b()).unwrap();
    assert!(s.h_v.is_empty());
    assert!(s.i_sup_2.is_empty() && s.i_v_1.is_empty());
    assert_eq!(s.l_v, vec![0, 1, 2, 3]);
}

#[test]
fn broadcast_profiles_match_enumeration() {
    let w1 = CqChannel::pure_pair(0.4).unwrap();
    let w2 = CqChannel::amplitude_damped_pair(0.2, 0.5).unwrap();
    let bc = product_broadcast(&w1, &w2);
    let law = AuxiliaryLaw::factorized(0.4, [0.3, 0.6], [[0.2, 0.7], [0.55, 0.35]], XOR).unwrap();
    let len = 4;
    let s = broadcast_sets(&bc, &law, len, 0.1, &b()).unwrap();

    let p = law.p;
    let one = |x: f64| Hermitian::diagonal(vec![x]);
    let pv = |v: usize| p[v].iter().flatten().sum::<f64>();
    let z = brute_z([&one(pv(0)), &one(pv(1))], len);
    assert!(z.iter().zip(&s.z_v).all(|(a, b)| (a - b).abs() < 1e-12));

    let outs = [w1.outputs(), w2.outputs()];
    for l in 0..2 {
        // sum over (v1, v2) of p(v, v1, v2) rho_{phi}.
        let cloud = |v0: usize| {
            let mut acc = Hermitian::zeros(2);
            for v1 in 0..2 {
                for v2 in 0..2 {
                    acc.add_scaled(p[v0][v1][v2], &outs[l][XOR[v0][v1][v2]]);
                }
            }
            acc
        };
        let want = brute_z([&cloud(0), &cloud(1)], len);
        for i in 0..len {
            assert!(
                (s.z_v_b[l][i] - want[i]).abs() < 1e-10,
                "receiver {l} index {i}"
            );
        }
        // V_l given V and B_l: block-diagonal in V.
        let sat = |t: usize| {
            let mut acc = Hermitian::zeros(4);
            for v in 0..2 {
                let mut tag = vec![0.0; 2];
                tag[v] = 1.0;
                let mut blk = Hermitian::zeros(2);
                for v1 in 0..2 {
                    for v2 in 0..2 {
                        if (if l == 0 { v1 } else { v2 }) == t {
                            blk.add_scaled(p[v][v1][v2], &outs[l][XOR[v][v1][v2]]);
                        }
                    }
                }
                acc.add_scaled(1.0, &Hermitian::diagonal(tag).kron(&blk));
            }
            acc
        };
        let want = brute_z([&sat(0), &sat(1)], len);
        for i in 0..len {
            assert!(
                (s.z_vl_v_b[l][i] - want[i]).abs() < 1e-10,
                "satellite {l} index {i}"
            );
        }
    }
    let inner = |t: usize| Hermitian::diagonal((0..4).map(|k| p[k >> 1][t][k & 1]).collect());
    let want = brute_z([&inner(0), &inner(1)], len);
    assert!(want
        .iter()
        .zip(&s.z_v1_v_v2)
        .all(|(a, b)| (a - b).abs() < 1e-12));

    // Derived sets are the documented intersections.
    let both = |a: &[usize], c: &[usize]| {
        a.iter()
            .copied()
            .filter(|x| c.contains(x))
            .collect::<Vec<_>>()
    };
    assert_eq!(s.i_sup_2, both(&s.h_v, &s.l_v_b[1]));
    assert_eq!(s.i_1, both(&s.h_vl_v[0], &s.l_vl_v_b[0]));
    assert_eq!(
        s.f_1,
        both(&both(&s.l_v1_v_v2, &s.h_vl_v[0]), &s.h_vl_v_b[0])
    );
}

#[test]
fn broadcast_sets_reject_maps_outside_the_alphabet() {
    let w = CqChannel::pure_pair(0.3).unwrap();
    let bc = product_broadcast(&w, &w);
    let law = AuxiliaryLaw::factorized(
        0.5,
        [0.5; 2],
        [[0.5; 2]; 2],
        [[[0, 2], [1, 0]], [[1, 0], [0, 1]]],
    )
    .unwrap();
    assert!(broadcast_sets(&bc, &law, 2, 0.1, &b()).is_err());
}

fn arb_qubit_state() -> impl Strategy<Value = DensityMatrix> {
    (0.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0).prop_map(|(r, x, y, z)| {
        // Bloch vector of length r.
        let n = (x * x + y * y + z * z).sqrt().max(1e-9);
        let (x, y, z) = (r * x / n, r * y / n, r * z / n);
        let c = |re: f64, im: f64| polarlab_core::qmath::C64::new(re, im);
        DensityMatrix::from_rows(
            2,
            &[
                c((1.0 + z) / 2.0, 0.0),
                c(x / 2.0, -y / 2.0),
                c(x / 2.0, y / 2.0),
                c((1.0 - z) / 2.0, 0.0),
            ],
        )
        .unwrap()
    })
}

proptest! {
    #[test]
    fn encode_is_self_inverse(n in 0u32..=16, seed in any::<u64>()) {
        let len = 1usize << n;
        let mut state = seed | 1;
        let u: Vec<u8> = (0..len).map(|_| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state & 1) as u8
        }).collect();
        prop_assert_eq!(encode(&encode(&u).unwrap()).unwrap(), u);
    }

    #[test]
    fn encode_matches_the_generator(n in 0u32..=4, v in any::<u16>()) {
        let len = 1usize << n;
        let u = bits(v as usize % (1 << len), len);
        prop_assert_eq!(encode(&u).unwrap(), mat_encode(&u));
    }

    #[test]
    fn fidelity_recursion_at_length_two(r0 in arb_qubit_state(), r1 in arb_qubit_state()) {
        let w = CqChannel::new(vec![r0.clone(), r1.clone()]).unwrap();
        let f = polarlab_core::qmath::sqrt_fidelity(&r0, &r1).unwrap();
        let p = split_params(&w, 2, &b()).unwrap();
        prop_assert!((p[1].sqrt_fidelity - f * f).abs() < 1e-9);
        prop_assert!(p[0].sqrt_fidelity <= 2.0 * f + 1e-9);
        prop_assert!(p[0].sqrt_fidelity >= f - 1e-9);
        let i = w.symmetric_holevo();
        prop_assert!(p[0].mutual_information <= i + 1e-9);
        prop_assert!(p[1].mutual_information >= i - 1e-9);
        prop_assert!((p[0].mutual_information + p[1].mutual_information - 2.0 * i).abs() < TOL_CHAIN);
    }

    #[test]
    fn bec_splitting_is_monotone(eps in 0.0f64..1.0, n in 1u32..=10) {
        let len = 1usize << n;
        let e = bec_erasures(eps, len).unwrap();
        prop_assert_eq!(&e, &bec_oracle(eps, len));
        let sum: f64 = e.iter().map(|x| 1.0 - x).sum();
        prop_assert!((sum - len as f64 * (1.0 - eps)).abs() < 1e-9);
    }

    #[test]
    fn conservation_on_random_channels(r0 in arb_qubit_state(), r1 in arb_qubit_state()) {
        let w = CqChannel::new(vec![r0, r1]).unwrap();
        for len in [2, 4] {
            let (s, t) = conservation_check(&w, len, &b()).unwrap();
            prop_assert!((s - t).abs() < TOL_CHAIN);
        }
    }
}
