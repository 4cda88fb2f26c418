#![allow(clippy::needless_range_loop)]

use polarlab_core::channels::{
    BroadcastChannel, ClassicalDmc, CqChannel, CqMac, InterferenceChannel, Receiver,
};
use polarlab_core::multiuser::{chain_rule_rates, kuser_paths, nu_class_paths};
use polarlab_core::polar::AuxiliaryLaw;
use polarlab_core::qmath::{holevo_information, DensityMatrix};
use polarlab_core::regions::*;
use polarlab_core::{Budget, Error};
use proptest::prelude::*;

fn b() -> Budget {
    Budget::default()
}

fn diag(p: &[f64]) -> DensityMatrix {
    DensityMatrix::diagonal(p).unwrap()
}

fn ket(t: f64) -> DensityMatrix {
    DensityMatrix::pure_real(&[t.cos(), t.sin()]).unwrap()
}

fn noisy(r: DensityMatrix, q: f64) -> DensityMatrix {
    DensityMatrix::mixture(
        &[1.0 - q, q],
        &[&r, &DensityMatrix::maximally_mixed(r.dim())],
    )
    .unwrap()
}

fn uniform(k: usize) -> Vec<Vec<f64>> {
    vec![vec![0.5, 0.5]; k]
}

fn qubit_mac() -> CqMac {
    CqMac::binary(vec![
        noisy(ket(0.0), 0.1),
        noisy(ket(0.6), 0.1),
        noisy(ket(1.3), 0.1),
        noisy(ket(2.2), 0.1),
    ])
    .unwrap()
}

fn log2(x: f64) -> f64 {
    x.log2()
}

#[test]
fn product_mac_is_a_rectangle() {
    let w1 = CqChannel::pure_pair(0.4).unwrap();
    let w2 = ClassicalDmc::bsc(0.1).unwrap().to_cq();
    let mac = CqMac::product(&w1, &w2).unwrap();
    let r = mac_region(&mac, &uniform(2), &b()).unwrap().region;
    let c1 = holevo_information(&[0.5, 0.5], w1.outputs()).unwrap();
    let c2 = 1.0 + 0.9 * log2(0.9) + 0.1 * log2(0.1);
    assert!((r.bound_for(&[1, 0]).unwrap() - c1).abs() < 1e-9);
    assert!((r.bound_for(&[0, 1]).unwrap() - c2).abs() < 1e-9);
    assert!((r.bound_for(&[1, 1]).unwrap() - c1 - c2).abs() < 1e-9);
    let hull = r.project([&[1, 0], &[0, 1]]).unwrap();
    assert_eq!(hull.len(), 4);
    assert!(hull
        .iter()
        .any(|p| (p[0] - c1).abs() < 1e-9 && (p[1] - c2).abs() < 1e-9));
}

#[test]
fn useless_mac_has_zero_bounds() {
    let rho = noisy(ket(0.3), 0.2);
    let mac = CqMac::binary(vec![rho.clone(), rho.clone(), rho.clone(), rho]).unwrap();
    let m = mac_region(&mac, &[vec![0.3, 0.7], vec![0.5, 0.5]], &b()).unwrap();
    assert!(m.region.inequalities.iter().all(|q| q.bound.abs() < 1e-12));
    assert_eq!(m.region.vertices(), vec![vec![0.0, 0.0]]);
}

#[test]
fn binary_adder_bounds() {
    let mac = CqMac::binary(vec![
        diag(&[1.0, 0.0, 0.0]),
        diag(&[0.0, 1.0, 0.0]),
        diag(&[0.0, 1.0, 0.0]),
        diag(&[0.0, 0.0, 1.0]),
    ])
    .unwrap();
    let r = mac_region(&mac, &uniform(2), &b()).unwrap().region;
    // H(Y) for Y in {0,1,2} with law (1/4, 1/2, 1/4); H(Y|X) = H(Y|Z) = 1.
    let h_y = -(0.25 * log2(0.25) * 2.0 + 0.5 * log2(0.5));
    assert!((h_y - 1.5).abs() < 1e-15);
    assert!((r.bound_for(&[1, 1]).unwrap() - h_y).abs() < 1e-9);
    assert!((r.bound_for(&[1, 0]).unwrap() - 1.0).abs() < 1e-9);
    assert!((r.bound_for(&[0, 1]).unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn corners_satisfy_the_chain_rule() {
    for mac in [
        qubit_mac(),
        CqMac::product(
            &CqChannel::pure_pair(0.7).unwrap(),
            &CqChannel::pure_pair(0.2).unwrap(),
        )
        .unwrap(),
    ] {
        let m = mac_region(&mac, &[vec![0.4, 0.6], vec![0.5, 0.5]], &b()).unwrap();
        let sum = m.region.bound_for(&[1, 1]).unwrap();
        assert_eq!(m.corners.len(), 2);
        for (order, rates) in &m.corners {
            assert!((rates[0] + rates[1] - sum).abs() < 1e-9, "order {order:?}");
            let mem = point_in_region(&m.region, rates).unwrap();
            assert!(mem.inside);
            assert!(mem.slacks[2].abs() < 1e-9);
        }
        // Decoding X first gives it I(X;B) and leaves Y with I(Y;B|X) = bound.
        let (_, xf) = &m.corners[0];
        assert!((xf[1] - m.region.bound_for(&[0, 1]).unwrap()).abs() < 1e-9);
    }
}

#[test]
fn chain_rule_points_lie_in_the_mac_region() {
    let mac = qubit_mac();
    let r = mac_region(&mac, &uniform(2), &b()).unwrap().region;
    for n in [1, 2, 4] {
        for path in nu_class_paths(n).unwrap() {
            let p = chain_rule_rates(&mac, &path, &b()).unwrap();
            let m = point_in_region(&r, &p.rates).unwrap();
            assert!(
                m.slacks.iter().all(|&s| s >= -1e-6),
                "{path} {:?}",
                m.slacks
            );
            assert!(m.slacks[2].abs() < 1e-6, "dominant face");
        }
    }
}

#[test]
fn three_user_region() {
    let outs: Vec<DensityMatrix> = (0..8).map(|t| noisy(ket(0.37 * t as f64), 0.15)).collect();
    let mac = CqMac::new(vec![2, 2, 2], outs).unwrap();
    let m = mac_region(&mac, &uniform(3), &b()).unwrap();
    assert_eq!(m.region.inequalities.len(), 7);
    assert_eq!(m.corners.len(), 6);
    let full = m.region.bound_for(&[1, 1, 1]).unwrap();
    for (_, c) in &m.corners {
        assert!(point_in_region(&m.region, c).unwrap().inside);
        assert!((c.iter().sum::<f64>() - full).abs() < 1e-9);
    }
    for path in kuser_paths(3, 1).unwrap() {
        let p = chain_rule_rates(&mac, &path, &b()).unwrap();
        let s = point_in_region(&m.region, &p.rates).unwrap().slacks;
        assert!(s.iter().all(|&x| x >= -1e-6), "{path}");
    }
}

#[test]
fn mac_region_rejects_wrong_inputs() {
    let mac = qubit_mac();
    assert!(matches!(
        mac_region(&mac, &uniform(3), &b()),
        Err(Error::DimMismatch { .. })
    ));
    assert!(matches!(
        mac_region(&mac, &[vec![0.5, 0.5], vec![1.0]], &b()),
        Err(Error::DimMismatch { .. })
    ));
}

/// Interference channel whose receivers see `mac1` and `mac2` independently.
fn ic(mac1: &CqMac, mac2: &CqMac) -> InterferenceChannel {
    let d1 = mac1.output_dim();
    let d2 = mac2.output_dim();
    let outs = (0..4)
        .map(|t| mac1.outputs()[t].kron(&mac2.outputs()[t]))
        .collect();
    InterferenceChannel::new([2, 2], [d1, d2], outs).unwrap()
}

fn swap_users(mac: &CqMac) -> CqMac {
    CqMac::binary(
        (0..4)
            .map(|t| mac.output(&[t & 1, t >> 1]).clone())
            .collect(),
    )
    .unwrap()
}

fn identity_maps(private: [usize; 2], common: [usize; 2]) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    // With one of the pair constant the other register drives the input.
    let map = |p: usize, c: usize| -> Vec<Vec<usize>> {
        (0..p)
            .map(|v| (0..c).map(|w| if p > 1 { v } else { w }).collect())
            .collect()
    };
    (map(private[0], common[0]), map(private[1], common[1]))
}

#[test]
fn hk_with_constant_private_parts_is_two_mac_regions() {
    let mac1 = qubit_mac();
    let mac2 = CqMac::binary(vec![
        noisy(ket(0.2), 0.05),
        noisy(ket(1.0), 0.05),
        noisy(ket(1.9), 0.05),
        noisy(ket(0.5), 0.05),
    ])
    .unwrap();
    let ic = ic(&mac1, &mac2);
    let (x1, x2) = identity_maps([1, 1], [2, 2]);
    let inputs = HkInputs {
        aux: [vec![1.0], vec![1.0], vec![0.3, 0.7], vec![0.6, 0.4]],
        x1,
        x2,
    };
    let hk = hk_region(&ic, &inputs, &b()).unwrap();
    assert_eq!(hk.region.inequalities.len(), 14);
    let dists = [vec![0.3, 0.7], vec![0.6, 0.4]];
    for (r, rx) in [Receiver::First, Receiver::Second].into_iter().enumerate() {
        let mac = ic.induced_mac(rx).unwrap();
        let m = mac_region(&mac, &dists, &b()).unwrap().region;
        let own = if r == 0 { [1, 0, 0, 0] } else { [0, 1, 0, 0] };
        for (t, want) in [
            ([0, 0, 1, 0], [1, 0]),
            ([0, 0, 0, 1], [0, 1]),
            ([0, 0, 1, 1], [1, 1]),
        ] {
            let got = hk.receivers[r].bound_for(&[0, t[2], t[3]]).unwrap();
            assert!(
                (got - m.bound_for(&want).unwrap()).abs() < 1e-9,
                "receiver {r} {want:?}"
            );
            let full = hk.region.inequalities[7 * r..7 * r + 7]
                .iter()
                .find(|q| q.coeffs == t)
                .unwrap();
            assert!((full.bound - got).abs() == 0.0);
        }
        // The private rate is worthless.
        assert!(hk.region.bound_for(&own).unwrap().abs() < 1e-12);
    }
}

#[test]
fn hk_with_constant_common_parts_is_point_to_point() {
    let w1 = CqChannel::pure_pair(0.5).unwrap();
    let w2 = ClassicalDmc::bsc(0.2).unwrap().to_cq();
    // Receiver 1 sees only sender 1, receiver 2 only sender 2.
    let mac1 = CqMac::binary((0..4).map(|t| w1.output(t >> 1).clone()).collect()).unwrap();
    let mac2 = CqMac::binary((0..4).map(|t| w2.output(t & 1).clone()).collect()).unwrap();
    let ic = ic(&mac1, &mac2);
    let (x1, x2) = identity_maps([2, 2], [1, 1]);
    let inputs = HkInputs {
        aux: [vec![0.5, 0.5], vec![0.5, 0.5], vec![1.0], vec![1.0]],
        x1,
        x2,
    };
    let hk = hk_region(&ic, &inputs, &b()).unwrap();
    let c1 = holevo_information(&[0.5, 0.5], w1.outputs()).unwrap();
    let c2 = 1.0 + 0.8 * log2(0.8) + 0.2 * log2(0.2);
    assert!((hk.region.bound_for(&[1, 0, 0, 0]).unwrap() - c1).abs() < 1e-9);
    let s2 = hk.region.inequalities[7..]
        .iter()
        .find(|q| q.coeffs == [0, 1, 0, 0])
        .unwrap();
    assert!((s2.bound - c2).abs() < 1e-9);
    // The achievable pairs form the rectangle [0,c1] x [0,c2].
    let hull = &hk.projection;
    assert_eq!(hull.len(), 4, "{hull:?}");
    assert!(hull
        .iter()
        .any(|p| (p[0] - c1).abs() < 1e-9 && (p[1] - c2).abs() < 1e-9));
}

#[test]
fn hk_is_symmetric_under_relabeling() {
    let mac1 = qubit_mac();
    let mac2 = swap_users(&mac1);
    let ic = ic(&mac1, &mac2);
    let map = vec![vec![0, 1], vec![1, 0]];
    let inputs = HkInputs {
        aux: [
            vec![0.5, 0.5],
            vec![0.5, 0.5],
            vec![0.3, 0.7],
            vec![0.3, 0.7],
        ],
        x1: map.clone(),
        x2: map,
    };
    let hk = hk_region(&ic, &inputs, &b()).unwrap();
    let q = &hk.region.inequalities;
    for k in 0..7 {
        // (S1,S2,T1,T2) -> (S2,S1,T2,T1) maps receiver 1's list onto receiver 2's.
        let c = &q[k].coeffs;
        let mirrored = [c[1], c[0], c[3], c[2]];
        let partner = q[7..].iter().find(|p| p.coeffs == mirrored).unwrap();
        assert!(
            (partner.bound - q[k].bound).abs() < 1e-9,
            "{} vs {}",
            q[k].label,
            partner.label
        );
    }
    for p in &hk.projection {
        let mirrored = [p[1], p[0]];
        assert!(
            hk.projection
                .iter()
                .any(|r| (r[0] - mirrored[0]).abs() < 1e-8 && (r[1] - mirrored[1]).abs() < 1e-8),
            "{p:?} has no mirror in {:?}",
            hk.projection
        );
    }
}

#[test]
fn hk_vertices_satisfy_both_receivers() {
    let ic = ic(&qubit_mac(), &swap_users(&qubit_mac()));
    let inputs = HkInputs {
        aux: [
            vec![0.5, 0.5],
            vec![0.4, 0.6],
            vec![0.5, 0.5],
            vec![0.2, 0.8],
        ],
        x1: vec![vec![0, 1], vec![1, 1]],
        x2: vec![vec![0, 1], vec![1, 0]],
    };
    let hk = hk_region(&ic, &inputs, &b()).unwrap();
    let verts = hk.region.vertices();
    assert!(verts.len() > 4);
    for v in &verts {
        for (r, own) in [(0, v[0]), (1, v[1])] {
            let m = hk.receivers[r].contains(&[own, v[2], v[3]], 1e-9).unwrap();
            assert!(m.inside, "{v:?}");
        }
    }
    // Every projected hull point comes from a feasible rate tuple.
    for p in &hk.projection {
        assert!(verts
            .iter()
            .any(|v| (v[0] + v[2] - p[0]).abs() < 1e-9 && (v[1] + v[3] - p[1]).abs() < 1e-9));
    }
}

#[test]
fn hk_rejects_bad_maps() {
    let ic = ic(&qubit_mac(), &qubit_mac());
    let inputs = HkInputs {
        aux: [
            vec![0.5, 0.5],
            vec![0.5, 0.5],
            vec![0.5, 0.5],
            vec![0.5, 0.5],
        ],
        x1: vec![vec![0, 2], vec![1, 0]],
        x2: vec![vec![0, 1], vec![1, 0]],
    };
    assert!(matches!(
        hk_region(&ic, &inputs, &b()),
        Err(Error::DimMismatch { .. })
    ));
}

fn qubit_broadcast() -> BroadcastChannel {
    let w1 = CqChannel::new(vec![noisy(ket(0.0), 0.1), noisy(ket(1.1), 0.1)]).unwrap();
    let w2 = CqChannel::new(vec![noisy(ket(0.3), 0.2), noisy(ket(1.5), 0.05)]).unwrap();
    BroadcastChannel::product(&w1, &w2).unwrap()
}

/// Entangled outputs `cos t |00> + sin t |11>`.
fn entangled_broadcast() -> BroadcastChannel {
    let outs = [0.2, 1.2]
        .iter()
        .map(|&t: &f64| {
            let pure = DensityMatrix::pure_real(&[t.cos(), 0.0, 0.0, t.sin()]).unwrap();
            noisy(pure, 0.1)
        })
        .collect();
    BroadcastChannel::new([2, 2], outs).unwrap()
}

/// `I(U_l; B_l)` from the conditional states `rho_{u_l}`.
fn marton_info(bc: &BroadcastChannel, joint: &[Vec<f64>], f: &[Vec<usize>], l: usize) -> f64 {
    let w = bc
        .marginal(if l == 0 {
            Receiver::First
        } else {
            Receiver::Second
        })
        .unwrap();
    let mut prior = vec![0.0; 2];
    let mut states = Vec::new();
    for u in 0..2 {
        let weights: Vec<f64> = (0..2)
            .map(|v| if l == 0 { joint[u][v] } else { joint[v][u] })
            .collect();
        prior[u] = weights.iter().sum();
        let parts: Vec<&DensityMatrix> = (0..2)
            .map(|v| w.output(if l == 0 { f[u][v] } else { f[v][u] }))
            .collect();
        let norm: Vec<f64> = weights.iter().map(|x| x / prior[u]).collect();
        states.push(DensityMatrix::mixture(&norm, &parts).unwrap());
    }
    holevo_information(&prior, &states).unwrap()
}

fn xor_map() -> Vec<Vec<usize>> {
    vec![vec![0, 1], vec![1, 0]]
}

#[test]
fn marton_bounds_match_direct_evaluation() {
    for bc in [qubit_broadcast(), entangled_broadcast()] {
        let joint = vec![vec![0.4, 0.1], vec![0.2, 0.3]];
        let f = xor_map();
        let r = marton_region(&bc, &joint, &f, &b()).unwrap();
        let i1 = marton_info(&bc, &joint, &f, 0);
        let i2 = marton_info(&bc, &joint, &f, 1);
        let h = |p: &[f64]| {
            -p.iter()
                .filter(|&&x| x > 0.0)
                .map(|&x| x * log2(x))
                .sum::<f64>()
        };
        let mutual = h(&[0.5, 0.5]) + h(&[0.6, 0.4]) - h(&[0.4, 0.1, 0.2, 0.3]);
        assert!((r.bound_for(&[1, 0]).unwrap() - i1).abs() < 1e-9);
        assert!((r.bound_for(&[0, 1]).unwrap() - i2).abs() < 1e-9);
        assert!((r.bound_for(&[1, 1]).unwrap() - (i1 + i2 - mutual).max(0.0)).abs() < 1e-9);
    }
}

#[test]
fn marton_independent_and_identical_auxiliaries() {
    let bc = qubit_broadcast();
    let f = vec![vec![0, 0], vec![1, 1]];
    let ind = marton_region(&bc, &[vec![0.25, 0.25], vec![0.25, 0.25]], &f, &b()).unwrap();
    let s = ind.bound_for(&[1, 0]).unwrap() + ind.bound_for(&[0, 1]).unwrap();
    assert!((ind.bound_for(&[1, 1]).unwrap() - s).abs() < 1e-9);
    // U1 = U2 costs I(U1;U2) = H(U1) = 1 bit of the sum.
    let same = marton_region(&bc, &[vec![0.5, 0.0], vec![0.0, 0.5]], &f, &b()).unwrap();
    let s = same.bound_for(&[1, 0]).unwrap() + same.bound_for(&[0, 1]).unwrap();
    assert!((same.bound_for(&[1, 1]).unwrap() - (s - 1.0).max(0.0)).abs() < 1e-9);
}

#[test]
fn marton_rejects_bad_inputs() {
    let bc = qubit_broadcast();
    assert!(matches!(
        marton_region(&bc, &[vec![0.5, 0.5]], &xor_map(), &b()),
        Err(Error::DimMismatch { .. })
    ));
    assert!(marton_region(&bc, &[vec![0.5, 0.5], vec![0.5, 0.5]], &xor_map(), &b()).is_err());
}

fn law(p_v: f64, p_v2: [f64; 2], p_v1: [[f64; 2]; 2]) -> AuxiliaryLaw {
    // x = v xor v1 xor v2 keeps every auxiliary visible at the output.
    let mut phi = [[[0; 2]; 2]; 2];
    for v in 0..2 {
        for v1 in 0..2 {
            for v2 in 0..2 {
                phi[v][v1][v2] = v ^ v1 ^ v2;
            }
        }
    }
    AuxiliaryLaw::factorized(p_v, p_v2, p_v1, phi).unwrap()
}

#[test]
fn mgp_with_constant_cloud_is_marton() {
    let bc = entangled_broadcast();
    let l = law(0.0, [0.3, 0.5], [[0.2, 0.7], [0.5, 0.5]]);
    let m = mgp_region(&bc, &l, false, &b()).unwrap();
    let joint: Vec<Vec<f64>> = (0..2)
        .map(|v1| (0..2).map(|v2| l.p[0][v1][v2]).collect())
        .collect();
    let f: Vec<Vec<usize>> = (0..2)
        .map(|v1| (0..2).map(|v2| l.phi[0][v1][v2]).collect())
        .collect();
    let mr = marton_region(&bc, &joint, &f, &b()).unwrap();
    assert!((m.region.bound_for(&[1, 0]).unwrap() - mr.bound_for(&[1, 0]).unwrap()).abs() < 1e-9);
    assert!((m.region.bound_for(&[0, 1]).unwrap() - mr.bound_for(&[0, 1]).unwrap()).abs() < 1e-9);
    for q in m.region.inequalities.iter().filter(|q| q.coeffs == [1, 1]) {
        assert!(
            (q.bound - mr.bound_for(&[1, 1]).unwrap()).abs() < 1e-9,
            "{}",
            q.label
        );
    }
}

#[test]
fn mgp_conditionally_independent_bins() {
    let l = law(0.4, [0.3, 0.6], [[0.2, 0.2], [0.7, 0.7]]);
    let m = mgp_region(&qubit_broadcast(), &l, false, &b()).unwrap();
    assert!(m.quantities.i_v1_v2_given_v.abs() < 1e-12);
    let q = m.quantities;
    // Chain rule I(V,V1;B1) = I(V;B1) + I(V1;B1|V).
    assert!((q.i_v_v1_b1 - q.i_v_b1 - q.i_v1_b1_given_v).abs() < 1e-9);
    assert!((q.i_v_v2_b2 - q.i_v_b2 - q.i_v2_b2_given_v).abs() < 1e-9);
}

#[test]
fn mgp_corners_on_the_boundary_for_equal_cloud_information() {
    // The same channel to both receivers and a symmetric law give I(V;B1) = I(V;B2).
    let w = CqChannel::new(vec![noisy(ket(0.0), 0.1), noisy(ket(1.2), 0.1)]).unwrap();
    let bc = BroadcastChannel::product(&w, &w).unwrap();
    let l = law(0.5, [0.5, 0.5], [[0.5, 0.5], [0.5, 0.5]]);
    let m = mgp_region(&bc, &l, false, &b()).unwrap();
    assert!((m.quantities.i_v_b1 - m.quantities.i_v_b2).abs() < 1e-12);
    assert!(!m.swapped);
    for c in &m.corners {
        let s = point_in_region(&m.region, c).unwrap();
        assert!(s.inside);
        assert!(
            s.slacks.iter().any(|x| x.abs() < 1e-9),
            "{c:?} {:?}",
            s.slacks
        );
    }
}

#[test]
fn mgp_with_common_message() {
    let bc = qubit_broadcast();
    let l = law(0.5, [0.3, 0.6], [[0.2, 0.9], [0.5, 0.4]]);
    let m = mgp_region(&bc, &l, true, &b()).unwrap();
    assert_eq!(m.region.names, ["R0", "R1", "R2"]);
    assert_eq!(m.region.inequalities.len(), 5);
    let q = m.quantities;
    assert!((m.region.bound_for(&[1, 0, 0]).unwrap() - q.i_v_b1.min(q.i_v_b2)).abs() < 1e-12);
    // Trading private rate for common rate along R0 + R1 stays inside.
    let r0 = m.region.bound_for(&[1, 0, 0]).unwrap();
    let c = &m.corners[1];
    if c[1] >= r0 {
        assert!(
            point_in_region(&m.region, &[r0, c[1] - r0, c[2]])
                .unwrap()
                .inside
        );
    }
}

#[test]
fn mgp_swaps_roles_when_receiver_one_is_stronger() {
    let bc = qubit_broadcast();
    // x = v makes I(V;B_l) the Holevo quantity of each receiver's channel.
    let l = AuxiliaryLaw::factorized(
        0.5,
        [0.4, 0.4],
        [[0.5, 0.5], [0.5, 0.5]],
        [[[0; 2]; 2], [[1; 2]; 2]],
    )
    .unwrap();
    let m = mgp_region(&bc, &l, false, &b()).unwrap();
    assert!((m.quantities.i_v_b1 - m.quantities.i_v_b2).abs() > 1e-3);
    let ms = mgp_region(&bc.swapped().unwrap(), &l, false, &b()).unwrap();
    assert_ne!(m.swapped, ms.swapped);
}

#[test]
fn mgp_rejects_phi_outside_alphabet() {
    let mut l = law(0.5, [0.5, 0.5], [[0.5, 0.5], [0.5, 0.5]]);
    l.phi[1][1][1] = 3;
    assert!(matches!(
        mgp_region(&qubit_broadcast(), &l, false, &b()),
        Err(Error::InvalidFactorization(_))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn mgp_corners_always_inside(
        pv in 0.0f64..1.0,
        a in 0.0f64..1.0, c in 0.0f64..1.0,
        d in 0.0f64..1.0, e in 0.0f64..1.0, f in 0.0f64..1.0, g in 0.0f64..1.0,
        common in any::<bool>(),
        entangled in any::<bool>(),
    ) {
        let bc = if entangled { entangled_broadcast() } else { qubit_broadcast() };
        let m = mgp_region(&bc, &law(pv, [a, c], [[d, e], [f, g]]), common, &b()).unwrap();
        for corner in &m.corners {
            prop_assert!(point_in_region(&m.region, corner).unwrap().inside);
        }
    }

    #[test]
    fn marton_sum_bound_at_most_individual(w in proptest::collection::vec(0.01f64..1.0, 4)) {
        let s: f64 = w.iter().sum();
        let joint = vec![vec![w[0] / s, w[1] / s], vec![w[2] / s, w[3] / s]];
        let r = marton_region(&qubit_broadcast(), &joint, &xor_map(), &b()).unwrap();
        let sum = r.bound_for(&[1, 1]).unwrap();
        prop_assert!(sum <= r.bound_for(&[1, 0]).unwrap() + r.bound_for(&[0, 1]).unwrap() + 1e-12);
    }

    #[test]
    fn mac_chain_rule_on_random_inputs(p in 0.05f64..0.95, q in 0.05f64..0.95) {
        let m = mac_region(&qubit_mac(), &[vec![p, 1.0 - p], vec![q, 1.0 - q]], &b()).unwrap();
        let sum = m.region.bound_for(&[1, 1]).unwrap();
        for (_, c) in &m.corners {
            prop_assert!((c[0] + c[1] - sum).abs() < 1e-6);
        }
    }
}
