#![allow(clippy::needless_range_loop)]

use nalgebra::DMatrix;
use polarlab_core::channels::*;
use polarlab_core::qmath::*;
use polarlab_core::Error;
use proptest::prelude::*;

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn bell() -> DensityMatrix {
    let h = 0.5f64.sqrt();
    DensityMatrix::pure_real(&[h, 0.0, 0.0, h]).unwrap()
}

fn mixed(a: f64, b: f64, d: f64) -> DensityMatrix {
    DensityMatrix::from_real_rows(2, &[a, b, b, d]).unwrap()
}

#[test]
fn partial_trace_examples() {
    let rho = mixed(0.7, 0.2, 0.3);
    let sigma = DensityMatrix::pure_real(&[0.6, 0.8]).unwrap();
    let joint = rho.kron(&sigma);
    assert!(
        partial_trace(&joint, &[2, 2], &[0])
            .unwrap()
            .max_abs_diff(&rho)
            < 1e-12
    );
    assert!(
        partial_trace(&joint, &[2, 2], &[1])
            .unwrap()
            .max_abs_diff(&sigma)
            < 1e-12
    );

    let m = partial_trace(&bell(), &[2, 2], &[0]).unwrap();
    assert!(m.max_abs_diff(&DensityMatrix::maximally_mixed(2)) < 1e-12);

    let same = partial_trace(&joint, &[2, 2], &[0, 1]).unwrap();
    assert!(same.max_abs_diff(&joint) < 1e-15);

    assert!(matches!(
        partial_trace(&joint, &[2, 3], &[0]),
        Err(Error::DimMismatch { .. })
    ));
}

#[test]
fn partial_trace_of_three_factors() {
    // Keep the outer factors of a 2 x 3 x 2 product.
    let a = mixed(0.9, 0.1, 0.1);
    let b = DensityMatrix::diagonal(&[0.2, 0.3, 0.5]).unwrap();
    let d = DensityMatrix::pure_real(&[0.8, -0.6]).unwrap();
    let joint = a.kron(&b).kron(&d);
    let kept = partial_trace(&joint, &[2, 3, 2], &[0, 2]).unwrap();
    assert!(kept.max_abs_diff(&a.kron(&d)) < 1e-12);
    let mid = partial_trace(&joint, &[2, 3, 2], &[1]).unwrap();
    assert!(mid.max_abs_diff(&b) < 1e-12);
}

fn product_ic() -> (InterferenceChannel, Vec<DensityMatrix>, Vec<DensityMatrix>) {
    let r1: Vec<DensityMatrix> = (0..4)
        .map(|k| {
            DensityMatrix::pure_real(&[(k as f64 * 0.3).cos(), (k as f64 * 0.3).sin()]).unwrap()
        })
        .collect();
    let r2: Vec<DensityMatrix> = (0..4)
        .map(|k| mixed(0.5 + 0.1 * k as f64, 0.05 * k as f64, 0.5 - 0.1 * k as f64))
        .collect();
    let outs = (0..4).map(|k| r1[k].kron(&r2[k])).collect();
    (
        InterferenceChannel::new([2, 2], [2, 2], outs).unwrap(),
        r1,
        r2,
    )
}

#[test]
fn induced_mac_of_a_product_channel() {
    let (ic, r1, r2) = product_ic();
    let m1 = ic.induced_mac(Receiver::First).unwrap();
    let m2 = ic.induced_mac(Receiver::Second).unwrap();
    for k in 0..4 {
        let xs = [k >> 1, k & 1];
        assert!(m1.output(&xs).max_abs_diff(&r1[k]) < 1e-12);
        assert!(m2.output(&xs).max_abs_diff(&r2[k]) < 1e-12);
    }
}

#[test]
fn induced_macs_of_a_symmetric_channel_agree() {
    // rho_{x1 x2} = sigma_{x1 x2} (x) sigma_{x1 x2}, so both receivers see the same MAC.
    let outs: Vec<DensityMatrix> = (0..4)
        .map(|k| {
            let s = mixed(0.6 - 0.1 * k as f64, 0.1, 0.4 + 0.1 * k as f64);
            s.kron(&s)
        })
        .collect();
    let ic = InterferenceChannel::new([2, 2], [2, 2], outs).unwrap();
    assert_eq!(
        ic.induced_mac(Receiver::First).unwrap(),
        ic.induced_mac(Receiver::Second).unwrap()
    );
}

#[test]
fn induced_mac_matches_explicit_trace() {
    // Generic correlated outputs, compared with a hand-written partial trace.
    let outs: Vec<DensityMatrix> = (0..4)
        .map(|k| {
            let t = 0.4 + 0.3 * k as f64;
            let ket = [t.cos() * 0.8, 0.6 * t.sin(), 0.6 * t.cos(), -0.8 * t.sin()];
            let n: f64 = ket.iter().map(|x| x * x).sum::<f64>().sqrt();
            let pure = DensityMatrix::pure_real(&ket.map(|x| x / n)).unwrap();
            DensityMatrix::mixture(&[0.7, 0.3], &[&pure, &DensityMatrix::maximally_mixed(4)])
                .unwrap()
        })
        .collect();
    let ic = InterferenceChannel::new([2, 2], [2, 2], outs.clone()).unwrap();
    for (receiver, keep_first) in [(Receiver::First, true), (Receiver::Second, false)] {
        let mac = ic.induced_mac(receiver).unwrap();
        for (k, rho) in outs.iter().enumerate() {
            let got = mac.output(&[k >> 1, k & 1]);
            for i in 0..2 {
                for j in 0..2 {
                    let mut want = C64::new(0.0, 0.0);
                    for t in 0..2 {
                        want += if keep_first {
                            rho.entry(2 * i + t, 2 * j + t)
                        } else {
                            rho.entry(2 * t + i, 2 * t + j)
                        };
                    }
                    assert!((got.entry(i, j) - want).norm_sqr() < 1e-24);
                }
            }
        }
    }
    assert!(matches!(
        InterferenceChannel::new([2, 2], [2, 3], outs),
        Err(Error::DimMismatch { .. })
    ));
}

#[test]
fn degrade_examples() {
    let w = CqChannel::pure_pair(0.6).unwrap();
    assert_eq!(
        degrade(&w, &QubitChannel::identity(2))
            .unwrap()
            .outputs()
            .len(),
        2
    );
    let same = degrade(&w, &QubitChannel::identity(2)).unwrap();
    for x in 0..2 {
        assert!(same.output(x).max_abs_diff(w.output(x)) < 1e-15);
    }

    let dead = degrade(&w, &QubitChannel::depolarizing(1.0).unwrap()).unwrap();
    for x in 0..2 {
        assert!(
            dead.output(x)
                .max_abs_diff(&DensityMatrix::maximally_mixed(2))
                < 1e-12
        );
    }
    assert!(dead.symmetric_holevo().abs() < 1e-12);

    // Dephasing keeps the diagonal and scales off-diagonals by (1 - p).
    let p = 0.35;
    let deph = degrade(&w, &QubitChannel::dephasing(p).unwrap()).unwrap();
    for x in 0..2 {
        let (a, b) = (w.output(x), deph.output(x));
        assert!((b.entry(0, 0) - a.entry(0, 0)).norm_sqr() < 1e-24);
        assert!((b.entry(1, 1) - a.entry(1, 1)).norm_sqr() < 1e-24);
        assert!((b.entry(0, 1) - a.entry(0, 1) * (1.0 - p)).norm_sqr() < 1e-24);
    }

    let wide = CqChannel::new(vec![DensityMatrix::maximally_mixed(3); 2]).unwrap();
    assert!(matches!(
        degrade(&wide, &QubitChannel::identity(2)),
        Err(Error::DimMismatch { .. })
    ));
}

#[test]
fn standard_constructors() {
    let bsc = ClassicalDmc::bsc(0.1).unwrap();
    assert_eq!(bsc.rows(), &[vec![0.9, 0.1], vec![0.1, 0.9]]);
    let bec = ClassicalDmc::bec(0.25).unwrap();
    assert_eq!(bec.outputs(), 3);
    assert!((bec.mutual_information(&[0.5, 0.5]) - 0.75).abs() < 1e-12);
    assert!(ClassicalDmc::new(vec![vec![0.5, 0.4], vec![0.5, 0.5]]).is_err());

    // cos t |0> + sin t |1> gives a rank-1 output.
    let t = 0.7f64;
    let w = CqChannel::new(vec![
        DensityMatrix::pure_real(&[1.0, 0.0]).unwrap(),
        DensityMatrix::pure_real(&[t.cos(), t.sin()]).unwrap(),
    ])
    .unwrap();
    assert!((w.output(1).entry(0, 1).re - t.cos() * t.sin()).abs() < 1e-15);
    assert!(von_neumann_entropy(w.output(1)).abs() < 1e-12);

    // The pure pair has Holevo information h((1 + overlap)/2).
    let w = CqChannel::pure_pair(0.6).unwrap();
    let want = polarlab_core::fmath::binary_entropy(0.8);
    assert!((w.symmetric_holevo() - want).abs() < 1e-12);
}

#[test]
fn validation_failures() {
    let bad_trace = Hermitian::diagonal(vec![0.5, 0.4]);
    assert!(DensityMatrix::new(bad_trace).is_err());
    assert!(matches!(
        CqChannel::new(vec![
            DensityMatrix::maximally_mixed(2),
            DensityMatrix::maximally_mixed(3)
        ]),
        Err(Error::InvariantViolation { index: 1, .. })
    ));
    let incomplete = DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(0.5)]);
    assert!(QubitChannel::new(vec![incomplete]).is_err());
    assert!(CompoundSet::new(vec![]).is_err());
    let ternary = CqChannel::new(vec![DensityMatrix::maximally_mixed(2); 3]).unwrap();
    assert!(matches!(
        CompoundSet::new(vec![CqChannel::pure_pair(0.5).unwrap(), ternary]),
        Err(Error::InvariantViolation { index: 1, .. })
    ));
    // Members may differ in output dimension.
    let wide = CqChannel::new(vec![
        DensityMatrix::diagonal(&[1.0, 0.0, 0.0]).unwrap(),
        DensityMatrix::diagonal(&[0.0, 0.5, 0.5]).unwrap(),
    ])
    .unwrap();
    assert_eq!(
        CompoundSet::new(vec![CqChannel::pure_pair(0.5).unwrap(), wide])
            .unwrap()
            .len(),
        2
    );
}

#[test]
fn broadcast_marginals() {
    let r1 = [mixed(0.8, 0.1, 0.2), mixed(0.3, -0.2, 0.7)];
    let r2 = [
        DensityMatrix::pure_real(&[1.0, 0.0]).unwrap(),
        DensityMatrix::maximally_mixed(2),
    ];
    let bc = BroadcastChannel::new([2, 2], vec![r1[0].kron(&r2[0]), r1[1].kron(&r2[1])]).unwrap();
    let m1 = bc.marginal(Receiver::First).unwrap();
    let m2 = bc.marginal(Receiver::Second).unwrap();
    for x in 0..2 {
        assert!(m1.output(x).max_abs_diff(&r1[x]) < 1e-12);
        assert!(m2.output(x).max_abs_diff(&r2[x]) < 1e-12);
    }
    let s = bc.swapped().unwrap();
    assert!(
        s.marginal(Receiver::First)
            .unwrap()
            .output(1)
            .max_abs_diff(&r2[1])
            < 1e-12
    );
}

fn random_state(dim: usize, v: &[f64]) -> DensityMatrix {
    let a = DMatrix::from_fn(dim, dim, |i, j| {
        C64::new(v[2 * (i * dim + j)], v[2 * (i * dim + j) + 1])
    });
    let m = &a * a.adjoint();
    let tr: f64 = (0..dim).map(|i| m[(i, i)].re).sum();
    DensityMatrix::new(Hermitian::from_complex_matrix(m / c(tr)).unwrap()).unwrap()
}

fn nonzero(v: &[f64]) -> bool {
    v.iter().any(|x| x.abs() > 1e-2)
}

proptest! {
    #[test]
    fn partial_trace_keeps_trace_and_positivity(
        v in prop::collection::vec(-1.0f64..1.0, 72).prop_filter("zero", |v| nonzero(v)),
        keep in 0usize..2,
    ) {
        let rho = random_state(6, &v);
        let dims = [2, 3];
        let r = partial_trace(&rho, &dims, &[keep]).unwrap();
        prop_assert_eq!(r.dim(), dims[keep]);
        prop_assert!((r.trace() - 1.0).abs() < 1e-12);
        prop_assert!(r.eigenvalues().iter().all(|&x| x > -1e-12));
    }

    #[test]
    fn degrading_never_adds_information(
        a in prop::collection::vec(-1.0f64..1.0, 8).prop_filter("zero", |v| nonzero(v)),
        b in prop::collection::vec(-1.0f64..1.0, 8).prop_filter("zero", |v| nonzero(v)),
        g in 0.0f64..1.0,
        p in 0.0f64..1.0,
        q in 0.0f64..1.0,
    ) {
        let w = CqChannel::new(vec![random_state(2, &a), random_state(2, &b)]).unwrap();
        let ds = [
            QubitChannel::amplitude_damping(g).unwrap(),
            QubitChannel::dephasing(p).unwrap(),
            QubitChannel::depolarizing(q).unwrap().then(&QubitChannel::bit_flip(p).unwrap()).unwrap(),
        ];
        let before = w.symmetric_holevo();
        for d in &ds {
            prop_assert!(degrade(&w, d).unwrap().symmetric_holevo() <= before + 1e-10);
        }
    }

    #[test]
    fn diagonal_embedding_keeps_shannon_information(
        rows in prop::collection::vec(prop::collection::vec(0.01f64..1.0, 4), 3),
        prior in prop::collection::vec(0.01f64..1.0, 3),
    ) {
        let rows: Vec<Vec<f64>> = rows.iter().map(|r| {
            let s: f64 = r.iter().sum();
            r.iter().map(|x| x / s).collect()
        }).collect();
        let s: f64 = prior.iter().sum();
        let prior: Vec<f64> = prior.iter().map(|x| x / s).collect();
        let dmc = ClassicalDmc::new(rows.clone()).unwrap();
        let cq = dmc.to_cq();
        let chi = holevo_information(&prior, cq.outputs()).unwrap();
        // Direct Shannon evaluation.
        let mut mi = 0.0;
        for y in 0..4 {
            let py: f64 = (0..3).map(|x| prior[x] * rows[x][y]).sum();
            for x in 0..3 {
                mi += prior[x] * rows[x][y] * (rows[x][y] / py).log2();
            }
        }
        prop_assert!((chi - mi).abs() < 1e-12);
        prop_assert!((dmc.mutual_information(&prior) - mi).abs() < 1e-12);
        prop_assert_eq!(ClassicalDmc::from_cq(&cq), Some(dmc));
    }
}
