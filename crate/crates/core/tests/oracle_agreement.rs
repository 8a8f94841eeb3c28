use interleave_core::analysis::optimize_depth;
use interleave_core::dist::{
    adjacent_joint_distribution, joint_error_distribution, marginal_error_distribution, sequential_joint_distribution,
};
use interleave_core::models::{evaluate_models, model3_block_error};
use interleave_core::{ibp_from_stats, oracle, ChannelSpec, CodeSpec, FsmcModel, ModelKind, SchemeSpec};
use proptest::prelude::*;

fn ibp(p: f64, c: f64) -> FsmcModel {
    ibp_from_stats(&ChannelSpec::new(p, c).unwrap()).unwrap()
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

#[test]
fn marginal_n4_depth3() {
    let m = ibp(0.2, 0.6);
    let exact = oracle::marginal_law(&m, 4, 3).unwrap();
    let got = marginal_error_distribution(&m, 4, 3, 4).unwrap();
    assert!(close(&got.probs, &exact, 1e-13), "{:?} vs {exact:?}", got.probs);
    assert!((exact.iter().sum::<f64>() - 1.0).abs() < 1e-13);
}

#[test]
fn joint_n3_depth2() {
    let m = ibp(0.3, 0.8);
    let exact = oracle::joint_law(&m, 3, 2).unwrap();
    let got = joint_error_distribution(&m, 3, 2, 3).unwrap();
    assert!(close(got.table(), &exact, 1e-13));
}

#[test]
fn sequential_joint_n3() {
    let m = ibp(0.1, 0.5);
    let exact = oracle::joint_law(&m, 3, 1).unwrap();
    let got = sequential_joint_distribution(&m, 3, 3).unwrap();
    assert!(close(got.table(), &exact, 1e-13));
}

#[test]
fn three_state_chain_matches_enumeration() {
    let d = interleave_core::linalg::Matrix::from_rows(&[
        vec![0.90, 0.08, 0.02],
        vec![0.20, 0.70, 0.10],
        vec![0.10, 0.30, 0.60],
    ])
    .unwrap();
    let m = FsmcModel::new(d, vec![0.0, 0.3, 0.9]).unwrap();
    for depth in 1..=3 {
        let exact = oracle::marginal_law(&m, 3, depth).unwrap();
        let got = marginal_error_distribution(&m, 3, depth, 3).unwrap();
        assert!(close(&got.probs, &exact, 1e-13));
        let exact = oracle::joint_law(&m, 3, depth).unwrap();
        let got = adjacent_joint_distribution(&m, 3, depth, 3).unwrap();
        assert!(close(got.table(), &exact, 1e-13));
    }
}

#[test]
fn model3_small_instance() {
    let m = ibp(0.2, 0.5);
    let code = CodeSpec::new(5, 2, 1).unwrap();
    let scheme = SchemeSpec::new(2, 3).unwrap();
    let results = evaluate_models(&[ModelKind::Model3], &m, &code, &scheme).unwrap();
    // Two codewords per block: the pair law carries everything, so the block
    // probability is exact. The packet lift treats blocks as independent.
    let exact_block = oracle::block_error(&m, &code, 2).unwrap();
    assert!((results[0].p_block - exact_block).abs() < 1e-12);
    let exact = oracle::packet_error(&m, &code, &scheme).unwrap();
    let rel = (results[0].p - exact) / exact;
    assert!(rel > 0.0 && rel < 0.05, "{} vs {exact}", results[0].p);
}

#[test]
fn model3_depth3_deviation_is_small() {
    let m = ibp(0.05, 0.5);
    let code = CodeSpec::new(5, 2, 1).unwrap();
    let exact = oracle::block_error(&m, &code, 3).unwrap();
    let joint = adjacent_joint_distribution(&m, 5, 3, 2).unwrap();
    let p3 = model3_block_error(&joint, 1, 3).unwrap();
    let rel = (p3 - exact) / exact;
    assert!(rel.abs() < 0.1, "relative deviation {rel}");
}

#[test]
fn every_model_within_factor_ten_of_enumeration() {
    let mut worst: f64 = 1.0;
    for n in 2..=5usize {
        for l in 0..=2usize.min(n - 1) {
            let code = CodeSpec::new(n, 1, l).unwrap();
            for depth in 1..=3 {
                for blocks in 1..=3 {
                    let scheme = SchemeSpec::new(depth, blocks).unwrap();
                    for &p in &[0.05, 0.2, 0.5] {
                        for &c in &[0.0, 0.5, 0.9] {
                            let m = ibp(p, c);
                            let exact = oracle::packet_error(&m, &code, &scheme).unwrap();
                            for r in evaluate_models(&ModelKind::ALL[..3], &m, &code, &scheme).unwrap() {
                                assert!((0.0..=1.0).contains(&r.p), "{r:?}");
                                let ratio = r.p / exact;
                                assert!((0.1..=10.0).contains(&ratio), "{r:?} vs exact {exact}");
                                worst = worst.max(ratio.max(1.0 / ratio));
                            }
                        }
                    }
                }
            }
        }
    }
    assert!(worst < 10.0);
}

#[test]
fn moderate_correlation_depth_8_matches_16() {
    let ch = ChannelSpec::new(0.01, 0.3).unwrap();
    for code in [
        CodeSpec::new(63, 57, 1).unwrap(),
        CodeSpec::new(63, 45, 3).unwrap(),
        CodeSpec::new(63, 36, 5).unwrap(),
    ] {
        let ranked = optimize_depth(1008, &code, &ch, ModelKind::Model3, 0.01).unwrap();
        let p_at = |i: usize| ranked.iter().find(|c| c.scheme.depth == i).unwrap().p;
        let (p8, p16) = (p_at(8), p_at(16));
        assert!((p8 - p16).abs() / p16 < 0.05, "l={}: {p8} vs {p16}", code.l);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn recursions_match_enumeration(
        p in 0.01f64..0.7,
        c in 0.0f64..0.95,
        n in 1usize..=4,
        depth in 1usize..=3,
    ) {
        let m = ibp(p, c);
        let marginal = marginal_error_distribution(&m, n, depth, n).unwrap();
        let exact = oracle::marginal_law(&m, n, depth).unwrap();
        prop_assert!(close(&marginal.probs, &exact, 1e-12));
        let joint = adjacent_joint_distribution(&m, n, depth, n).unwrap();
        let exact = oracle::joint_law(&m, n, depth).unwrap();
        prop_assert!(close(joint.table(), &exact, 1e-12));
    }

    #[test]
    fn models_agree_with_enumeration_when_memoryless(
        p in 0.01f64..0.7,
        n in 2usize..=5,
        depth in 1usize..=3,
        blocks in 1usize..=3,
    ) {
        let m = ibp(p, 0.0);
        let code = CodeSpec::new(n, 1, 1).unwrap();
        let scheme = SchemeSpec::new(depth, blocks).unwrap();
        let exact = oracle::packet_error(&m, &code, &scheme).unwrap();
        for r in evaluate_models(&ModelKind::ALL, &m, &code, &scheme).unwrap() {
            prop_assert!((r.p - exact).abs() < 1e-12);
        }
    }
}
