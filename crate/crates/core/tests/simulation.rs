use interleave_core::mc::{dar1_stream, simulate_packets, RunSampler, SimConfig};
use interleave_core::models::evaluate_models;
use interleave_core::{ibp_from_stats, oracle, ChannelSpec, CodeSpec, ModelKind, SchemeSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Frequencies of the four adjacent-bit pairs in one stream.
fn pair_frequencies(bits: &[bool]) -> [f64; 4] {
    let mut counts = [0usize; 4];
    for w in bits.windows(2) {
        counts[usize::from(w[0]) * 2 + usize::from(w[1])] += 1;
    }
    let total = (bits.len() - 1) as f64;
    counts.map(|c| c as f64 / total)
}

fn pair_law(p: f64, c: f64) -> [f64; 4] {
    let p11 = p * (p + c * (1.0 - p));
    let p10 = p - p11;
    [1.0 - p - p10, p10, p10, p11]
}

/// Pair frequencies over many independent streams agree with the exact pair
/// law within 4 standard errors (estimated from the spread across streams).
fn check_pair_law(p: f64, c: f64, stream: impl Fn(u64) -> Vec<bool>) {
    let reps = 400;
    let per: Vec<[f64; 4]> = (0..reps).map(|r| pair_frequencies(&stream(r))).collect();
    let law = pair_law(p, c);
    for k in 0..4 {
        let mean = per.iter().map(|f| f[k]).sum::<f64>() / reps as f64;
        let var = per.iter().map(|f| (f[k] - mean).powi(2)).sum::<f64>() / (reps - 1) as f64;
        let se = (var / reps as f64).sqrt().max(1e-12);
        assert!(
            (mean - law[k]).abs() <= 4.0 * se,
            "p={p} c={c} pair {k}: {mean} vs {} (se {se})",
            law[k]
        );
    }
}

#[test]
fn bitwise_generator_pair_law() {
    for &(p, c) in &[(0.05, 0.0), (0.1, 0.5), (0.2, 0.9)] {
        let ch = ChannelSpec::new(p, c).unwrap();
        check_pair_law(p, c, |r| dar1_stream(&ch, 5_000, 100 + r).unwrap());
    }
}

#[test]
fn run_sampler_pair_law() {
    for &(p, c) in &[(0.05, 0.0), (0.1, 0.5), (0.2, 0.9)] {
        let ch = ChannelSpec::new(p, c).unwrap();
        let sampler = RunSampler::new(&ch).unwrap();
        check_pair_law(p, c, |r| sampler.stream(&mut ChaCha8Rng::seed_from_u64(900 + r), 5_000));
    }
}

fn four_se_band(exact: f64, p_hat: f64, packets: u64) -> bool {
    let se = (exact * (1.0 - exact) / packets as f64).sqrt();
    (p_hat - exact).abs() <= 4.0 * se
}

#[test]
fn simulator_matches_enumeration() {
    let cases = [
        (
            CodeSpec::new(5, 2, 1).unwrap(),
            SchemeSpec::new(3, 2).unwrap(),
            0.2,
            0.5,
        ),
        (
            CodeSpec::new(4, 2, 0).unwrap(),
            SchemeSpec::new(2, 3).unwrap(),
            0.05,
            0.9,
        ),
        (
            CodeSpec::new(5, 1, 2).unwrap(),
            SchemeSpec::new(3, 1).unwrap(),
            0.5,
            0.9,
        ),
        (
            CodeSpec::new(3, 1, 1).unwrap(),
            SchemeSpec::new(1, 3).unwrap(),
            0.1,
            0.7,
        ),
    ];
    for (i, (code, scheme, p, c)) in cases.into_iter().enumerate() {
        let channel = ChannelSpec::new(p, c).unwrap();
        let exact = oracle::packet_error(&ibp_from_stats(&channel).unwrap(), &code, &scheme).unwrap();
        let packets = 200_000;
        let est = simulate_packets(&SimConfig {
            channel,
            code,
            scheme,
            packets,
            seed: 40 + i as u64,
            gamma: 0.95,
        })
        .unwrap();
        assert!(
            four_se_band(exact, est.p_hat, packets),
            "case {i}: {} vs {exact}",
            est.p_hat
        );
    }
}

#[test]
fn simulator_matches_memoryless_models_at_n63() {
    let code = CodeSpec::new(63, 45, 3).unwrap();
    for (i, scheme) in SchemeSpec::constant_budget(1008, 63).unwrap().into_iter().enumerate() {
        let channel = ChannelSpec::new(0.02, 0.0).unwrap();
        let exact = evaluate_models(
            &[ModelKind::Baseline],
            &ibp_from_stats(&channel).unwrap(),
            &code,
            &scheme,
        )
        .unwrap()[0]
            .p;
        let packets = 50_000;
        let est = simulate_packets(&SimConfig {
            channel,
            code,
            scheme,
            packets,
            seed: i as u64,
            gamma: 0.95,
        })
        .unwrap();
        assert!(
            four_se_band(exact, est.p_hat, packets),
            "{scheme:?}: {} vs {exact}",
            est.p_hat
        );
    }
}
