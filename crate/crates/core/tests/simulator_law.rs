use std::collections::BTreeMap;

use discrete_spacings::exact::pmf_split;
use discrete_spacings::simulator::{
    simulate_batch, simulate_histogram, simulate_once, SimConfig, StreamFactory,
};
use discrete_spacings::stats::{goodness_of_fit, two_sample_homogeneity};
use discrete_spacings::{GapCounts, ProcessParams};
use rand::Rng;

#[test]
fn histogram_fits_exact_law() {
    for (n, k, seed) in [(7, 2, 1), (9, 3, 2), (11, 4, 3), (14, 3, 4)] {
        let params = ProcessParams::new(n, k).unwrap();
        let exact = pmf_split(params, 40).unwrap().to_f64();
        let fit = goodness_of_fit(&simulate_histogram(params, 200_000, seed), &exact);
        assert!(fit.p_value > 1e-4, "{params}: {fit:?}");
        assert!(fit.tv_distance < 1e-2, "{params}: {fit:?}");
    }
}

#[test]
fn splitting_identity_in_law() {
    // X_n against X_J + X'_{n-k-J} with J uniform on 0..=n-k.
    let params = ProcessParams::new(16, 3).unwrap();
    let direct = simulate_histogram(params, 100_000, 9);
    let streams = StreamFactory::new(10);
    let mut split: BTreeMap<GapCounts, u64> = BTreeMap::new();
    for r in 0..100_000 {
        let mut rng = streams.stream(r);
        let j = rng.gen_range(0..=params.n - params.k);
        let left = simulate_once(ProcessParams::new(j, 3).unwrap(), &mut rng);
        let right = simulate_once(
            ProcessParams::new(params.n - params.k - j, 3).unwrap(),
            &mut rng,
        );
        let mut joined = left.join_around_hat(&right);
        joined.params = params;
        *split.entry(joined).or_default() += 1;
    }
    let fit = two_sample_homogeneity(&direct, &split);
    assert!(fit.p_value > 1e-4, "{fit:?}");
}

#[test]
fn batch_is_reproducible_and_thread_independent() {
    let mut cfg = SimConfig::new(ProcessParams::new(45, 3).unwrap(), 50_000, 77);
    cfg.projection = Some(vec![1.0, -0.5]);
    cfg.max_order = 6;
    let one = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let four = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap();
    let a = one.install(|| simulate_batch(&cfg)).unwrap();
    let b = four.install(|| simulate_batch(&cfg)).unwrap();
    assert_eq!(a, b);
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
    cfg.seed = 78;
    assert_ne!(simulate_batch(&cfg).unwrap().mean, a.mean);
}

#[test]
fn sample_stats_round_trip() {
    let cfg = SimConfig::new(ProcessParams::new(30, 2).unwrap(), 1_000, 5);
    let stats = simulate_batch(&cfg).unwrap();
    let text = serde_json::to_string(&stats).unwrap();
    let back = serde_json::from_str(&text).unwrap();
    assert_eq!(stats, back);
}
