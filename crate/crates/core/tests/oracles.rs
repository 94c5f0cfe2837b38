mod common;

use common::{max_abs_diff, normal, random_dataset};
use shapelet_core::distance::min_dist_with;
use shapelet_core::sampling::estimate_threshold;
use shapelet_core::testkit::{batch_pairwise, exact_threshold, naive_min_dist_all};
use shapelet_core::{
    min_dist_all, EarlyAbandon, PairwiseState, PruningThreshold, Rng, Shapelet, TimeSeriesDataset,
};

#[test]
fn min_dist_all_matches_naive_bitwise() {
    let mut rng = Rng::new(1);
    for _ in 0..200 {
        let n = 2 + rng.index(19);
        let m = 2 + rng.index(49);
        let ds = random_dataset(&mut rng, n, m);
        let len = 1 + rng.index(m);
        let shapelet = if rng.index(2) == 0 {
            Shapelet::from_dataset(&ds, rng.index(n), rng.index(m - len + 1), len).unwrap()
        } else {
            Shapelet {
                values: (0..len).map(|_| normal(&mut rng)).collect(),
                origin_series: 0,
                origin_start: 0,
            }
        };
        let fast = min_dist_all(&shapelet, &ds).unwrap();
        let slow = naive_min_dist_all(&shapelet, &ds).unwrap();
        let fast_bits: Vec<u64> = fast.iter().map(|v| v.to_bits()).collect();
        let slow_bits: Vec<u64> = slow.iter().map(|v| v.to_bits()).collect();
        assert_eq!(fast_bits, slow_bits);
    }
}

#[test]
fn early_abandon_does_not_change_results() {
    let mut rng = Rng::new(2);
    for _ in 0..200 {
        let m = 2 + rng.index(40);
        let series: Vec<f64> = (0..m).map(|_| normal(&mut rng)).collect();
        let len = 1 + rng.index(m);
        let shapelet = Shapelet {
            values: (0..len).map(|_| normal(&mut rng)).collect(),
            origin_series: 0,
            origin_start: 0,
        };
        let on = min_dist_with(&shapelet, &series, EarlyAbandon::On).unwrap();
        let off = min_dist_with(&shapelet, &series, EarlyAbandon::Off).unwrap();
        assert_eq!(on.distance.to_bits(), off.distance.to_bits());
        assert_eq!(on.position, off.position);
    }
}

#[test]
fn incremental_state_matches_batch() {
    let mut rng = Rng::new(3);
    for _ in 0..100 {
        let n = 2 + rng.index(24);
        let steps = 1 + rng.index(30);
        let mut state = PairwiseState::new(n);
        let mut live: Vec<Vec<f64>> = Vec::new();
        for _ in 0..steps {
            if !live.is_empty() && rng.index(3) == 0 {
                let gone = live.remove(rng.index(live.len()));
                state.remove_feature(&gone).unwrap();
            } else {
                let d: Vec<f64> = (0..n).map(|_| normal(&mut rng).abs() * 10.0).collect();
                state.add_feature(&d).unwrap();
                live.push(d);
            }
        }
        let batch = batch_pairwise(n, &live).unwrap();
        assert_eq!(state.feature_count(), batch.feature_count());
        assert!(max_abs_diff(&state.to_dense(), &batch.to_dense()) <= 1e-9);
    }
}

#[test]
fn add_then_remove_restores_state() {
    let mut state = PairwiseState::new(3);
    state.add_feature(&[0.5, 2.0, 7.0]).unwrap();
    let before = state.clone();
    state.add_feature(&[1.0, 3.0, 2.0]).unwrap();
    state.remove_feature(&[1.0, 3.0, 2.0]).unwrap();
    assert!(max_abs_diff(&state.to_dense(), &before.to_dense()) <= 1e-9);
}

fn radius(t: PruningThreshold) -> f64 {
    t.radius().expect("pruning enabled")
}

#[test]
fn sampled_threshold_brackets_exact_percentiles() {
    let mut data_rng = Rng::new(4);
    let ds = random_dataset(&mut data_rng, 20, 30);
    let lengths = [6, 12, 18];
    let lo = radius(exact_threshold(&ds, 15, &lengths).unwrap());
    let hi = radius(exact_threshold(&ds, 35, &lengths).unwrap());
    let inside = (0..10)
        .filter(|&seed| {
            let eps = radius(estimate_threshold(&ds, 25, &lengths, &mut Rng::new(seed)).unwrap());
            lo <= eps && eps <= hi
        })
        .count();
    assert!(inside >= 9, "{inside}/10 seeds inside [{lo}, {hi}]");
}

#[test]
fn threshold_is_monotone_in_p() {
    let ds = random_dataset(&mut Rng::new(5), 20, 30);
    for seed in 0..10 {
        let mut previous = 0.0;
        for p in [1, 15, 25, 35, 50, 100] {
            let eps = radius(estimate_threshold(&ds, p, &[6, 12], &mut Rng::new(seed)).unwrap());
            assert!(eps >= previous);
            previous = eps;
        }
    }
}

#[test]
fn small_threshold_is_an_attainable_pair_distance() {
    let ds = TimeSeriesDataset::new(
        vec![vec![0.0, 1.0, 4.0, 2.0], vec![3.0, -1.0, 0.5, 2.0]],
        vec![0, 1],
    )
    .unwrap();
    let eps = radius(estimate_threshold(&ds, 50, &[2], &mut Rng::new(42)).unwrap());
    let segments: Vec<&[f64]> = ds.rows().flat_map(|r| r.windows(2)).collect();
    let all: Vec<f64> = segments
        .iter()
        .flat_map(|a| {
            segments
                .iter()
                .map(move |b| ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)) / 2.0)
        })
        .collect();
    assert!(all.contains(&eps));
    let p5 = radius(exact_threshold(&ds, 5, &[2]).unwrap());
    let p95 = radius(exact_threshold(&ds, 95, &[2]).unwrap());
    assert!(p5 <= eps && eps <= p95);
}
