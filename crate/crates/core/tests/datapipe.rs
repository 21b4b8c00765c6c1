
use coolchan::datapipe::{
    absolute_error_stats, correlation_of, evaluate, heatmap_grid, kde_importance_weights, load_dataset,
    percentile_sorted, random_search, save_dataset, split, split_indices, Dataset, FeatureSpec, Field, LabelMode,
    Provenance, SampleRecord, SearchSpace,
};
use coolchan::neural::{HyperParams, Mlp, ScalerParams};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn record(rng: &mut ChaCha8Rng) -> SampleRecord {
    let q = rng.random_range(9e6..80e6);
    let t_b = rng.random_range(100.0..600.0);
    SampleRecord {
        z: rng.random_range(0.0..250.0),
        t_b,
        h_b: rng.random_range(1e5..2e6),
        p_b: rng.random_range(40e5..300e5),
        v_b: rng.random_range(5.0..200.0),
        g: rng.random_range(3000.0..35000.0),
        q,
        r: rng.random_range(0.2..15.0),
        a: rng.random_range(1.0..10.0),
        ar: rng.random_range(1.0..9.2),
        d: rng.random_range(0.8..1.2),
        t_w: Some(t_b + q * 1e-5 + rng.random_range(0.0..50.0)),
    }
}

fn dataset(n: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let recs: Vec<SampleRecord> = (0..n).map(|_| record(&mut rng)).collect();
    Dataset::from_records(Provenance::External, &recs).unwrap()
}

/// Textbook two-pass Pearson coefficient.
fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum::<f64>() / n;
    let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum::<f64>() / n;
    let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum::<f64>() / n;
    cov / (va.sqrt() * vb.sqrt())
}

fn identity_scaler(spec: &FeatureSpec) -> ScalerParams {
    ScalerParams::new(spec.names().to_vec(), vec![0.0; spec.len()], vec![1.0; spec.len()]).unwrap()
}

#[test]
fn split_partitions_every_row_once() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for seed in 0..100 {
        let n = rng.random_range(2..500);
        let frac = rng.random_range(0.05..0.95);
        let (t, v) = split_indices(n, frac, seed).unwrap();
        assert!(!t.is_empty() && !v.is_empty());
        let mut all: Vec<usize> = t.iter().chain(&v).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..n).collect::<Vec<_>>());
        assert_eq!(split_indices(n, frac, seed).unwrap(), (t, v));
    }
    assert!(split_indices(1, 0.5, 0).is_err());
    assert!(split_indices(10, 1.0, 0).is_err());
}

#[test]
fn split_datasets_keep_their_rows() {
    let ds = dataset(50, 1);
    let (t, v) = split(&ds, 0.9, 3).unwrap();
    assert_eq!(t.len() + v.len(), 50);
    let mut labels: Vec<f64> = t.labels().unwrap().iter().chain(v.labels().unwrap()).copied().collect();
    let mut orig = ds.labels().unwrap().to_vec();
    labels.sort_by(f64::total_cmp);
    orig.sort_by(f64::total_cmp);
    assert_eq!(labels, orig);
}

#[test]
fn percentiles_match_linear_interpolation() {
    let v: Vec<f64> = (0..=100).map(f64::from).collect();
    for p in [1.0, 25.0, 50.0, 75.0, 99.0] {
        assert_eq!(percentile_sorted(&v, p), p);
    }
    let w = [1.0, 2.0, 4.0, 8.0];
    // rank 0.75 between 1 and 2
    assert!((percentile_sorted(&w, 25.0) - 1.75).abs() < 1e-15);
}

#[test]
fn two_cluster_importance_weights_favour_the_target_cluster() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut train = Vec::new();
    for _ in 0..200 {
        train.push(rng.random_range(-0.5..0.5));
    }
    for _ in 0..200 {
        train.push(10.0 + rng.random_range(-0.5..0.5));
    }
    let target: Vec<f64> = (0..100).map(|_| 10.0 + rng.random_range(-0.5..0.5)).collect();
    let w = kde_importance_weights(&train, &target, 1, None).unwrap();
    let mean = w.iter().sum::<f64>() / w.len() as f64;
    assert!((mean - 1.0).abs() < 1e-12);
    let near = w[200..].iter().sum::<f64>() / 200.0;
    let far = w[..200].iter().sum::<f64>() / 200.0;
    assert!(near > 5.0 * far, "near {near} far {far}");
}

#[test]
fn weighted_error_stats_by_hand() {
    let (mae, std) = absolute_error_stats(&[1.0, 2.0], &[1.0, 6.0], Some(&[3.0, 1.0])).unwrap();
    assert!((mae - 1.0).abs() < 1e-15);
    assert!((std - 3f64.sqrt()).abs() < 1e-15);
    assert!(absolute_error_stats(&[1.0], &[1.0, 2.0], None).is_err());
}

#[test]
fn perfect_predictor_scores_zero() {
    // a network whose output is exactly t_b: single hidden unit passing it through
    let ds = dataset(40, 3);
    let spec = FeatureSpec::from_fields(&[Field::Tb]).unwrap();
    let model = Mlp::from_parts(vec![1, 1, 1], vec![vec![1.0], vec![1.0]], vec![vec![0.0], vec![0.0]]).unwrap();
    let recs: Vec<SampleRecord> = ds.records().map(|r| SampleRecord { t_w: Some(r.t_b), ..r }).collect();
    let exact = Dataset::from_records(Provenance::External, &recs).unwrap();
    let e = evaluate(&model, &identity_scaler(&spec), &exact).unwrap();
    assert_eq!(e.mae, 0.0);
    assert_eq!(e.mape, 0.0);
    assert_eq!(e.n, 40);
}

#[test]
fn dataset_csv_round_trip() {
    let ds = dataset(30, 4);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.csv");
    save_dataset(&ds, &path).unwrap();
    let back = load_dataset(&path, LabelMode::Training).unwrap();
    assert_eq!(back.to_csv(), ds.to_csv());
    for f in Field::ALL {
        assert_eq!(back.column(f), ds.column(f));
    }
}

#[test]
fn unlabelled_file_fails_in_training_mode() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let recs: Vec<SampleRecord> = (0..5).map(|_| SampleRecord { t_w: None, ..record(&mut rng) }).collect();
    let ds = Dataset::from_records(Provenance::External, &recs).unwrap();
    let text = ds.to_csv();
    assert!(Dataset::from_csv(&text, LabelMode::Training).is_err());
    assert_eq!(Dataset::from_csv(&text, LabelMode::Inference).unwrap().len(), 5);
}

#[test]
fn search_handles_single_and_degenerate_spaces() {
    let train = dataset(120, 6);
    let val = dataset(30, 7);
    let spec = FeatureSpec::canonical();
    let base = HyperParams { epochs: 3, ..Default::default() };
    let point = SearchSpace {
        hidden_layers: (1, 1),
        neurons: (8, 8),
        alpha_l2: (1e-4, 1e-4),
        minibatch: (32, 32),
        learning_rate: (1e-3, 1e-3),
        epochs: 3,
    };
    let one = random_search(&point, &base, 1, &train, &val, &spec, 0, 1).unwrap();
    assert_eq!(one.len(), 1);
    let five = random_search(&point, &base, 5, &train, &val, &spec, 0, 2).unwrap();
    assert!(five.iter().all(|t| t.val_mae == five[0].val_mae && t.hp == five[0].hp));
    assert_eq!(five[0].val_mae, one[0].val_mae);

    let wide = SearchSpace { epochs: 3, neurons: (4, 32), ..SearchSpace::default() };
    let trials = random_search(&wide, &base, 4, &train, &val, &spec, 9, 2).unwrap();
    assert_eq!(trials.len(), 4);
    let ok: Vec<f64> = trials.iter().filter(|t| t.error.is_none()).map(|t| t.val_mae).collect();
    assert!(ok.windows(2).all(|w| w[0] <= w[1]), "trials not sorted best first");
    let again = random_search(&wide, &base, 4, &train, &val, &spec, 9, 1).unwrap();
    assert_eq!(
        trials.iter().map(|t| t.val_mae.to_bits()).collect::<Vec<_>>(),
        again.iter().map(|t| t.val_mae.to_bits()).collect::<Vec<_>>()
    );
}

#[test]
fn heatmap_corners_equal_direct_forward_calls() {
    let spec = FeatureSpec::canonical();
    let d = spec.len();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let model = Mlp::init_uniform(&[d, 6, 1], &mut rng).unwrap();
    let mean: Vec<f64> = (0..d).map(|_| rng.random_range(-5.0..5.0)).collect();
    let std: Vec<f64> = (0..d).map(|_| rng.random_range(0.5..3.0)).collect();
    let scaler = ScalerParams::new(spec.names().to_vec(), mean.clone(), std).unwrap();
    let (xf, yf) = (spec.names()[0].clone(), spec.names()[3].clone());
    let hm = heatmap_grid(&model, &scaler, &xf, &yf, (-1.0, 2.0), (10.0, 30.0), 3, &mean).unwrap();
    for (ix, x) in [(0, -1.0), (2, 2.0)] {
        for (iy, y) in [(0, 10.0), (2, 30.0)] {
            let mut raw = mean.clone();
            raw[0] = x;
            raw[3] = y;
            let direct = model.forward(&scaler.transform(&raw).unwrap()).unwrap();
            assert_eq!(hm.at(ix, iy), direct);
        }
    }
    assert!(heatmap_grid(&model, &scaler, &xf, &xf, (0.0, 1.0), (0.0, 1.0), 3, &mean).is_err());
    assert!(heatmap_grid(&model, &scaler, &xf, &yf, (1.0, 1.0), (0.0, 1.0), 3, &mean).is_err());
    assert!(heatmap_grid(&model, &scaler, &xf, &yf, (0.0, 1.0), (0.0, 1.0), 1, &mean).is_err());
}

#[test]
fn constant_model_gives_a_uniform_heatmap() {
    let spec = FeatureSpec::canonical();
    let d = spec.len();
    let mut model = Mlp::zeros(&[d, 3, 1]).unwrap();
    model.biases_mut()[1][0] = 777.0;
    let scaler = identity_scaler(&spec);
    let hm = heatmap_grid(&model, &scaler, "h_b", "p_b", (1e5, 2e6), (40e5, 300e5), 7, &vec![1.0; d]).unwrap();
    assert_eq!(hm.values.len(), 49);
    assert!(hm.values.iter().all(|v| *v == 777.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn correlation_matches_the_two_pass_definition(seed in any::<u64>(), n in 2usize..1000, k in 2usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cols: Vec<Vec<f64>> = (0..k)
            .map(|j| {
                let shift = rng.random_range(-1e3..1e3);
                (0..n).map(|_| shift + rng.random_range(-1.0..1.0) * (j + 1) as f64).collect()
            })
            .collect();
        let names: Vec<String> = (0..k).map(|j| format!("c{j}")).collect();
        let input: Vec<(&str, &[f64])> = names.iter().map(|s| s.as_str()).zip(cols.iter().map(|c| c.as_slice())).collect();
        let m = correlation_of(&input).unwrap();
        for i in 0..k {
            prop_assert_eq!(m[i][i], 1.0);
            for j in 0..k {
                prop_assert_eq!(m[i][j], m[j][i]);
                if i != j {
                    prop_assert!((m[i][j] - pearson(&cols[i], &cols[j])).abs() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn evaluation_ignores_row_order(seed in any::<u64>(), n in 2usize..60) {
        let ds = dataset(n, seed);
        let spec = FeatureSpec::canonical();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 3);
        let model = Mlp::init_uniform(&[spec.len(), 5, 1], &mut rng).unwrap();
        let scaler = ScalerParams::fit(&ds.features(&spec), spec.names()).unwrap();
        let mut order: Vec<usize> = (0..n).collect();
        order.reverse();
        order.rotate_left(seed as usize % n);
        let a = evaluate(&model, &scaler, &ds).unwrap();
        let b = evaluate(&model, &scaler, &ds.subset(&order)).unwrap();
        prop_assert!((a.mae - b.mae).abs() <= 1e-12 * a.mae.max(1.0));
        prop_assert!((a.std - b.std).abs() <= 1e-9 * a.std.max(1.0));
        prop_assert!((a.mape - b.mape).abs() <= 1e-12 * a.mape.max(1.0));
    }

    #[test]
    fn csv_round_trip_is_exact(seed in any::<u64>(), n in 1usize..40) {
        let ds = dataset(n, seed);
        let back = Dataset::from_csv(&ds.to_csv(), LabelMode::Training).unwrap();
        for f in Field::ALL {
            prop_assert_eq!(back.column(f), ds.column(f));
        }
    }
}
