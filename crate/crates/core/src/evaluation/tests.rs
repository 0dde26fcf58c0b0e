use std::collections::HashMap;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;

fn wild_manifest(mos: &[f64]) -> DatasetManifest {
    DatasetManifest::new(
        mos.iter()
            .enumerate()
            .map(|(i, &m)| ManifestEntry {
                id: format!("v{i:03}"),
                video: PathBuf::from(format!("v{i:03}.y4m")),
                audio: PathBuf::new(),
                group: format!("v{i:03}"),
                mos: m,
            })
            .collect(),
    )
    .unwrap()
}

fn uniform_mos(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random_range(0.0..100.0)).collect()
}

#[test]
fn label_leak_gives_near_perfect_ranking() {
    let mos = uniform_mos(100, 1);
    let manifest = wild_manifest(&mos);
    let features: HashMap<String, Vec<f64>> = manifest.entries().iter().map(|e| (e.id.clone(), vec![e.mos])).collect();
    let config = ProtocolConfig {
        repeats: 20,
        ..ProtocolConfig::default()
    };
    let report = run_protocol(&manifest, &features, &config).unwrap();
    assert_eq!(report.aggregate.successes, 20);
    assert!(report
        .per_repeat
        .iter()
        .all(|r| (r.train_size, r.test_size) == (80, 20)));
    let s = report.aggregate.mean_srcc.unwrap();
    assert!(s >= 0.99, "mean SRCC {s}");
}

#[test]
fn noise_features_do_not_predict() {
    let mos = uniform_mos(200, 2);
    let manifest = wild_manifest(&mos);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let features: HashMap<String, Vec<f64>> = manifest
        .entries()
        .iter()
        .map(|e| (e.id.clone(), (0..4).map(|_| rng.random_range(-1.0..1.0)).collect()))
        .collect();
    let report = run_protocol(&manifest, &features, &ProtocolConfig::default()).unwrap();
    assert_eq!(report.repeats, 100);
    let abs: Vec<f64> = report.per_repeat.iter().filter_map(|r| r.srcc).map(f64::abs).collect();
    let mean_abs = crate::stats::mean(&abs);
    assert!(mean_abs <= 0.25, "mean |SRCC| {mean_abs}");
}

#[test]
fn reports_are_deterministic_and_round_trip() {
    let mos = uniform_mos(30, 4);
    let manifest = wild_manifest(&mos);
    let features: HashMap<String, Vec<f64>> = manifest
        .entries()
        .iter()
        .map(|e| (e.id.clone(), vec![e.mos.sqrt(), (e.mos * 0.1).sin()]))
        .collect();
    let config = ProtocolConfig {
        repeats: 5,
        master_seed: 11,
        ..ProtocolConfig::default()
    };
    let a = run_protocol(&manifest, &features, &config).unwrap();
    let b = run_protocol(&manifest, &features, &config).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.feature_dim, 2);
    let json = a.to_json().unwrap();
    assert_eq!(EvalReport::from_json(&json).unwrap(), a);
    assert_eq!(Aggregate::from_repeats(&a.per_repeat), a.aggregate);
    for r in &a.per_repeat {
        assert_eq!(r.seed, derive_seed(11, r.repeat as u64));
    }
}

#[test]
fn failed_repeats_are_recorded() {
    // Constant features give constant predictions, so SRCC is undefined.
    let mos = uniform_mos(20, 5);
    let manifest = wild_manifest(&mos);
    let features: HashMap<String, Vec<f64>> = manifest.entries().iter().map(|e| (e.id.clone(), vec![1.0])).collect();
    let config = ProtocolConfig {
        repeats: 3,
        ..ProtocolConfig::default()
    };
    let report = run_protocol(&manifest, &features, &config).unwrap();
    assert_eq!((report.aggregate.successes, report.aggregate.failures), (0, 3));
    assert_eq!(report.aggregate.mean_srcc, None);
    assert!(report.per_repeat.iter().all(|r| r.error.is_some() && r.srcc.is_none()));
    assert_eq!(EvalReport::from_json(&report.to_json().unwrap()).unwrap(), report);
}

#[test]
fn input_errors() {
    let manifest = wild_manifest(&uniform_mos(10, 6));
    let mut features: HashMap<String, Vec<f64>> =
        manifest.entries().iter().map(|e| (e.id.clone(), vec![e.mos])).collect();
    let config = ProtocolConfig::default();
    features.get_mut("v003").unwrap().push(1.0);
    assert!(run_protocol(&manifest, &features, &config).is_err());
    features.remove("v003");
    assert!(run_protocol(&manifest, &features, &config).is_err());

    let one_group = DatasetManifest::new(
        manifest
            .entries()
            .iter()
            .map(|e| ManifestEntry {
                group: "ref".into(),
                ..e.clone()
            })
            .collect(),
    )
    .unwrap();
    let features: HashMap<String, Vec<f64>> = one_group
        .entries()
        .iter()
        .map(|e| (e.id.clone(), vec![e.mos]))
        .collect();
    assert!(run_protocol(&one_group, &features, &config).is_err());
    let bad = EvalReport::from_json(
        &run_protocol(
            &manifest,
            &features,
            &ProtocolConfig {
                repeats: 1,
                ..config.clone()
            },
        )
        .unwrap()
        .to_json()
        .unwrap()
        .replace("\"version\": 1", "\"version\": 9"),
    );
    assert!(bad.is_err());
}
