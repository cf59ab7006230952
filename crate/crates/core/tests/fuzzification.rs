use feb_core::fuzzify::{
    cmeans_partition, fcm_objective, fuzzify_kb, fuzzy_cmeans, linguistic_tags, uniform_partition,
    FuzzificationConfig, FuzzificationMethod,
};
use feb_core::io::parse_kb;
use feb_core::kb::Literal;
use proptest::prelude::*;

fn membership_sum(parts: &[feb_core::fuzzify::FuzzyDatatype], x: f64) -> f64 {
    parts.iter().map(|d| d.predicate.shape.membership(Literal::Real(x)).unwrap()).sum()
}

fn spread_values() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1000.0f64..1000.0, 2..60).prop_filter("needs a nonzero range", |v| {
        let min = v.iter().copied().fold(f64::INFINITY, f64::min);
        let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        max - min > 1e-3
    })
}

#[test]
fn tags_follow_partition_count() {
    assert_eq!(linguistic_tags(3), ["L", "F", "H"]);
    assert_eq!(linguistic_tags(5).len(), 5);
    assert_eq!(linguistic_tags(7).first().map(String::as_str), Some("VVL"));
}

#[test]
fn bimodal_cmeans_finds_both_modes() {
    let values: Vec<f64> = std::iter::repeat(0.0).take(50).chain(std::iter::repeat(10.0).take(50)).collect();
    let run = fuzzy_cmeans(&values, 2, 2.0, 1e-6, 100).unwrap();
    assert!((run.centroids[0] - 0.0).abs() < 1e-3);
    assert!((run.centroids[1] - 10.0).abs() < 1e-3);
    assert!(run.iterations <= 100);
}

#[test]
fn fuzzify_kb_labels_datatypes_by_property() {
    let kb = parse_kb(
        "dataprop price real functional\nvalue a price 10\nvalue b price 20\nvalue c price 30\nvalue d price 45\n",
    )
    .unwrap();
    let cfg = FuzzificationConfig { partitions: 3, ..Default::default() };
    let out = fuzzify_kb(&kb, &cfg).unwrap();
    let labels: Vec<&str> = out["price"].iter().map(|d| d.predicate.label.as_str()).collect();
    assert_eq!(labels, ["price_L", "price_F", "price_H"]);
    let cm = fuzzify_kb(&kb, &FuzzificationConfig { method: FuzzificationMethod::CMeans, ..cfg }).unwrap();
    assert_eq!(cm["price"].len(), 3);
    assert!(fuzzify_kb(&kb, &FuzzificationConfig { partitions: 4, ..Default::default() }).is_err());
}

proptest! {
    #[test]
    fn uniform_partitions_sum_to_one(values in spread_values(), k in prop::sample::select(vec![3usize, 5, 7])) {
        let parts = uniform_partition("s", &values, k).unwrap();
        prop_assert_eq!(parts.len(), k);
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        for j in 0..=200 {
            let x = min + (max - min) * j as f64 / 200.0;
            prop_assert!((membership_sum(&parts, x) - 1.0).abs() < 1e-9, "x = {}", x);
        }
    }

    #[test]
    fn cmeans_partitions_sum_to_one(values in spread_values(), k in prop::sample::select(vec![3usize, 5])) {
        let mut distinct = values.clone();
        distinct.sort_by(f64::total_cmp);
        distinct.dedup();
        prop_assume!(distinct.len() >= k);
        let parts = cmeans_partition("s", &values, k, &FuzzificationConfig::default()).unwrap();
        let lo = distinct[0];
        let hi = distinct[distinct.len() - 1];
        for j in 0..=100 {
            let x = lo + (hi - lo) * j as f64 / 100.0;
            prop_assert!((membership_sum(&parts, x) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn fcm_memberships_and_objective(values in spread_values(), k in 2usize..5) {
        let mut distinct = values.clone();
        distinct.sort_by(f64::total_cmp);
        distinct.dedup();
        prop_assume!(distinct.len() >= k);
        let run = fuzzy_cmeans(&values, k, 2.0, 1e-4, 100).unwrap();
        for row in &run.memberships {
            prop_assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            prop_assert!(row.iter().all(|u| (0.0..=1.0 + 1e-12).contains(u)));
        }
        prop_assert!(run.centroids.windows(2).all(|w| w[0] < w[1]));
        let scale = run.objective.first().copied().unwrap_or(0.0).abs().max(1.0);
        for w in run.objective.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-9 * scale, "objective rose: {:?}", run.objective);
        }
        let recomputed = fcm_objective(&values, &run.centroids, &run.memberships, 2.0);
        prop_assert!(recomputed <= run.objective.last().unwrap() + 1e-9 * scale);
    }
}
