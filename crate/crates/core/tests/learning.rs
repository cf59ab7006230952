mod common;

use std::collections::{BTreeMap, BTreeSet};

use feb_core::fuzzify::{fuzzify_kb, FuzzificationConfig};
use feb_core::kb::{complete, Assertion, Closure, Concept, DatatypePredicate, KnowledgeBase};
use feb_core::learn::{
    boost, boosting_round, foil_dl, learn, learn_one_axiom_traced, transform_t, weak_error, wfoildl, Algorithm,
    Hypothesis, LearnError, LearnParams, LearningTask, TrainingSet,
};
use feb_core::refine::RefinementContext;
use feb_core::Execution;
use proptest::prelude::*;
use rand::Rng;

use common::{boosting_oracle, learnable_toy, random_round, rng};

fn datatypes(kb: &KnowledgeBase) -> BTreeMap<String, Vec<DatatypePredicate>> {
    fuzzify_kb(kb, &FuzzificationConfig::default())
        .unwrap()
        .into_iter()
        .map(|(p, ds)| (p, ds.into_iter().map(|d| d.predicate).collect()))
        .collect()
}

fn context<'a>(kb: &KnowledgeBase, cl: &'a Closure) -> RefinementContext<'a> {
    let mut ctx = RefinementContext::new(kb, cl, datatypes(kb), 1, 3).unwrap();
    ctx.exclude_atom("T");
    ctx
}

fn examples(pos: &BTreeSet<String>, neg: &BTreeSet<String>) -> TrainingSet {
    TrainingSet::new(pos.clone(), neg.clone()).unwrap()
}

fn training_predictions(h: &Hypothesis, cl: &Closure, names: &[String]) -> Vec<f64> {
    names.iter().map(|a| h.predict_index(cl, cl.individual_index(a).unwrap())).collect()
}

#[test]
fn weak_error_sign_cases() {
    assert!((weak_error(&[0.4], &[-1.0], &[0.25], false) - 0.1).abs() < 1e-12);
    assert!((weak_error(&[-1.0], &[1.0], &[0.25], false) + 0.25).abs() < 1e-12);
    assert!((weak_error(&[-1.0], &[1.0], &[0.25], true) - 0.25).abs() < 1e-12);
    assert_eq!(weak_error(&[0.7], &[1.0], &[1.0], false), 0.0);
}

#[test]
fn four_instance_round() {
    let h: Vec<f64> = [1.0, 0.5, 0.0, 0.2].into_iter().map(transform_t).collect();
    let l = [1.0, 1.0, -1.0, -1.0];
    let r = boosting_round(&h, &l, &[0.25; 4]);
    assert_eq!(r.h_star, 1.0);
    assert!((r.mu - 0.575).abs() < 1e-12);
    assert!((r.alpha - 0.654_96).abs() < 1e-5);
    let raw: Vec<f64> = h.iter().zip(&l).map(|(h, l)| 0.25 * (1.0 - 0.575 * l * h) / (1.0 - 0.575 * 0.575)).collect();
    for (a, b) in r.weights.iter().zip(&raw) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn foil_rule_degree_is_its_confidence() {
    let mut kb = KnowledgeBase::new();
    kb.declare_concept("B").unwrap();
    kb.declare_concept("T").unwrap();
    let pos: BTreeSet<String> = ["p1", "p2", "p3", "p4"].map(String::from).into();
    let neg: BTreeSet<String> = ["n1", "n2", "n3", "n4"].map(String::from).into();
    for a in pos.iter().chain(["n1".to_string()].iter()) {
        kb.add_assertion(Assertion::Concept { individual: a.clone(), concept: "B".into() }).unwrap();
    }
    for a in &neg {
        kb.declare_individual(a.clone());
    }
    let cl = complete(&kb);
    let ctx = context(&kb, &cl);
    let task = LearningTask::new(&cl, &ctx, "T", &examples(&pos, &neg)).unwrap();
    let params = LearnParams { theta: 0.5, ..Default::default() };
    let Hypothesis::Foil(rules) = foil_dl(&task, &params).unwrap() else { panic!("expected rules") };
    assert_eq!(rules.rules.len(), 1);
    assert_eq!(rules.rules[0].body, Concept::atom("B"));
    assert!((rules.rules[0].degree - 0.8).abs() < 1e-12);
}

#[test]
fn entailed_target_is_rejected() {
    let mut kb = KnowledgeBase::new();
    kb.declare_concept("T").unwrap();
    kb.add_assertion(Assertion::Concept { individual: "a".into(), concept: "T".into() }).unwrap();
    kb.declare_individual("b");
    let cl = complete(&kb);
    let ctx = context(&kb, &cl);
    let e = examples(&["a".to_string()].into(), &["b".to_string()].into());
    assert!(matches!(
        LearningTask::new(&cl, &ctx, "T", &e),
        Err(LearnError::TargetAlreadyKnown { .. })
    ));
}

#[test]
fn parameter_bounds_are_checked() {
    assert!(LearnParams { theta: 1.5, ..Default::default() }.validate().is_err());
    assert!(LearnParams { eta: -0.1, ..Default::default() }.validate().is_err());
    assert!(LearnParams { iterations: 0, ..Default::default() }.validate().is_err());
    assert!(LearnParams::default().validate().is_ok());
    assert!(TrainingSet::new(BTreeSet::new(), ["a".to_string()].into()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn round_matches_oracle(seed in any::<u64>()) {
        let (h, l, w) = random_round(&mut rng(seed), 8);
        let got = boosting_round(&h, &l, &w);
        let want = boosting_oracle(&h, &l, &w);
        prop_assert!((got.h_star - want.h_star).abs() < 1e-12);
        prop_assert!((got.mu - want.mu).abs() < 1e-12);
        prop_assert!((got.alpha - want.alpha).abs() < 1e-12);
        for (a, b) in got.weights.iter().zip(&want.weights) {
            prop_assert!((a - b).abs() < 1e-12);
        }
        prop_assert!(got.weights.iter().all(|x| *x >= 0.0));
        prop_assert!((got.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unclamped_update_is_self_normalising(seed in any::<u64>()) {
        let (h, l, w) = random_round(&mut rng(seed), 8);
        let r = boosting_round(&h, &l, &w);
        prop_assume!(r.mu == r.mu_raw);
        let raw: f64 = h
            .iter()
            .zip(&l)
            .zip(&w)
            .map(|((h, l), w)| w * (1.0 - r.mu * l * h / r.h_star) / (1.0 - r.mu * r.mu))
            .sum();
        prop_assert!((raw - 1.0).abs() < 1e-9);
    }

    #[test]
    fn accepted_steps_raise_confidence(seed in any::<u64>(), theta in 0.3f64..1.0) {
        let (kb, pos, neg) = learnable_toy(seed);
        let cl = complete(&kb);
        let ctx = context(&kb, &cl);
        let task = LearningTask::new(&cl, &ctx, "T", &examples(&pos, &neg)).unwrap();
        let mut r = rng(seed ^ 0x5eed);
        let raw: Vec<f64> = (0..task.len()).map(|_| r.gen_range(0.05..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let w: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let params = LearnParams { theta, ..Default::default() };
        let (_, steps) = learn_one_axiom_traced(&task, &w, task.labels(), &params);
        for s in &steps {
            prop_assert!(s.gain > 0.0);
            prop_assert!(s.cf_after > s.cf_before, "{:?}", s);
        }
    }

    #[test]
    fn zero_eta_never_covers_training_non_positives(seed in any::<u64>(), foil in any::<bool>()) {
        let (kb, pos, neg) = learnable_toy(seed);
        let cl = complete(&kb);
        let ctx = context(&kb, &cl);
        let task = LearningTask::new(&cl, &ctx, "T", &examples(&pos, &neg)).unwrap();
        let params = LearnParams { eta: 0.0, theta: 0.9, ..Default::default() };
        let algorithm = if foil { Algorithm::Foil } else { Algorithm::Boost };
        let h = learn(&task, algorithm, &params).unwrap();
        let preds = training_predictions(&h, &cl, task.names());
        for (p, l) in preds.iter().zip(task.labels()) {
            if !l {
                prop_assert_eq!(*p, 0.0);
            }
        }
    }

    #[test]
    fn covering_bodies_meet_theta(seed in any::<u64>(), theta in 0.3f64..1.0) {
        let (kb, pos, neg) = learnable_toy(seed);
        let cl = complete(&kb);
        let ctx = context(&kb, &cl);
        let task = LearningTask::new(&cl, &ctx, "T", &examples(&pos, &neg)).unwrap();
        let params = LearnParams { theta, ..Default::default() };
        for body in wfoildl(&task, &task.uniform_weights(), &params) {
            let d = task.degrees(&body);
            let (num, den) = d.iter().zip(task.labels()).fold((0.0, 0.0), |(n, s), (x, l)| {
                (if *l { n + x } else { n }, s + x)
            });
            prop_assert!(den > 0.0 && num / den >= theta - 1e-12, "{} has cf {}", body, num / den);
        }
    }

    #[test]
    fn foil_rules_cover_new_positives(seed in any::<u64>(), theta in 0.3f64..1.0) {
        let (kb, pos, neg) = learnable_toy(seed);
        let cl = complete(&kb);
        let ctx = context(&kb, &cl);
        let task = LearningTask::new(&cl, &ctx, "T", &examples(&pos, &neg)).unwrap();
        let params = LearnParams { theta, ..Default::default() };
        let Ok(Hypothesis::Foil(rules)) = foil_dl(&task, &params) else { return Ok(()) };
        let mut covered = BTreeSet::new();
        for rule in &rules.rules {
            prop_assert!(rule.degree > 0.0 && rule.degree <= 1.0);
            let before = covered.len();
            for (k, d) in task.degrees(&rule.body).iter().enumerate() {
                if task.labels()[k] && *d > 0.0 {
                    covered.insert(k);
                }
            }
            prop_assert!(covered.len() > before);
        }
    }

    #[test]
    fn execution_mode_does_not_change_the_ensemble(seed in any::<u64>()) {
        let (kb, pos, neg) = learnable_toy(seed);
        let cl = complete(&kb);
        let ctx = context(&kb, &cl);
        let task = LearningTask::new(&cl, &ctx, "T", &examples(&pos, &neg)).unwrap();
        let seq = boost(&task, &LearnParams { execution: Execution::Sequential, ..Default::default() });
        let par = boost(&task, &LearnParams { execution: Execution::Parallel, ..Default::default() });
        prop_assert_eq!(seq, par);
    }
}
