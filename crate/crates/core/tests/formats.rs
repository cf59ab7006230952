mod common;

use std::collections::BTreeSet;

use feb_core::eval::{strip_target, train};
use feb_core::fuzzify::{FuzzificationConfig, FuzzificationMethod};
use feb_core::io::{
    convert_table, parse_examples, parse_hypothesis, parse_kb, serialize_examples, serialize_hypothesis,
    IoError,
};
use feb_core::kb::complete;
use feb_core::learn::{Algorithm, LearnParams, TrainingSet};
use proptest::prelude::*;

use common::learnable_toy;

#[test]
fn table_rows_become_individuals() {
    let t = convert_table("x,flag,label\n1.5,true,yes\n2,false,no\n?,true,yes\n").unwrap();
    assert_eq!(t.class_count(), 3);
    assert_eq!(t.classes["yes"], BTreeSet::from(["a1".to_string(), "a3".to_string()]));
    assert!(t.kb.data_properties().values().all(|d| d.functional));
    assert_eq!(t.kb.abox().iter().filter(|a| a.mentions("a3")).count(), 2);
}

#[test]
fn table_errors() {
    assert!(matches!(convert_table(""), Err(IoError::EmptyDataset)));
    assert!(matches!(convert_table("x,c\n1,a\nfoo,b\n"), Err(IoError::TypeInconsistency { .. })));
    assert!(convert_table("1,2,a\n3,b\n").is_err());
}

#[test]
fn kb_errors_carry_line_numbers() {
    match parse_kb("class A\nfrobnicate A\n") {
        Err(IoError::Syntax { line, .. }) => assert_eq!(line, 2),
        other => panic!("unexpected {other:?}"),
    }
    assert!(parse_kb("").unwrap().individuals().is_empty());
    assert!(parse_kb("class A\ninstance a B\n").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn hypothesis_text_round_trip_keeps_predictions(
        seed in any::<u64>(),
        foil in any::<bool>(),
        cmeans in any::<bool>(),
    ) {
        let (kb, pos, neg) = learnable_toy(seed);
        let e = TrainingSet::new(pos, neg).unwrap();
        let algorithm = if foil { Algorithm::Foil } else { Algorithm::Boost };
        let method = if cmeans { FuzzificationMethod::CMeans } else { FuzzificationMethod::Uniform };
        let fz = FuzzificationConfig { method, ..Default::default() };
        let params = LearnParams { theta: 0.64, ..Default::default() };
        let model = train(&kb, "T", &e, algorithm, &params, &fz).unwrap();
        let text = serialize_hypothesis(&model.hypothesis, &model.datatypes);
        let back = parse_hypothesis(&text).unwrap();
        prop_assert_eq!(serialize_hypothesis(&back.hypothesis, &back.datatypes), text);
        let cl = complete(&strip_target(&kb, "T"));
        for i in 0..cl.len() {
            prop_assert_eq!(model.hypothesis.predict_index(&cl, i), back.hypothesis.predict_index(&cl, i));
        }
    }

    #[test]
    fn example_files_round_trip(npos in 1usize..10, nneg in 0usize..10) {
        let e = TrainingSet::new(
            (0..npos).map(|i| format!("p{i}")).collect(),
            (0..nneg).map(|i| format!("n{i}")).collect(),
        )
        .unwrap();
        prop_assert_eq!(parse_examples(&serialize_examples(&e)).unwrap(), e);
    }
}
