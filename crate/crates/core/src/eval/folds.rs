use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::EvalError;
use crate::kb::{Assertion, KnowledgeBase};
use crate::learn::TrainingSet;

/// Splits `examples` into `k` test folds with roughly equal shares of
/// positives. `k = 1` yields a single fold holding every example.
pub fn stratified_kfold(examples: &TrainingSet, k: usize, seed: u64) -> Result<Vec<TrainingSet>, EvalError> {
    if k == 0 {
        return Err(EvalError::InvalidGrid("fold count must be at least 1".into()));
    }
    if k == 1 {
        return Ok(vec![examples.clone()]);
    }
    if examples.positives.len() < k {
        return Err(EvalError::TooFewPositives { folds: k, positives: examples.positives.len() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pos: Vec<&String> = examples.positives.iter().collect();
    let mut neg: Vec<&String> = examples.non_positives.iter().collect();
    pos.shuffle(&mut rng);
    neg.shuffle(&mut rng);
    let mut folds = vec![TrainingSet::default(); k];
    for (i, a) in pos.iter().enumerate() {
        folds[i % k].positives.insert((*a).clone());
    }
    let offset = pos.len();
    for (j, a) in neg.iter().enumerate() {
        folds[(offset + j) % k].non_positives.insert((*a).clone());
    }
    Ok(folds)
}

/// Training KB for a fold: assertions about test individuals are dropped
/// along with the individuals, and no individual keeps a `target` assertion.
pub fn strip_for_fold(kb: &KnowledgeBase, target: &str, test: &BTreeSet<String>) -> KnowledgeBase {
    kb.without_individuals(test).retain_assertions(|a| !is_target_assertion(a, target))
}

/// The KB with only the `target` assertions removed; used at prediction time.
pub fn strip_target(kb: &KnowledgeBase, target: &str) -> KnowledgeBase {
    kb.retain_assertions(|a| !is_target_assertion(a, target))
}

fn is_target_assertion(a: &Assertion, target: &str) -> bool {
    matches!(a, Assertion::Concept { concept, .. } if concept == target)
}
