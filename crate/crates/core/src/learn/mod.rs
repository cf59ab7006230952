//! Rule induction: single-axiom search, the sequential covering weak
//! learner, real-valued boosting and the FOIL-style baseline.

mod boost;
mod foil;
mod hypothesis;
mod search;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::kb::{Closure, Concept, KbError};
use crate::refine::RefinementContext;
use crate::Execution;

pub use boost::{boost, boosting_round, disagreement_delta, transform_t, weak_error, RoundStats};
pub use foil::foil_dl;
pub use hypothesis::{fresh_name, BoostEnsemble, FoilRule, FoilRules, Hypothesis, WeakLearner};
pub use search::{learn_one_axiom, learn_one_axiom_traced, wfoildl, SearchStep};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LearnError {
    #[error("invalid learning parameters: {0}")]
    InvalidParams(String),
    #[error("invalid training set: {0}")]
    InvalidTrainingSet(String),
    #[error("the knowledge base already entails `{individual} : {target}`")]
    TargetAlreadyKnown { individual: String, target: String },
    #[error("learning failed: {0}")]
    LearningFailed(String),
    #[error(transparent)]
    Kb(#[from] KbError),
}

/// Which learner builds the hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Algorithm {
    #[default]
    Boost,
    Foil,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Boost => "boost",
            Algorithm::Foil => "foil",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = LearnError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "boost" => Ok(Algorithm::Boost),
            "foil" => Ok(Algorithm::Foil),
            other => Err(LearnError::InvalidParams(format!("unknown algorithm `{other}`"))),
        }
    }
}

/// Positive and non-positive examples of the target.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TrainingSet {
    pub positives: BTreeSet<String>,
    pub non_positives: BTreeSet<String>,
}

impl TrainingSet {
    pub fn new(positives: BTreeSet<String>, non_positives: BTreeSet<String>) -> Result<Self, LearnError> {
        if positives.is_empty() {
            return Err(LearnError::InvalidTrainingSet("no positive examples".into()));
        }
        if let Some(both) = positives.intersection(&non_positives).next() {
            return Err(LearnError::InvalidTrainingSet(format!("`{both}` is both positive and non-positive")));
        }
        Ok(TrainingSet { positives, non_positives })
    }

    /// Positives are the entailed instances of `target`; every other
    /// individual is a non-positive.
    pub fn from_closure(closure: &Closure, target: &str) -> Result<Self, LearnError> {
        let mut pos = BTreeSet::new();
        let mut neg = BTreeSet::new();
        for (i, name) in closure.individuals().iter().enumerate() {
            if closure.has_atom(i, target) {
                pos.insert(name.clone());
            } else {
                neg.insert(name.clone());
            }
        }
        TrainingSet::new(pos, neg)
    }

    pub fn len(&self) -> usize {
        self.positives.len() + self.non_positives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, individual: &str) -> bool {
        self.positives.contains(individual) || self.non_positives.contains(individual)
    }

    /// `(examples outside held_out, examples inside held_out)`.
    pub fn split(&self, held_out: &BTreeSet<String>) -> (TrainingSet, TrainingSet) {
        let part = |inside: bool| TrainingSet {
            positives: self.positives.iter().filter(|a| held_out.contains(*a) == inside).cloned().collect(),
            non_positives: self.non_positives.iter().filter(|a| held_out.contains(*a) == inside).cloned().collect(),
        };
        (part(false), part(true))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LearnParams {
    /// Confidence threshold θ.
    pub theta: f64,
    /// Largest tolerated fraction of covered non-positives η.
    pub eta: f64,
    /// Boosting rounds.
    pub iterations: usize,
    pub max_depth: usize,
    pub max_conjuncts: usize,
    /// Size of the backtracking stack; 0 disables backtracking.
    pub backtrack_k: usize,
    /// Use `|h|` instead of the signed `h` in the weak-learner error.
    pub error_magnitude: bool,
    pub execution: Execution,
}

impl Default for LearnParams {
    fn default() -> Self {
        LearnParams {
            theta: 0.94,
            eta: 1.0,
            iterations: 10,
            max_depth: 1,
            max_conjuncts: 5,
            backtrack_k: 0,
            error_magnitude: false,
            execution: Execution::default(),
        }
    }
}

impl LearnParams {
    pub fn validate(&self) -> Result<(), LearnError> {
        let bad = |m: String| Err(LearnError::InvalidParams(m));
        if !(0.0..=1.0).contains(&self.theta) {
            return bad(format!("theta must be in [0, 1], got {}", self.theta));
        }
        if !(0.0..=1.0).contains(&self.eta) {
            return bad(format!("eta must be in [0, 1], got {}", self.eta));
        }
        if self.iterations == 0 {
            return bad("iterations must be at least 1".into());
        }
        if self.max_depth == 0 || self.max_conjuncts == 0 {
            return bad("depth and conjunct bounds must be at least 1".into());
        }
        Ok(())
    }
}

/// A learning problem over a fixed closure: the example individuals `I`,
/// their labels and the refinement vocabulary.
pub struct LearningTask<'a> {
    pub closure: &'a Closure,
    pub ctx: &'a RefinementContext<'a>,
    pub target: String,
    instances: Vec<usize>,
    names: Vec<String>,
    labels: Vec<bool>,
    /// Degree vectors of the single-conjunct refinements of ⊤.
    cache: HashMap<Concept, Vec<f64>>,
}

impl<'a> LearningTask<'a> {
    pub fn new(
        closure: &'a Closure,
        ctx: &'a RefinementContext<'a>,
        target: &str,
        examples: &TrainingSet,
    ) -> Result<Self, LearnError> {
        if examples.positives.is_empty() {
            return Err(LearnError::InvalidTrainingSet("no positive examples".into()));
        }
        let mut all: Vec<(&String, bool)> = examples
            .positives
            .iter()
            .map(|a| (a, true))
            .chain(examples.non_positives.iter().map(|a| (a, false)))
            .collect();
        all.sort();
        let mut instances = Vec::with_capacity(all.len());
        for (name, _) in &all {
            let i = closure
                .individual_index(name)
                .ok_or_else(|| KbError::UnknownIndividual(name.to_string()))?;
            if closure.has_atom(i, target) {
                return Err(LearnError::TargetAlreadyKnown {
                    individual: name.to_string(),
                    target: target.to_string(),
                });
            }
            instances.push(i);
        }
        let cache = ctx
            .top_refinements()
            .iter()
            .map(|c| (c.clone(), instances.iter().map(|&i| closure.degree(i, c)).collect()))
            .collect();
        Ok(LearningTask {
            closure,
            ctx,
            target: target.to_string(),
            instances,
            names: all.iter().map(|(n, _)| n.to_string()).collect(),
            labels: all.iter().map(|(_, l)| *l).collect(),
            cache,
        })
    }

    /// Example individuals in the order used by weight vectors.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn labels(&self) -> &[bool] {
        &self.labels
    }

    /// Labels as `±1`.
    pub fn signed_labels(&self) -> Vec<f64> {
        self.labels.iter().map(|&l| if l { 1.0 } else { -1.0 }).collect()
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    /// Degree of `c` at the `k`-th example.
    pub fn degree_at(&self, k: usize, c: &Concept) -> f64 {
        self.closure.degree(self.instances[k], c)
    }

    /// Degrees of `c` over the example individuals.
    pub fn degrees(&self, c: &Concept) -> Vec<f64> {
        match c {
            Concept::And(cs) => {
                let mut out = vec![1.0f64; self.len()];
                for ci in cs {
                    match self.cache.get(ci) {
                        Some(v) => out.iter_mut().zip(v).for_each(|(o, x)| *o = o.min(*x)),
                        None => out
                            .iter_mut()
                            .zip(&self.instances)
                            .for_each(|(o, &i)| *o = o.min(self.closure.degree(i, ci))),
                    }
                }
                out
            }
            _ => match self.cache.get(c) {
                Some(v) => v.clone(),
                None => self.instances.iter().map(|&i| self.closure.degree(i, c)).collect(),
            },
        }
    }

    pub fn uniform_weights(&self) -> Vec<f64> {
        vec![1.0 / self.len() as f64; self.len()]
    }

    /// Unweighted confidence of `body ⊑ T` over all examples.
    pub(crate) fn confidence(&self, degrees: &[f64]) -> Option<f64> {
        let (num, den) = degrees
            .iter()
            .zip(&self.labels)
            .fold((0.0, 0.0), |(n, d), (x, &l)| (if l { n + x } else { n }, d + x));
        (den > 0.0).then(|| num / den)
    }

    /// Fraction of non-positives with a non-zero degree.
    pub(crate) fn non_positive_coverage(&self, degrees: &[f64]) -> f64 {
        let (covered, total) = degrees
            .iter()
            .zip(&self.labels)
            .filter(|(_, &l)| !l)
            .fold((0usize, 0usize), |(c, t), (x, _)| (c + usize::from(*x > 0.0), t + 1));
        if total == 0 {
            0.0
        } else {
            covered as f64 / total as f64
        }
    }
}

/// Runs the selected learner.
pub fn learn(task: &LearningTask<'_>, algorithm: Algorithm, params: &LearnParams) -> Result<Hypothesis, LearnError> {
    match algorithm {
        Algorithm::Boost => boost(task, params),
        Algorithm::Foil => foil_dl(task, params),
    }
}
