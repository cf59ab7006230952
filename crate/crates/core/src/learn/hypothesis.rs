use std::collections::BTreeSet;

use crate::kb::{Closure, Concept};

/// One weak hypothesis: a disjunction of rule bodies implying `name`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakLearner {
    pub name: String,
    pub bodies: Vec<Concept>,
}

impl WeakLearner {
    /// Maximum body degree at individual `i`.
    pub fn degree(&self, closure: &Closure, i: usize) -> f64 {
        self.bodies.iter().map(|b| closure.degree(i, b)).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoostEnsemble {
    pub target: String,
    pub weak_learners: Vec<WeakLearner>,
    pub alphas: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FoilRule {
    pub body: Concept,
    pub degree: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FoilRules {
    pub target: String,
    pub rules: Vec<FoilRule>,
}

/// A learned hypothesis for a target class.
#[derive(Debug, Clone, PartialEq)]
pub enum Hypothesis {
    Boost(BoostEnsemble),
    Foil(FoilRules),
}

impl Hypothesis {
    pub fn target(&self) -> &str {
        match self {
            Hypothesis::Boost(e) => &e.target,
            Hypothesis::Foil(f) => &f.target,
        }
    }

    /// Every rule body, in order.
    pub fn bodies(&self) -> Box<dyn Iterator<Item = &Concept> + '_> {
        match self {
            Hypothesis::Boost(e) => Box::new(e.weak_learners.iter().flat_map(|w| w.bodies.iter())),
            Hypothesis::Foil(f) => Box::new(f.rules.iter().map(|r| &r.body)),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.bodies().next().is_none()
    }

    pub fn rule_count(&self) -> usize {
        self.bodies().count()
    }

    /// Predicted degree of the target at closure index `i`, clamped to [0, 1].
    pub fn predict_index(&self, closure: &Closure, i: usize) -> f64 {
        let raw = match self {
            Hypothesis::Boost(e) => e
                .weak_learners
                .iter()
                .zip(&e.alphas)
                .map(|(w, a)| a * w.degree(closure, i))
                .sum(),
            Hypothesis::Foil(f) => f
                .rules
                .iter()
                .map(|r| r.degree * closure.degree(i, &r.body))
                .fold(0.0, f64::max),
        };
        raw.clamp(0.0, 1.0)
    }

    /// The aggregation axiom `Σ αⱼ·WLⱼ ⊑ T`, if this is an ensemble.
    pub fn aggregation(&self) -> Option<Concept> {
        match self {
            Hypothesis::Boost(e) => Some(Concept::WeightedSum(
                e.alphas.iter().zip(&e.weak_learners).map(|(a, w)| (*a, w.name.clone())).collect(),
            )),
            Hypothesis::Foil(_) => None,
        }
    }
}

/// `base`, or `base_1`, `base_2`, … whichever is not in `taken`.
pub fn fresh_name(base: &str, taken: &BTreeSet<String>) -> String {
    if !taken.contains(base) {
        return base.to_string();
    }
    (1..)
        .map(|k| format!("{base}_{k}"))
        .find(|n| !taken.contains(n))
        .expect("unbounded counter")
}
