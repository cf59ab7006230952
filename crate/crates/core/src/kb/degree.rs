//! Degree evaluation of concepts and hypotheses over a closure.

use super::{Closure, Concept, Degree, KbError};
use crate::learn::Hypothesis;

impl Closure {
    /// Degree of `c` at individual index `i`.
    ///
    /// Unchecked: unknown names evaluate to 0. Use [`Closure::concept_degree`]
    /// for validated input.
    pub fn degree(&self, i: usize, c: &Concept) -> f64 {
        match c {
            Concept::Top => 1.0,
            Concept::Bottom => 0.0,
            Concept::Atom(a) => {
                if self.atoms[i].contains(a) {
                    1.0
                } else {
                    0.0
                }
            }
            Concept::NegAtom(a) => {
                if self.atoms[i].contains(a) {
                    0.0
                } else {
                    1.0
                }
            }
            Concept::And(cs) => {
                let mut acc = 1.0f64;
                for c in cs {
                    acc = acc.min(self.degree(i, c));
                    if acc == 0.0 {
                        break;
                    }
                }
                acc
            }
            Concept::ExistsObject(r, filler) => {
                let mut best = 0.0f64;
                for &j in self.successors(i, r) {
                    best = best.max(self.degree(j, filler));
                    if best == 1.0 {
                        break;
                    }
                }
                best
            }
            Concept::ExistsData(s, d) => self
                .values(i, s)
                .iter()
                .filter_map(|v| d.shape.membership(*v))
                .fold(0.0, f64::max),
            Concept::WeightedSum(terms) => {
                let sum: f64 = terms
                    .iter()
                    .filter(|(_, a)| self.atoms[i].contains(a))
                    .map(|(alpha, _)| alpha)
                    .sum();
                sum.clamp(0.0, 1.0)
            }
        }
    }

    /// Validates that every name in `c` is known to this closure.
    pub fn check_concept(&self, c: &Concept) -> Result<(), KbError> {
        let undeclared = |kind, name: &str| Err(KbError::Undeclared { kind, name: name.to_string() });
        match c {
            Concept::Top | Concept::Bottom => Ok(()),
            Concept::Atom(a) | Concept::NegAtom(a) => {
                if self.concepts.contains(a) {
                    Ok(())
                } else {
                    undeclared("class", a)
                }
            }
            Concept::And(cs) => cs.iter().try_for_each(|c| self.check_concept(c)),
            Concept::ExistsObject(r, f) => {
                if !self.object_properties.contains(r) {
                    return undeclared("object property", r);
                }
                self.check_concept(f)
            }
            Concept::ExistsData(s, _) => {
                if self.data_properties.contains(s) {
                    Ok(())
                } else {
                    undeclared("data property", s)
                }
            }
            Concept::WeightedSum(terms) => terms
                .iter()
                .try_for_each(|(_, a)| self.check_concept(&Concept::Atom(a.clone()))),
        }
    }

    fn resolve(&self, individual: &str) -> Result<usize, KbError> {
        self.individual_index(individual)
            .ok_or_else(|| KbError::UnknownIndividual(individual.to_string()))
    }

    fn resolve_all(&self, individuals: &[&str]) -> Result<Vec<usize>, KbError> {
        individuals.iter().map(|a| self.resolve(a)).collect()
    }

    /// `bed(K, a : C)` for the supported fragment.
    pub fn concept_degree(&self, individual: &str, c: &Concept) -> Result<Degree, KbError> {
        self.check_concept(c)?;
        let i = self.resolve(individual)?;
        Ok(Degree::saturating(self.degree(i, c)))
    }

    fn sum_degrees(
        &self,
        c: &Concept,
        individuals: &[&str],
        weights: Option<&[f64]>,
        crisp: bool,
    ) -> Result<f64, KbError> {
        self.check_concept(c)?;
        let idx = self.resolve_all(individuals)?;
        if let Some(w) = weights {
            if w.len() != idx.len() {
                return Err(KbError::WeightLength { expected: idx.len(), got: w.len() });
            }
            if let Some((k, &bad)) = w.iter().enumerate().find(|(_, &x)| !(x >= 0.0)) {
                return Err(KbError::NegativeWeight { individual: individuals[k].to_string(), weight: bad });
            }
        }
        Ok(idx
            .iter()
            .enumerate()
            .map(|(k, &i)| {
                let d = Degree::saturating(self.degree(i, c));
                let d = if crisp { d.ceil() } else { d.value() };
                weights.map_or(1.0, |w| w[k]) * d
            })
            .sum())
    }

    /// `|C|` over a set of individuals: the sum of their degrees.
    pub fn cardinality(&self, c: &Concept, individuals: &[&str]) -> Result<f64, KbError> {
        self.sum_degrees(c, individuals, None, false)
    }

    /// Weighted cardinality; `weights` is aligned with `individuals`.
    pub fn weighted_cardinality(&self, c: &Concept, individuals: &[&str], weights: &[f64]) -> Result<f64, KbError> {
        self.sum_degrees(c, individuals, Some(weights), false)
    }

    /// Cardinality with every degree replaced by its ceiling.
    pub fn crisp_cardinality(&self, c: &Concept, individuals: &[&str]) -> Result<f64, KbError> {
        self.sum_degrees(c, individuals, None, true)
    }

    pub fn crisp_weighted_cardinality(
        &self,
        c: &Concept,
        individuals: &[&str],
        weights: &[f64],
    ) -> Result<f64, KbError> {
        self.sum_degrees(c, individuals, Some(weights), true)
    }

    /// Confidence (inclusion degree) `|body ⊓ head| / |body|`.
    pub fn confidence(&self, body: &Concept, head: &Concept, individuals: &[&str]) -> Result<Degree, KbError> {
        let both = Concept::And(vec![body.clone(), head.clone()]);
        ratio(self.cardinality(&both, individuals)?, self.cardinality(body, individuals)?)
    }

    pub fn weighted_confidence(
        &self,
        body: &Concept,
        head: &Concept,
        individuals: &[&str],
        weights: &[f64],
    ) -> Result<Degree, KbError> {
        let both = Concept::And(vec![body.clone(), head.clone()]);
        ratio(
            self.weighted_cardinality(&both, individuals, weights)?,
            self.weighted_cardinality(body, individuals, weights)?,
        )
    }

    /// Prediction `h(a) = bed(K ∪ h, a : T)` of a learned hypothesis.
    pub fn bed_hypothesis(&self, h: &Hypothesis, individual: &str) -> Result<Degree, KbError> {
        for body in h.bodies() {
            self.check_concept(body)?;
        }
        let i = self.resolve(individual)?;
        Ok(Degree::saturating(h.predict_index(self, i)))
    }
}

fn ratio(num: f64, den: f64) -> Result<Degree, KbError> {
    if den > 0.0 {
        Ok(Degree::saturating(num / den))
    } else {
        Err(KbError::UndefinedConfidence)
    }
}
