use std::cmp::Ordering;

use super::{LearnParams, LearningTask};
use crate::kb::Concept;
use crate::par::map_collect;
use crate::refine::RefinementSearch;

/// One accepted refinement step of the greedy search.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchStep {
    pub body: Concept,
    pub gain: f64,
    pub cf_before: f64,
    pub cf_after: f64,
}

struct Scored {
    body: Concept,
    degrees: Vec<f64>,
    cf: f64,
}

/// Weighted confidence: numerator over `pos`, denominator over all examples.
fn weighted_cf(degrees: &[f64], w: &[f64], pos: &[bool]) -> Option<f64> {
    let mut num = 0.0;
    let mut den = 0.0;
    for ((d, w), p) in degrees.iter().zip(w).zip(pos) {
        let x = w * d;
        den += x;
        if *p {
            num += x;
        }
    }
    (den > 0.0).then(|| num / den)
}

fn gain(new: &Scored, cur: &Scored, w: &[f64], pos: &[bool]) -> f64 {
    let p: f64 = new
        .degrees
        .iter()
        .zip(&cur.degrees)
        .zip(w.iter().zip(pos))
        .filter(|(_, (_, p))| **p)
        .map(|((a, b), (w, _))| w * a.min(*b))
        .sum();
    if p <= 0.0 {
        return 0.0;
    }
    p * (new.cf.log2() - cur.cf.log2())
}

/// Greedy search for one rule body `C ⊑ target` from ⊤.
///
/// `w` and `pos` are aligned with [`LearningTask::names`]; `pos` marks the
/// positives still to be covered.
pub fn learn_one_axiom(task: &LearningTask<'_>, w: &[f64], pos: &[bool], params: &LearnParams) -> Option<Concept> {
    learn_one_axiom_traced(task, w, pos, params).0
}

/// As [`learn_one_axiom`], also returning the accepted steps.
pub fn learn_one_axiom_traced(
    task: &LearningTask<'_>,
    w: &[f64],
    pos: &[bool],
    params: &LearnParams,
) -> (Option<Concept>, Vec<SearchStep>) {
    assert_eq!(w.len(), task.len(), "weight vector length");
    assert_eq!(pos.len(), task.len(), "positive mask length");
    let mut trace = Vec::new();
    let mut search = RefinementSearch::new();
    let top_degrees = task.degrees(&Concept::Top);
    let Some(top_cf) = weighted_cf(&top_degrees, w, pos) else {
        return (None, trace);
    };
    let mut current = Scored { body: Concept::Top, degrees: top_degrees, cf: top_cf };
    let mut stack: Vec<Scored> = Vec::new();

    loop {
        let candidates = search.refine(&current.body, task.ctx);
        let scored: Vec<Option<Scored>> = map_collect(params.execution, &candidates, |c| {
            let degrees = task.degrees(c);
            weighted_cf(&degrees, w, pos).map(|cf| Scored { body: c.clone(), degrees, cf })
        });
        let mut scored: Vec<Scored> = scored.into_iter().flatten().collect();

        let mut best: Option<(usize, f64)> = None;
        for (k, s) in scored.iter().enumerate() {
            let g = gain(s, &current, w, pos);
            if g > best.map_or(0.0, |b| b.1) && s.cf > current.cf {
                best = Some((k, g));
            }
        }

        if let Some((k, g)) = best {
            let next = scored.swap_remove(k);
            trace.push(SearchStep { body: next.body.clone(), gain: g, cf_before: current.cf, cf_after: next.cf });
            if params.backtrack_k > 0 {
                stack.extend(scored);
                // best last, ties resolved towards the canonically smaller body
                stack.sort_by(|a, b| a.cf.partial_cmp(&b.cf).unwrap_or(Ordering::Equal).then_with(|| b.body.cmp(&a.body)));
                let excess = stack.len().saturating_sub(params.backtrack_k);
                stack.drain(..excess);
            }
            current = next;
            continue;
        }

        if acceptable(task, &current, params) {
            return (Some(current.body), trace);
        }
        match stack.pop() {
            Some(next) => current = next,
            None => return (None, trace),
        }
    }
}

fn acceptable(task: &LearningTask<'_>, c: &Scored, params: &LearnParams) -> bool {
    let Some(cf) = task.confidence(&c.degrees) else {
        return false;
    };
    cf >= params.theta && task.non_positive_coverage(&c.degrees) <= params.eta
}

/// Sequential covering: learns bodies until every positive is covered or no
/// new body is found.
pub fn wfoildl(task: &LearningTask<'_>, w: &[f64], params: &LearnParams) -> Vec<Concept> {
    let mut pos = task.labels().to_vec();
    let mut bodies: Vec<Concept> = Vec::new();
    while pos.iter().any(|&p| p) {
        let Some(body) = learn_one_axiom(task, w, &pos, params) else {
            break;
        };
        if bodies.contains(&body) {
            break;
        }
        for (p, d) in pos.iter_mut().zip(task.degrees(&body)) {
            if d > 0.0 {
                *p = false;
            }
        }
        bodies.push(body);
    }
    bodies
}
