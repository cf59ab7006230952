//! Shared fixtures and independent oracles for the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use feb_core::kb::{Assertion, Concept, DatatypePredicate, KnowledgeBase, Literal, ValueType};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// Hotel_010 is a Hotel priced 79, Fair = tri(58, 100, 142).
pub const HOTEL_KB: &str = "\
class Hotel
class Accommodation
class GoodHotel
dataprop hasPrice real functional
gci Hotel Accommodation
instance Hotel_010 Hotel
value Hotel_010 hasPrice 79
";

pub fn fair() -> DatatypePredicate {
    DatatypePredicate::triangular("Fair", 58.0, 100.0, 142.0).unwrap()
}

fn random_body(r: &mut ChaCha8Rng, atoms: &[String], roles: &[String], depth: usize) -> Concept {
    let pick = if depth == 0 { r.gen_range(0..5) } else { r.gen_range(0..10) };
    match pick {
        0 => Concept::Top,
        1..=4 => Concept::atom(atoms[r.gen_range(0..atoms.len())].clone()),
        5..=7 if depth > 0 => {
            let filler = if r.gen_bool(0.3) { Concept::Top } else { random_body(r, atoms, roles, depth - 1) };
            Concept::some(roles[r.gen_range(0..roles.len())].clone(), filler)
        }
        _ => {
            let n = r.gen_range(2..=3);
            Concept::and((0..n).map(|_| random_body(r, atoms, roles, depth - 1)))
        }
    }
}

fn random_head(r: &mut ChaCha8Rng, atoms: &[String], roles: &[String]) -> Concept {
    let atom = |r: &mut ChaCha8Rng| Concept::atom(atoms[r.gen_range(0..atoms.len())].clone());
    match r.gen_range(0..6) {
        0..=2 => atom(r),
        3 => Concept::and([atom(r), atom(r)]),
        4 => Concept::some(roles[r.gen_range(0..roles.len())].clone(), atom(r)),
        _ => Concept::and([atom(r), Concept::some(roles[r.gen_range(0..roles.len())].clone(), Concept::Top)]),
    }
}

/// Random KB within the given size bounds (at least one of each kind).
pub fn random_kb(seed: u64, max_individuals: usize, max_atoms: usize, max_roles: usize, max_axioms: usize) -> KnowledgeBase {
    let mut r = rng(seed);
    let atoms = names("A", r.gen_range(1..=max_atoms));
    let roles = names("r", r.gen_range(1..=max_roles));
    let inds = names("i", r.gen_range(1..=max_individuals));
    let mut kb = KnowledgeBase::new();
    for a in &atoms {
        kb.declare_concept(a.clone()).unwrap();
    }
    for s in &roles {
        kb.declare_object_property(s.clone()).unwrap();
    }
    for a in &inds {
        kb.declare_individual(a.clone());
    }
    for _ in 0..r.gen_range(0..=max_axioms) {
        let body = random_body(&mut r, &atoms, &roles, 2);
        let head = random_head(&mut r, &atoms, &roles);
        kb.add_gci(body, head).unwrap();
    }
    for a in &inds {
        for c in &atoms {
            if r.gen_bool(0.2) {
                kb.add_assertion(Assertion::Concept { individual: a.clone(), concept: c.clone() }).unwrap();
            }
        }
        for s in &roles {
            for b in &inds {
                if r.gen_bool(0.15) {
                    kb.add_assertion(Assertion::Role { subject: a.clone(), role: s.clone(), object: b.clone() })
                        .unwrap();
                }
            }
        }
    }
    kb
}

/// Least-model saturation by naive evaluation of the original axioms:
/// bodies are checked semantically over asserted role edges, head atoms are
/// added, and right-hand existentials add nothing. Iterates to a fixpoint.
pub fn brute_force_closure(kb: &KnowledgeBase) -> BTreeMap<String, BTreeSet<String>> {
    let mut atoms: BTreeMap<String, BTreeSet<String>> =
        kb.individuals().iter().map(|a| (a.clone(), BTreeSet::new())).collect();
    let mut edges: BTreeMap<(String, String), Vec<String>> = BTreeMap::new();
    for ax in kb.abox() {
        match ax {
            Assertion::Concept { individual, concept } => {
                atoms.get_mut(individual).unwrap().insert(concept.clone());
            }
            Assertion::Role { subject, role, object } => {
                edges.entry((subject.clone(), role.clone())).or_default().push(object.clone());
            }
            Assertion::Data { .. } => {}
        }
    }
    fn holds(
        c: &Concept,
        a: &str,
        atoms: &BTreeMap<String, BTreeSet<String>>,
        edges: &BTreeMap<(String, String), Vec<String>>,
    ) -> bool {
        match c {
            Concept::Top => true,
            Concept::Atom(x) => atoms[a].contains(x),
            Concept::And(cs) => cs.iter().all(|c| holds(c, a, atoms, edges)),
            Concept::ExistsObject(r, f) => edges
                .get(&(a.to_string(), r.clone()))
                .map_or(false, |bs| bs.iter().any(|b| holds(f, b, atoms, edges))),
            other => panic!("unexpected body {other}"),
        }
    }
    fn head_atoms(c: &Concept, out: &mut Vec<String>) {
        match c {
            Concept::Atom(x) => out.push(x.clone()),
            Concept::And(cs) => cs.iter().for_each(|c| head_atoms(c, out)),
            _ => {}
        }
    }
    loop {
        let mut changed = false;
        let inds: Vec<String> = atoms.keys().cloned().collect();
        for a in &inds {
            for g in kb.tbox() {
                if holds(&g.body, a, &atoms, &edges) {
                    let mut add = Vec::new();
                    head_atoms(&g.head, &mut add);
                    for x in add {
                        changed |= atoms.get_mut(a).unwrap().insert(x);
                    }
                }
            }
        }
        if !changed {
            return atoms;
        }
    }
}

/// Toy problem where the target's positives are exactly the instances of
/// `A0`; other atoms, a role and a numeric property add noise.
pub fn learnable_toy(seed: u64) -> (KnowledgeBase, BTreeSet<String>, BTreeSet<String>) {
    let mut r = rng(seed);
    let n = r.gen_range(6..=14);
    let inds = names("x", n);
    let mut kb = KnowledgeBase::new();
    for a in names("A", 4) {
        kb.declare_concept(a).unwrap();
    }
    kb.declare_concept("T").unwrap();
    kb.declare_object_property("r").unwrap();
    kb.declare_data_property("s", ValueType::Real, true).unwrap();
    if r.gen_bool(0.5) {
        kb.add_gci(Concept::atom("A1"), Concept::atom("A2")).unwrap();
    }
    let mut pos = BTreeSet::new();
    let mut neg = BTreeSet::new();
    for (k, a) in inds.iter().enumerate() {
        kb.declare_individual(a.clone());
        // at least one positive and one non-positive
        let is_pos = match k {
            0 => true,
            1 => false,
            _ => r.gen_bool(0.4),
        };
        if is_pos {
            kb.add_assertion(Assertion::Concept { individual: a.clone(), concept: "A0".into() }).unwrap();
            pos.insert(a.clone());
        } else {
            neg.insert(a.clone());
        }
        for c in ["A1", "A2", "A3"] {
            if r.gen_bool(0.35) {
                kb.add_assertion(Assertion::Concept { individual: a.clone(), concept: c.into() }).unwrap();
            }
        }
        let v = r.gen_range(0.0..100.0f64);
        kb.add_assertion(Assertion::Data { individual: a.clone(), property: "s".into(), value: Literal::Real(v) })
            .unwrap();
        let b = &inds[r.gen_range(0..n)];
        kb.add_assertion(Assertion::Role { subject: a.clone(), role: "r".into(), object: b.clone() }).unwrap();
    }
    (kb, pos, neg)
}

/// Straight transcription of one boosting round, written loop by loop.
pub struct RoundOracle {
    pub h_star: f64,
    pub mu: f64,
    pub alpha: f64,
    pub weights: Vec<f64>,
}

pub fn boosting_oracle(h: &[f64], l: &[f64], w: &[f64]) -> RoundOracle {
    let mut h_star = 0.0f64;
    for x in h {
        if x.abs() > h_star {
            h_star = x.abs();
        }
    }
    let mut s = 0.0;
    for i in 0..h.len() {
        s += w[i] * l[i] * h[i];
    }
    let mut mu = s / h_star;
    let bound = 1.0 - 1e-6;
    if mu > bound {
        mu = bound;
    }
    if mu < -bound {
        mu = -bound;
    }
    let alpha = 1.0 / (2.0 * h_star) * ((1.0 + mu) / (1.0 - mu)).ln();
    let mut weights = Vec::new();
    for i in 0..h.len() {
        weights.push(w[i] * (1.0 - mu * l[i] * h[i] / h_star) / (1.0 - mu * mu));
    }
    let total: f64 = weights.iter().sum();
    for x in weights.iter_mut() {
        *x /= total;
    }
    RoundOracle { h_star, mu, alpha, weights }
}

/// Random weak-hypothesis values in {−1} ∪ (0, 1], labels in {−1, 1} and
/// a normalised weight vector.
pub fn random_round(r: &mut ChaCha8Rng, max_len: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let n = r.gen_range(1..=max_len);
    let h: Vec<f64> = (0..n)
        .map(|_| if r.gen_bool(0.3) { -1.0 } else { 1.0 - r.gen_range(0.0..1.0f64) })
        .collect();
    let l: Vec<f64> = (0..n).map(|_| if r.gen_bool(0.5) { 1.0 } else { -1.0 }).collect();
    let raw: Vec<f64> = (0..n).map(|_| r.gen_range(0.01..1.0f64)).collect();
    let total: f64 = raw.iter().sum();
    (h, l, raw.iter().map(|x| x / total).collect())
}

/// Nearest-centroid classifier on raw attribute vectors; returns crisp
/// predictions (1 = positive) for `test`.
pub fn nearest_centroid(train: &[(Vec<f64>, bool)], test: &[Vec<f64>]) -> Vec<f64> {
    let dim = train[0].0.len();
    let mut sums = [vec![0.0; dim], vec![0.0; dim]];
    let mut counts = [0.0, 0.0];
    for (x, pos) in train {
        let k = usize::from(*pos);
        counts[k] += 1.0;
        for (s, v) in sums[k].iter_mut().zip(x) {
            *s += v;
        }
    }
    let centroids: Vec<Vec<f64>> = (0..2).map(|k| sums[k].iter().map(|s| s / counts[k]).collect()).collect();
    let dist = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>();
    test.iter()
        .map(|x| if dist(x, &centroids[1]) < dist(x, &centroids[0]) { 1.0 } else { 0.0 })
        .collect()
}
