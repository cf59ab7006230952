use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use super::{Assertion, Concept, KbError, KnowledgeBase, Literal};

/// Prefix of auxiliary atoms introduced by TBox normalisation. `#` starts a
/// comment in the text format, so these never clash with user names.
pub const AUX_PREFIX: &str = "#aux";

/// Deductive closure of a crisp KB over its named individuals.
///
/// Built by forward chaining over the normalised TBox:
///
/// - `A ∈ cl(a)`, `A ⊑ B` gives `B ∈ cl(a)`;
/// - `A1, A2 ∈ cl(a)`, `A1 ⊓ A2 ⊑ B` gives `B ∈ cl(a)`;
/// - `(a, b) : r` asserted, `A ∈ cl(b)`, `∃r.A ⊑ B` gives `B ∈ cl(a)`.
///
/// Existentials on the right of an inclusion do not create anonymous
/// successors, so the closure is sound but may miss entailments that hinge
/// on them.
#[derive(Debug, Clone, PartialEq)]
pub struct Closure {
    pub(crate) names: Vec<String>,
    pub(crate) index: HashMap<String, usize>,
    pub(crate) atoms: Vec<HashSet<String>>,
    pub(crate) successors: Vec<BTreeMap<String, Vec<usize>>>,
    pub(crate) values: Vec<BTreeMap<String, Vec<Literal>>>,
    pub(crate) subsumers: BTreeMap<String, BTreeSet<String>>,
    pub(crate) concepts: BTreeSet<String>,
    pub(crate) object_properties: BTreeSet<String>,
    pub(crate) data_properties: BTreeSet<String>,
}

impl Closure {
    pub fn individuals(&self) -> &[String] {
        &self.names
    }

    pub fn individual_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Entailed atomic concepts of an individual, sorted.
    pub fn atoms_of(&self, individual: &str) -> Option<BTreeSet<&str>> {
        let i = self.individual_index(individual)?;
        Some(self.atoms[i].iter().map(String::as_str).collect())
    }

    pub fn has_atom(&self, individual: usize, atom: &str) -> bool {
        self.atoms[individual].contains(atom)
    }

    /// Strict named super-concepts of `atom` entailed by the TBox.
    pub fn super_atoms(&self, atom: &str) -> impl Iterator<Item = &str> {
        self.subsumers.get(atom).into_iter().flatten().map(String::as_str)
    }

    /// Strict named sub-concepts `A'` with `K ⊨ A' ⊑ atom`.
    pub fn sub_atoms<'a>(&'a self, atom: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.subsumers
            .iter()
            .filter(move |(sub, sups)| sub.as_str() != atom && sups.contains(atom))
            .map(|(sub, _)| sub.as_str())
    }

    pub fn successors(&self, individual: usize, role: &str) -> &[usize] {
        self.successors[individual].get(role).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn values(&self, individual: usize, property: &str) -> &[Literal] {
        self.values[individual].get(property).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn concept_names(&self) -> &BTreeSet<String> {
        &self.concepts
    }

    pub fn object_property_names(&self) -> &BTreeSet<String> {
        &self.object_properties
    }

    pub fn data_property_names(&self) -> &BTreeSet<String> {
        &self.data_properties
    }
}

/// Validates that a GCI fits the supported normal forms once normalised.
pub(crate) fn check_gci(body: &Concept, head: &Concept) -> Result<(), KbError> {
    check_body(body)?;
    check_head(head)
}

fn check_body(c: &Concept) -> Result<(), KbError> {
    match c {
        Concept::Top | Concept::Atom(_) => Ok(()),
        Concept::And(cs) => cs.iter().try_for_each(check_body),
        Concept::ExistsObject(_, f) => check_body(f),
        other => Err(KbError::OutOfFragment(format!("`{other}` on the left of an inclusion"))),
    }
}

fn check_head(c: &Concept) -> Result<(), KbError> {
    match c {
        Concept::Top | Concept::Atom(_) | Concept::ExistsData(..) => Ok(()),
        Concept::ExistsObject(_, f) => match **f {
            Concept::Top | Concept::Atom(_) => Ok(()),
            _ => Err(KbError::OutOfFragment(format!("nested `{c}` on the right of an inclusion"))),
        },
        Concept::And(cs) => cs.iter().try_for_each(check_head),
        other => Err(KbError::OutOfFragment(format!("`{other}` on the right of an inclusion"))),
    }
}

/// Normalised TBox: `None` stands for ⊤ in filler position.
#[derive(Default)]
struct NormalTbox {
    from_top: Vec<String>,
    told: HashMap<String, Vec<String>>,
    conj: HashMap<String, Vec<(String, String)>>,
    exists: HashMap<(String, Option<String>), Vec<String>>,
    aux_count: usize,
}

impl NormalTbox {
    fn build(kb: &KnowledgeBase) -> Self {
        let mut nf = NormalTbox::default();
        for gci in kb.tbox() {
            let mut heads = Vec::new();
            collect_head_atoms(&gci.head, &mut heads);
            for head in heads {
                nf.add(&gci.body, head);
            }
        }
        nf
    }

    fn fresh(&mut self) -> String {
        self.aux_count += 1;
        format!("{AUX_PREFIX}{}", self.aux_count)
    }

    /// Atom naming `c` (`None` for ⊤), introducing an auxiliary if needed.
    fn atomize(&mut self, c: &Concept) -> Option<String> {
        match c {
            Concept::Top => None,
            Concept::Atom(a) => Some(a.clone()),
            Concept::And(cs) if cs.iter().all(|c| matches!(c, Concept::Top)) => None,
            complex => {
                let aux = self.fresh();
                self.add(complex, aux.clone());
                Some(aux)
            }
        }
    }

    fn add(&mut self, body: &Concept, head: String) {
        match body {
            Concept::Top => self.from_top.push(head),
            Concept::Atom(a) => self.told.entry(a.clone()).or_default().push(head),
            Concept::And(cs) => {
                let atoms: Vec<String> = cs.iter().filter_map(|c| self.atomize(c)).collect();
                match atoms.as_slice() {
                    [] => self.from_top.push(head),
                    [a] => self.told.entry(a.clone()).or_default().push(head),
                    [first, rest @ ..] => {
                        let mut current = first.clone();
                        for (i, next) in rest.iter().enumerate() {
                            let target = if i + 1 == rest.len() { head.clone() } else { self.fresh() };
                            self.conj.entry(current.clone()).or_default().push((next.clone(), target.clone()));
                            self.conj.entry(next.clone()).or_default().push((current.clone(), target.clone()));
                            current = target;
                        }
                    }
                }
            }
            Concept::ExistsObject(r, filler) => {
                let f = self.atomize(filler);
                self.exists.entry((r.clone(), f)).or_default().push(head);
            }
            // rejected by check_gci on insertion
            _ => {}
        }
    }
}

fn collect_head_atoms(head: &Concept, out: &mut Vec<String>) {
    match head {
        Concept::Atom(a) => out.push(a.clone()),
        Concept::And(cs) => cs.iter().for_each(|c| collect_head_atoms(c, out)),
        _ => {}
    }
}

/// Computes the least fixpoint of the completion rules.
pub fn complete(kb: &KnowledgeBase) -> Closure {
    let nf = NormalTbox::build(kb);
    let names: Vec<String> = kb.individuals().iter().cloned().collect();
    let index: HashMap<String, usize> = names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
    let n = names.len();

    let mut successors: Vec<BTreeMap<String, Vec<usize>>> = vec![BTreeMap::new(); n];
    let mut predecessors: Vec<HashMap<String, Vec<usize>>> = vec![HashMap::new(); n];
    let mut values: Vec<BTreeMap<String, Vec<Literal>>> = vec![BTreeMap::new(); n];
    let mut atoms: Vec<HashSet<String>> = vec![HashSet::new(); n];
    let mut queue: Vec<(usize, String)> = Vec::new();

    for a in kb.abox() {
        match a {
            Assertion::Concept { individual, concept } => queue.push((index[individual], concept.clone())),
            Assertion::Role { subject, role, object } => {
                let (s, o) = (index[subject], index[object]);
                let succ = successors[s].entry(role.clone()).or_default();
                if !succ.contains(&o) {
                    succ.push(o);
                    predecessors[o].entry(role.clone()).or_default().push(s);
                }
            }
            Assertion::Data { individual, property, value } => {
                let vals = values[index[individual]].entry(property.clone()).or_default();
                if !vals.contains(value) {
                    vals.push(*value);
                }
            }
        }
    }
    for i in 0..n {
        for head in &nf.from_top {
            queue.push((i, head.clone()));
        }
        for (role, succ) in &successors[i] {
            if !succ.is_empty() {
                for head in nf.exists.get(&(role.clone(), None)).into_iter().flatten() {
                    queue.push((i, head.clone()));
                }
            }
        }
    }

    while let Some((i, atom)) = queue.pop() {
        if !atoms[i].insert(atom.clone()) {
            continue;
        }
        for b in nf.told.get(&atom).into_iter().flatten() {
            queue.push((i, b.clone()));
        }
        for (other, b) in nf.conj.get(&atom).into_iter().flatten() {
            if atoms[i].contains(other) {
                queue.push((i, b.clone()));
            }
        }
        for (role, preds) in &predecessors[i] {
            if let Some(heads) = nf.exists.get(&(role.clone(), Some(atom.clone()))) {
                for &p in preds {
                    for b in heads {
                        queue.push((p, b.clone()));
                    }
                }
            }
        }
    }

    for set in &mut atoms {
        set.retain(|a| !a.starts_with(AUX_PREFIX));
    }

    let subsumers = atom_subsumers(kb, &nf);

    Closure {
        names,
        index,
        atoms,
        successors,
        values,
        subsumers,
        concepts: kb.concepts().clone(),
        object_properties: kb.object_properties().clone(),
        data_properties: kb.data_properties().keys().cloned().collect(),
    }
}

/// Named subsumers of each declared atom, obtained by saturating a
/// role-free individual that is only known to be an instance of it.
fn atom_subsumers(kb: &KnowledgeBase, nf: &NormalTbox) -> BTreeMap<String, BTreeSet<String>> {
    kb.concepts()
        .iter()
        .map(|a| {
            let mut seen: HashSet<String> = HashSet::new();
            let mut queue: Vec<String> = vec![a.clone()];
            queue.extend(nf.from_top.iter().cloned());
            while let Some(x) = queue.pop() {
                if !seen.insert(x.clone()) {
                    continue;
                }
                queue.extend(nf.told.get(&x).into_iter().flatten().cloned());
                for (other, b) in nf.conj.get(&x).into_iter().flatten() {
                    if seen.contains(other) {
                        queue.push(b.clone());
                    }
                }
            }
            let supers = seen.into_iter().filter(|s| s != a && !s.starts_with(AUX_PREFIX)).collect();
            (a.clone(), supers)
        })
        .collect()
}
