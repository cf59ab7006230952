//! Downward refinement of EL(D) rule bodies.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::kb::{Closure, Concept, DatatypePredicate, KbError, KnowledgeBase, Literal};

/// Vocabulary and bounds for the refinement operator.
#[derive(Debug, Clone)]
pub struct RefinementContext<'a> {
    pub closure: &'a Closure,
    atoms: BTreeSet<String>,
    roles: Vec<String>,
    datatypes: BTreeMap<String, Vec<DatatypePredicate>>,
    booleans: Vec<String>,
    pub max_depth: usize,
    pub max_conjuncts: usize,
    top: Vec<Concept>,
}

impl<'a> RefinementContext<'a> {
    /// `datatypes` maps numeric data properties to their fuzzy predicates;
    /// boolean properties of `kb` get `=true`/`=false` automatically.
    pub fn new(
        kb: &KnowledgeBase,
        closure: &'a Closure,
        datatypes: BTreeMap<String, Vec<DatatypePredicate>>,
        max_depth: usize,
        max_conjuncts: usize,
    ) -> Result<Self, KbError> {
        if max_depth == 0 || max_conjuncts == 0 {
            return Err(KbError::OutOfFragment("refinement bounds must be positive".into()));
        }
        for prop in datatypes.keys() {
            match kb.data_property(prop) {
                Some(d) if d.value_type.is_numeric() => {}
                _ => return Err(KbError::Undeclared { kind: "numeric data property", name: prop.clone() }),
            }
        }
        let mut ctx = RefinementContext {
            closure,
            atoms: kb.concepts().iter().cloned().collect(),
            roles: kb.object_properties().iter().cloned().collect(),
            datatypes,
            booleans: kb.boolean_data_properties().map(str::to_string).collect(),
            max_depth,
            max_conjuncts,
            top: Vec::new(),
        };
        ctx.rebuild_top();
        Ok(ctx)
    }

    /// Removes an atom (typically the target) from the candidate vocabulary.
    pub fn exclude_atom(&mut self, atom: &str) {
        self.atoms.remove(atom);
        self.rebuild_top();
    }

    fn rebuild_top(&mut self) {
        let mut top: BTreeSet<Concept> = self.atoms.iter().map(|a| Concept::Atom(a.clone())).collect();
        top.extend(self.roles.iter().map(|r| Concept::some(r.clone(), Concept::Top)));
        for (s, preds) in &self.datatypes {
            top.extend(preds.iter().map(|d| Concept::some_data(s.clone(), d.clone())));
        }
        for b in &self.booleans {
            for v in [true, false] {
                top.insert(Concept::some_data(b.clone(), DatatypePredicate::equals(Literal::Boolean(v))));
            }
        }
        self.top = top.into_iter().collect();
    }

    /// `ρ(⊤)`, before bounds are applied.
    pub fn top_refinements(&self) -> &[Concept] {
        &self.top
    }

    pub fn datatypes(&self) -> &BTreeMap<String, Vec<DatatypePredicate>> {
        &self.datatypes
    }

    fn within_bounds(&self, c: &Concept) -> bool {
        c.depth() <= self.max_depth && c.max_conjuncts() <= self.max_conjuncts
    }
}

/// Flattens nested conjunctions, drops ⊤ conjuncts, removes duplicates and
/// sorts conjuncts by the canonical concept order.
pub fn canonicalize(c: &Concept) -> Concept {
    match c {
        Concept::And(cs) => {
            let mut flat = BTreeSet::new();
            for c in cs {
                match canonicalize(c) {
                    Concept::And(inner) => flat.extend(inner),
                    Concept::Top => {}
                    other => {
                        flat.insert(other);
                    }
                }
            }
            let mut flat: Vec<Concept> = flat.into_iter().collect();
            match flat.len() {
                0 => Concept::Top,
                1 => flat.pop().unwrap(),
                _ => Concept::And(flat),
            }
        }
        Concept::ExistsObject(r, f) => Concept::some(r.clone(), canonicalize(f)),
        other => other.clone(),
    }
}

fn conjoin(a: &Concept, b: &Concept) -> Concept {
    canonicalize(&Concept::And(vec![a.clone(), b.clone()]))
}

/// Unbounded productions of the operator for a canonical concept.
fn productions(c: &Concept, ctx: &RefinementContext<'_>, out: &mut BTreeSet<Concept>) {
    match c {
        Concept::Top => out.extend(ctx.top.iter().cloned()),
        Concept::Atom(a) => {
            out.extend(ctx.closure.sub_atoms(a).filter(|s| ctx.atoms.contains(*s)).map(Concept::atom));
            out.extend(ctx.top.iter().map(|x| conjoin(c, x)));
        }
        Concept::ExistsObject(r, filler) => {
            let mut inner = BTreeSet::new();
            productions(filler, ctx, &mut inner);
            out.extend(inner.into_iter().map(|d| Concept::some(r.clone(), d)));
            out.extend(ctx.top.iter().map(|x| conjoin(c, x)));
        }
        Concept::ExistsData(..) => out.extend(ctx.top.iter().map(|x| conjoin(c, x))),
        Concept::And(cs) => {
            for (i, ci) in cs.iter().enumerate() {
                let mut alts = BTreeSet::new();
                productions(ci, ctx, &mut alts);
                for alt in alts {
                    let mut next = cs.clone();
                    next[i] = alt;
                    out.insert(canonicalize(&Concept::And(next)));
                }
            }
        }
        // outside the body grammar
        Concept::Bottom | Concept::NegAtom(_) | Concept::WeightedSum(_) => {}
    }
}

/// Downward refinements of `c`, canonical, within bounds and sorted.
pub fn refine(c: &Concept, ctx: &RefinementContext<'_>) -> Vec<Concept> {
    let c = canonicalize(c);
    let mut out = BTreeSet::new();
    productions(&c, ctx, &mut out);
    out.into_iter().filter(|d| *d != c && ctx.within_bounds(d)).collect()
}

/// Refinement within one search: candidates already produced are not
/// produced again.
#[derive(Debug, Default)]
pub struct RefinementSearch {
    seen: HashSet<Concept>,
}

impl RefinementSearch {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn refine(&mut self, c: &Concept, ctx: &RefinementContext<'_>) -> Vec<Concept> {
        self.seen.insert(canonicalize(c));
        refine(c, ctx).into_iter().filter(|d| self.seen.insert(d.clone())).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kb::{complete, ValueType};

    fn hotel_kb() -> KnowledgeBase {
        let mut kb = KnowledgeBase::new();
        kb.declare_concept("Hotel").unwrap();
        kb.declare_concept("Accommodation").unwrap();
        kb.declare_object_property("near").unwrap();
        kb.declare_data_property("hasPrice", ValueType::Real, true).unwrap();
        kb.declare_data_property("hasPool", ValueType::Boolean, true).unwrap();
        kb.add_gci(Concept::atom("Hotel"), Concept::atom("Accommodation")).unwrap();
        kb
    }

    fn price_types() -> BTreeMap<String, Vec<DatatypePredicate>> {
        BTreeMap::from([(
            "hasPrice".to_string(),
            vec![
                DatatypePredicate::left_shoulder("hasPrice_L", 0.0, 100.0).unwrap(),
                DatatypePredicate::right_shoulder("hasPrice_H", 0.0, 100.0).unwrap(),
            ],
        )])
    }

    #[test]
    fn canonical_form() {
        let a = Concept::atom("A");
        let b = Concept::atom("B");
        assert_eq!(canonicalize(&Concept::and([a.clone(), a.clone()])), a);
        assert_eq!(canonicalize(&Concept::and([b.clone(), a.clone()])), Concept::And(vec![a.clone(), b.clone()]));
        let nested = Concept::and([Concept::and([a.clone(), b.clone()]), Concept::atom("C")]);
        assert_eq!(canonicalize(&nested), Concept::And(vec![a.clone(), b.clone(), Concept::atom("C")]));
        let mixed = Concept::and([Concept::some("r", Concept::Top), a.clone()]);
        assert_eq!(canonicalize(&mixed).conjuncts()[0], a);
        let c = canonicalize(&nested);
        assert_eq!(canonicalize(&c), c);
    }

    #[test]
    fn refinements_of_top() {
        let kb = hotel_kb();
        let cl = complete(&kb);
        let ctx = RefinementContext::new(&kb, &cl, price_types(), 1, 5).unwrap();
        let got = refine(&Concept::Top, &ctx);
        assert_eq!(got.len(), 2 + 1 + 2 + 2);
        assert!(got.contains(&Concept::some("near", Concept::Top)));
        assert!(got.contains(&Concept::some_data("hasPool", DatatypePredicate::equals(Literal::Boolean(false)))));
        assert!(got.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn refinements_of_atom_include_subclasses_and_conjunctions() {
        let kb = hotel_kb();
        let cl = complete(&kb);
        let ctx = RefinementContext::new(&kb, &cl, price_types(), 1, 5).unwrap();
        let acc = Concept::atom("Accommodation");
        let got = refine(&acc, &ctx);
        assert!(got.contains(&Concept::atom("Hotel")));
        for x in refine(&Concept::Top, &ctx) {
            if x != acc {
                assert!(got.contains(&canonicalize(&Concept::and([acc.clone(), x]))));
            }
        }
    }

    #[test]
    fn depth_bound_blocks_nested_existentials() {
        let kb = hotel_kb();
        let cl = complete(&kb);
        let ctx = RefinementContext::new(&kb, &cl, price_types(), 1, 5).unwrap();
        let got = refine(&Concept::some("near", Concept::Top), &ctx);
        assert!(!got.is_empty());
        assert!(got.iter().all(|c| c.depth() <= 1));
        let ctx2 = RefinementContext::new(&kb, &cl, price_types(), 2, 5).unwrap();
        let deeper = refine(&Concept::some("near", Concept::Top), &ctx2);
        assert!(deeper.contains(&Concept::some("near", Concept::some("near", Concept::Top))));
    }

    #[test]
    fn conjunct_bound() {
        let kb = hotel_kb();
        let cl = complete(&kb);
        let ctx = RefinementContext::new(&kb, &cl, price_types(), 1, 2).unwrap();
        let two = Concept::And(vec![Concept::atom("Accommodation"), Concept::atom("Hotel")]);
        assert!(refine(&two, &ctx).iter().all(|c| c.max_conjuncts() <= 2));
    }

    #[test]
    fn search_does_not_repeat_candidates() {
        let kb = hotel_kb();
        let cl = complete(&kb);
        let ctx = RefinementContext::new(&kb, &cl, price_types(), 1, 5).unwrap();
        let mut search = RefinementSearch::new();
        let first = search.refine(&Concept::Top, &ctx);
        let again = search.refine(&Concept::Top, &ctx);
        assert!(!first.is_empty());
        assert!(again.is_empty());
    }

    #[test]
    fn excluded_atoms_are_not_proposed() {
        let kb = hotel_kb();
        let cl = complete(&kb);
        let mut ctx = RefinementContext::new(&kb, &cl, price_types(), 1, 5).unwrap();
        ctx.exclude_atom("Hotel");
        assert!(!refine(&Concept::Top, &ctx).contains(&Concept::atom("Hotel")));
    }

    #[test]
    fn bounds_must_be_positive() {
        let kb = hotel_kb();
        let cl = complete(&kb);
        assert!(RefinementContext::new(&kb, &cl, BTreeMap::new(), 0, 5).is_err());
    }
}
