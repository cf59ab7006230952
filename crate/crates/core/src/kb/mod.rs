//! Knowledge bases, closure computation and degree evaluation.

mod closure;
mod concept;
mod degree;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

pub use closure::{complete, Closure, AUX_PREFIX};
pub use concept::{eval_membership, Concept, DatatypePredicate, Degree, Literal, Shape, ValueType};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KbError {
    #[error("degree {0} is outside [0, 1]")]
    DegreeOutOfRange(f64),
    #[error("invalid datatype: {0}")]
    InvalidDatatype(String),
    #[error("value `{value}` does not match the domain of datatype `{predicate}`")]
    TypeMismatch { predicate: String, value: String },
    #[error("undeclared {kind} `{name}`")]
    Undeclared { kind: &'static str, name: String },
    #[error("`{name}` is already declared as a {kind}")]
    Redeclared { kind: &'static str, name: String },
    #[error("axiom outside the supported EL fragment: {0}")]
    OutOfFragment(String),
    #[error("unknown individual `{0}`")]
    UnknownIndividual(String),
    #[error("negative weight {weight} for individual `{individual}`")]
    NegativeWeight { individual: String, weight: f64 },
    #[error("expected {expected} weights, got {got}")]
    WeightLength { expected: usize, got: usize },
    #[error("confidence is undefined: the body has zero cardinality")]
    UndefinedConfidence,
}

/// Declaration of a data property.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DataProperty {
    pub value_type: ValueType,
    pub functional: bool,
}

/// Crisp general concept inclusion `body ⊑ head`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gci {
    pub body: Concept,
    pub head: Concept,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Assertion {
    /// `a : A`
    Concept { individual: String, concept: String },
    /// `(a, b) : r`
    Role { subject: String, role: String, object: String },
    /// `a : ∃s.=v`
    Data { individual: String, property: String, value: Literal },
}

impl Assertion {
    pub fn mentions(&self, individual: &str) -> bool {
        match self {
            Assertion::Concept { individual: a, .. } | Assertion::Data { individual: a, .. } => a == individual,
            Assertion::Role { subject, object, .. } => subject == individual || object == individual,
        }
    }
}

/// A crisp knowledge base. Names are validated on insertion, so every name
/// referenced by an axiom is declared.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KnowledgeBase {
    concepts: BTreeSet<String>,
    object_properties: BTreeSet<String>,
    data_properties: BTreeMap<String, DataProperty>,
    datatypes: BTreeMap<String, DatatypePredicate>,
    individuals: BTreeSet<String>,
    tbox: Vec<Gci>,
    abox: Vec<Assertion>,
}

impl KnowledgeBase {
    pub fn new() -> Self {
        Self::default()
    }

    fn check_fresh(&self, name: &str, kind: &'static str) -> Result<(), KbError> {
        let clash = |k: &'static str| Err(KbError::Redeclared { kind: k, name: name.to_string() });
        if kind != "class" && self.concepts.contains(name) {
            return clash("class");
        }
        if kind != "object property" && self.object_properties.contains(name) {
            return clash("object property");
        }
        if kind != "data property" && self.data_properties.contains_key(name) {
            return clash("data property");
        }
        Ok(())
    }

    pub fn declare_concept(&mut self, name: impl Into<String>) -> Result<(), KbError> {
        let name = name.into();
        self.check_fresh(&name, "class")?;
        self.concepts.insert(name);
        Ok(())
    }

    pub fn declare_object_property(&mut self, name: impl Into<String>) -> Result<(), KbError> {
        let name = name.into();
        self.check_fresh(&name, "object property")?;
        self.object_properties.insert(name);
        Ok(())
    }

    pub fn declare_data_property(
        &mut self,
        name: impl Into<String>,
        value_type: ValueType,
        functional: bool,
    ) -> Result<(), KbError> {
        let name = name.into();
        self.check_fresh(&name, "data property")?;
        self.data_properties.insert(name, DataProperty { value_type, functional });
        Ok(())
    }

    /// Registers a named fuzzy datatype usable in concept expressions.
    pub fn declare_datatype(&mut self, d: DatatypePredicate) -> Result<(), KbError> {
        d.shape.validate()?;
        if d.is_inline() {
            return Err(KbError::InvalidDatatype(format!("`{}` cannot be declared by name", d.label)));
        }
        self.datatypes.insert(d.label.clone(), d);
        Ok(())
    }

    pub fn declare_individual(&mut self, name: impl Into<String>) {
        self.individuals.insert(name.into());
    }

    pub fn add_gci(&mut self, body: Concept, head: Concept) -> Result<(), KbError> {
        self.check_concept(&body)?;
        self.check_concept(&head)?;
        closure::check_gci(&body, &head)?;
        self.tbox.push(Gci { body, head });
        Ok(())
    }

    pub fn add_assertion(&mut self, assertion: Assertion) -> Result<(), KbError> {
        match &assertion {
            Assertion::Concept { individual, concept } => {
                self.require_concept(concept)?;
                self.individuals.insert(individual.clone());
            }
            Assertion::Role { subject, role, object } => {
                self.require_role(role)?;
                self.individuals.insert(subject.clone());
                self.individuals.insert(object.clone());
            }
            Assertion::Data { individual, property, value } => {
                let decl = self.require_data_property(property)?;
                let ok = match decl.value_type {
                    ValueType::Boolean => matches!(value, Literal::Boolean(_)),
                    _ => value.value_type().is_numeric(),
                };
                if !ok {
                    return Err(KbError::TypeMismatch { predicate: property.clone(), value: value.to_string() });
                }
                self.individuals.insert(individual.clone());
            }
        }
        self.abox.push(assertion);
        Ok(())
    }

    /// Asserts `a : C` for a conjunction of atoms and `∃s.=v` restrictions.
    pub fn assert_concept(&mut self, individual: &str, concept: &Concept) -> Result<(), KbError> {
        match concept {
            Concept::Atom(a) => self.add_assertion(Assertion::Concept {
                individual: individual.to_string(),
                concept: a.clone(),
            }),
            Concept::And(cs) => cs.iter().try_for_each(|c| self.assert_concept(individual, c)),
            Concept::ExistsData(s, DatatypePredicate { shape: Shape::Equals(v), .. }) => {
                self.add_assertion(Assertion::Data {
                    individual: individual.to_string(),
                    property: s.clone(),
                    value: *v,
                })
            }
            Concept::Top => {
                self.declare_individual(individual);
                Ok(())
            }
            other => Err(KbError::OutOfFragment(format!("concept assertion {individual} : {other}"))),
        }
    }

    fn require_concept(&self, name: &str) -> Result<(), KbError> {
        if self.concepts.contains(name) {
            Ok(())
        } else {
            Err(KbError::Undeclared { kind: "class", name: name.to_string() })
        }
    }

    fn require_role(&self, name: &str) -> Result<(), KbError> {
        if self.object_properties.contains(name) {
            Ok(())
        } else {
            Err(KbError::Undeclared { kind: "object property", name: name.to_string() })
        }
    }

    fn require_data_property(&self, name: &str) -> Result<DataProperty, KbError> {
        self.data_properties
            .get(name)
            .copied()
            .ok_or_else(|| KbError::Undeclared { kind: "data property", name: name.to_string() })
    }

    /// Checks that every name in `c` is declared and datatype predicates
    /// fit the property's value type.
    pub fn check_concept(&self, c: &Concept) -> Result<(), KbError> {
        match c {
            Concept::Top | Concept::Bottom => Ok(()),
            Concept::Atom(a) | Concept::NegAtom(a) => self.require_concept(a),
            Concept::And(cs) => cs.iter().try_for_each(|c| self.check_concept(c)),
            Concept::ExistsObject(r, c) => {
                self.require_role(r)?;
                self.check_concept(c)
            }
            Concept::ExistsData(s, d) => {
                let decl = self.require_data_property(s)?;
                let ok = match d.shape {
                    Shape::Equals(v) => (decl.value_type == ValueType::Boolean) == (v.value_type() == ValueType::Boolean),
                    Shape::Range(t) => (decl.value_type == ValueType::Boolean) == (t == ValueType::Boolean),
                    _ => decl.value_type.is_numeric(),
                };
                if ok {
                    Ok(())
                } else {
                    Err(KbError::TypeMismatch { predicate: d.label.clone(), value: s.clone() })
                }
            }
            Concept::WeightedSum(terms) => terms.iter().try_for_each(|(_, a)| self.require_concept(a)),
        }
    }

    pub fn concepts(&self) -> &BTreeSet<String> {
        &self.concepts
    }

    pub fn object_properties(&self) -> &BTreeSet<String> {
        &self.object_properties
    }

    pub fn data_properties(&self) -> &BTreeMap<String, DataProperty> {
        &self.data_properties
    }

    pub fn data_property(&self, name: &str) -> Option<DataProperty> {
        self.data_properties.get(name).copied()
    }

    pub fn numeric_data_properties(&self) -> impl Iterator<Item = &str> {
        self.data_properties
            .iter()
            .filter(|(_, d)| d.value_type.is_numeric())
            .map(|(n, _)| n.as_str())
    }

    pub fn boolean_data_properties(&self) -> impl Iterator<Item = &str> {
        self.data_properties
            .iter()
            .filter(|(_, d)| d.value_type == ValueType::Boolean)
            .map(|(n, _)| n.as_str())
    }

    pub fn functional_data_properties(&self) -> impl Iterator<Item = &str> {
        self.data_properties.iter().filter(|(_, d)| d.functional).map(|(n, _)| n.as_str())
    }

    pub fn datatypes(&self) -> &BTreeMap<String, DatatypePredicate> {
        &self.datatypes
    }

    pub fn datatype(&self, label: &str) -> Option<&DatatypePredicate> {
        self.datatypes.get(label)
    }

    pub fn individuals(&self) -> &BTreeSet<String> {
        &self.individuals
    }

    pub fn tbox(&self) -> &[Gci] {
        &self.tbox
    }

    pub fn abox(&self) -> &[Assertion] {
        &self.abox
    }

    /// Copy of this KB keeping only the assertions accepted by `keep`.
    /// Individuals stay declared.
    pub fn retain_assertions(&self, mut keep: impl FnMut(&Assertion) -> bool) -> KnowledgeBase {
        let mut kb = self.clone();
        kb.abox.retain(|a| keep(a));
        kb
    }

    /// Copy without any individual in `drop` (declarations and assertions).
    pub fn without_individuals(&self, drop: &BTreeSet<String>) -> KnowledgeBase {
        let mut kb = self.retain_assertions(|a| !drop.iter().any(|d| a.mentions(d)));
        kb.individuals.retain(|i| !drop.contains(i));
        kb
    }

    /// Individuals asserted (not inferred) to be instances of `concept`.
    pub fn asserted_instances(&self, concept: &str) -> BTreeSet<String> {
        self.abox
            .iter()
            .filter_map(|a| match a {
                Assertion::Concept { individual, concept: c } if c == concept => Some(individual.clone()),
                _ => None,
            })
            .collect()
    }
}
