use std::collections::{BTreeMap, BTreeSet};

use super::IoError;
use crate::kb::{Assertion, Concept, DatatypePredicate, KnowledgeBase, Literal, ValueType};
use crate::learn::{LearnError, TrainingSet};

/// Name of the class subsuming every target class.
pub const CLASS_CONCEPT: &str = "class";

/// KB built from a table, with the individuals of each target class.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvertedTable {
    pub kb: KnowledgeBase,
    pub attributes: Vec<(String, ValueType)>,
    pub classes: BTreeMap<String, BTreeSet<String>>,
}

impl ConvertedTable {
    /// Members of `target` are positives, every other row is non-positive.
    pub fn examples_for(&self, target: &str) -> Result<TrainingSet, LearnError> {
        let positives = self.classes.get(target).cloned().unwrap_or_default();
        let non_positives = self
            .classes
            .iter()
            .filter(|(c, _)| c.as_str() != target)
            .flat_map(|(_, m)| m.iter().cloned())
            .collect();
        TrainingSet::new(positives, non_positives)
    }

    /// Number of class names: the targets plus `class`.
    pub fn class_count(&self) -> usize {
        self.classes.len() + 1
    }
}

fn sanitize(s: &str) -> String {
    s.trim()
        .chars()
        .map(|c| if c.is_whitespace() || c == '(' || c == ')' || c == '#' { '_' } else { c })
        .collect()
}

fn is_missing(s: &str) -> bool {
    let s = s.trim();
    s.is_empty() || s == "?"
}

fn infer_type(values: &[&str]) -> Option<ValueType> {
    let present: Vec<&str> = values.iter().map(|v| v.trim()).filter(|v| !is_missing(v)).collect();
    [ValueType::Boolean, ValueType::Integer, ValueType::Real]
        .into_iter()
        .find(|t| present.iter().all(|v| t.parse_literal(v).is_some()))
}

/// Converts a CSV table whose last column is the class label.
///
/// A first row whose attribute cells are not all literals is taken as a
/// header; otherwise attributes are named `attr1`, `attr2`, …. Every
/// attribute becomes a functional data property and row `r` becomes the
/// individual `a<r>`.
pub fn convert_table(csv_text: &str) -> Result<ConvertedTable, IoError> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(csv_text.as_bytes());
    let mut rows: Vec<Vec<String>> = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| IoError::Table(e.to_string()))?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        rows.push(rec.iter().map(str::to_string).collect());
    }
    if rows.is_empty() {
        return Err(IoError::EmptyDataset);
    }
    let width = rows[0].len();
    if width < 2 {
        return Err(IoError::Table("need at least one attribute and a class column".into()));
    }
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != width) {
        return Err(IoError::Table(format!("row {} has {} fields, expected {width}", i + 1, r.len())));
    }

    let looks_like_header = rows[0][..width - 1]
        .iter()
        .any(|v| !is_missing(v) && Literal::parse_untyped(v.trim()).is_none());
    let (names, data): (Vec<String>, &[Vec<String>]) = if looks_like_header {
        (rows[0][..width - 1].iter().map(|h| sanitize(h)).collect(), &rows[1..])
    } else {
        ((1..width).map(|i| format!("attr{i}")).collect(), &rows[..])
    };
    if data.is_empty() {
        return Err(IoError::EmptyDataset);
    }

    let mut attributes = Vec::with_capacity(names.len());
    for (j, name) in names.iter().enumerate() {
        let column: Vec<&str> = data.iter().map(|r| r[j].as_str()).collect();
        let ty = infer_type(&column).ok_or_else(|| {
            let bad = column
                .iter()
                .find(|v| !is_missing(v) && Literal::parse_untyped(v.trim()).is_none())
                .or_else(|| column.first())
                .unwrap();
            IoError::TypeInconsistency { column: name.clone(), value: bad.to_string() }
        })?;
        attributes.push((name.clone(), ty));
    }

    let mut classes: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    let mut kb = KnowledgeBase::new();
    let err = |e| IoError::Kb { line: 0, source: e };
    kb.declare_concept(CLASS_CONCEPT).map_err(err)?;
    let targets: BTreeSet<String> = data.iter().map(|r| sanitize(&r[width - 1])).collect();
    for t in &targets {
        kb.declare_concept(t.clone()).map_err(err)?;
    }
    for (name, ty) in &attributes {
        kb.declare_data_property(name.clone(), *ty, true).map_err(err)?;
    }
    for t in &targets {
        kb.add_gci(Concept::atom(t.clone()), Concept::atom(CLASS_CONCEPT)).map_err(err)?;
    }
    for (name, ty) in &attributes {
        kb.add_gci(Concept::atom(CLASS_CONCEPT), Concept::some_data(name.clone(), DatatypePredicate::range(*ty)))
            .map_err(err)?;
    }
    for (r, row) in data.iter().enumerate() {
        let individual = format!("a{}", r + 1);
        let target = sanitize(&row[width - 1]);
        kb.add_assertion(Assertion::Concept { individual: individual.clone(), concept: target.clone() })
            .map_err(err)?;
        for ((name, ty), cell) in attributes.iter().zip(row) {
            if is_missing(cell) {
                continue;
            }
            let value = ty.parse_literal(cell.trim()).expect("type inferred from the column");
            kb.add_assertion(Assertion::Data { individual: individual.clone(), property: name.clone(), value })
                .map_err(err)?;
        }
        classes.entry(target).or_default().insert(individual);
    }
    Ok(ConvertedTable { kb, attributes, classes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_is_detected() {
        let t = convert_table("x,y,label\n1,2.5,A\n3,4,B\n").unwrap();
        assert_eq!(t.attributes, vec![("x".into(), ValueType::Integer), ("y".into(), ValueType::Real)]);
        assert_eq!(t.class_count(), 3);
        let t = convert_table("1,2.5,A\n3,4,B\n").unwrap();
        assert_eq!(t.attributes[0].0, "attr1");
        assert_eq!(t.classes["A"].len(), 1);
    }

    #[test]
    fn inconsistent_column_is_rejected() {
        let err = convert_table("x,label\n1,A\ntrue,B\n").unwrap_err();
        assert!(matches!(err, IoError::TypeInconsistency { .. }));
        assert!(matches!(convert_table(""), Err(IoError::EmptyDataset)));
        assert!(matches!(convert_table("x,label\n"), Err(IoError::EmptyDataset)));
    }

    #[test]
    fn booleans_and_missing_cells() {
        let t = convert_table("flag,n,label\ntrue,?,A\nfalse,2,B\n").unwrap();
        assert_eq!(t.attributes[0].1, ValueType::Boolean);
        let data = t.kb.abox().iter().filter(|a| matches!(a, Assertion::Data { .. })).count();
        assert_eq!(data, 3);
    }
}
