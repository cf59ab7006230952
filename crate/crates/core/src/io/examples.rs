use std::collections::BTreeSet;
use std::fmt::Write;

use super::IoError;
use crate::learn::TrainingSet;

/// Reads `pos <individual>` / `neg <individual>` lines.
pub fn parse_examples(text: &str) -> Result<TrainingSet, IoError> {
    let mut positives = BTreeSet::new();
    let mut non_positives = BTreeSet::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let bad = |message: String| IoError::Syntax { line: n + 1, message };
        match fields.as_slice() {
            ["pos", a] => positives.insert(a.to_string()),
            ["neg", a] => non_positives.insert(a.to_string()),
            _ => return Err(bad(format!("expected `pos <individual>` or `neg <individual>`, got `{line}`"))),
        };
    }
    TrainingSet::new(positives, non_positives).map_err(|e| IoError::Syntax { line: 0, message: e.to_string() })
}

pub fn serialize_examples(e: &TrainingSet) -> String {
    let mut out = String::new();
    for a in &e.positives {
        writeln!(out, "pos {a}").unwrap();
    }
    for a in &e.non_positives {
        writeln!(out, "neg {a}").unwrap();
    }
    out
}
