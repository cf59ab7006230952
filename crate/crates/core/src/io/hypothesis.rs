use std::collections::BTreeMap;
use std::fmt::Write;

use super::syntax::{parse_concept_with, Vocabulary};
use super::IoError;
use crate::eval::TrainedModel;
use crate::fuzzify::{FuzzificationMethod, FuzzyDatatype, Provenance};
use crate::kb::{DatatypePredicate, Shape};
use crate::learn::{BoostEnsemble, FoilRule, FoilRules, Hypothesis, WeakLearner};

const SUBCLASS: &str = " SubClassOf ";

/// Renders a hypothesis as a rule listing followed by a machine block
/// (`@` lines) holding every number at full precision.
///
/// Only datatypes referenced by the rule bodies are written.
pub fn serialize_hypothesis(h: &Hypothesis, datatypes: &[FuzzyDatatype]) -> String {
    let used = crate::eval::used_datatypes(h, datatypes);
    let mut out = String::new();
    let mut machine = String::new();
    match h {
        Hypothesis::Boost(e) => {
            for wl in &e.weak_learners {
                writeln!(out, "# Weak Learner {}", wl.name).unwrap();
                for body in &wl.bodies {
                    writeln!(out, "{body}{SUBCLASS}{}", wl.name).unwrap();
                }
                out.push('\n');
            }
            if !e.weak_learners.is_empty() {
                let terms: Vec<String> =
                    e.alphas.iter().zip(&e.weak_learners).map(|(a, wl)| format!("{a:.3} * {}", wl.name)).collect();
                writeln!(out, "# Real Adaboost aggregation\n{}{SUBCLASS}{}\n", terms.join(" + "), e.target).unwrap();
            }
            writeln!(machine, "@kind boost\n@target {}", e.target).unwrap();
            for (a, wl) in e.alphas.iter().zip(&e.weak_learners) {
                writeln!(machine, "@alpha {} {a}", wl.name).unwrap();
            }
        }
        Hypothesis::Foil(f) => {
            writeln!(out, "# FOIL-DL rules").unwrap();
            for r in &f.rules {
                writeln!(out, "{}{SUBCLASS}{} {:.4}", r.body, f.target, r.degree).unwrap();
            }
            out.push('\n');
            writeln!(machine, "@kind foil\n@target {}", f.target).unwrap();
            for (i, r) in f.rules.iter().enumerate() {
                writeln!(machine, "@degree {} {}", i + 1, r.degree).unwrap();
            }
        }
    }
    if let Some(first) = used.first() {
        writeln!(out, "# Fuzzy datatypes ({})", first.provenance.method.title()).unwrap();
        for d in &used {
            writeln!(out, "{}", d.listing_line()).unwrap();
        }
        out.push('\n');
    }
    for d in &used {
        write!(
            machine,
            "@datatype {} {} {} {} {}",
            d.predicate.label,
            d.property,
            d.provenance.method.name(),
            d.provenance.partitions,
            d.predicate.shape.keyword()
        )
        .unwrap();
        for p in d.predicate.shape.params() {
            write!(machine, " {p}").unwrap();
        }
        machine.push('\n');
    }
    out.push_str(&machine);
    out
}

fn bad(line: usize, message: impl Into<String>) -> IoError {
    IoError::Syntax { line, message: message.into() }
}

fn number(line: usize, s: &str) -> Result<f64, IoError> {
    s.parse::<f64>().map_err(|_| bad(line, format!("bad number `{s}`")))
}

/// Reads a file written by [`serialize_hypothesis`].
pub fn parse_hypothesis(text: &str) -> Result<TrainedModel, IoError> {
    let mut kind = None;
    let mut target = None;
    let mut alphas: Vec<(String, f64)> = Vec::new();
    let mut degrees: BTreeMap<usize, f64> = BTreeMap::new();
    let mut datatypes: Vec<FuzzyDatatype> = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        let Some(rest) = line.trim().strip_prefix('@') else {
            continue;
        };
        let f: Vec<&str> = rest.split_whitespace().collect();
        match f.as_slice() {
            ["kind", k] => kind = Some(k.to_string()),
            ["target", t] => target = Some(t.to_string()),
            ["alpha", name, a] => alphas.push((name.to_string(), number(line_no, a)?)),
            ["degree", i, d] => {
                let i = i.parse::<usize>().map_err(|_| bad(line_no, format!("bad rule index `{i}`")))?;
                degrees.insert(i, number(line_no, d)?);
            }
            ["datatype", label, property, method, partitions, shape, params @ ..] => {
                let method: FuzzificationMethod = method.parse().map_err(|_| bad(line_no, "unknown method"))?;
                let partitions = partitions.parse::<usize>().map_err(|_| bad(line_no, "bad partition count"))?;
                let params = params.iter().map(|p| number(line_no, p)).collect::<Result<Vec<_>, _>>()?;
                let shape = Shape::from_params(shape, &params).map_err(|e| IoError::Kb { line: line_no, source: e })?;
                let predicate =
                    DatatypePredicate::new(*label, shape).map_err(|e| IoError::Kb { line: line_no, source: e })?;
                datatypes.push(FuzzyDatatype {
                    property: property.to_string(),
                    predicate,
                    provenance: Provenance { method, partitions },
                });
            }
            _ => return Err(bad(line_no, format!("unknown machine line `@{rest}`"))),
        }
    }
    let target = target.ok_or_else(|| bad(0, "missing `@target` line"))?;
    let by_label: BTreeMap<String, DatatypePredicate> =
        datatypes.iter().map(|d| (d.predicate.label.clone(), d.predicate.clone())).collect();
    let vocab = Vocabulary { kb: None, datatypes: &by_label };

    let mut rules: Vec<(usize, String, String)> = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('@') {
            continue;
        }
        if let Some((body, head)) = line.rsplit_once(SUBCLASS) {
            rules.push((n + 1, body.to_string(), head.to_string()));
        }
    }

    let hypothesis = match kind.as_deref() {
        Some("boost") => {
            let mut weak_learners: Vec<WeakLearner> =
                alphas.iter().map(|(name, _)| WeakLearner { name: name.clone(), bodies: Vec::new() }).collect();
            for (line_no, body, head) in rules {
                if head == target {
                    continue; // the aggregation line
                }
                let wl = weak_learners
                    .iter_mut()
                    .find(|w| w.name == head)
                    .ok_or_else(|| bad(line_no, format!("rule head `{head}` has no `@alpha` line")))?;
                wl.bodies.push(parse_concept_with(&body, &vocab).map_err(|m| bad(line_no, m))?);
            }
            Hypothesis::Boost(BoostEnsemble {
                target,
                weak_learners,
                alphas: alphas.into_iter().map(|(_, a)| a).collect(),
            })
        }
        Some("foil") => {
            let mut out = Vec::new();
            for (i, (line_no, body, head)) in rules.into_iter().enumerate() {
                let (head, printed) = head
                    .split_once(' ')
                    .ok_or_else(|| bad(line_no, "expected `<body> SubClassOf <target> <degree>`"))?;
                if head != target {
                    return Err(bad(line_no, format!("rule head `{head}` differs from target `{target}`")));
                }
                let degree = match degrees.get(&(i + 1)) {
                    Some(d) => *d,
                    None => number(line_no, printed.trim())?,
                };
                out.push(FoilRule { body: parse_concept_with(&body, &vocab).map_err(|m| bad(line_no, m))?, degree });
            }
            Hypothesis::Foil(FoilRules { target, rules: out })
        }
        Some(other) => return Err(bad(0, format!("unknown hypothesis kind `{other}`"))),
        None => return Err(bad(0, "missing `@kind` line")),
    };
    Ok(TrainedModel { hypothesis, datatypes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kb::Concept;

    fn wine_like() -> (Hypothesis, Vec<FuzzyDatatype>) {
        let prov = Provenance { method: FuzzificationMethod::CMeans, partitions: 7 };
        let ci = FuzzyDatatype {
            property: "ColorIntensity".into(),
            predicate: DatatypePredicate::left_shoulder("ColorIntensity_VVL", 2.66, 3.64).unwrap(),
            provenance: prov,
        };
        let alc = FuzzyDatatype {
            property: "Alcohol".into(),
            predicate: DatatypePredicate::left_shoulder("Alcohol_VVL", 11.81, 12.29).unwrap(),
            provenance: prov,
        };
        let body = Concept::some_data("ColorIntensity", ci.predicate.clone());
        let both = Concept::and([Concept::some_data("Alcohol", alc.predicate.clone()), body.clone()]);
        let wl = |i: usize, bodies: Vec<Concept>| WeakLearner { name: format!("WL{i}"), bodies };
        let h = Hypothesis::Boost(BoostEnsemble {
            target: "2".into(),
            weak_learners: vec![wl(1, vec![both.clone()]), wl(2, vec![both]), wl(3, vec![body])],
            alphas: vec![1.1991, 0.5443, 0.2718],
        });
        (h, vec![alc, ci])
    }

    #[test]
    fn listing_shape() {
        let (h, dts) = wine_like();
        let text = serialize_hypothesis(&h, &dts);
        assert!(text.contains("# Weak Learner WL3\n(ColorIntensity some ColorIntensity_VVL) SubClassOf WL3\n"));
        assert!(text.contains("# Real Adaboost aggregation\n1.199 * WL1 + 0.544 * WL2 + 0.272 * WL3 SubClassOf 2\n"));
        assert!(text.contains("# Fuzzy datatypes (C-Means)\nAlcohol_VVL left-shoulder 11.81 12.29\n"));
    }

    #[test]
    fn round_trip() {
        let (h, dts) = wine_like();
        let parsed = parse_hypothesis(&serialize_hypothesis(&h, &dts)).unwrap();
        assert_eq!(parsed.hypothesis, h);
        assert_eq!(parsed.datatypes, dts);
    }

    #[test]
    fn foil_round_trip() {
        let h = Hypothesis::Foil(FoilRules {
            target: "GoodHotel".into(),
            rules: vec![FoilRule { body: Concept::atom("Hotel"), degree: 0.56 }],
        });
        let text = serialize_hypothesis(&h, &[]);
        assert!(text.contains("Hotel SubClassOf GoodHotel 0.5600"));
        assert_eq!(parse_hypothesis(&text).unwrap().hypothesis, h);
    }

    #[test]
    fn missing_machine_block() {
        assert!(parse_hypothesis("A SubClassOf WL1\n").is_err());
    }
}
