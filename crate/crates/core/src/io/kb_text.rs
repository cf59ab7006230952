use std::collections::BTreeMap;
use std::fmt::Write;

use super::syntax::{Parser, Vocabulary};
use super::IoError;
use crate::kb::{Assertion, Concept, DatatypePredicate, KnowledgeBase, Shape, ValueType};

fn syntax(line: usize, message: impl Into<String>) -> IoError {
    IoError::Syntax { line, message: message.into() }
}

/// Parses the line-based KB format.
pub fn parse_kb(text: &str) -> Result<KnowledgeBase, IoError> {
    let mut kb = KnowledgeBase::new();
    let no_extra = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (directive, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let args: Vec<&str> = rest.split_whitespace().collect();
        let at = |e| IoError::Kb { line: line_no, source: e };
        let arity = |want: usize| {
            if args.len() == want {
                Ok(())
            } else {
                Err(syntax(line_no, format!("`{directive}` takes {want} argument(s), got {}", args.len())))
            }
        };
        match directive {
            "class" => {
                arity(1)?;
                kb.declare_concept(args[0]).map_err(at)?;
            }
            "objprop" => {
                arity(1)?;
                kb.declare_object_property(args[0]).map_err(at)?;
            }
            "dataprop" => {
                let functional = match args.as_slice() {
                    [_, _] => false,
                    [_, _, "functional"] => true,
                    _ => return Err(syntax(line_no, "expected `dataprop <name> real|int|bool [functional]`")),
                };
                let ty = ValueType::from_keyword(args[1])
                    .ok_or_else(|| syntax(line_no, format!("unknown value type `{}`", args[1])))?;
                kb.declare_data_property(args[0], ty, functional).map_err(at)?;
            }
            "datatype" => {
                if args.len() < 3 {
                    return Err(syntax(line_no, "expected `datatype <label> <shape> <params...>`"));
                }
                let params = args[2..]
                    .iter()
                    .map(|p| p.parse::<f64>().map_err(|_| syntax(line_no, format!("bad number `{p}`"))))
                    .collect::<Result<Vec<_>, _>>()?;
                let shape = Shape::from_params(args[1], &params).map_err(at)?;
                kb.declare_datatype(DatatypePredicate::new(args[0], shape).map_err(at)?).map_err(at)?;
            }
            "individual" => {
                arity(1)?;
                kb.declare_individual(args[0]);
            }
            "gci" => {
                let vocab = Vocabulary { kb: Some(&kb), datatypes: &no_extra };
                let mut p = Parser::new(rest, &vocab);
                let body = p.conjunction().map_err(|m| syntax(line_no, m))?;
                if p.at_end() {
                    return Err(syntax(line_no, "missing head after gci body"));
                }
                let head = p.conjunction().map_err(|m| syntax(line_no, m))?;
                if !p.at_end() {
                    return Err(syntax(line_no, "trailing input after gci head"));
                }
                kb.add_gci(body, head).map_err(at)?;
            }
            "instance" => {
                let (individual, expr) = rest
                    .trim()
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| syntax(line_no, "expected `instance <individual> <concept>`"))?;
                let vocab = Vocabulary { kb: Some(&kb), datatypes: &no_extra };
                let c = super::syntax::parse_concept_with(expr, &vocab).map_err(|m| syntax(line_no, m))?;
                kb.check_concept(&c).map_err(at)?;
                kb.assert_concept(individual, &c).map_err(at)?;
            }
            "related" => {
                arity(3)?;
                kb.add_assertion(Assertion::Role {
                    subject: args[0].into(),
                    role: args[1].into(),
                    object: args[2].into(),
                })
                .map_err(at)?;
            }
            "value" => {
                arity(3)?;
                let decl = kb
                    .data_property(args[1])
                    .ok_or_else(|| at(crate::kb::KbError::Undeclared { kind: "data property", name: args[1].into() }))?;
                let value = decl
                    .value_type
                    .parse_literal(args[2])
                    .ok_or_else(|| syntax(line_no, format!("`{}` is not a valid {} literal", args[2], decl.value_type.keyword())))?;
                kb.add_assertion(Assertion::Data { individual: args[0].into(), property: args[1].into(), value })
                    .map_err(at)?;
            }
            other => return Err(syntax(line_no, format!("unknown directive `{other}`"))),
        }
    }
    Ok(kb)
}

/// Writes `kb` in the format read by [`parse_kb`].
pub fn serialize_kb(kb: &KnowledgeBase) -> String {
    let mut out = String::new();
    for c in kb.concepts() {
        writeln!(out, "class {c}").unwrap();
    }
    for r in kb.object_properties() {
        writeln!(out, "objprop {r}").unwrap();
    }
    for (s, d) in kb.data_properties() {
        let functional = if d.functional { " functional" } else { "" };
        writeln!(out, "dataprop {s} {}{functional}", d.value_type.keyword()).unwrap();
    }
    for d in kb.datatypes().values() {
        write!(out, "datatype {} {}", d.label, d.shape.keyword()).unwrap();
        for p in d.shape.params() {
            write!(out, " {p}").unwrap();
        }
        out.push('\n');
    }
    for a in kb.individuals() {
        writeln!(out, "individual {a}").unwrap();
    }
    for g in kb.tbox() {
        let body = match &g.body {
            // a conjunctive head must not be read as part of the body
            b @ Concept::And(_) if matches!(g.head, Concept::And(_)) => format!("({b})"),
            b => b.to_string(),
        };
        writeln!(out, "gci {body} {}", g.head).unwrap();
    }
    for a in kb.abox() {
        match a {
            Assertion::Concept { individual, concept } => writeln!(out, "instance {individual} {concept}"),
            Assertion::Role { subject, role, object } => writeln!(out, "related {subject} {role} {object}"),
            Assertion::Data { individual, property, value } => writeln!(out, "value {individual} {property} {value}"),
        }
        .unwrap();
    }
    out
}
