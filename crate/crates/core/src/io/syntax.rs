//! Surface syntax of concept expressions: `A and (r some (B and C))`,
//! `(s some Label)`, `(s some =79)`, `(s some real)`, `(not A)`, `Thing`.

use std::collections::BTreeMap;

use crate::kb::{Concept, DatatypePredicate, KnowledgeBase, Literal, ValueType};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Token {
    Open,
    Close,
    Word(String),
}

pub(crate) fn tokenize(s: &str) -> Vec<Token> {
    let mut out = Vec::new();
    let mut word = String::new();
    let flush = |word: &mut String, out: &mut Vec<Token>| {
        if !word.is_empty() {
            out.push(Token::Word(std::mem::take(word)));
        }
    };
    for ch in s.chars() {
        match ch {
            '(' | ')' => {
                flush(&mut word, &mut out);
                out.push(if ch == '(' { Token::Open } else { Token::Close });
            }
            c if c.is_whitespace() => flush(&mut word, &mut out),
            c => word.push(c),
        }
    }
    flush(&mut word, &mut out);
    out
}

/// Resolves names while parsing. Without a KB, a filler is data when it
/// is `=lit` or a known datatype label.
pub(crate) struct Vocabulary<'a> {
    pub kb: Option<&'a KnowledgeBase>,
    pub datatypes: &'a BTreeMap<String, DatatypePredicate>,
}

impl Vocabulary<'_> {
    fn data_type(&self, property: &str) -> Option<ValueType> {
        self.kb.and_then(|kb| kb.data_property(property)).map(|d| d.value_type)
    }

    fn datatype(&self, label: &str) -> Option<DatatypePredicate> {
        self.datatypes
            .get(label)
            .or_else(|| self.kb.and_then(|kb| kb.datatype(label)))
            .cloned()
    }

    fn data_filler(&self, property: &str, filler: &str) -> Result<Option<DatatypePredicate>, String> {
        let ty = self.data_type(property);
        if let Some(lit) = filler.strip_prefix('=') {
            let value = match ty {
                Some(t) => t.parse_literal(lit),
                None => Literal::parse_untyped(lit),
            };
            return value
                .map(|v| Some(DatatypePredicate::equals(v)))
                .ok_or_else(|| format!("bad literal `{lit}` for `{property}`"));
        }
        if let Some(d) = self.datatype(filler) {
            return Ok(Some(d));
        }
        if ty.is_some() {
            if let Some(t) = ValueType::from_keyword(filler) {
                return Ok(Some(DatatypePredicate::range(t)));
            }
            return Err(format!("unknown datatype `{filler}` for data property `{property}`"));
        }
        Ok(None)
    }
}

pub(crate) struct Parser<'v, 'a> {
    tokens: Vec<Token>,
    pos: usize,
    vocab: &'v Vocabulary<'a>,
}

impl<'v, 'a> Parser<'v, 'a> {
    pub fn new(text: &str, vocab: &'v Vocabulary<'a>) -> Self {
        Parser { tokens: tokenize(text), pos: 0, vocab }
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_at(&self, k: usize) -> Option<&Token> {
        self.tokens.get(self.pos + k)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn word(&mut self) -> Result<String, String> {
        match self.next() {
            Some(Token::Word(w)) => Ok(w),
            Some(Token::Open) => Err("unexpected `(`".into()),
            Some(Token::Close) => Err("unexpected `)`".into()),
            None => Err("unexpected end of expression".into()),
        }
    }

    fn expect_close(&mut self) -> Result<(), String> {
        match self.next() {
            Some(Token::Close) => Ok(()),
            _ => Err("expected `)`".into()),
        }
    }

    /// `primary ("and" primary)*`
    pub fn conjunction(&mut self) -> Result<Concept, String> {
        let mut parts = vec![self.primary()?];
        while matches!(self.peek(), Some(Token::Word(w)) if w == "and") {
            self.pos += 1;
            parts.push(self.primary()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Concept::And(parts) })
    }

    fn primary(&mut self) -> Result<Concept, String> {
        match self.next() {
            Some(Token::Word(w)) => Ok(match w.as_str() {
                "Thing" => Concept::Top,
                "Nothing" => Concept::Bottom,
                "and" | "some" | "not" => return Err(format!("unexpected keyword `{w}`")),
                _ => Concept::Atom(w),
            }),
            Some(Token::Open) => {
                let inner = self.parenthesized()?;
                self.expect_close()?;
                Ok(inner)
            }
            Some(Token::Close) => Err("unexpected `)`".into()),
            None => Err("unexpected end of expression".into()),
        }
    }

    fn parenthesized(&mut self) -> Result<Concept, String> {
        if matches!(self.peek(), Some(Token::Word(w)) if w == "not") {
            self.pos += 1;
            return Ok(Concept::NegAtom(self.word()?));
        }
        let is_exists = matches!(self.peek(), Some(Token::Word(_)))
            && matches!(self.peek_at(1), Some(Token::Word(w)) if w == "some");
        if !is_exists {
            return self.conjunction();
        }
        let role = self.word()?;
        self.pos += 1;
        if let Some(Token::Word(filler)) = self.peek().cloned() {
            if let Some(d) = self.vocab.data_filler(&role, &filler)? {
                self.pos += 1;
                return Ok(Concept::ExistsData(role, d));
            }
        }
        Ok(Concept::some(role, self.primary()?))
    }
}

/// Parses a complete concept expression.
pub(crate) fn parse_concept_with(text: &str, vocab: &Vocabulary<'_>) -> Result<Concept, String> {
    let mut p = Parser::new(text, vocab);
    let c = p.conjunction()?;
    if !p.at_end() {
        return Err(format!("trailing input after `{c}`"));
    }
    Ok(c)
}

/// Parses a concept expression against the vocabulary of `kb`.
pub fn parse_concept(text: &str, kb: &KnowledgeBase) -> Result<Concept, crate::io::IoError> {
    let empty = BTreeMap::new();
    let vocab = Vocabulary { kb: Some(kb), datatypes: &empty };
    parse_concept_with(text, &vocab).map_err(|message| crate::io::IoError::Syntax { line: 0, message })
}
