use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use super::KbError;

/// Truth degree in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Degree(f64);

impl Degree {
    pub const ZERO: Degree = Degree(0.0);
    pub const ONE: Degree = Degree(1.0);

    pub fn new(value: f64) -> Result<Self, KbError> {
        if (0.0..=1.0).contains(&value) {
            Ok(Degree(value))
        } else {
            Err(KbError::DegreeOutOfRange(value))
        }
    }

    /// Clamps into `[0, 1]`; NaN maps to 0.
    pub fn saturating(value: f64) -> Self {
        if value.is_nan() {
            Degree(0.0)
        } else {
            Degree(value.clamp(0.0, 1.0))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Crisp ceiling: any positive degree counts as 1.
    pub fn ceil(self) -> f64 {
        if self.0 > 0.0 {
            1.0
        } else {
            0.0
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.4}", self.0)
    }
}

/// Value type of a data property.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ValueType {
    Real,
    Integer,
    Boolean,
}

impl ValueType {
    pub fn keyword(self) -> &'static str {
        match self {
            ValueType::Real => "real",
            ValueType::Integer => "int",
            ValueType::Boolean => "bool",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        match s {
            "real" | "double" | "float" | "decimal" => Some(ValueType::Real),
            "int" | "integer" => Some(ValueType::Integer),
            "bool" | "boolean" => Some(ValueType::Boolean),
            _ => None,
        }
    }

    pub fn is_numeric(self) -> bool {
        matches!(self, ValueType::Real | ValueType::Integer)
    }

    pub fn parse_literal(self, s: &str) -> Option<Literal> {
        match self {
            ValueType::Real => s.parse::<f64>().ok().filter(|v| v.is_finite()).map(Literal::Real),
            ValueType::Integer => s.parse::<i64>().ok().map(Literal::Integer),
            ValueType::Boolean => match s {
                "true" => Some(Literal::Boolean(true)),
                "false" => Some(Literal::Boolean(false)),
                _ => None,
            },
        }
    }
}

/// A typed data value.
#[derive(Debug, Clone, Copy)]
pub enum Literal {
    Real(f64),
    Integer(i64),
    Boolean(bool),
}

impl Literal {
    pub fn as_f64(self) -> Option<f64> {
        match self {
            Literal::Real(v) => Some(v),
            Literal::Integer(v) => Some(v as f64),
            Literal::Boolean(_) => None,
        }
    }

    pub fn value_type(self) -> ValueType {
        match self {
            Literal::Real(_) => ValueType::Real,
            Literal::Integer(_) => ValueType::Integer,
            Literal::Boolean(_) => ValueType::Boolean,
        }
    }

    /// Untyped literal as written in a concept expression (`=true`, `=79`).
    pub fn parse_untyped(s: &str) -> Option<Literal> {
        match s {
            "true" => Some(Literal::Boolean(true)),
            "false" => Some(Literal::Boolean(false)),
            _ => s
                .parse::<i64>()
                .map(Literal::Integer)
                .ok()
                .or_else(|| s.parse::<f64>().ok().filter(|v| v.is_finite()).map(Literal::Real)),
        }
    }

    fn rank(self) -> u8 {
        match self {
            Literal::Real(_) | Literal::Integer(_) => 0,
            Literal::Boolean(_) => 1,
        }
    }
}

impl PartialEq for Literal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Literal {}

impl Ord for Literal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Literal::Boolean(a), Literal::Boolean(b)) => a.cmp(b),
            (Literal::Integer(a), Literal::Integer(b)) => a.cmp(b),
            (a, b) => match (a.as_f64(), b.as_f64()) {
                (Some(x), Some(y)) => x.total_cmp(&y),
                _ => a.rank().cmp(&b.rank()),
            },
        }
    }
}

impl PartialOrd for Literal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Hash for Literal {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Literal::Boolean(b) => {
                1u8.hash(state);
                b.hash(state);
            }
            other => {
                0u8.hash(state);
                // Integer and Real compare numerically, so hash the f64 form.
                let v = other.as_f64().unwrap_or_default();
                (if v == 0.0 { 0.0f64 } else { v }).to_bits().hash(state);
            }
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Real(v) => write!(f, "{v}"),
            Literal::Integer(v) => write!(f, "{v}"),
            Literal::Boolean(v) => write!(f, "{v}"),
        }
    }
}

/// Membership function of a fuzzy datatype.
#[derive(Debug, Clone, Copy)]
pub enum Shape {
    LeftShoulder { a: f64, b: f64 },
    RightShoulder { a: f64, b: f64 },
    Triangular { a: f64, b: f64, c: f64 },
    Trapezoidal { a: f64, b: f64, c: f64, d: f64 },
    /// Crisp singleton `{v}`.
    Equals(Literal),
    /// Every value of the given type (the `∃s.double` of a property range).
    Range(ValueType),
}

impl Shape {
    pub fn keyword(&self) -> &'static str {
        match self {
            Shape::LeftShoulder { .. } => "left-shoulder",
            Shape::RightShoulder { .. } => "right-shoulder",
            Shape::Triangular { .. } => "triangular",
            Shape::Trapezoidal { .. } => "trapezoidal",
            Shape::Equals(_) => "equals",
            Shape::Range(_) => "range",
        }
    }

    /// Numeric parameters of the piecewise-linear shapes.
    pub fn params(&self) -> Vec<f64> {
        match *self {
            Shape::LeftShoulder { a, b } | Shape::RightShoulder { a, b } => vec![a, b],
            Shape::Triangular { a, b, c } => vec![a, b, c],
            Shape::Trapezoidal { a, b, c, d } => vec![a, b, c, d],
            Shape::Equals(_) | Shape::Range(_) => Vec::new(),
        }
    }

    /// Builds a piecewise-linear shape from its keyword and parameters.
    pub fn from_params(keyword: &str, p: &[f64]) -> Result<Shape, KbError> {
        let shape = match (keyword, p) {
            ("left-shoulder" | "ls", [a, b]) => Shape::LeftShoulder { a: *a, b: *b },
            ("right-shoulder" | "rs", [a, b]) => Shape::RightShoulder { a: *a, b: *b },
            ("triangular" | "tri", [a, b, c]) => Shape::Triangular { a: *a, b: *b, c: *c },
            ("trapezoidal" | "trz", [a, b, c, d]) => Shape::Trapezoidal { a: *a, b: *b, c: *c, d: *d },
            _ => {
                return Err(KbError::InvalidDatatype(format!(
                    "unknown shape `{keyword}` with {} parameters",
                    p.len()
                )))
            }
        };
        shape.validate()?;
        Ok(shape)
    }

    pub fn validate(&self) -> Result<(), KbError> {
        let p = self.params();
        if p.iter().any(|v| !v.is_finite()) {
            return Err(KbError::InvalidDatatype(format!("non-finite parameter in {}", self.keyword())));
        }
        if p.windows(2).any(|w| w[0] > w[1]) {
            return Err(KbError::InvalidDatatype(format!(
                "{} parameters must be non-decreasing, got {p:?}",
                self.keyword()
            )));
        }
        Ok(())
    }

    /// Membership of a numeric value; `None` for the non-numeric shapes.
    pub fn membership_f64(&self, x: f64) -> Option<f64> {
        let m = match *self {
            Shape::LeftShoulder { a, b } => {
                if x <= a {
                    1.0
                } else if x >= b {
                    0.0
                } else {
                    (b - x) / (b - a)
                }
            }
            Shape::RightShoulder { a, b } => {
                if x >= b {
                    1.0
                } else if x <= a {
                    0.0
                } else {
                    (x - a) / (b - a)
                }
            }
            Shape::Triangular { a, b, c } => {
                if x == b {
                    1.0
                } else if x <= a || x >= c {
                    0.0
                } else if x < b {
                    (x - a) / (b - a)
                } else {
                    (c - x) / (c - b)
                }
            }
            Shape::Trapezoidal { a, b, c, d } => {
                if (b..=c).contains(&x) {
                    1.0
                } else if x <= a || x >= d {
                    0.0
                } else if x < b {
                    (x - a) / (b - a)
                } else {
                    (d - x) / (d - c)
                }
            }
            Shape::Equals(_) | Shape::Range(_) => return None,
        };
        Some(m.clamp(0.0, 1.0))
    }

    /// Membership of a typed value, `None` on a type mismatch.
    pub fn membership(&self, v: Literal) -> Option<f64> {
        match self {
            Shape::Equals(lit) => {
                let compatible = lit.value_type().is_numeric() == v.value_type().is_numeric();
                compatible.then(|| if *lit == v { 1.0 } else { 0.0 })
            }
            Shape::Range(ty) => {
                let ok = if ty.is_numeric() {
                    v.value_type().is_numeric()
                } else {
                    v.value_type() == *ty
                };
                ok.then_some(1.0)
            }
            _ => v.as_f64().and_then(|x| self.membership_f64(x)),
        }
    }

    /// Peak (or plateau midpoint) of the shape, used for ordering.
    pub fn center(&self) -> f64 {
        match *self {
            Shape::LeftShoulder { a, .. } => a,
            Shape::RightShoulder { b, .. } => b,
            Shape::Triangular { b, .. } => b,
            Shape::Trapezoidal { b, c, .. } => 0.5 * (b + c),
            Shape::Equals(v) => v.as_f64().unwrap_or(if matches!(v, Literal::Boolean(true)) { 1.0 } else { 0.0 }),
            Shape::Range(_) => 0.0,
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Shape::LeftShoulder { .. } => 0,
            Shape::Triangular { .. } => 1,
            Shape::Trapezoidal { .. } => 2,
            Shape::RightShoulder { .. } => 3,
            Shape::Equals(_) => 4,
            Shape::Range(_) => 5,
        }
    }
}

impl PartialEq for Shape {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Shape {}

impl Ord for Shape {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank()).then_with(|| match (self, other) {
            (Shape::Equals(a), Shape::Equals(b)) => a.cmp(b),
            (Shape::Range(a), Shape::Range(b)) => a.cmp(b),
            _ => {
                let (p, q) = (self.params(), other.params());
                p.iter()
                    .zip(&q)
                    .map(|(x, y)| x.total_cmp(y))
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal)
            }
        })
    }
}

impl PartialOrd for Shape {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Hash for Shape {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rank().hash(state);
        match self {
            Shape::Equals(v) => v.hash(state),
            Shape::Range(t) => t.hash(state),
            _ => {
                for p in self.params() {
                    p.to_bits().hash(state);
                }
            }
        }
    }
}

/// A named fuzzy datatype predicate, e.g. `Price_Fair = tri(50, 79, 108)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DatatypePredicate {
    pub label: String,
    pub shape: Shape,
}

impl DatatypePredicate {
    pub fn new(label: impl Into<String>, shape: Shape) -> Result<Self, KbError> {
        shape.validate()?;
        Ok(DatatypePredicate { label: label.into(), shape })
    }

    pub fn left_shoulder(label: impl Into<String>, a: f64, b: f64) -> Result<Self, KbError> {
        Self::new(label, Shape::LeftShoulder { a, b })
    }

    pub fn right_shoulder(label: impl Into<String>, a: f64, b: f64) -> Result<Self, KbError> {
        Self::new(label, Shape::RightShoulder { a, b })
    }

    pub fn triangular(label: impl Into<String>, a: f64, b: f64, c: f64) -> Result<Self, KbError> {
        Self::new(label, Shape::Triangular { a, b, c })
    }

    pub fn trapezoidal(label: impl Into<String>, a: f64, b: f64, c: f64, d: f64) -> Result<Self, KbError> {
        Self::new(label, Shape::Trapezoidal { a, b, c, d })
    }

    /// `=v`; the label is the surface form.
    pub fn equals(v: Literal) -> Self {
        DatatypePredicate { label: format!("={v}"), shape: Shape::Equals(v) }
    }

    pub fn range(ty: ValueType) -> Self {
        DatatypePredicate { label: ty.keyword().to_string(), shape: Shape::Range(ty) }
    }

    /// True for predicates that are written inline (`=v`, type names)
    /// rather than referenced by label.
    pub fn is_inline(&self) -> bool {
        matches!(self.shape, Shape::Equals(_) | Shape::Range(_))
    }
}

/// Evaluates a datatype predicate on a typed value.
pub fn eval_membership(d: &DatatypePredicate, v: Literal) -> Result<Degree, KbError> {
    d.shape
        .membership(v)
        .map(Degree::saturating)
        .ok_or_else(|| KbError::TypeMismatch { predicate: d.label.clone(), value: v.to_string() })
}

/// Fuzzy EL concept expressions, extended with atomic negation and the
/// weighted sum used by ensemble hypotheses.
#[derive(Debug, Clone)]
pub enum Concept {
    Top,
    Bottom,
    Atom(String),
    NegAtom(String),
    And(Vec<Concept>),
    ExistsObject(String, Box<Concept>),
    ExistsData(String, DatatypePredicate),
    WeightedSum(Vec<(f64, String)>),
}

impl Concept {
    pub fn atom(name: impl Into<String>) -> Self {
        Concept::Atom(name.into())
    }

    pub fn some(role: impl Into<String>, filler: Concept) -> Self {
        Concept::ExistsObject(role.into(), Box::new(filler))
    }

    pub fn some_data(prop: impl Into<String>, d: DatatypePredicate) -> Self {
        Concept::ExistsData(prop.into(), d)
    }

    pub fn and(conjuncts: impl IntoIterator<Item = Concept>) -> Self {
        Concept::And(conjuncts.into_iter().collect())
    }

    /// Nesting depth of existential restrictions.
    pub fn depth(&self) -> usize {
        match self {
            Concept::ExistsObject(_, c) => 1 + c.depth(),
            Concept::ExistsData(..) => 1,
            Concept::And(cs) => cs.iter().map(Concept::depth).max().unwrap_or(0),
            _ => 0,
        }
    }

    /// Top-level conjuncts (a non-conjunction counts as one, `⊤` as zero).
    pub fn conjuncts(&self) -> &[Concept] {
        match self {
            Concept::And(cs) => cs,
            Concept::Top => &[],
            other => std::slice::from_ref(other),
        }
    }

    /// Largest conjunct count found at any conjunction level.
    pub fn max_conjuncts(&self) -> usize {
        match self {
            Concept::And(cs) => cs.iter().map(Concept::max_conjuncts).max().unwrap_or(0).max(cs.len()),
            Concept::ExistsObject(_, c) => c.max_conjuncts().max(1),
            Concept::Top => 0,
            _ => 1,
        }
    }

    /// True for the EL(D) body grammar: no negation, weighted sums or ⊥.
    pub fn is_body(&self) -> bool {
        match self {
            Concept::Top | Concept::Atom(_) | Concept::ExistsData(..) => true,
            Concept::ExistsObject(_, c) => c.is_body(),
            Concept::And(cs) => cs.iter().all(Concept::is_body),
            Concept::Bottom | Concept::NegAtom(_) | Concept::WeightedSum(_) => false,
        }
    }

    /// Visits every datatype predicate with its data property.
    pub fn for_each_datatype<'a>(&'a self, f: &mut impl FnMut(&'a str, &'a DatatypePredicate)) {
        match self {
            Concept::ExistsData(s, d) => f(s, d),
            Concept::ExistsObject(_, c) => c.for_each_datatype(f),
            Concept::And(cs) => cs.iter().for_each(|c| c.for_each_datatype(f)),
            _ => {}
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Concept::Top => 0,
            Concept::Bottom => 1,
            Concept::Atom(_) => 2,
            Concept::NegAtom(_) => 3,
            Concept::ExistsObject(..) => 4,
            Concept::ExistsData(..) => 5,
            Concept::And(_) => 6,
            Concept::WeightedSum(_) => 7,
        }
    }
}

impl PartialEq for Concept {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Concept {}

/// Canonical total order: atoms < existential object restrictions <
/// existential data restrictions, then lexicographic.
impl Ord for Concept {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank()).then_with(|| match (self, other) {
            (Concept::Atom(a), Concept::Atom(b)) | (Concept::NegAtom(a), Concept::NegAtom(b)) => a.cmp(b),
            (Concept::ExistsObject(r, c), Concept::ExistsObject(s, d)) => r.cmp(s).then_with(|| c.cmp(d)),
            (Concept::ExistsData(r, c), Concept::ExistsData(s, d)) => r.cmp(s).then_with(|| c.cmp(d)),
            (Concept::And(a), Concept::And(b)) => a.cmp(b),
            (Concept::WeightedSum(a), Concept::WeightedSum(b)) => a
                .iter()
                .zip(b)
                .map(|((x, n), (y, m))| x.total_cmp(y).then_with(|| n.cmp(m)))
                .find(|o| o.is_ne())
                .unwrap_or_else(|| a.len().cmp(&b.len())),
            _ => Ordering::Equal,
        })
    }
}

impl PartialOrd for Concept {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Hash for Concept {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rank().hash(state);
        match self {
            Concept::Atom(a) | Concept::NegAtom(a) => a.hash(state),
            Concept::ExistsObject(r, c) => {
                r.hash(state);
                c.hash(state);
            }
            Concept::ExistsData(s, d) => {
                s.hash(state);
                d.hash(state);
            }
            Concept::And(cs) => cs.hash(state),
            Concept::WeightedSum(terms) => {
                for (a, n) in terms {
                    a.to_bits().hash(state);
                    n.hash(state);
                }
            }
            Concept::Top | Concept::Bottom => {}
        }
    }
}

/// Manchester-like surface syntax: `A and (r some (B and C)) and (s some S_L)`.
impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Concept::Top => f.write_str("Thing"),
            Concept::Bottom => f.write_str("Nothing"),
            Concept::Atom(a) => f.write_str(a),
            Concept::NegAtom(a) => write!(f, "(not {a})"),
            Concept::And(cs) => {
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" and ")?;
                    }
                    match c {
                        Concept::And(_) | Concept::WeightedSum(_) => write!(f, "({c})")?,
                        _ => write!(f, "{c}")?,
                    }
                }
                Ok(())
            }
            Concept::ExistsObject(r, c) => match **c {
                Concept::And(_) | Concept::WeightedSum(_) => write!(f, "({r} some ({c}))"),
                _ => write!(f, "({r} some {c})"),
            },
            Concept::ExistsData(s, d) => write!(f, "({s} some {})", d.label),
            Concept::WeightedSum(terms) => {
                for (i, (alpha, name)) in terms.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    write!(f, "{alpha} * {name}")?;
                }
                Ok(())
            }
        }
    }
}
