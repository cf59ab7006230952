//! Fuzzy datatypes over numeric data properties.
//!
//! Two constructions are provided: equal-width triangular partitions of the
//! observed value range, and 1-D fuzzy C-means whose sorted centroids become
//! the peaks of the triangles. In both cases the extreme sets are shoulders.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::kb::{DatatypePredicate, KbError, KnowledgeBase, Shape};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FuzzifyError {
    #[error("invalid fuzzification config: {0}")]
    InvalidConfig(String),
    #[error("data property `{0}` has no values")]
    EmptyDomain(String),
    #[error("data property `{0}` has a single value; cannot partition")]
    DegenerateDomain(String),
    #[error("{k} clusters requested but only {distinct} distinct values")]
    TooFewValues { k: usize, distinct: usize },
    #[error("`{0}` is not a declared numeric data property")]
    NotNumeric(String),
    #[error(transparent)]
    Kb(#[from] KbError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FuzzificationMethod {
    Uniform,
    CMeans,
}

impl FuzzificationMethod {
    pub fn name(self) -> &'static str {
        match self {
            FuzzificationMethod::Uniform => "uniform",
            FuzzificationMethod::CMeans => "cmeans",
        }
    }

    /// Heading used in hypothesis listings.
    pub fn title(self) -> &'static str {
        match self {
            FuzzificationMethod::Uniform => "Uniform",
            FuzzificationMethod::CMeans => "C-Means",
        }
    }
}

impl fmt::Display for FuzzificationMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FuzzificationMethod {
    type Err = FuzzifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "uniform" | "u" => Ok(FuzzificationMethod::Uniform),
            "cmeans" | "c-means" | "c" => Ok(FuzzificationMethod::CMeans),
            other => Err(FuzzifyError::InvalidConfig(format!("unknown method `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzificationConfig {
    pub method: FuzzificationMethod,
    pub partitions: usize,
    /// C-means fuzzifier `m`.
    pub fuzzifier: f64,
    /// C-means stop threshold on the largest centroid displacement.
    pub epsilon: f64,
    pub max_iter: usize,
    /// Kept for reproducible tie handling; the current construction is
    /// fully deterministic and does not draw from it.
    pub seed: u64,
}

impl Default for FuzzificationConfig {
    fn default() -> Self {
        FuzzificationConfig {
            method: FuzzificationMethod::Uniform,
            partitions: 3,
            fuzzifier: 2.0,
            epsilon: 0.05,
            max_iter: 100,
            seed: 0,
        }
    }
}

impl FuzzificationConfig {
    pub fn validate(&self) -> Result<(), FuzzifyError> {
        if ![3, 5, 7].contains(&self.partitions) {
            return Err(FuzzifyError::InvalidConfig(format!(
                "partitions must be 3, 5 or 7, got {}",
                self.partitions
            )));
        }
        if !(self.fuzzifier > 1.0) {
            return Err(FuzzifyError::InvalidConfig(format!("fuzzifier must exceed 1, got {}", self.fuzzifier)));
        }
        if !(self.epsilon > 0.0) {
            return Err(FuzzifyError::InvalidConfig(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        if self.max_iter == 0 {
            return Err(FuzzifyError::InvalidConfig("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

/// How a fuzzy datatype was built.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Provenance {
    pub method: FuzzificationMethod,
    pub partitions: usize,
}

/// A fuzzy datatype attached to a data property.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyDatatype {
    pub property: String,
    pub predicate: DatatypePredicate,
    pub provenance: Provenance,
}

impl FuzzyDatatype {
    /// `Alcohol_VVL left-shoulder 11.81 12.29`
    pub fn listing_line(&self) -> String {
        let mut line = format!("{} {}", self.predicate.label, self.predicate.shape.keyword());
        for p in self.predicate.shape.params() {
            line.push_str(&format!(" {p:.2}"));
        }
        line
    }
}

/// Linguistic tags, low to high.
pub fn linguistic_tags(k: usize) -> Vec<String> {
    let fixed: &[&str] = match k {
        2 => &["L", "H"],
        3 => &["L", "F", "H"],
        5 => &["VL", "L", "F", "H", "VH"],
        7 => &["VVL", "VL", "L", "F", "H", "VH", "VVH"],
        _ => &[],
    };
    if fixed.is_empty() {
        (1..=k).map(|i| format!("P{i}")).collect()
    } else {
        fixed.iter().map(|s| s.to_string()).collect()
    }
}

/// All asserted values of a numeric data property, sorted ascending.
pub fn collect_values(kb: &KnowledgeBase, property: &str) -> Result<Vec<f64>, FuzzifyError> {
    match kb.data_property(property) {
        Some(d) if d.value_type.is_numeric() => {}
        _ => return Err(FuzzifyError::NotNumeric(property.to_string())),
    }
    let mut values: Vec<f64> = kb
        .abox()
        .iter()
        .filter_map(|a| match a {
            crate::kb::Assertion::Data { property: p, value, .. } if p == property => value.as_f64(),
            _ => None,
        })
        .collect();
    if values.is_empty() {
        return Err(FuzzifyError::EmptyDomain(property.to_string()));
    }
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Shoulders at both ends, triangles in between, peaking at `centers`.
fn partition_from_centers(
    property: &str,
    centers: &[f64],
    provenance: Provenance,
) -> Result<Vec<FuzzyDatatype>, FuzzifyError> {
    let k = centers.len();
    let tags = linguistic_tags(k);
    (0..k)
        .map(|i| {
            let label = format!("{property}_{}", tags[i]);
            let shape = if i == 0 {
                Shape::LeftShoulder { a: centers[0], b: centers[1] }
            } else if i == k - 1 {
                Shape::RightShoulder { a: centers[k - 2], b: centers[k - 1] }
            } else {
                Shape::Triangular { a: centers[i - 1], b: centers[i], c: centers[i + 1] }
            };
            Ok(FuzzyDatatype {
                property: property.to_string(),
                predicate: DatatypePredicate::new(label, shape)?,
                provenance,
            })
        })
        .collect()
}

/// Equal-width partition of `[min, max]` into `k` fuzzy sets.
pub fn uniform_partition(property: &str, values: &[f64], k: usize) -> Result<Vec<FuzzyDatatype>, FuzzifyError> {
    if k < 2 {
        return Err(FuzzifyError::InvalidConfig(format!("need at least 2 partitions, got {k}")));
    }
    let (min, max) = min_max(values).ok_or_else(|| FuzzifyError::EmptyDomain(property.to_string()))?;
    if !(min < max) {
        return Err(FuzzifyError::DegenerateDomain(property.to_string()));
    }
    let step = (max - min) / (k - 1) as f64;
    let mut centers: Vec<f64> = (0..k).map(|i| min + step * i as f64).collect();
    centers[k - 1] = max;
    partition_from_centers(property, &centers, Provenance { method: FuzzificationMethod::Uniform, partitions: k })
}

/// Fuzzy C-means partition of the value multiset into `k` fuzzy sets.
pub fn cmeans_partition(
    property: &str,
    values: &[f64],
    k: usize,
    config: &FuzzificationConfig,
) -> Result<Vec<FuzzyDatatype>, FuzzifyError> {
    if k < 2 {
        return Err(FuzzifyError::InvalidConfig(format!("need at least 2 clusters, got {k}")));
    }
    if values.is_empty() {
        return Err(FuzzifyError::EmptyDomain(property.to_string()));
    }
    let run = fuzzy_cmeans(values, k, config.fuzzifier, config.epsilon, config.max_iter)?;
    partition_from_centers(property, &run.centroids, Provenance { method: FuzzificationMethod::CMeans, partitions: k })
}

fn min_max(values: &[f64]) -> Option<(f64, f64)> {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (!values.is_empty()).then_some((min, max))
}

/// Trace of a fuzzy C-means run.
#[derive(Debug, Clone, PartialEq)]
pub struct FcmRun {
    /// Sorted ascending.
    pub centroids: Vec<f64>,
    /// Row `i` holds the memberships of value `i` in each cluster.
    pub memberships: Vec<Vec<f64>>,
    /// Objective after each membership update.
    pub objective: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Standard fuzzy C-means on a 1-D multiset.
///
/// Centroids start at evenly spaced quantiles of the sorted values. The loop
/// alternates membership and centroid updates and stops once no centroid
/// moves by `epsilon` or more, or after `max_iter` rounds (the last iterate
/// is kept either way).
pub fn fuzzy_cmeans(
    values: &[f64],
    k: usize,
    m: f64,
    epsilon: f64,
    max_iter: usize,
) -> Result<FcmRun, FuzzifyError> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut distinct = sorted.clone();
    distinct.dedup();
    if k > distinct.len() {
        return Err(FuzzifyError::TooFewValues { k, distinct: distinct.len() });
    }
    if !(m > 1.0) {
        return Err(FuzzifyError::InvalidConfig(format!("fuzzifier must exceed 1, got {m}")));
    }
    let n = sorted.len();
    let range = sorted[n - 1] - sorted[0];
    let mut centroids: Vec<f64> = (0..k)
        .map(|j| {
            let pos = if k == 1 { 0.0 } else { j as f64 * (n - 1) as f64 / (k - 1) as f64 };
            sorted[pos.round() as usize]
        })
        .collect();
    separate(&mut centroids, range);

    let exponent = 2.0 / (m - 1.0);
    let mut memberships = vec![vec![0.0; k]; n];
    let mut objective = Vec::new();
    let mut iterations = 0;
    let mut converged = false;

    while iterations < max_iter {
        iterations += 1;
        for (x, row) in values.iter().zip(memberships.iter_mut()) {
            update_memberships(*x, &centroids, exponent, row);
        }
        objective.push(fcm_objective(values, &centroids, &memberships, m));

        let mut next: Vec<f64> = (0..k)
            .map(|j| {
                let (num, den) = values.iter().zip(&memberships).fold((0.0, 0.0), |(num, den), (x, row)| {
                    let u = row[j].powf(m);
                    (num + u * x, den + u)
                });
                if den > 0.0 {
                    num / den
                } else {
                    centroids[j]
                }
            })
            .collect();
        next.sort_by(f64::total_cmp);
        separate(&mut next, range);
        let shift = next.iter().zip(&centroids).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        centroids = next;
        if shift < epsilon {
            converged = true;
            break;
        }
    }
    for (x, row) in values.iter().zip(memberships.iter_mut()) {
        update_memberships(*x, &centroids, exponent, row);
    }
    Ok(FcmRun { centroids, memberships, objective, iterations, converged })
}

/// Pushes colliding centroids apart so no triangle has zero width.
fn separate(centroids: &mut [f64], range: f64) {
    for j in 1..centroids.len() {
        if centroids[j] - centroids[j - 1] < 1e-12 {
            centroids[j] = centroids[j - 1] + 1e-9 * range;
        }
    }
}

fn update_memberships(x: f64, centroids: &[f64], exponent: f64, row: &mut [f64]) {
    let dist: Vec<f64> = centroids.iter().map(|c| (x - c).abs()).collect();
    let zeros = dist.iter().filter(|d| **d == 0.0).count();
    if zeros > 0 {
        for (u, d) in row.iter_mut().zip(&dist) {
            *u = if *d == 0.0 { 1.0 / zeros as f64 } else { 0.0 };
        }
        return;
    }
    for (j, u) in row.iter_mut().enumerate() {
        let s: f64 = dist.iter().map(|dl| (dist[j] / dl).powf(exponent)).sum();
        *u = 1.0 / s;
    }
}

/// `Σ_i Σ_j u_ij^m (x_i − c_j)²`
pub fn fcm_objective(values: &[f64], centroids: &[f64], memberships: &[Vec<f64>], m: f64) -> f64 {
    values
        .iter()
        .zip(memberships)
        .map(|(x, row)| {
            row.iter()
                .zip(centroids)
                .map(|(u, c)| u.powf(m) * (x - c) * (x - c))
                .sum::<f64>()
        })
        .sum()
}

/// Fuzzy datatypes for every numeric data property of `kb`.
///
/// Properties without values, with a single value, or with fewer distinct
/// values than requested clusters are skipped.
pub fn fuzzify_kb(
    kb: &KnowledgeBase,
    config: &FuzzificationConfig,
) -> Result<BTreeMap<String, Vec<FuzzyDatatype>>, FuzzifyError> {
    config.validate()?;
    let mut out = BTreeMap::new();
    for property in kb.numeric_data_properties() {
        let values = match collect_values(kb, property) {
            Ok(v) => v,
            Err(FuzzifyError::EmptyDomain(_)) => continue,
            Err(e) => return Err(e),
        };
        let result = match config.method {
            FuzzificationMethod::Uniform => uniform_partition(property, &values, config.partitions),
            FuzzificationMethod::CMeans => cmeans_partition(property, &values, config.partitions, config),
        };
        match result {
            Ok(list) => {
                out.insert(property.to_string(), list);
            }
            Err(FuzzifyError::DegenerateDomain(_) | FuzzifyError::TooFewValues { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kb::{Assertion, Literal, ValueType};

    #[test]
    fn collects_sorted_values_with_duplicates() {
        let mut kb = KnowledgeBase::new();
        kb.declare_data_property("s", ValueType::Real, true).unwrap();
        kb.declare_data_property("empty", ValueType::Real, true).unwrap();
        for (i, v) in [("a", 7.0), ("b", 5.0), ("c", 5.0)] {
            kb.add_assertion(Assertion::Data { individual: i.into(), property: "s".into(), value: Literal::Real(v) })
                .unwrap();
        }
        assert_eq!(collect_values(&kb, "s").unwrap(), vec![5.0, 5.0, 7.0]);
        assert_eq!(collect_values(&kb, "empty"), Err(FuzzifyError::EmptyDomain("empty".into())));
        assert!(matches!(collect_values(&kb, "nope"), Err(FuzzifyError::NotNumeric(_))));
    }

    #[test]
    fn uniform_three_way_split() {
        let parts = uniform_partition("s", &[0.0, 10.0], 3).unwrap();
        let shapes: Vec<Shape> = parts.iter().map(|p| p.predicate.shape).collect();
        assert_eq!(
            shapes,
            vec![
                Shape::LeftShoulder { a: 0.0, b: 5.0 },
                Shape::Triangular { a: 0.0, b: 5.0, c: 10.0 },
                Shape::RightShoulder { a: 5.0, b: 10.0 },
            ]
        );
        let labels: Vec<&str> = parts.iter().map(|p| p.predicate.label.as_str()).collect();
        assert_eq!(labels, vec!["s_L", "s_F", "s_H"]);
    }

    #[test]
    fn uniform_rejects_degenerate_range() {
        assert_eq!(uniform_partition("s", &[3.0, 3.0], 3), Err(FuzzifyError::DegenerateDomain("s".into())));
    }

    #[test]
    fn cmeans_two_clusters() {
        let values = [0.0, 0.0, 0.0, 10.0, 10.0, 10.0];
        let cfg = FuzzificationConfig { method: FuzzificationMethod::CMeans, ..Default::default() };
        let parts = cmeans_partition("s", &values, 2, &cfg).unwrap();
        assert_eq!(parts[0].predicate.shape, Shape::LeftShoulder { a: 0.0, b: 10.0 });
        assert_eq!(parts[1].predicate.shape, Shape::RightShoulder { a: 0.0, b: 10.0 });
    }

    #[test]
    fn cmeans_needs_enough_distinct_values() {
        let cfg = FuzzificationConfig::default();
        assert_eq!(
            cmeans_partition("s", &[1.0, 1.0, 2.0], 3, &cfg),
            Err(FuzzifyError::TooFewValues { k: 3, distinct: 2 })
        );
    }

    #[test]
    fn config_rejects_unsupported_partition_counts() {
        let cfg = FuzzificationConfig { partitions: 1, ..Default::default() };
        assert!(cfg.validate().is_err());
        let cfg = FuzzificationConfig { fuzzifier: 1.0, ..Default::default() };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn listing_line_format() {
        let d = FuzzyDatatype {
            property: "Alcohol".into(),
            predicate: DatatypePredicate::left_shoulder("Alcohol_VVL", 11.81, 12.29).unwrap(),
            provenance: Provenance { method: FuzzificationMethod::CMeans, partitions: 7 },
        };
        assert_eq!(d.listing_line(), "Alcohol_VVL left-shoulder 11.81 12.29");
    }

    #[test]
    fn colliding_centroids_are_separated() {
        let values = [5.0, 5.0, 5.0, 5.0, 6.0, 7.0];
        let run = fuzzy_cmeans(&values, 3, 2.0, 0.05, 100).unwrap();
        assert!(run.centroids.windows(2).all(|w| w[0] < w[1]));
    }
}
