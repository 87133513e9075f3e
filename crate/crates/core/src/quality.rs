//! Linear quality models: modifiability and flexibility from design metrics,
//! testability from those two factors, plus project ranking.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;
use thiserror::Error;

use crate::metrics::MetricVector;
use crate::stats::correlation::{rank_values, TiePolicy};

#[derive(Debug, Error)]
pub enum QualityError {
    #[error("coefficient set `{model}` has no `{term}` term")]
    MissingTerm { model: String, term: String },
    #[error("unknown built-in coefficient set `{0}`")]
    UnknownBuiltin(String),
    #[error("malformed coefficient document: {0}")]
    MalformedDocument(String),
    #[error("cannot read coefficient file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("nothing to rank")]
    EmptyInput,
    #[error("non-finite testability value for `{0}`")]
    NonFinite(String),
}

/// A real number that remembers the decimal literal it was written as, so
/// coefficients survive load/save without drift.
#[derive(Debug, Clone)]
pub struct DecimalLiteral {
    text: String,
    value: f64,
}

impl DecimalLiteral {
    pub fn parse(text: &str) -> Result<Self, QualityError> {
        let text = text.trim();
        let value: f64 = serde_json::from_str::<serde_json::Number>(text)
            .ok()
            .and_then(|n| n.as_f64())
            .ok_or_else(|| QualityError::MalformedDocument(format!("`{text}` is not a number")))?;
        Ok(DecimalLiteral {
            text: text.to_string(),
            value,
        })
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

impl From<f64> for DecimalLiteral {
    fn from(value: f64) -> Self {
        DecimalLiteral {
            text: serde_json::Number::from_f64(value)
                .map(|n| n.to_string())
                .unwrap_or_else(|| value.to_string()),
            value,
        }
    }
}

impl PartialEq for DecimalLiteral {
    fn eq(&self, other: &Self) -> bool {
        self.text == other.text
    }
}

impl Eq for DecimalLiteral {}

impl fmt::Display for DecimalLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl Serialize for DecimalLiteral {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let raw = RawValue::from_string(self.text.clone()).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DecimalLiteral {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw: Box<RawValue> = Deserialize::deserialize(d)?;
        DecimalLiteral::parse(raw.get()).map_err(D::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub name: String,
    pub weight: DecimalLiteral,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientSet {
    #[serde(rename = "model")]
    pub model_name: String,
    pub intercept: DecimalLiteral,
    pub terms: Vec<Term>,
}

pub const ENCAPSULATION: &str = "Encapsulation";
pub const INHERITANCE: &str = "Inheritance";
pub const COUPLING: &str = "Coupling";
pub const COHESION: &str = "Cohesion";
pub const MODIFIABILITY: &str = "Modifiability";
pub const FLEXIBILITY: &str = "Flexibility";

pub const BUILTIN_MODIFIABILITY: &str = "paper-modifiability";
pub const BUILTIN_FLEXIBILITY: &str = "paper-flexibility";
pub const BUILTIN_TESTABILITY: &str = "paper-testability";

fn lit(s: &str) -> DecimalLiteral {
    DecimalLiteral::parse(s).expect("built-in literal")
}

fn builtin(model: &str, intercept: &str, terms: &[(&str, &str)]) -> CoefficientSet {
    CoefficientSet {
        model_name: model.to_string(),
        intercept: lit(intercept),
        terms: terms
            .iter()
            .map(|(n, w)| Term {
                name: n.to_string(),
                weight: lit(w),
            })
            .collect(),
    }
}

impl CoefficientSet {
    pub fn default_modifiability() -> Self {
        builtin(
            MODIFIABILITY,
            "1.107",
            &[(ENCAPSULATION, "-0.102"), (INHERITANCE, "1.810"), (COUPLING, "0.850")],
        )
    }

    pub fn default_flexibility() -> Self {
        builtin(
            FLEXIBILITY,
            "1.051",
            &[
                (ENCAPSULATION, "2.320"),
                (COUPLING, "0.160"),
                (COHESION, "-2.283"),
                (INHERITANCE, "11.572"),
            ],
        )
    }

    pub fn default_testability() -> Self {
        builtin(
            "Testability",
            "-98.666",
            &[(MODIFIABILITY, "49.210"), (FLEXIBILITY, "-2.983")],
        )
    }

    pub fn builtin(name: &str) -> Result<Self, QualityError> {
        match name {
            BUILTIN_MODIFIABILITY => Ok(Self::default_modifiability()),
            BUILTIN_FLEXIBILITY => Ok(Self::default_flexibility()),
            BUILTIN_TESTABILITY => Ok(Self::default_testability()),
            other => Err(QualityError::UnknownBuiltin(other.to_string())),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, QualityError> {
        let set: CoefficientSet =
            serde_json::from_str(text).map_err(|e| QualityError::MalformedDocument(e.to_string()))?;
        let mut seen = HashSet::new();
        for t in &set.terms {
            if !seen.insert(t.name.as_str()) {
                return Err(QualityError::MalformedDocument(format!("duplicate term `{}`", t.name)));
            }
        }
        Ok(set)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("coefficient serialization is infallible")
    }

    pub fn weight(&self, term: &str) -> Result<f64, QualityError> {
        self.terms
            .iter()
            .find(|t| t.name == term)
            .map(|t| t.weight.value())
            .ok_or_else(|| QualityError::MissingTerm {
                model: self.model_name.clone(),
                term: term.to_string(),
            })
    }

    /// Evaluates intercept + Σ weight × value over the named inputs, in the
    /// set's term order. Every term must be supplied by `inputs`.
    pub fn evaluate(&self, inputs: &[(&str, f64)]) -> Result<f64, QualityError> {
        let mut acc = self.intercept.value();
        for t in &self.terms {
            let x = inputs
                .iter()
                .find(|(n, _)| *n == t.name)
                .map(|(_, x)| *x)
                .ok_or_else(|| QualityError::MissingTerm {
                    model: self.model_name.clone(),
                    term: t.name.clone(),
                })?;
            acc += t.weight.value() * x;
        }
        Ok(acc)
    }

    fn require(&self, terms: &[&str]) -> Result<(), QualityError> {
        terms.iter().try_for_each(|t| self.weight(t).map(|_| ()))
    }
}

/// Accepts a built-in name (`paper-modifiability`, `paper-flexibility`,
/// `paper-testability`) or a path to a coefficient document.
pub fn load_coefficients(source: &str) -> Result<CoefficientSet, QualityError> {
    if source.starts_with("paper-") {
        return CoefficientSet::builtin(source);
    }
    let path = Path::new(source);
    let text = std::fs::read_to_string(path).map_err(|e| QualityError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    CoefficientSet::from_json(&text)
}

fn metric_inputs(mv: &MetricVector) -> [(&'static str, f64); 4] {
    [
        (ENCAPSULATION, mv.enm),
        (INHERITANCE, mv.inm),
        (COUPLING, mv.cpm),
        (COHESION, mv.com),
    ]
}

pub fn modifiability(mv: &MetricVector, c: &CoefficientSet) -> Result<f64, QualityError> {
    c.require(&[ENCAPSULATION, INHERITANCE, COUPLING])?;
    c.evaluate(&metric_inputs(mv))
}

pub fn flexibility(mv: &MetricVector, c: &CoefficientSet) -> Result<f64, QualityError> {
    c.require(&[ENCAPSULATION, COUPLING, COHESION, INHERITANCE])?;
    c.evaluate(&metric_inputs(mv))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FactorScores {
    pub modifiability: f64,
    pub flexibility: f64,
}

pub fn testability(f: &FactorScores, c: &CoefficientSet) -> Result<f64, QualityError> {
    c.require(&[MODIFIABILITY, FLEXIBILITY])?;
    c.evaluate(&[(MODIFIABILITY, f.modifiability), (FLEXIBILITY, f.flexibility)])
}

/// The three coefficient sets of the testability pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QualityModels {
    pub modifiability: CoefficientSet,
    pub flexibility: CoefficientSet,
    pub testability: CoefficientSet,
}

impl Default for QualityModels {
    fn default() -> Self {
        QualityModels {
            modifiability: CoefficientSet::default_modifiability(),
            flexibility: CoefficientSet::default_flexibility(),
            testability: CoefficientSet::default_testability(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestabilityReport {
    pub project: String,
    pub metrics: MetricVector,
    pub factors: FactorScores,
    pub testability: f64,
    pub rank: Option<f64>,
}

impl QualityModels {
    pub fn evaluate(&self, project: &str, mv: MetricVector) -> Result<TestabilityReport, QualityError> {
        let factors = FactorScores {
            modifiability: modifiability(&mv, &self.modifiability)?,
            flexibility: flexibility(&mv, &self.flexibility)?,
        };
        let t = testability(&factors, &self.testability)?;
        Ok(TestabilityReport {
            project: project.to_string(),
            metrics: mv,
            factors,
            testability: t,
            rank: None,
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum RankDirection {
    /// Rank 1 is the lowest testability value.
    #[default]
    Ascending,
    Descending,
}

/// Assigns ranks by testability value without reordering. Ties share the
/// average of the ranks they span.
pub fn rank_projects(
    reports: &[TestabilityReport],
    direction: RankDirection,
) -> Result<Vec<TestabilityReport>, QualityError> {
    if reports.is_empty() {
        return Err(QualityError::EmptyInput);
    }
    if let Some(r) = reports.iter().find(|r| !r.testability.is_finite()) {
        return Err(QualityError::NonFinite(r.project.clone()));
    }
    let values: Vec<f64> = reports
        .iter()
        .map(|r| match direction {
            RankDirection::Ascending => r.testability,
            RankDirection::Descending => -r.testability,
        })
        .collect();
    let ranks = rank_values(&values, TiePolicy::Average).map_err(|_| QualityError::EmptyInput)?;
    Ok(reports
        .iter()
        .zip(ranks)
        .map(|(r, rank)| TestabilityReport {
            rank: Some(rank),
            ..r.clone()
        })
        .collect())
}
