//! Language-neutral class model: the input every design metric is computed from.
//!
//! A model document is JSON:
//!
//! ```json
//! { "project": "demo",
//!   "classes": [
//!     { "name": "A", "parents": [],
//!       "attributes": [ { "name": "x", "type": "int", "visibility": "private" } ],
//!       "methods": [ { "name": "run", "visibility": "public",
//!                      "params": [ { "name": "b", "type": "B" } ] } ] } ] }
//! ```
//!
//! `parents` may be omitted; every other field is mandatory.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("model file not found: {0}")]
    FileNotFound(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed document at line {line}, column {column}: {message}")]
    MalformedDocument {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema violation at line {line}, column {column}: {message}")]
    SchemaViolation {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("inheritance cycle through: {}", .0.join(" -> "))]
    CycleDetected(Vec<String>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Visibility {
    Public,
    Protected,
    Private,
}

impl Visibility {
    pub fn is_hidden(self) -> bool {
        !matches!(self, Visibility::Public)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttributeDecl {
    pub name: String,
    #[serde(rename = "type")]
    pub type_name: String,
    pub visibility: Visibility,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamDecl {
    pub name: String,
    #[serde(rename = "type")]
    pub type_name: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodDecl {
    pub name: String,
    pub visibility: Visibility,
    pub params: Vec<ParamDecl>,
}

impl MethodDecl {
    pub fn signature(&self) -> MethodSignature {
        MethodSignature {
            name: self.name.clone(),
            param_types: self.params.iter().map(|p| p.type_name.clone()).collect(),
        }
    }
}

/// Method identity for override resolution: name plus the ordered parameter
/// type list (arity is implied by the list length).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MethodSignature {
    pub name: String,
    pub param_types: Vec<String>,
}

impl fmt::Display for MethodSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.name, self.param_types.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassDecl {
    pub name: String,
    #[serde(default)]
    pub parents: Vec<String>,
    pub attributes: Vec<AttributeDecl>,
    pub methods: Vec<MethodDecl>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignModel {
    #[serde(rename = "project")]
    pub project_name: String,
    pub classes: Vec<ClassDecl>,
}

impl DesignModel {
    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        serde_json::from_str(text).map_err(|e| {
            let (line, column, message) = (e.line(), e.column(), e.to_string());
            match e.classify() {
                serde_json::error::Category::Data => ModelError::SchemaViolation { line, column, message },
                _ => ModelError::MalformedDocument { line, column, message },
            }
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serialization is infallible")
    }

    pub fn class(&self, name: &str) -> Option<&ClassDecl> {
        self.classes.iter().find(|c| c.name == name)
    }

    pub fn class_names(&self) -> HashSet<&str> {
        self.classes.iter().map(|c| c.name.as_str()).collect()
    }
}

pub fn load_design_model(path: impl AsRef<Path>) -> Result<DesignModel, ModelError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => ModelError::FileNotFound(path.display().to_string()),
        _ => ModelError::Io {
            path: path.display().to_string(),
            source: e,
        },
    })?;
    DesignModel::from_json(&text)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateClass(String),
    DuplicateAttribute {
        class: String,
        attribute: String,
    },
    DuplicateMethod {
        class: String,
        signature: String,
    },
    DuplicateParam {
        class: String,
        method: String,
        param: String,
    },
    UnknownParent {
        class: String,
        parent: String,
    },
    InheritanceCycle(Vec<String>),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateClass(c) => write!(f, "duplicate class `{c}`"),
            Violation::DuplicateAttribute { class, attribute } => {
                write!(f, "class `{class}`: duplicate attribute `{attribute}`")
            }
            Violation::DuplicateMethod { class, signature } => {
                write!(f, "class `{class}`: duplicate method `{signature}`")
            }
            Violation::DuplicateParam { class, method, param } => {
                write!(f, "class `{class}`, method `{method}`: duplicate parameter `{param}`")
            }
            Violation::UnknownParent { class, parent } => {
                write!(f, "class `{class}`: unknown parent `{parent}`")
            }
            Violation::InheritanceCycle(names) => {
                write!(f, "inheritance cycle: {}", names.join(" -> "))
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_model(m: &DesignModel) -> ValidationReport {
    let mut violations = Vec::new();

    let mut seen = HashSet::new();
    for c in &m.classes {
        if !seen.insert(c.name.as_str()) {
            violations.push(Violation::DuplicateClass(c.name.clone()));
        }
    }

    for c in &m.classes {
        let mut attrs = HashSet::new();
        for a in &c.attributes {
            if !attrs.insert(a.name.as_str()) {
                violations.push(Violation::DuplicateAttribute {
                    class: c.name.clone(),
                    attribute: a.name.clone(),
                });
            }
        }
        let mut sigs = HashSet::new();
        for meth in &c.methods {
            let sig = meth.signature();
            if !sigs.insert(sig.clone()) {
                violations.push(Violation::DuplicateMethod {
                    class: c.name.clone(),
                    signature: sig.to_string(),
                });
            }
            let mut params = HashSet::new();
            for p in &meth.params {
                if !params.insert(p.name.as_str()) {
                    violations.push(Violation::DuplicateParam {
                        class: c.name.clone(),
                        method: meth.name.clone(),
                        param: p.name.clone(),
                    });
                }
            }
        }
        for p in &c.parents {
            if !seen.contains(p.as_str()) {
                violations.push(Violation::UnknownParent {
                    class: c.name.clone(),
                    parent: p.clone(),
                });
            }
        }
    }

    if let Some(cycle) = find_cycle(m) {
        violations.push(Violation::InheritanceCycle(cycle));
    }

    ValidationReport { violations }
}

/// Returns the first inheritance cycle found, as the list of class names
/// along it (first name repeated at the end). Unknown parents are ignored.
fn find_cycle(m: &DesignModel) -> Option<Vec<String>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Unvisited,
        InProgress,
        Done,
    }

    let index: HashMap<&str, usize> = m
        .classes
        .iter()
        .enumerate()
        .map(|(i, c)| (c.name.as_str(), i))
        .collect();
    let mut marks = vec![Mark::Unvisited; m.classes.len()];

    fn visit(
        i: usize,
        m: &DesignModel,
        index: &HashMap<&str, usize>,
        marks: &mut [Mark],
        stack: &mut Vec<usize>,
    ) -> Option<Vec<String>> {
        marks[i] = Mark::InProgress;
        stack.push(i);
        for p in &m.classes[i].parents {
            let Some(&j) = index.get(p.as_str()) else {
                continue;
            };
            match marks[j] {
                Mark::InProgress => {
                    let start = stack.iter().position(|&s| s == j).unwrap_or(0);
                    let mut names: Vec<String> = stack[start..].iter().map(|&s| m.classes[s].name.clone()).collect();
                    names.push(m.classes[j].name.clone());
                    return Some(names);
                }
                Mark::Unvisited => {
                    if let Some(c) = visit(j, m, index, marks, stack) {
                        return Some(c);
                    }
                }
                Mark::Done => {}
            }
        }
        stack.pop();
        marks[i] = Mark::Done;
        None
    }

    let mut stack = Vec::new();
    for i in 0..m.classes.len() {
        if marks[i] == Mark::Unvisited {
            if let Some(c) = visit(i, m, &index, &mut marks, &mut stack) {
                return Some(c);
            }
        }
    }
    None
}

/// Per-class resolution of the inheritance graph.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClassHierarchy {
    pub ancestors: BTreeSet<String>,
    /// Ancestor-declared signatures not redeclared locally. Signatures reached
    /// through several ancestors count once.
    pub inherited: BTreeSet<MethodSignature>,
    pub local: BTreeSet<MethodSignature>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ResolvedHierarchy {
    classes: BTreeMap<String, ClassHierarchy>,
}

impl ResolvedHierarchy {
    pub fn get(&self, class: &str) -> Option<&ClassHierarchy> {
        self.classes.get(class)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &ClassHierarchy)> {
        self.classes.iter()
    }
}

pub fn resolve_hierarchy(m: &DesignModel) -> Result<ResolvedHierarchy, ModelError> {
    if let Some(cycle) = find_cycle(m) {
        return Err(ModelError::CycleDetected(cycle));
    }
    let by_name: HashMap<&str, &ClassDecl> = m.classes.iter().map(|c| (c.name.as_str(), c)).collect();

    let mut classes = BTreeMap::new();
    for c in &m.classes {
        let mut ancestors = BTreeSet::new();
        let mut frontier: Vec<&str> = c.parents.iter().map(String::as_str).collect();
        while let Some(p) = frontier.pop() {
            if !ancestors.insert(p.to_string()) {
                continue;
            }
            if let Some(pc) = by_name.get(p) {
                frontier.extend(pc.parents.iter().map(String::as_str));
            }
        }

        let local: BTreeSet<MethodSignature> = c.methods.iter().map(MethodDecl::signature).collect();
        let inherited = ancestors
            .iter()
            .filter_map(|a| by_name.get(a.as_str()))
            .flat_map(|a| a.methods.iter().map(MethodDecl::signature))
            .filter(|s| !local.contains(s))
            .collect();

        classes.insert(
            c.name.clone(),
            ClassHierarchy {
                ancestors,
                inherited,
                local,
            },
        );
    }
    Ok(ResolvedHierarchy { classes })
}
