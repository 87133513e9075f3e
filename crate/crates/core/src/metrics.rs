//! Design-construct metrics: encapsulation (ENM), inheritance (INM),
//! coupling (CPM) and cohesion (COM).
//!
//! The definitions follow the QMOOD family:
//!
//! | metric | definition |
//! |--------|------------|
//! | ENM | non-public attributes / all attributes (DAM) |
//! | INM | inherited methods / (inherited + local methods) (MFA) |
//! | CPM | distinct other model classes referenced by attribute or parameter types (DCC) |
//! | COM | Σ\|types(m) ∩ T\| / (methods × \|T\|), T = all parameter types of the class (CAM) |
//!
//! Degenerate classes map to fixed points: no attributes gives ENM 0, no
//! methods gives INM 0 and COM 0, and methods without any parameters give
//! COM 1.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::model::{ClassDecl, DesignModel, ResolvedHierarchy};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("model has no classes")]
    EmptyModel,
    #[error("class `{0}` is missing from the resolved hierarchy")]
    Unresolved(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Granularity {
    Class,
    Project,
}

/// How class-level vectors are folded into a project vector.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Aggregate {
    #[default]
    Mean,
    Sum,
}

impl fmt::Display for Aggregate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Aggregate::Mean => "mean",
            Aggregate::Sum => "sum",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricVector {
    pub enm: f64,
    pub inm: f64,
    pub cpm: f64,
    pub com: f64,
    pub granularity: Granularity,
}

impl MetricVector {
    pub fn project(enm: f64, inm: f64, cpm: f64, com: f64) -> Self {
        MetricVector {
            enm,
            inm,
            cpm,
            com,
            granularity: Granularity::Project,
        }
    }
}

pub fn encapsulation_metric(c: &ClassDecl) -> f64 {
    if c.attributes.is_empty() {
        return 0.0;
    }
    let hidden = c.attributes.iter().filter(|a| a.visibility.is_hidden()).count();
    hidden as f64 / c.attributes.len() as f64
}

/// Returns 0 when `c` is not present in `h`.
pub fn inheritance_metric(c: &ClassDecl, h: &ResolvedHierarchy) -> f64 {
    let Some(ch) = h.get(&c.name) else {
        return 0.0;
    };
    let total = ch.inherited.len() + ch.local.len();
    if total == 0 {
        return 0.0;
    }
    ch.inherited.len() as f64 / total as f64
}

pub fn coupling_metric(c: &ClassDecl, m: &DesignModel) -> usize {
    let declared = m.class_names();
    c.attributes
        .iter()
        .map(|a| a.type_name.as_str())
        .chain(
            c.methods
                .iter()
                .flat_map(|meth| meth.params.iter().map(|p| p.type_name.as_str())),
        )
        .filter(|t| *t != c.name && declared.contains(t))
        .collect::<HashSet<_>>()
        .len()
}

pub fn cohesion_metric(c: &ClassDecl) -> f64 {
    if c.methods.is_empty() {
        return 0.0;
    }
    let per_method: Vec<BTreeSet<&str>> = c
        .methods
        .iter()
        .map(|m| m.params.iter().map(|p| p.type_name.as_str()).collect())
        .collect();
    let all: BTreeSet<&str> = per_method.iter().flatten().copied().collect();
    if all.is_empty() {
        return 1.0;
    }
    // every per-method set is a subset of `all`, so the intersection is the set itself
    let overlap: usize = per_method.iter().map(BTreeSet::len).sum();
    overlap as f64 / (c.methods.len() * all.len()) as f64
}

pub fn class_metrics(c: &ClassDecl, m: &DesignModel, h: &ResolvedHierarchy) -> MetricVector {
    MetricVector {
        enm: encapsulation_metric(c),
        inm: inheritance_metric(c, h),
        cpm: coupling_metric(c, m) as f64,
        com: cohesion_metric(c),
        granularity: Granularity::Class,
    }
}

/// Class-level vectors in model order, paired with class names.
pub fn all_class_metrics<'m>(
    m: &'m DesignModel,
    h: &ResolvedHierarchy,
) -> Result<Vec<(&'m str, MetricVector)>, MetricsError> {
    m.classes
        .iter()
        .map(|c| {
            if h.get(&c.name).is_none() {
                return Err(MetricsError::Unresolved(c.name.clone()));
            }
            Ok((c.name.as_str(), class_metrics(c, m, h)))
        })
        .collect()
}

pub fn project_metrics(
    m: &DesignModel,
    h: &ResolvedHierarchy,
    aggregate: Aggregate,
) -> Result<MetricVector, MetricsError> {
    if m.classes.is_empty() {
        return Err(MetricsError::EmptyModel);
    }
    let per_class = all_class_metrics(m, h)?;
    let n = per_class.len() as f64;
    let fold = |get: fn(&MetricVector) -> f64| {
        let s = order_free_sum(per_class.iter().map(|(_, v)| get(v)));
        match aggregate {
            Aggregate::Mean => s / n,
            Aggregate::Sum => s,
        }
    };
    Ok(MetricVector::project(
        fold(|v| v.enm),
        fold(|v| v.inm),
        fold(|v| v.cpm),
        fold(|v| v.com),
    ))
}

// Summing in sorted order makes the result independent of class order.
fn order_free_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(f64::total_cmp);
    v.into_iter().sum()
}
