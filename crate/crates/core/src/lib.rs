//! Design-quality analysis for object-oriented class models.
//!
//! - [`model`]: class-model documents, validation and inheritance resolution
//! - [`metrics`]: ENM, INM, CPM and COM per class and per project
//! - [`quality`]: modifiability, flexibility and testability models, ranking
//! - [`stats`]: OLS, correlation, rank statistics and t-distribution tests
//! - [`replication`]: published validation tables re-derived from fixtures

pub mod metrics;
pub mod model;
pub mod quality;
pub mod replication;
pub mod stats;
