//! Statistics used to build and validate the quality models.

pub mod correlation;
pub mod dataset;
pub mod descriptive;
pub mod regression;
pub mod tdist;
pub mod ttest;

use thiserror::Error;

pub use correlation::{
    pearson, rank_values, spearman, spearman_critical, spearman_from_sum_d2, SpearmanPath, SpearmanResult, TiePolicy,
};
pub use dataset::Dataset;
pub use descriptive::{descriptive_stats, Descriptive};
pub use regression::{ols_fit, regression_summary_from, CoefficientRow, RegressionFit, RegressionSummary};
pub use tdist::{t_cdf_two_tailed, t_critical};
pub use ttest::{correlation_t_test, DfConvention, TTestResult};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum StatsError {
    #[error("empty input")]
    EmptyInput,
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("zero variance")]
    ZeroVariance,
    #[error("too few points: need at least {needed}, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("too few rows: {rows} rows for {predictors} predictors")]
    TooFewRows { rows: usize, predictors: usize },
    #[error("design matrix is rank deficient (condition estimate {0:e})")]
    RankDeficient(f64),
    #[error("no critical value tabulated for n = {n}, alpha = {alpha}")]
    OutOfTableRange { n: usize, alpha: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unknown column `{0}`")]
    UnknownColumn(String),
    #[error("malformed dataset: {0}")]
    MalformedDataset(String),
}

const COMPENSATE_ABOVE: usize = 10_000;

/// Plain summation for small inputs, Neumaier-compensated above 10⁴ terms.
pub fn sum(values: &[f64]) -> f64 {
    if values.len() <= COMPENSATE_ABOVE {
        return values.iter().sum();
    }
    let mut s = 0.0_f64;
    let mut c = 0.0_f64;
    for &v in values {
        let t = s + v;
        if s.abs() >= v.abs() {
            c += (s - t) + v;
        } else {
            c += (v - t) + s;
        }
        s = t;
    }
    s + c
}
