use serde::Serialize;

use super::{sum, StatsError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Descriptive {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

pub fn descriptive_stats(values: &[f64]) -> Result<Descriptive, StatsError> {
    if values.is_empty() {
        return Err(StatsError::EmptyInput);
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(Descriptive {
        min,
        max,
        mean: sum(values) / values.len() as f64,
    })
}

pub fn mean(values: &[f64]) -> f64 {
    sum(values) / values.len() as f64
}

/// Sample standard deviation (n − 1 denominator).
pub fn sample_sd(values: &[f64]) -> f64 {
    let m = mean(values);
    let ss: Vec<f64> = values.iter().map(|v| (v - m) * (v - m)).collect();
    (sum(&ss) / (values.len() as f64 - 1.0)).sqrt()
}
