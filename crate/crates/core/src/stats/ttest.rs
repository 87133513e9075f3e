//! Significance test for a correlation coefficient:
//! T = r·√(N−2) / √(1−r²), compared with a two-tailed t critical value.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::tdist::t_critical;
use super::StatsError;

/// Degrees of freedom used for the critical-value lookup. The statistic
/// itself always uses N − 2.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DfConvention {
    #[default]
    NMinus2,
    /// df = N, the convention behind the published critical values
    /// 2.447 (N = 6), 2.776 (N = 4) and 2.365 (N = 7).
    N,
}

impl DfConvention {
    pub fn df(self, n: usize) -> usize {
        match self {
            DfConvention::NMinus2 => n - 2,
            DfConvention::N => n,
        }
    }
}

impl fmt::Display for DfConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DfConvention::NMinus2 => "n_minus_2",
            DfConvention::N => "n",
        })
    }
}

impl FromStr for DfConvention {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "n_minus_2" | "n-2" => Ok(DfConvention::NMinus2),
            "n" => Ok(DfConvention::N),
            other => Err(format!("unknown df convention `{other}` (expected n_minus_2 or n)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TTestResult {
    pub r: f64,
    pub n: usize,
    pub t_statistic: f64,
    pub df: usize,
    pub df_convention: DfConvention,
    pub alpha: f64,
    pub critical_value: f64,
    pub reject_null: bool,
    /// |r| = 1: the statistic is infinite and the null is rejected.
    pub degenerate: bool,
}

pub fn correlation_t_test(
    r: f64,
    n: usize,
    alpha: f64,
    df_convention: DfConvention,
) -> Result<TTestResult, StatsError> {
    if n < 3 {
        return Err(StatsError::TooFewPoints { needed: 3, got: n });
    }
    if !(-1.0..=1.0).contains(&r) {
        return Err(StatsError::Domain(format!("r must lie in [-1, 1], got {r}")));
    }
    let df = df_convention.df(n);
    let critical_value = t_critical(df as u32, alpha)?;
    let degenerate = r.abs() == 1.0;
    let t_statistic = if degenerate {
        r.signum() * f64::INFINITY
    } else {
        r * ((n - 2) as f64).sqrt() / (1.0 - r * r).sqrt()
    };
    Ok(TTestResult {
        r,
        n,
        t_statistic,
        df,
        df_convention,
        alpha,
        critical_value,
        reject_null: t_statistic.abs() >= critical_value,
        degenerate,
    })
}
