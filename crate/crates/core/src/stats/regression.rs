//! Ordinary least squares with an SPSS-style coefficient table and model
//! summary.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::dataset::Dataset;
use super::descriptive::sample_sd;
use super::tdist::t_cdf_two_tailed;
use super::{sum, StatsError};

/// Fits are refused when the normal-equations condition estimate exceeds this.
pub const MAX_CONDITION: f64 = 1e12;

pub const CONSTANT_ROW: &str = "(Constant)";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientRow {
    pub name: String,
    pub b: f64,
    pub std_error: f64,
    /// Standardized coefficient; absent for the constant.
    pub beta: Option<f64>,
    pub t: f64,
    pub sig: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegressionFit {
    pub response: String,
    pub predictors: Vec<String>,
    /// Constant first, then predictors in request order.
    pub coefficients: Vec<CoefficientRow>,
    pub residuals: Vec<f64>,
}

impl RegressionFit {
    pub fn coefficient(&self, name: &str) -> Option<&CoefficientRow> {
        self.coefficients.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegressionSummary {
    pub r: f64,
    pub r_square: f64,
    pub adjusted_r_square: f64,
    pub std_error_of_estimate: f64,
    pub n: usize,
    pub k: usize,
}

pub fn regression_summary_from(r_square: f64, n: usize, k: usize) -> Result<(f64, f64), StatsError> {
    if !(0.0..=1.0).contains(&r_square) {
        return Err(StatsError::Domain(format!("R² must lie in [0, 1], got {r_square}")));
    }
    if n <= k + 1 {
        return Err(StatsError::Domain(format!("need n > k + 1, got n = {n}, k = {k}")));
    }
    let adjusted = 1.0 - (1.0 - r_square) * (n as f64 - 1.0) / (n - k - 1) as f64;
    Ok((r_square.sqrt(), adjusted))
}

pub fn ols_fit(
    d: &Dataset,
    response: &str,
    predictors: &[&str],
) -> Result<(RegressionFit, RegressionSummary), StatsError> {
    let n = d.n();
    let k = predictors.len();
    let p = k + 1;
    if n < k + 2 {
        return Err(StatsError::TooFewRows { rows: n, predictors: k });
    }

    let y_col = d.column(response)?;
    let x_cols = predictors
        .iter()
        .map(|name| d.column(name))
        .collect::<Result<Vec<_>, _>>()?;

    let x = DMatrix::from_fn(n, p, |i, j| if j == 0 { 1.0 } else { x_cols[j - 1][i] });
    let y = DVector::from_column_slice(&y_col);

    let xtx = x.transpose() * &x;
    let eig = xtx.clone().symmetric_eigen();
    let max_ev = eig.eigenvalues.iter().fold(0.0_f64, |a, &v| a.max(v.abs()));
    let min_ev = eig.eigenvalues.iter().fold(f64::INFINITY, |a, &v| a.min(v));
    let condition = if min_ev > 0.0 { max_ev / min_ev } else { f64::INFINITY };
    if condition > MAX_CONDITION {
        return Err(StatsError::RankDeficient(condition));
    }

    // least squares through QR of the design matrix; (XᵀX)⁻¹ = R⁻¹R⁻ᵀ
    let qr = x.clone().qr();
    let q = qr.q();
    let r = qr.r();
    let qty = q.transpose() * &y;
    let coef = r
        .solve_upper_triangular(&qty)
        .ok_or(StatsError::RankDeficient(condition))?;
    let r_inv = r
        .solve_upper_triangular(&DMatrix::identity(p, p))
        .ok_or(StatsError::RankDeficient(condition))?;
    let xtx_inv = &r_inv * r_inv.transpose();

    let fitted = &x * &coef;
    let residuals: Vec<f64> = (0..n).map(|i| y[i] - fitted[i]).collect();
    let sse = sum(&residuals.iter().map(|e| e * e).collect::<Vec<_>>());
    let y_mean = sum(&y_col) / n as f64;
    let sst = sum(&y_col.iter().map(|v| (v - y_mean) * (v - y_mean)).collect::<Vec<_>>());
    if sst == 0.0 {
        return Err(StatsError::ZeroVariance);
    }

    let df = n - p;
    let sigma2 = sse / df as f64;
    let sd_y = sample_sd(&y_col);

    let coefficients = (0..p)
        .map(|j| {
            let b = coef[j];
            let se = (sigma2 * xtx_inv[(j, j)]).max(0.0).sqrt();
            let t = b / se;
            let sig = if t.is_nan() {
                1.0
            } else {
                t_cdf_two_tailed(t, df as u32)
            };
            let (name, beta) = if j == 0 {
                (CONSTANT_ROW.to_string(), None)
            } else {
                (
                    predictors[j - 1].to_string(),
                    Some(b * sample_sd(&x_cols[j - 1]) / sd_y),
                )
            };
            CoefficientRow {
                name,
                b,
                std_error: se,
                beta,
                t,
                sig,
            }
        })
        .collect();

    let r_square = (1.0 - sse / sst).clamp(0.0, 1.0);
    let (r, adjusted_r_square) = regression_summary_from(r_square, n, k)?;
    let summary = RegressionSummary {
        r,
        r_square,
        adjusted_r_square,
        std_error_of_estimate: sigma2.sqrt(),
        n,
        k,
    };
    let fit = RegressionFit {
        response: response.to_string(),
        predictors: predictors.iter().map(|s| s.to_string()).collect(),
        coefficients,
        residuals,
    };
    Ok((fit, summary))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dataset(cols: &[&str], rows: &[&[f64]]) -> Dataset {
        Dataset::new(
            cols.iter().map(|s| s.to_string()).collect(),
            rows.iter().map(|r| r.to_vec()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn noiseless_recovery() {
        let rows: Vec<Vec<f64>> = [(1.0, 2.0), (2.0, -1.0), (3.0, 5.0), (4.5, 0.5), (-2.0, 3.0)]
            .iter()
            .map(|&(x1, x2)| vec![3.0 + 2.0 * x1 - x2, x1, x2])
            .collect();
        let d = Dataset::new(vec!["y".into(), "x1".into(), "x2".into()], rows).unwrap();
        let (fit, s) = ols_fit(&d, "y", &["x1", "x2"]).unwrap();
        let b: Vec<f64> = fit.coefficients.iter().map(|c| c.b).collect();
        for (got, want) in b.iter().zip([3.0, 2.0, -1.0]) {
            assert!((got - want).abs() < 1e-9, "{b:?}");
        }
        assert!((s.r_square - 1.0).abs() < 1e-9);
        assert_eq!(fit.coefficients[0].name, CONSTANT_ROW);
        assert_eq!(fit.coefficients.len(), 3);
    }

    #[test]
    fn three_rows_match_normal_equations() {
        // x = (0, 1, 3), y = (1, 2, 6): Σx = 4, Σx² = 10, Σy = 9, Σxy = 20
        // [3 4; 4 10][a b]ᵀ = [9 20]ᵀ → det 14, a = (90 − 80)/14, b = (60 − 36)/14
        let d = dataset(&["y", "x"], &[&[1.0, 0.0], &[2.0, 1.0], &[6.0, 3.0]]);
        let (fit, s) = ols_fit(&d, "y", &["x"]).unwrap();
        assert!((fit.coefficients[0].b - 10.0 / 14.0).abs() < 1e-9);
        assert!((fit.coefficients[1].b - 24.0 / 14.0).abs() < 1e-9);
        for c in &fit.coefficients {
            assert!((c.t - c.b / c.std_error).abs() < 1e-9);
            assert!((0.0..=1.0).contains(&c.sig));
        }
        let (r, adj) = regression_summary_from(s.r_square, 3, 1).unwrap();
        assert!((s.r - r).abs() < 1e-12 && (s.adjusted_r_square - adj).abs() < 1e-12);
        // simple regression: standardized slope equals Pearson r
        let pr = crate::stats::pearson(&[0.0, 1.0, 3.0], &[1.0, 2.0, 6.0]).unwrap();
        assert!((fit.coefficients[1].beta.unwrap() - pr).abs() < 1e-12);
    }

    #[test]
    fn preconditions() {
        let d = dataset(&["y", "x"], &[&[1.0, 0.0], &[2.0, 1.0]]);
        assert!(matches!(ols_fit(&d, "y", &["x"]), Err(StatsError::TooFewRows { .. })));
        let d = dataset(
            &["y", "x", "z"],
            &[&[1.0, 1.0, 2.0], &[2.0, 2.0, 4.0], &[4.0, 3.0, 6.0], &[3.0, 4.0, 8.0]],
        );
        assert!(matches!(
            ols_fit(&d, "y", &["x", "z"]),
            Err(StatsError::RankDeficient(_))
        ));
        assert!(matches!(ols_fit(&d, "y", &["w"]), Err(StatsError::UnknownColumn(_))));
    }

    #[test]
    fn summary_from_r_square() {
        let (r, adj) = regression_summary_from(0.903, 6, 2).unwrap();
        assert!((r - 0.950).abs() < 5e-4);
        assert!((adj - 0.8383333333).abs() < 1e-9);
        assert_eq!(regression_summary_from(1.0, 9, 3).unwrap(), (1.0, 1.0));
        let (r, adj) = regression_summary_from(0.0, 10, 2).unwrap();
        assert_eq!(r, 0.0);
        assert!((adj + 2.0 / 7.0).abs() < 1e-15);
        assert!(regression_summary_from(1.2, 10, 2).is_err());
        assert!(regression_summary_from(0.5, 3, 2).is_err());
    }
}
