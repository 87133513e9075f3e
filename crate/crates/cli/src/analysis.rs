use std::fmt::Write;
use std::path::Path;

use anyhow::anyhow;
use serde::Serialize;
use testability_core::stats::correlation::{
    pearson, rank_values, spearman_from_sum_d2, spearman_values, SpearmanPath, TiePolicy,
};
use testability_core::stats::{correlation_t_test, ols_fit, Dataset, DfConvention, StatsError};

use crate::error::{CliError, CliResult};
use crate::output::{csv_field, fixed4, json, Output};
use crate::{Direction, Format, Method, Ties};

/// Rank deficiency and zero variance are computation failures; everything
/// else the stats layer rejects is bad input.
fn stats_error(e: StatsError) -> CliError {
    match e {
        StatsError::RankDeficient(_) | StatsError::ZeroVariance => CliError::failure(e),
        _ => CliError::input(e),
    }
}

fn load(path: &Path) -> CliResult<Dataset> {
    Dataset::from_csv_path(path).map_err(CliError::input)
}

#[derive(Serialize)]
struct RankRow {
    row: usize,
    value: f64,
    rank: f64,
}

pub fn rank(path: &Path, column: &str, ties: Ties, direction: Direction, format: Format) -> CliResult<Output> {
    let d = load(path)?;
    let values = d.column(column).map_err(CliError::input)?;
    let keyed: Vec<f64> = match direction {
        Direction::Ascending => values.clone(),
        Direction::Descending => values.iter().map(|v| -v).collect(),
    };
    let policy = match ties {
        Ties::Average => TiePolicy::Average,
        Ties::First => TiePolicy::First,
    };
    let ranks = rank_values(&keyed, policy).map_err(stats_error)?;
    let rows: Vec<RankRow> = values
        .iter()
        .zip(&ranks)
        .enumerate()
        .map(|(i, (&value, &rank))| RankRow {
            row: i + 1,
            value,
            rank,
        })
        .collect();

    let stdout = match format {
        Format::Json => json(&rows)?,
        Format::Csv => {
            let mut out = format!("row,{},rank\n", csv_field(column));
            for r in &rows {
                let _ = writeln!(out, "{},{},{}", r.row, fixed4(r.value), fixed4(r.rank));
            }
            out
        }
        Format::Text => {
            let w = column.len().max(10);
            let mut out = format!("{:>5}  {:>w$}  {:>6}\n", "row", column, "rank");
            for r in &rows {
                let _ = writeln!(out, "{:>5}  {:>w$.4}  {:>6.1}", r.row, r.value, r.rank);
            }
            out
        }
    };
    Ok(Output::ok(stdout))
}

pub fn fit(path: &Path, response: &str, predictors: &[String], format: Format) -> CliResult<Output> {
    let d = load(path)?;
    for name in std::iter::once(response).chain(predictors.iter().map(String::as_str)) {
        d.column_index(name).map_err(CliError::input)?;
    }
    let preds: Vec<&str> = predictors.iter().map(String::as_str).collect();
    let (fit, summary) = ols_fit(&d, response, &preds).map_err(stats_error)?;

    let stdout = match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Report<'a> {
                summary: &'a testability_core::stats::RegressionSummary,
                coefficients: &'a [testability_core::stats::CoefficientRow],
            }
            json(&Report {
                summary: &summary,
                coefficients: &fit.coefficients,
            })?
        }
        Format::Csv => {
            let mut out = String::from("term,b,std_error,beta,t,sig\n");
            for c in &fit.coefficients {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    csv_field(&c.name),
                    fixed4(c.b),
                    fixed4(c.std_error),
                    c.beta.map(fixed4).unwrap_or_default(),
                    fixed4(c.t),
                    fixed4(c.sig)
                );
            }
            out.push_str("\nr,r_square,adjusted_r_square,std_error_of_estimate,n,k\n");
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                fixed4(summary.r),
                fixed4(summary.r_square),
                fixed4(summary.adjusted_r_square),
                fixed4(summary.std_error_of_estimate),
                summary.n,
                summary.k
            );
            out
        }
        Format::Text => {
            let mut out = String::from("Model Summary\n");
            let _ = writeln!(
                out,
                "{:>10} {:>10} {:>18} {:>27}",
                "R", "R Square", "Adjusted R Square", "Std. Error of the Estimate"
            );
            let _ = writeln!(
                out,
                "{:>10.3} {:>10.3} {:>18.3} {:>27.4}",
                summary.r, summary.r_square, summary.adjusted_r_square, summary.std_error_of_estimate
            );
            let _ = writeln!(out, "n = {}, predictors = {}\n", summary.n, summary.k);

            let w = fit.coefficients.iter().map(|c| c.name.len()).max().unwrap_or(0).max(10);
            let _ = writeln!(out, "Coefficients (dependent variable: {response})");
            let _ = writeln!(
                out,
                "{:<w$}  {:>12} {:>12} {:>10} {:>10} {:>8}",
                "", "B", "Std. Error", "Beta", "t", "Sig."
            );
            for c in &fit.coefficients {
                let beta = c.beta.map(|b| format!("{b:.3}")).unwrap_or_default();
                let _ = writeln!(
                    out,
                    "{:<w$}  {:>12.3} {:>12.3} {:>10} {:>10.3} {:>8.3}",
                    c.name, c.b, c.std_error, beta, c.t, c.sig
                );
            }
            out
        }
    };
    Ok(Output::ok(stdout))
}

#[derive(Serialize)]
struct Cell {
    x: String,
    y: String,
    /// None when either column has zero variance.
    r: Option<f64>,
    n: usize,
    sum_d_squared: Option<f64>,
    path: Option<SpearmanPath>,
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Pearson => "pearson",
        Method::Spearman => "spearman",
    }
}

pub fn correlate(path: &Path, method: Method, columns: &[String], format: Format) -> CliResult<Output> {
    let d = load(path)?;
    let names: Vec<String> = if columns.is_empty() {
        d.column_names().to_vec()
    } else {
        columns.to_vec()
    };
    if names.len() < 2 {
        return Err(CliError::input(anyhow!("need at least two columns to correlate")));
    }
    if d.n() < 2 {
        return Err(CliError::input(anyhow!("need at least two rows, got {}", d.n())));
    }
    let data = names
        .iter()
        .map(|c| d.column(c))
        .collect::<Result<Vec<_>, _>>()
        .map_err(CliError::input)?;

    let mut cells = Vec::with_capacity(names.len() * names.len());
    for (i, x) in data.iter().enumerate() {
        for (j, y) in data.iter().enumerate() {
            let (r, d2, path) = match method {
                Method::Pearson => match pearson(x, y) {
                    Ok(r) => (Some(r), None, None),
                    Err(StatsError::ZeroVariance) => (None, None, None),
                    Err(e) => return Err(CliError::input(e)),
                },
                Method::Spearman => match spearman_values(x, y) {
                    Ok(s) => {
                        let d2 = (s.path == SpearmanPath::SumOfSquaredDifferences).then_some(s.sum_d_squared);
                        (Some(s.r_s), d2, Some(s.path))
                    }
                    Err(StatsError::ZeroVariance) => (None, None, None),
                    Err(e) => return Err(CliError::input(e)),
                },
            };
            cells.push(Cell {
                x: names[i].clone(),
                y: names[j].clone(),
                r,
                n: d.n(),
                sum_d_squared: d2,
                path,
            });
        }
    }

    let stdout = match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Report<'a> {
                method: &'static str,
                columns: &'a [String],
                n: usize,
                cells: &'a [Cell],
            }
            json(&Report {
                method: method_name(method),
                columns: &names,
                n: d.n(),
                cells: &cells,
            })?
        }
        Format::Csv => {
            let mut out = String::from("x,y,r,n,sum_d_squared,note\n");
            for c in &cells {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    csv_field(&c.x),
                    csv_field(&c.y),
                    c.r.map(fixed4).unwrap_or_default(),
                    c.n,
                    c.sum_d_squared.map(fixed4).unwrap_or_default(),
                    if c.r.is_none() { "zero_variance" } else { "" }
                );
            }
            out
        }
        Format::Text => correlation_text(method, &names, &cells, d.n()),
    };
    Ok(Output::ok(stdout))
}

fn correlation_text(method: Method, names: &[String], cells: &[Cell], n: usize) -> String {
    let w = names.iter().map(String::len).max().unwrap_or(0).max(9);
    let k = names.len();
    let mut out = format!("{} correlation, n = {n}\n", method_name(method));
    let _ = write!(out, "{:<w$}", "");
    for name in names {
        let _ = write!(out, "  {name:>w$}");
    }
    out.push('\n');
    let mut marked = false;
    for (i, name) in names.iter().enumerate() {
        let _ = write!(out, "{name:<w$}");
        for c in &cells[i * k..(i + 1) * k] {
            match c.r {
                Some(r) => {
                    let _ = write!(out, "  {r:>w$.4}");
                }
                None => {
                    marked = true;
                    let _ = write!(out, "  {:>w$}", "n/a*");
                }
            }
        }
        out.push('\n');
    }
    if marked {
        out.push_str("* zero variance in at least one column\n");
    }
    if let Method::Spearman = method {
        out.push('\n');
        for i in 0..k {
            for c in &cells[i * k + i + 1..(i + 1) * k] {
                match (c.r, c.sum_d_squared) {
                    (Some(r), Some(d2)) => {
                        let _ = writeln!(out, "{} vs {}: r_s = {r:.4}, sum d^2 = {d2}, n = {}", c.x, c.y, c.n);
                    }
                    (Some(r), None) => {
                        let _ = writeln!(out, "{} vs {}: r_s = {r:.4} (ties, Pearson of average ranks)", c.x, c.y);
                    }
                    _ => {}
                }
            }
        }
    }
    out
}

pub fn spearman_from_sum(sum_d2: f64, n: usize, format: Format) -> CliResult<Output> {
    let r_s = spearman_from_sum_d2(sum_d2, n).map_err(CliError::input)?;
    let stdout = match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Report {
                sum_d_squared: f64,
                n: usize,
                r_s: f64,
            }
            json(&Report {
                sum_d_squared: sum_d2,
                n,
                r_s,
            })?
        }
        Format::Csv => format!("sum_d_squared,n,r_s\n{},{n},{}\n", fixed4(sum_d2), fixed4(r_s)),
        Format::Text => format!("sum d^2 = {sum_d2}, n = {n}\nr_s = {r_s:.4}\n"),
    };
    Ok(Output::ok(stdout))
}

pub fn ttest_r(r: f64, n: usize, alpha: f64, conv: DfConvention, format: Format) -> CliResult<Output> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(CliError::input(anyhow!(
            "--alpha must lie in (0, 1), got {alpha}; see `testability ttest-r --help`"
        )));
    }
    let res = correlation_t_test(r, n, alpha, conv)
        .map_err(|e| CliError::input(anyhow!("{e}; see `testability ttest-r --help`")))?;
    let decision = if res.reject_null { "Reject" } else { "Accept" };

    let stdout = match format {
        Format::Json => json(&res)?,
        Format::Csv => format!(
            "r,n,t,df,df_convention,alpha,critical_value,decision\n{},{},{},{},{},{},{},{}\n",
            fixed4(res.r),
            res.n,
            fixed4(res.t_statistic),
            res.df,
            res.df_convention,
            fixed4(res.alpha),
            fixed4(res.critical_value),
            decision
        ),
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "H0: the two variables are not highly correlated");
            let _ = writeln!(out, "H1: the two variables are highly correlated");
            let _ = writeln!(out, "r = {:.4}, N = {}", res.r, res.n);
            let _ = writeln!(out, "t = {:.4}", res.t_statistic);
            let _ = writeln!(out, "df = {} ({})", res.df, res.df_convention);
            let _ = writeln!(
                out,
                "critical value = {:.4} (two-tailed, alpha = {})",
                res.critical_value, res.alpha
            );
            let relation = if res.reject_null { ">=" } else { "<" };
            let _ = writeln!(out, "decision: {decision} H0 (|t| {relation} critical value)");
            if res.degenerate {
                let _ = writeln!(out, "note: |r| = 1, the statistic is unbounded");
            }
            out
        }
    };
    Ok(Output::ok(stdout))
}
