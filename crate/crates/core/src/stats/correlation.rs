//! Pearson and Spearman correlation, ranking, and Spearman critical values.

use serde::Serialize;

use super::{sum, StatsError};

pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(StatsError::TooFewPoints {
            needed: 2,
            got: x.len(),
        });
    }
    let n = x.len() as f64;
    let mx = sum(x) / n;
    let my = sum(y) / n;
    let dx: Vec<f64> = x.iter().map(|v| v - mx).collect();
    let dy: Vec<f64> = y.iter().map(|v| v - my).collect();
    let sxx = sum(&dx.iter().map(|d| d * d).collect::<Vec<_>>());
    let syy = sum(&dy.iter().map(|d| d * d).collect::<Vec<_>>());
    if sxx == 0.0 || syy == 0.0 {
        return Err(StatsError::ZeroVariance);
    }
    let sxy = sum(&dx.iter().zip(&dy).map(|(a, b)| a * b).collect::<Vec<_>>());
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// How equal values share ranks.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum TiePolicy {
    /// Each tied value gets the mean of the ranks the group spans.
    #[default]
    Average,
    /// Tied values are ranked in order of appearance.
    First,
}

/// Rank 1 is the smallest value.
pub fn rank_values(values: &[f64], policy: TiePolicy) -> Result<Vec<f64>, StatsError> {
    if values.is_empty() {
        return Err(StatsError::EmptyInput);
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    // stable sort keeps appearance order inside tie groups
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));

    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && values[order[j]] == values[order[i]] {
            j += 1;
        }
        for (k, &idx) in order[i..j].iter().enumerate() {
            ranks[idx] = match policy {
                // ranks i+1 ..= j averaged
                TiePolicy::Average => (i + 1 + j) as f64 / 2.0,
                TiePolicy::First => (i + 1 + k) as f64,
            };
        }
        i = j;
    }
    Ok(ranks)
}

/// Which computation produced a Spearman coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpearmanPath {
    /// 1 − 6Σd²/(n(n²−1)) on two tie-free rankings.
    SumOfSquaredDifferences,
    /// Pearson correlation of average ranks (ties present).
    PearsonOfRanks,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpearmanResult {
    pub r_s: f64,
    pub sum_d_squared: f64,
    pub n: usize,
    pub path: SpearmanPath,
}

/// r_s = 1 − 6Σd²/(n(n²−1)).
pub fn spearman_from_sum_d2(sum_d_squared: f64, n: usize) -> Result<f64, StatsError> {
    if n < 2 {
        return Err(StatsError::TooFewPoints { needed: 2, got: n });
    }
    let n = n as f64;
    Ok(1.0 - 6.0 * sum_d_squared / (n * (n * n - 1.0)))
}

fn is_permutation_ranking(r: &[f64]) -> bool {
    let n = r.len();
    let mut seen = vec![false; n];
    r.iter().all(|&v| {
        if v.fract() != 0.0 || v < 1.0 || v > n as f64 {
            return false;
        }
        let i = v as usize - 1;
        !std::mem::replace(&mut seen[i], true)
    })
}

/// Spearman coefficient of two rankings. When both are tie-free rankings
/// 1..n the squared-difference formula is used; otherwise the inputs are
/// re-ranked with average ties and correlated with Pearson.
pub fn spearman(rank_a: &[f64], rank_b: &[f64]) -> Result<SpearmanResult, StatsError> {
    if rank_a.len() != rank_b.len() {
        return Err(StatsError::LengthMismatch(rank_a.len(), rank_b.len()));
    }
    let n = rank_a.len();
    if n < 2 {
        return Err(StatsError::TooFewPoints { needed: 2, got: n });
    }
    let d2: Vec<f64> = rank_a.iter().zip(rank_b).map(|(a, b)| (a - b) * (a - b)).collect();
    let sum_d_squared = sum(&d2);

    if is_permutation_ranking(rank_a) && is_permutation_ranking(rank_b) {
        return Ok(SpearmanResult {
            r_s: spearman_from_sum_d2(sum_d_squared, n)?,
            sum_d_squared,
            n,
            path: SpearmanPath::SumOfSquaredDifferences,
        });
    }
    let ra = rank_values(rank_a, TiePolicy::Average)?;
    let rb = rank_values(rank_b, TiePolicy::Average)?;
    Ok(SpearmanResult {
        r_s: pearson(&ra, &rb)?,
        sum_d_squared,
        n,
        path: SpearmanPath::PearsonOfRanks,
    })
}

/// Ranks both samples (average ties) and correlates the ranks.
pub fn spearman_values(x: &[f64], y: &[f64]) -> Result<SpearmanResult, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch(x.len(), y.len()));
    }
    spearman(
        &rank_values(x, TiePolicy::Average)?,
        &rank_values(y, TiePolicy::Average)?,
    )
}

/// Two-tailed critical values of r_s for n = 5..=30, columns α = 0.05 and
/// α = 0.01. Transcribed from the standard published table (Zar,
/// Biostatistical Analysis, table of critical values of the Spearman rank
/// correlation coefficient); `None` where no value exists.
pub const SPEARMAN_CRITICAL_TABLE: [(usize, f64, Option<f64>); 26] = [
    (5, 1.000, None),
    (6, 0.886, Some(1.000)),
    (7, 0.786, Some(0.929)),
    (8, 0.738, Some(0.881)),
    (9, 0.700, Some(0.833)),
    (10, 0.648, Some(0.794)),
    (11, 0.618, Some(0.755)),
    (12, 0.587, Some(0.727)),
    (13, 0.560, Some(0.703)),
    (14, 0.538, Some(0.679)),
    (15, 0.521, Some(0.654)),
    (16, 0.503, Some(0.635)),
    (17, 0.485, Some(0.615)),
    (18, 0.472, Some(0.600)),
    (19, 0.460, Some(0.584)),
    (20, 0.447, Some(0.570)),
    (21, 0.435, Some(0.556)),
    (22, 0.425, Some(0.544)),
    (23, 0.415, Some(0.532)),
    (24, 0.406, Some(0.521)),
    (25, 0.398, Some(0.511)),
    (26, 0.390, Some(0.501)),
    (27, 0.382, Some(0.491)),
    (28, 0.375, Some(0.483)),
    (29, 0.368, Some(0.475)),
    (30, 0.362, Some(0.467)),
];

/// Threshold used by the published 23-project ranking comparison at α = 0.01.
/// It replaces the tabulated entry for that one cell.
pub const PUBLISHED_THRESHOLD_N23_ALPHA01: f64 = 0.4815;

pub fn spearman_critical(n: usize, alpha: f64) -> Result<f64, StatsError> {
    let out_of_range = || StatsError::OutOfTableRange { n, alpha };
    let column_01 = if alpha == 0.05 {
        false
    } else if alpha == 0.01 {
        true
    } else {
        return Err(out_of_range());
    };
    if column_01 && n == 23 {
        return Ok(PUBLISHED_THRESHOLD_N23_ALPHA01);
    }
    let &(_, a05, a01) = SPEARMAN_CRITICAL_TABLE
        .iter()
        .find(|(m, _, _)| *m == n)
        .ok_or_else(out_of_range)?;
    if column_01 {
        a01.ok_or_else(out_of_range)
    } else {
        Ok(a05)
    }
}
