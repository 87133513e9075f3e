//! Reconstructs which ranked projects make up each system group by matching
//! subsets of the per-project testability values against the group's
//! published count, minimum, maximum and mean.

/// Target statistics of one group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupTarget {
    pub count: usize,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

fn within(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol + 1e-12
}

/// Every index subset of `values` of size `target.count` whose min, max and
/// mean each lie within `tol` of the target, in lexicographic index order.
pub fn matching_subsets(values: &[f64], target: GroupTarget, tol: f64) -> Vec<Vec<usize>> {
    let GroupTarget { count, min, max, mean } = target;
    if count == 0 || count > values.len() {
        return Vec::new();
    }
    let lo = min - tol - 1e-12;
    let hi = max + tol + 1e-12;
    // members must sit inside the (widened) min..max window
    let pool: Vec<usize> = (0..values.len())
        .filter(|&i| values[i] >= lo && values[i] <= hi)
        .collect();

    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(count);
    search(&pool, 0, count, &mut chosen, &mut |subset| {
        let v: Vec<f64> = subset.iter().map(|&i| values[i]).collect();
        let smin = v.iter().copied().fold(f64::INFINITY, f64::min);
        let smax = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let smean = v.iter().sum::<f64>() / count as f64;
        if within(smin, min, tol) && within(smax, max, tol) && within(smean, mean, tol) {
            out.push(subset.to_vec());
        }
    });
    out
}

fn search(pool: &[usize], start: usize, remaining: usize, chosen: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
    if remaining == 0 {
        visit(chosen);
        return;
    }
    for p in start..pool.len() {
        if pool.len() - p < remaining {
            break;
        }
        chosen.push(pool[p]);
        search(pool, p + 1, remaining - 1, chosen, visit);
        chosen.pop();
    }
}
