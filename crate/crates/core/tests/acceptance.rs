//! Acceptance suite. Each criterion prints one PASS/FAIL line; run with
//! `cargo test -p testability-core --test acceptance -- --nocapture` to see them.

mod common;

use std::time::Instant;

use common::{fixture_path, random_model, rename_everything};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use testability_core::metrics::{all_class_metrics, project_metrics, Aggregate, MetricVector};
use testability_core::model::{load_design_model, resolve_hierarchy, validate_model, DesignModel};
use testability_core::quality::{flexibility, modifiability, testability, CoefficientSet, FactorScores};
use testability_core::replication::{reconstruct_groups, PaperFixtures};
use testability_core::stats::correlation::{pearson, rank_values, spearman, spearman_from_sum_d2, TiePolicy};
use testability_core::stats::{
    correlation_t_test, ols_fit, regression_summary_from, t_cdf_two_tailed, Dataset, DfConvention,
};

type Outcome = Result<String, String>;
type Metrics4 = (f64, f64, f64, f64);
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn fixtures() -> PaperFixtures {
    PaperFixtures::embedded().expect("embedded fixtures intact")
}

/// 1. Testability model at the group mean factors reproduces each printed mean.
fn ac1_mean_consistency() -> Outcome {
    let tc = CoefficientSet::default_testability();
    let cases = [
        ("W", 8.2029, 7.3063, 283.2014),
        ("X", 3.9059, 6.4951, 74.1701),
        ("Y", 2.7666, 7.2894, 15.7328),
        ("Z", 2.9344, 5.9949, 27.8534),
    ];
    let mut worst = 0.0_f64;
    for (sys, m, f, printed) in cases {
        let t = testability(
            &FactorScores {
                modifiability: m,
                flexibility: f,
            },
            &tc,
        )
        .map_err(|e| e.to_string())?;
        worst = worst.max((t - printed).abs());
        ensure(close(t, printed, 0.01), || format!("system {sys}: {t:.4} vs {printed}"))?;
    }
    Ok(format!("4 systems, max |diff| = {worst:.4} (tol 0.01)"))
}

/// 2. Per-row r_s with n = 23 and both rank columns.
fn ac2_table4_spearman() -> Outcome {
    let f = fixtures();
    let rows = &f.table4.rows;
    ensure(rows.len() == 23, || format!("{} rows", rows.len()))?;
    let computed: Vec<f64> = rows.iter().map(|r| r.computed_value).collect();
    let known: Vec<f64> = rows.iter().map(|r| r.known_value).collect();
    let cr = rank_values(&computed, TiePolicy::First).map_err(|e| e.to_string())?;
    let kr = rank_values(&known, TiePolicy::First).map_err(|e| e.to_string())?;
    for (i, row) in rows.iter().enumerate() {
        ensure(cr[i] == f64::from(row.computed_rank), || {
            format!("{}: computed rank {} vs {}", row.project, cr[i], row.computed_rank)
        })?;
        ensure(kr[i] == f64::from(row.known_rank), || {
            format!("{}: known rank {} vs {}", row.project, kr[i], row.known_rank)
        })?;
        let d2 = (cr[i] - kr[i]).powi(2);
        ensure(d2 == row.sum_d_squared, || {
            format!("{}: d² {d2} vs {}", row.project, row.sum_d_squared)
        })?;
        let rs = spearman_from_sum_d2(d2, 23).map_err(|e| e.to_string())?;
        ensure(close(rs, row.r_s, 0.00005), || {
            format!("{}: r_s {rs:.6} vs {}", row.project, row.r_s)
        })?;
    }
    let printed: Vec<f64> = [1.0000, 0.9956, 0.9995].to_vec();
    for p in printed {
        ensure(rows.iter().any(|r| r.r_s == p), || format!("printed value {p} missing"))?;
    }
    Ok("23 rows: ranks exact, r_s within 0.00005".into())
}

/// 3. The eight correlation t-tests.
fn ac3_table5() -> Outcome {
    // (system, N, r, printed t, printed critical, reject)
    let cells = [
        ("W/M", 6, 0.999, 44.69, 2.447, true),
        ("X/M", 4, 0.999, 31.60, 2.776, true),
        ("Y/M", 7, 0.955, 7.20, 2.365, true),
        ("Z/M", 4, 0.999, 31.60, 2.776, true),
        ("W/F", 6, 0.877, 3.65, 2.447, true),
        ("X/F", 4, 0.772, 1.72, 2.776, false),
        ("Y/F", 7, 0.763, 2.64, 2.365, true),
        ("Z/F", 4, 0.987, 8.68, 2.776, true),
    ];
    for (cell, n, r, t, crit, reject) in cells {
        let res = correlation_t_test(r, n, 0.05, DfConvention::N).map_err(|e| e.to_string())?;
        ensure(close(res.t_statistic, t, 0.01), || {
            format!("{cell}: t {:.4} vs {t}", res.t_statistic)
        })?;
        ensure(close(res.critical_value, crit, 0.001), || {
            format!("{cell}: critical {:.4} vs {crit}", res.critical_value)
        })?;
        ensure(res.reject_null == reject, || format!("{cell}: decision mismatch"))?;
    }
    Ok("8 cells: t within 0.01, critical within 0.001, decisions match (X/F Accept)".into())
}

/// 4. Regression table internal consistency.
fn ac4_table1_2() -> Outcome {
    for (b, se, t) in [
        (-98.666, 25.518, -3.866),
        (49.210, 11.538, 4.265),
        (-2.983, 1.768, -1.687),
    ] {
        ensure(close(b / se, t, 0.001), || format!("{b}/{se} = {:.4} vs {t}", b / se))?;
    }
    for (t, sig) in [(3.866, 0.031), (4.265, 0.024), (1.687, 0.190)] {
        let p = t_cdf_two_tailed(t, 3);
        ensure(close(p, sig, 0.001), || format!("p({t}, 3) = {p:.4} vs {sig}"))?;
    }
    let (r, adj) = regression_summary_from(0.903, 6, 2).map_err(|e| e.to_string())?;
    ensure(close(r, 0.950, 0.001), || format!("R {r:.4}"))?;
    ensure(close(adj, 0.839, 0.001), || format!("adjusted R² {adj:.4}"))?;
    Ok(format!("t, Sig. within 0.001; R = {r:.4}, adjusted R² = {adj:.4}"))
}

/// Brute force over every subset of the right size; independent of the
/// pruned search in the replication module.
fn brute_force_groups(values: &[f64], count: usize, min: f64, max: f64, mean: f64) -> Vec<Vec<usize>> {
    let n = values.len();
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != count {
            continue;
        }
        let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let v: Vec<f64> = idx.iter().map(|&i| values[i]).collect();
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let m = v.iter().sum::<f64>() / count as f64;
        if close(lo, min, 0.01) && close(hi, max, 0.01) && close(m, mean, 0.01) {
            out.push(idx);
        }
    }
    out
}

/// 5. Group reconstruction from the ranking table.
fn ac5_groups() -> Outcome {
    let f = fixtures();
    let rows = &f.table4.rows;
    let values: Vec<f64> = rows.iter().map(|r| r.computed_value).collect();
    let expected = [
        ("W", "p1 p2 p3 p4 p5 p9"),
        ("X", "p6 p7 p8 p10"),
        ("Y", "p11 p13 p15 p16 p19 p20 p21"),
        ("Z", "p17 p18 p22 p23"),
    ];
    let recon = reconstruct_groups(&f);
    for ((sys, members), (g, rg)) in expected.iter().zip(f.table3.groups.iter().zip(&recon.groups)) {
        ensure(g.system == *sys && rg.system == *sys, || {
            format!("group order at {sys}")
        })?;
        let t = g.testability;
        let oracle = brute_force_groups(&values, g.projects, t.min, t.max, t.mean);
        ensure(oracle.len() == 1, || {
            format!("{sys}: oracle finds {} subsets", oracle.len())
        })?;
        let oracle_names: Vec<String> = oracle[0].iter().map(|&i| rows[i].project.clone()).collect();
        let want: Vec<String> = members.split(' ').map(String::from).collect();
        ensure(oracle_names == want, || format!("{sys}: oracle {oracle_names:?}"))?;
        ensure(rg.candidates == vec![want.clone()], || {
            format!("{sys}: search {:?}", rg.candidates)
        })?;

        let v: Vec<f64> = oracle[0].iter().map(|&i| values[i]).collect();
        let d = testability_core::stats::descriptive_stats(&v).map_err(|e| e.to_string())?;
        ensure(
            close(d.min, t.min, 0.01) && close(d.max, t.max, 0.01) && close(d.mean, t.mean, 0.01),
            || {
                format!(
                    "{sys}: ({}, {}, {}) vs ({}, {}, {})",
                    d.min, d.max, d.mean, t.min, t.max, t.mean
                )
            },
        )?;
    }
    ensure(recon.orphans == ["p12", "p14"], || {
        format!("orphans {:?}", recon.orphans)
    })?;
    Ok("unique assignment W/X/Y/Z, stats within 0.01, orphans p12, p14".into())
}

/// 6. Noiseless OLS recovery on random datasets.
fn ac6_ols() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0150_0006);
    let mut worst_coef = 0.0_f64;
    for case in 0..100 {
        let k = rng.gen_range(1..=4);
        let n = rng.gen_range(k + 2..=50);
        let truth: Vec<f64> = (0..=k).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let mut names = vec!["y".to_string()];
        names.extend((1..=k).map(|j| format!("x{j}")));
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                let xs: Vec<f64> = (0..k).map(|_| rng.gen_range(-10.0..10.0)).collect();
                let y = truth[0] + xs.iter().zip(&truth[1..]).map(|(x, b)| x * b).sum::<f64>();
                std::iter::once(y).chain(xs).collect()
            })
            .collect();
        let d = Dataset::new(names.clone(), rows.clone()).map_err(|e| e.to_string())?;
        let preds: Vec<&str> = names[1..].iter().map(String::as_str).collect();
        let (fit, summary) = ols_fit(&d, "y", &preds).map_err(|e| format!("case {case}: {e}"))?;

        for (c, want) in fit.coefficients.iter().zip(&truth) {
            worst_coef = worst_coef.max((c.b - want).abs());
            ensure(close(c.b, *want, 1e-9), || {
                format!("case {case}: {} = {} vs {want}", c.name, c.b)
            })?;
        }
        ensure(close(summary.r_square, 1.0, 1e-9), || {
            format!("case {case}: R² {}", summary.r_square)
        })?;

        let bound = 1e-8 * n as f64;
        let res_sum: f64 = fit.residuals.iter().sum();
        ensure(res_sum.abs() <= bound, || format!("case {case}: Σe = {res_sum:e}"))?;
        for j in 1..=k {
            let s: f64 = fit.residuals.iter().zip(&rows).map(|(e, r)| e * r[j]).sum();
            ensure(s.abs() <= bound, || format!("case {case}: Σe·x{j} = {s:e}"))?;
        }
        let y_mean = rows.iter().map(|r| r[0]).sum::<f64>() / n as f64;
        let sst: f64 = rows.iter().map(|r| (r[0] - y_mean).powi(2)).sum();
        let sse: f64 = fit.residuals.iter().map(|e| e * e).sum();
        ensure(close(summary.r_square, 1.0 - sse / sst, 1e-9), || {
            format!("case {case}: R² identity")
        })?;
    }
    Ok(format!("100 datasets, max coefficient error {worst_coef:.2e}"))
}

fn permutations(n: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    // Heap's algorithm
    fn heap(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if k <= 1 {
            out.push(p.iter().map(|&v| (v + 1) as f64).collect());
            return;
        }
        for i in 0..k {
            heap(k - 1, p, out);
            if k.is_multiple_of(2) {
                p.swap(i, k - 1);
            } else {
                p.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut p, &mut out);
    out
}

/// 7. Squared-difference Spearman equals Pearson of ranks, every pair, n ≤ 6.
fn ac7_bridge() -> Outcome {
    let mut pairs = 0usize;
    let mut worst = 0.0_f64;
    for n in 2..=6 {
        let perms = permutations(n);
        for a in &perms {
            for b in &perms {
                let s = spearman(a, b).map_err(|e| e.to_string())?.r_s;
                let p = pearson(a, b).map_err(|e| e.to_string())?;
                worst = worst.max((s - p).abs());
                ensure(close(s, p, 1e-9), || format!("n={n}: {a:?} vs {b:?}: {s} vs {p}"))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} permutation pairs, max |diff| = {worst:.1e}"))
}

fn metric_tuple(v: &MetricVector) -> Metrics4 {
    (v.enm, v.inm, v.cpm, v.com)
}

fn metrics_of(m: &DesignModel) -> Result<Vec<(String, Metrics4)>, String> {
    let h = resolve_hierarchy(m).map_err(|e| e.to_string())?;
    Ok(all_class_metrics(m, &h)
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|(n, v)| (n.to_string(), metric_tuple(&v)))
        .collect())
}

/// 8. Metric bounds and invariances on random models, plus the golden fixture.
fn ac8_metrics() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0150_0008);
    for case in 0..500 {
        let m = random_model(&mut rng);
        ensure(validate_model(&m).is_clean(), || format!("case {case}: invalid model"))?;
        let base = metrics_of(&m)?;
        for (name, (enm, inm, cpm, com)) in &base {
            ensure(
                (0.0..=1.0).contains(enm) && (0.0..=1.0).contains(inm) && (0.0..=1.0).contains(com) && *cpm >= 0.0,
                || format!("case {case}: class {name} out of bounds"),
            )?;
        }

        let renamed = metrics_of(&rename_everything(&m))?;
        let a: Vec<_> = base.iter().map(|(_, v)| *v).collect();
        let b: Vec<_> = renamed.iter().map(|(_, v)| *v).collect();
        ensure(a == b, || format!("case {case}: renaming changed metrics"))?;

        let mut permuted = m.clone();
        let shift = rng.gen_range(0..permuted.classes.len());
        permuted.classes.rotate_left(shift);
        permuted.classes.reverse();
        let mut p = metrics_of(&permuted)?;
        p.sort_by(|x, y| x.0.cmp(&y.0));
        let mut sorted = base.clone();
        sorted.sort_by(|x, y| x.0.cmp(&y.0));
        ensure(p == sorted, || format!("case {case}: class order changed metrics"))?;

        let h1 = resolve_hierarchy(&m).map_err(|e| e.to_string())?;
        let h2 = resolve_hierarchy(&permuted).map_err(|e| e.to_string())?;
        let pv1 = project_metrics(&m, &h1, Aggregate::Mean).map_err(|e| e.to_string())?;
        let pv2 = project_metrics(&permuted, &h2, Aggregate::Mean).map_err(|e| e.to_string())?;
        ensure(metric_tuple(&pv1) == metric_tuple(&pv2), || {
            format!("case {case}: project vector changed")
        })?;
    }

    let m = load_design_model(fixture_path("three_class.json")).map_err(|e| e.to_string())?;
    let h = resolve_hierarchy(&m).map_err(|e| e.to_string())?;
    let got: Vec<_> = metrics_of(&m)?;
    let want = vec![
        ("A".to_string(), (1.0 / 2.0, 0.0, 2.0, 1.0 / 2.0)),
        ("B".to_string(), (1.0, 2.0 / 3.0, 1.0, 1.0)),
        ("C".to_string(), (1.0, 0.0, 0.0, 1.0)),
    ];
    ensure(got == want, || format!("golden classes: {got:?}"))?;
    let pv = project_metrics(&m, &h, Aggregate::Mean).map_err(|e| e.to_string())?;
    ensure(metric_tuple(&pv) == (5.0 / 6.0, 2.0 / 9.0, 1.0, 5.0 / 6.0), || {
        format!("golden project: {pv:?}")
    })?;
    Ok("500 random models: bounds and invariances exact; golden fixture exact".into())
}

/// 9. Each model evaluated at the batch mean equals the mean of its outputs.
fn ac9_mean_commutation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0150_0009);
    let mc = CoefficientSet::default_modifiability();
    let fc = CoefficientSet::default_flexibility();
    let tc = CoefficientSet::default_testability();
    let mut worst = 0.0_f64;
    for batch in 0..100 {
        let size = rng.gen_range(1..=25);
        let vs: Vec<MetricVector> = (0..size)
            .map(|_| {
                MetricVector::project(
                    rng.gen_range(0.0..=1.0),
                    rng.gen_range(0.0..=1.0),
                    rng.gen_range(0.0..10.0),
                    rng.gen_range(0.0..=1.0),
                )
            })
            .collect();
        let n = size as f64;
        let mean_v = MetricVector::project(
            vs.iter().map(|v| v.enm).sum::<f64>() / n,
            vs.iter().map(|v| v.inm).sum::<f64>() / n,
            vs.iter().map(|v| v.cpm).sum::<f64>() / n,
            vs.iter().map(|v| v.com).sum::<f64>() / n,
        );
        let mods: Vec<f64> = vs.iter().map(|v| modifiability(v, &mc).unwrap()).collect();
        let flex: Vec<f64> = vs.iter().map(|v| flexibility(v, &fc).unwrap()).collect();
        let mean = |x: &[f64]| x.iter().sum::<f64>() / n;

        let dm = (modifiability(&mean_v, &mc).unwrap() - mean(&mods)).abs();
        let df = (flexibility(&mean_v, &fc).unwrap() - mean(&flex)).abs();
        let tests: Vec<f64> = mods
            .iter()
            .zip(&flex)
            .map(|(&m, &f)| {
                testability(
                    &FactorScores {
                        modifiability: m,
                        flexibility: f,
                    },
                    &tc,
                )
                .unwrap()
            })
            .collect();
        let at_mean = testability(
            &FactorScores {
                modifiability: mean(&mods),
                flexibility: mean(&flex),
            },
            &tc,
        )
        .unwrap();
        let dt = (at_mean - mean(&tests)).abs();
        worst = worst.max(dm).max(df).max(dt);
        ensure(dm <= 1e-9 && df <= 1e-9 && dt <= 1e-9, || {
            format!("batch {batch}: diffs {dm:e} {df:e} {dt:e}")
        })?;
    }
    Ok(format!("100 batches x 3 models, max |diff| = {worst:.1e}"))
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 9] = [
        ("AC1 testability model at group means", ac1_mean_consistency),
        ("AC2 ranking table Spearman and ranks", ac2_table4_spearman),
        ("AC3 correlation t-tests", ac3_table5),
        ("AC4 regression table consistency", ac4_table1_2),
        ("AC5 group reconstruction", ac5_groups),
        ("AC6 OLS noiseless recovery", ac6_ols),
        ("AC7 Spearman-Pearson bridge", ac7_bridge),
        ("AC8 metric bounds and invariances", ac8_metrics),
        ("AC9 model mean commutation", ac9_mean_commutation),
    ];
    let start = Instant::now();
    let mut failed = Vec::new();
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                println!("FAIL  {name}: {why}");
                failed.push(name);
            }
        }
    }
    println!(
        "acceptance: {} of 9 passed in {:.2?}",
        9 - failed.len(),
        start.elapsed()
    );
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
