use std::fmt::Write;
use std::path::PathBuf;

use anyhow::{anyhow, Context};
use serde::Serialize;
use testability_core::metrics::{all_class_metrics, project_metrics, Aggregate, MetricVector};
use testability_core::model::{load_design_model, resolve_hierarchy, validate_model, DesignModel, ResolvedHierarchy};
use testability_core::quality::{load_coefficients, rank_projects, QualityModels, RankDirection, TestabilityReport};

use crate::error::{CliError, CliResult};
use crate::output::{csv_field, fixed4, json, Output};
use crate::{AggregateArg, Direction, Format};

pub struct MeasureArgs {
    pub models: Vec<PathBuf>,
    pub modifiability: String,
    pub flexibility: String,
    pub testability: String,
    pub aggregate: AggregateArg,
    pub direction: Direction,
    pub classes: bool,
    pub format: Format,
}

struct Loaded {
    model: DesignModel,
    hierarchy: ResolvedHierarchy,
}

fn load(path: &PathBuf) -> CliResult<Loaded> {
    let model = load_design_model(path)
        .with_context(|| format!("{}", path.display()))
        .map_err(CliError::Input)?;
    let report = validate_model(&model);
    if !report.is_clean() {
        let list: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        return Err(CliError::input(anyhow!(
            "{}: invalid model: {}",
            path.display(),
            list.join("; ")
        )));
    }
    let hierarchy = resolve_hierarchy(&model)
        .with_context(|| format!("{}", path.display()))
        .map_err(CliError::Input)?;
    Ok(Loaded { model, hierarchy })
}

fn coefficients(args: &MeasureArgs) -> CliResult<QualityModels> {
    let get = |flag: &str, src: &str| {
        load_coefficients(src)
            .with_context(|| format!("--{flag} {src}"))
            .map_err(CliError::Input)
    };
    Ok(QualityModels {
        modifiability: get("modifiability", &args.modifiability)?,
        flexibility: get("flexibility", &args.flexibility)?,
        testability: get("testability", &args.testability)?,
    })
}

pub fn run(args: &MeasureArgs) -> CliResult<Output> {
    let models = coefficients(args)?;
    let loaded = args.models.iter().map(load).collect::<CliResult<Vec<_>>>()?;
    let aggregate = match args.aggregate {
        AggregateArg::Mean => Aggregate::Mean,
        AggregateArg::Sum => Aggregate::Sum,
    };

    if args.classes {
        return class_rows(&loaded, aggregate, args.format);
    }

    let mut reports = Vec::with_capacity(loaded.len());
    for (l, path) in loaded.iter().zip(&args.models) {
        let pv = project_metrics(&l.model, &l.hierarchy, aggregate)
            .with_context(|| format!("{}", path.display()))
            .map_err(CliError::Input)?;
        let report = models
            .evaluate(&l.model.project_name, pv)
            .with_context(|| format!("{}", path.display()))
            .map_err(CliError::Input)?;
        reports.push(report);
    }
    let direction = match args.direction {
        Direction::Ascending => RankDirection::Ascending,
        Direction::Descending => RankDirection::Descending,
    };
    let ranked = rank_projects(&reports, direction).map_err(CliError::failure)?;

    let stdout = match args.format {
        Format::Csv => report_csv(&ranked),
        Format::Json => json(&JsonReport {
            aggregate: aggregate.to_string(),
            rank_direction: direction_name(args.direction),
            projects: &ranked,
        })?,
        Format::Text => report_text(&ranked, aggregate, args.direction),
    };
    Ok(Output::ok(stdout))
}

fn direction_name(d: Direction) -> &'static str {
    match d {
        Direction::Ascending => "ascending",
        Direction::Descending => "descending",
    }
}

#[derive(Serialize)]
struct JsonReport<'a> {
    aggregate: String,
    rank_direction: &'static str,
    projects: &'a [TestabilityReport],
}

fn report_csv(reports: &[TestabilityReport]) -> String {
    let mut out = String::from("project,enm,inm,cpm,com,modifiability,flexibility,testability,rank\n");
    for r in reports {
        let m = &r.metrics;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            csv_field(&r.project),
            fixed4(m.enm),
            fixed4(m.inm),
            fixed4(m.cpm),
            fixed4(m.com),
            fixed4(r.factors.modifiability),
            fixed4(r.factors.flexibility),
            fixed4(r.testability),
            fixed4(r.rank.unwrap_or(f64::NAN)),
        );
    }
    out
}

fn report_text(reports: &[TestabilityReport], aggregate: Aggregate, direction: Direction) -> String {
    let width = reports.iter().map(|r| r.project.len()).max().unwrap_or(0).max(7);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<width$}  {:>8} {:>8} {:>8} {:>8}  {:>13} {:>11} {:>11}  {:>6}",
        "project", "ENM", "INM", "CPM", "COM", "Modifiability", "Flexibility", "Testability", "rank"
    );
    for r in reports {
        let m = &r.metrics;
        let _ = writeln!(
            out,
            "{:<width$}  {:>8.4} {:>8.4} {:>8.4} {:>8.4}  {:>13.4} {:>11.4} {:>11.4}  {:>6}",
            r.project,
            m.enm,
            m.inm,
            m.cpm,
            m.com,
            r.factors.modifiability,
            r.factors.flexibility,
            r.testability,
            r.rank.map(format_rank).unwrap_or_default(),
        );
    }
    let _ = writeln!(
        out,
        "\nclass metrics aggregated by {aggregate}; ENM, INM, COM are ratios in [0, 1], CPM counts referenced classes"
    );
    let _ = writeln!(
        out,
        "rank 1 = {} testability",
        match direction {
            Direction::Ascending => "lowest",
            Direction::Descending => "highest",
        }
    );
    out
}

fn format_rank(r: f64) -> String {
    if r.fract() == 0.0 {
        format!("{r:.0}")
    } else {
        format!("{r:.1}")
    }
}

#[derive(Serialize)]
struct ClassRow<'a> {
    project: &'a str,
    class: &'a str,
    #[serde(flatten)]
    metrics: MetricVector,
}

fn class_rows(loaded: &[Loaded], aggregate: Aggregate, format: Format) -> CliResult<Output> {
    let mut rows = Vec::new();
    for l in loaded {
        let project = l.model.project_name.as_str();
        for (class, v) in all_class_metrics(&l.model, &l.hierarchy).map_err(CliError::input)? {
            rows.push(ClassRow {
                project,
                class,
                metrics: v,
            });
        }
        rows.push(ClassRow {
            project,
            class: "*",
            metrics: project_metrics(&l.model, &l.hierarchy, aggregate).map_err(CliError::input)?,
        });
    }
    let stdout = match format {
        Format::Json => json(&rows)?,
        Format::Csv => {
            let mut out = String::from("project,class,enm,inm,cpm,com\n");
            for r in &rows {
                let m = &r.metrics;
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    csv_field(r.project),
                    csv_field(r.class),
                    fixed4(m.enm),
                    fixed4(m.inm),
                    fixed4(m.cpm),
                    fixed4(m.com)
                );
            }
            out
        }
        Format::Text => {
            let pw = rows.iter().map(|r| r.project.len()).max().unwrap_or(0).max(7);
            let cw = rows.iter().map(|r| r.class.len()).max().unwrap_or(0).max(5);
            let mut out = String::new();
            let _ = writeln!(
                out,
                "{:<pw$}  {:<cw$}  {:>8} {:>8} {:>8} {:>8}",
                "project", "class", "ENM", "INM", "CPM", "COM"
            );
            for r in &rows {
                let m = &r.metrics;
                let _ = writeln!(
                    out,
                    "{:<pw$}  {:<cw$}  {:>8.4} {:>8.4} {:>8.4} {:>8.4}",
                    r.project, r.class, m.enm, m.inm, m.cpm, m.com
                );
            }
            let _ = writeln!(out, "\n* = project vector ({aggregate} over classes)");
            out
        }
    };
    Ok(Output::ok(stdout))
}
