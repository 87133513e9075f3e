use std::path::Path;

use testability_core::replication::{replicate, PaperFixtures, TableSelector};

use crate::error::{CliError, CliResult};
use crate::output::{json, Output};
use crate::Format;

pub fn run(table: TableSelector, fixtures: Option<&Path>, format: Format) -> CliResult<Output> {
    let f = match fixtures {
        Some(p) => PaperFixtures::from_path(p),
        None => PaperFixtures::embedded(),
    }
    .map_err(CliError::input)?;

    let report = replicate(&f, table);
    let stdout = match format {
        Format::Text => report.to_text(),
        Format::Csv => report.to_csv(),
        Format::Json => json(&report)?,
    };
    let failed = report.failures().count();
    Ok(Output {
        stdout,
        failure: (failed > 0).then(|| format!("{failed} of {} checks failed", report.checks.len())),
    })
}
