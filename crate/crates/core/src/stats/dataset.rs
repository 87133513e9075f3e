use std::collections::HashSet;
use std::io::Read;
use std::path::Path;

use super::StatsError;

/// Rectangular numeric table with named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    column_names: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl Dataset {
    pub fn new(column_names: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self, StatsError> {
        let mut seen = HashSet::new();
        for c in &column_names {
            if !seen.insert(c.as_str()) {
                return Err(StatsError::MalformedDataset(format!("duplicate column `{c}`")));
            }
        }
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != column_names.len()) {
            return Err(StatsError::MalformedDataset(format!(
                "row {} has {} cells, header has {}",
                i + 1,
                row.len(),
                column_names.len()
            )));
        }
        Ok(Dataset { column_names, rows })
    }

    /// CSV with a header row, `.` decimals and no missing cells.
    pub fn from_csv_reader(reader: impl Read) -> Result<Self, StatsError> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let header: Vec<String> = rdr
            .headers()
            .map_err(|e| StatsError::MalformedDataset(e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect();
        let mut rows = Vec::new();
        for (i, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| StatsError::MalformedDataset(e.to_string()))?;
            let row = record
                .iter()
                .enumerate()
                .map(|(j, cell)| {
                    cell.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| {
                        StatsError::MalformedDataset(format!(
                            "line {}, column `{}`: `{cell}` is not a number",
                            i + 2,
                            header.get(j).map(String::as_str).unwrap_or("?")
                        ))
                    })
                })
                .collect::<Result<Vec<f64>, _>>()?;
            rows.push(row);
        }
        Dataset::new(header, rows)
    }

    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self, StatsError> {
        let path = path.as_ref();
        let file =
            std::fs::File::open(path).map_err(|e| StatsError::MalformedDataset(format!("{}: {e}", path.display())))?;
        Self::from_csv_reader(file)
    }

    pub fn column_names(&self) -> &[String] {
        &self.column_names
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn column_index(&self, name: &str) -> Result<usize, StatsError> {
        self.column_names
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| StatsError::UnknownColumn(name.to_string()))
    }

    pub fn column(&self, name: &str) -> Result<Vec<f64>, StatsError> {
        let j = self.column_index(name)?;
        Ok(self.rows.iter().map(|r| r[j]).collect())
    }
}
