use serde::Serialize;

use crate::error::CliError;

/// What a command prints, plus an optional failure that sets exit status 1
/// after the report has been written.
pub struct Output {
    pub stdout: String,
    pub failure: Option<String>,
}

impl Output {
    pub fn ok(stdout: String) -> Self {
        Output { stdout, failure: None }
    }
}

/// Four-decimal rendering used by every CSV column.
pub fn fixed4(x: f64) -> String {
    format!("{x:.4}")
}

pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn json<T: Serialize + ?Sized>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(CliError::failure)?;
    s.push('\n');
    Ok(s)
}
