//! Numeric input: one value per line, or delimited fields with a selected
//! column. Blank lines are ignored; anything else that does not parse is an
//! error.

use std::io::Read;
use std::path::Path;

use crate::error::{CliError, Result};

pub fn read_text(path: &Path) -> Result<String> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::io(path, e))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    }
    Ok(text)
}

fn fields(line: &str) -> impl Iterator<Item = &str> {
    line.split([',', ';', '\t', ' '])
        .map(str::trim)
        .filter(|f| !f.is_empty())
}

/// Parses `text` into values. With `column` set, each line is split on
/// commas, semicolons, tabs or spaces and that zero-based field is taken.
pub fn parse_values(text: &str, path: &Path, column: Option<usize>, header: bool) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    let lines = text.lines().enumerate().skip(usize::from(header));
    for (i, line) in lines {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let field = match column {
            Some(c) => fields(line).nth(c).ok_or_else(|| CliError::MissingColumn {
                path: path.to_path_buf(),
                line: line_no,
                column: c,
            })?,
            None => line.trim(),
        };
        let value = field
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| CliError::Parse {
                path: path.to_path_buf(),
                line: line_no,
                text: field.to_string(),
            })?;
        out.push(value);
    }
    if out.is_empty() {
        return Err(CliError::Empty {
            path: path.to_path_buf(),
        });
    }
    Ok(out)
}

pub fn read_values(path: &Path, column: Option<usize>, header: bool) -> Result<Vec<f64>> {
    parse_values(&read_text(path)?, path, column, header)
}
