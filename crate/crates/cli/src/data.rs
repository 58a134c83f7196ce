//! CSV ingestion. Comma separated, `.` decimals, optional header row.

use std::fs::File;
use std::path::Path;

use nalgebra::DMatrix;

use crate::CliError;

/// Numeric table read from CSV; `rows` are in file order.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Option<Vec<String>>,
    pub rows: Vec<Vec<f64>>,
    pub ncols: usize,
}

impl Table {
    pub fn columns(&self, range: std::ops::Range<usize>) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows.len(), range.len(), |i, j| self.rows[i][range.start + j])
    }
}

/// Reads a numeric CSV. Every row must have the same number of fields as
/// the first one (or `expected_cols` when given). Errors carry 1-based line
/// numbers.
pub fn read_table(path: &Path, header: bool, expected_cols: Option<usize>) -> Result<Table, CliError> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().has_headers(false).flexible(true).trim(csv::Trim::All).from_reader(file);

    let mut table = Table { header: None, rows: Vec::new(), ncols: expected_cols.unwrap_or(0) };
    let mut width = expected_cols;
    for (index, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
        let line = record.position().map_or(index as u64 + 1, |p| p.line());
        if index == 0 && header {
            table.header = Some(record.iter().map(str::to_string).collect());
            continue;
        }
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        let want = *width.get_or_insert(record.len());
        if record.len() != want {
            return Err(CliError::Data(format!(
                "{}: line {line}: expected {want} fields, found {}",
                path.display(),
                record.len()
            )));
        }
        let mut row = Vec::with_capacity(want);
        for (col, field) in record.iter().enumerate() {
            let value: f64 = field.parse().map_err(|_| {
                CliError::Data(format!(
                    "{}: line {line}, column {}: `{field}` is not a number",
                    path.display(),
                    col + 1
                ))
            })?;
            if !value.is_finite() {
                return Err(CliError::Data(format!(
                    "{}: line {line}, column {}: non-finite value",
                    path.display(),
                    col + 1
                )));
            }
            row.push(value);
        }
        table.rows.push(row);
    }
    table.ncols = width.unwrap_or(0);
    Ok(table)
}

/// Writes predictions with header `y_hat_1..y_hat_p`. Values use Rust's
/// shortest round-trip formatting.
pub fn write_predictions(path: &Path, y: &DMatrix<f64>) -> Result<(), CliError> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let wrap = |e: csv::Error| CliError::Data(format!("{}: {e}", path.display()));
    writer.write_record((1..=y.ncols()).map(|j| format!("y_hat_{j}"))).map_err(wrap)?;
    for i in 0..y.nrows() {
        writer.write_record(y.row(i).iter().map(|v| v.to_string())).map_err(wrap)?;
    }
    writer.flush().map_err(|e| CliError::io(path, e))
}
