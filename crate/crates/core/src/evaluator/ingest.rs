//! Dataset files: `x1..xm,cp,cd` CSV with optional `# key=value` lines.

use std::path::Path;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::geometry::design::{DIM_FIXED_WIDTH, DIM_FREE_WIDTH};
use crate::table::Table;

/// Reads a dataset file; the feature count must be 14 or 18.
pub fn ingest_csv(path: &Path) -> Result<Dataset> {
    let table = Table::read(path)?;
    ingest_table(&table, path)
}

pub fn ingest_table(table: &Table, origin: &Path) -> Result<Dataset> {
    let data = Dataset::from_table(table, origin)?;
    let m = table.header.len() - 2;
    if m != DIM_FIXED_WIDTH && m != DIM_FREE_WIDTH {
        return Err(Error::parse(
            origin,
            table.header_line.max(1),
            format!("expected {DIM_FIXED_WIDTH} or {DIM_FREE_WIDTH} features, found {m}"),
        ));
    }
    Ok(data)
}

pub fn write_dataset(path: &Path, data: &Dataset, meta: &[(String, String)]) -> Result<()> {
    let mut t = data.to_table();
    t.meta = meta.to_vec();
    t.write(path)
}
