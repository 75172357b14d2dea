//! CSV ingestion for the CLI.
//!
//! Deliberately small: comma delimiter, mandatory header line, decimal
//! point only. Empty cells, "NA" and unparseable entries count as missing;
//! rows with a missing value in any selected column are dropped pairwise
//! with a counted warning.

use std::path::Path;

use crate::error::{Error, Result};

/// Fully numeric selected columns after filtering and row dropping.
#[derive(Debug, Clone)]
pub struct CsvTable {
    pub names: Vec<String>,
    pub columns: Vec<Vec<f64>>,
    pub rows: usize,
    /// Rows dropped because a selected cell was missing or non-numeric.
    pub dropped_rows: usize,
}

impl CsvTable {
    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.columns[i].as_slice())
    }
}

/// A single equality predicate `column==value`.
#[derive(Debug, Clone, PartialEq)]
pub struct Filter {
    pub column: String,
    pub value: f64,
}

impl Filter {
    pub fn parse(text: &str) -> Result<Filter> {
        let (col, val) = text
            .split_once("==")
            .ok_or_else(|| Error::Csv(format!("filter {text:?} must look like column==value")))?;
        let value: f64 = val
            .trim()
            .parse()
            .map_err(|_| Error::Csv(format!("filter value {val:?} is not numeric")))?;
        Ok(Filter {
            column: col.trim().to_string(),
            value,
        })
    }
}

fn parse_cell(cell: &str) -> Option<f64> {
    let cell = cell.trim();
    if cell.is_empty() || cell.eq_ignore_ascii_case("na") || cell.eq_ignore_ascii_case("nan") {
        return None;
    }
    cell.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Load the named columns, optionally keeping only rows where the filter
/// column equals the filter value exactly.
pub fn load_csv(path: &Path, columns: &[&str], filter: Option<&Filter>) -> Result<CsvTable> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Csv(format!("cannot read {}: {e}", path.display())))?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Csv("file is empty (no header)".into()))?;
    let names: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
    {
        let mut seen = std::collections::HashSet::new();
        for n in &names {
            if !seen.insert(n) {
                return Err(Error::Csv(format!("duplicate column name {n:?}")));
            }
        }
    }
    let col_index = |name: &str| -> Result<usize> {
        names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::Csv(format!("column {name:?} not found in header")))
    };
    let selected: Vec<usize> = columns
        .iter()
        .map(|c| col_index(c))
        .collect::<Result<_>>()?;
    let filter_idx = filter.map(|f| col_index(&f.column)).transpose()?;

    let mut out: Vec<Vec<f64>> = vec![Vec::new(); selected.len()];
    let mut dropped = 0usize;
    let mut rows = 0usize;
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if let (Some(fi), Some(f)) = (filter_idx, filter) {
            match cells.get(fi).and_then(|c| parse_cell(c)) {
                Some(v) if v == f.value => {}
                _ => continue, // non-matching (or missing) filter value
            }
        }
        let parsed: Vec<Option<f64>> = selected
            .iter()
            .map(|&i| cells.get(i).and_then(|c| parse_cell(c)))
            .collect();
        if parsed.iter().all(|v| v.is_some()) {
            for (col, v) in out.iter_mut().zip(parsed) {
                col.push(v.unwrap());
            }
            rows += 1;
        } else {
            dropped += 1;
        }
    }
    if rows == 0 {
        return Err(Error::Csv(
            "no usable rows after filtering and dropping missing values".into(),
        ));
    }
    Ok(CsvTable {
        names: columns.iter().map(|s| s.to_string()).collect(),
        columns: out,
        rows,
        dropped_rows: dropped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_tmp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn loads_clean_file() {
        let f = write_tmp("a,b\n1,4\n2,5\n3,6\n");
        let t = load_csv(f.path(), &["a", "b"], None).unwrap();
        assert_eq!(t.rows, 3);
        assert_eq!(t.dropped_rows, 0);
        assert_eq!(t.column("a").unwrap(), &[1.0, 2.0, 3.0]);
        assert_eq!(t.column("b").unwrap(), &[4.0, 5.0, 6.0]);
    }

    #[test]
    fn drops_rows_with_missing_values_pairwise() {
        let f = write_tmp("a,b\n1,4\nNA,5\n3,6\n");
        let t = load_csv(f.path(), &["a", "b"], None).unwrap();
        assert_eq!(t.rows, 2);
        assert_eq!(t.dropped_rows, 1);
        assert_eq!(t.column("a").unwrap(), &[1.0, 3.0]);
    }

    #[test]
    fn filter_keeps_matching_rows_only() {
        let f = write_tmp("v,flag\n1,0\n2,1\n3,1\n4,0\n");
        let filter = Filter::parse("flag==1").unwrap();
        let t = load_csv(f.path(), &["v"], Some(&filter)).unwrap();
        assert_eq!(t.column("v").unwrap(), &[2.0, 3.0]);
    }

    #[test]
    fn errors_are_informative() {
        let f = write_tmp("a,b\n1,2\n");
        assert!(matches!(
            load_csv(f.path(), &["missing"], None),
            Err(Error::Csv(_))
        ));
        let filter = Filter::parse("a==9").unwrap();
        assert!(matches!(
            load_csv(f.path(), &["a"], Some(&filter)),
            Err(Error::Csv(_)) // zero rows after filtering
        ));
        assert!(load_csv(Path::new("/no/such/file.csv"), &["a"], None).is_err());
        assert!(Filter::parse("nonsense").is_err());
    }
}
