//! Failure-time data: one row of `r` ordered failure times per system.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// `M x r` matrix of failure times, row-major.
///
/// Rows are strictly increasing and every entry is positive and finite.
#[derive(Clone, Debug, PartialEq)]
pub struct DataMatrix {
    m: usize,
    r: usize,
    values: Vec<f64>,
}

impl DataMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        if m == 0 {
            return Err(Error::InvalidData("data has no rows".into()));
        }
        let r = rows[0].len();
        if r == 0 {
            return Err(Error::InvalidData("data rows are empty".into()));
        }
        if let Some(i) = rows.iter().position(|row| row.len() != r) {
            return Err(Error::InvalidData(format!(
                "row {} has {} entries, expected {r}",
                i + 1,
                rows[i].len()
            )));
        }
        Self::from_row_major(m, r, rows.concat())
    }

    pub fn from_row_major(m: usize, r: usize, values: Vec<f64>) -> Result<Self> {
        let data = Self::unchecked(m, r, values)?;
        data.validate()?;
        Ok(data)
    }

    fn unchecked(m: usize, r: usize, values: Vec<f64>) -> Result<Self> {
        if m == 0 || r == 0 || values.len() != m * r {
            return Err(Error::InvalidData(format!(
                "expected {m} x {r} = {} values, got {}",
                m * r,
                values.len()
            )));
        }
        Ok(Self { m, r, values })
    }

    /// Built from values known to satisfy the invariants (samplers).
    pub(crate) fn from_trusted(m: usize, r: usize, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), m * r);
        Self { m, r, values }
    }

    fn validate(&self) -> Result<()> {
        for i in 0..self.m {
            let row = self.row(i);
            for (j, &x) in row.iter().enumerate() {
                if !(x.is_finite() && x > 0.0) {
                    return Err(Error::InvalidData(format!(
                        "entry ({}, {}) = {x} is not a positive finite number",
                        i + 1,
                        j + 1
                    )));
                }
                if j > 0 && row[j - 1] >= x {
                    return Err(Error::InvalidData(format!(
                        "row {} is not strictly increasing at column {}",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// Number of systems `M`.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of recorded failures per system `r`.
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.r + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.r..(i + 1) * self.r]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.r)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Applies a strictly increasing map entrywise.
    pub fn map_increasing(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_row_major(self.m, self.r, self.values.iter().map(|&x| f(x)).collect())
    }

    /// Largest absolute entry.
    pub fn scale(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |a, &x| a.max(x.abs()))
    }

    /// Breaks ties by adding `k * eps` to the entry at row-major position `k`,
    /// with `eps = 1e-9 * scale`. Ties within a row and across rows are both
    /// resolved in row-major order.
    pub fn perturb_ties(&self) -> Result<Self> {
        let eps = 1e-9 * self.scale();
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(k, &x)| x + k as f64 * eps)
            .collect();
        Self::from_row_major(self.m, self.r, values)
    }

    /// Reads comma-separated rows; a first line that does not parse as
    /// numbers is treated as a header.
    pub fn read_csv<R: Read>(reader: R, perturb: bool) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(reader);
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (line, record) in rdr.records().enumerate() {
            let record = record?;
            if record.iter().all(|f| f.is_empty()) {
                continue;
            }
            let parsed: std::result::Result<Vec<f64>, _> =
                record.iter().map(|f| f.parse::<f64>()).collect();
            match parsed {
                Ok(row) => rows.push(row),
                Err(_) if line == 0 => continue,
                Err(_) => {
                    return Err(Error::InvalidData(format!(
                        "line {}: cannot parse '{}'",
                        line + 1,
                        record.iter().collect::<Vec<_>>().join(",")
                    )))
                }
            }
        }
        if rows.is_empty() {
            return Err(Error::InvalidData("data file has no rows".into()));
        }
        let r = rows[0].len();
        if let Some(i) = rows.iter().position(|row| row.len() != r) {
            return Err(Error::InvalidData(format!(
                "row {} has {} entries, expected {r}",
                i + 1,
                rows[i].len()
            )));
        }
        if perturb {
            let raw = Self::unchecked(rows.len(), r, rows.concat())?;
            raw.perturb_ties()
        } else {
            Self::from_rows(&rows)
        }
    }

    pub fn read_csv_path(path: &Path, perturb: bool) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::read_csv(file, perturb)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for row in self.rows() {
            w.write_record(row.iter().map(|x| format!("{x}")))?;
        }
        w.flush()?;
        Ok(())
    }
}
