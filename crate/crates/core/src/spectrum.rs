//! Tabulated power spectra and their CSV form (`omega,S` with a header row).

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::quadrature::{check_periodic_grid, integrate_periodic};

/// A power spectrum sampled on a uniform grid over [0, 2π).
///
/// `g_inf` is the smallest value seen on the grid or at any refinement
/// point; `g_log` is the log-average `(1/2π) ∫ ln S(ω) dω`, present only
/// when every grid value is strictly positive.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumSummary {
    pub omega: Vec<f64>,
    pub values: Vec<f64>,
    pub g_inf: f64,
    pub g_log: Option<f64>,
}

impl SpectrumSummary {
    pub fn from_samples(omega: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        check_periodic_grid(&omega)?;
        if omega.len() != values.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} grid points but {} spectrum values",
                omega.len(),
                values.len()
            )));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::domain(format!("non-finite spectrum value {bad}")));
        }
        let g_inf = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let g_log = if g_inf > 0.0 {
            let logs: Vec<f64> = values.iter().map(|v| v.ln()).collect();
            Some(integrate_periodic(&omega, &logs)?)
        } else {
            None
        };
        Ok(Self { omega, values, g_inf, g_log })
    }

    /// Lower `g_inf` with values evaluated off-grid.
    pub fn refine_infimum(&mut self, extra: impl IntoIterator<Item = f64>) {
        for v in extra {
            self.g_inf = self.g_inf.min(v);
        }
    }

    pub fn max(&self) -> f64 {
        self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(["omega", "S"])?;
        for (o, s) in self.omega.iter().zip(&self.values) {
            w.write_record([o.to_string(), s.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(input);
        let headers = r.headers()?.clone();
        if headers.len() != 2 || &headers[0] != "omega" || &headers[1] != "S" {
            return Err(Error::Parse(format!(
                "expected header `omega,S`, found `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut omega = Vec::new();
        let mut values = Vec::new();
        for (line, rec) in r.records().enumerate() {
            let rec = rec?;
            let parse = |i: usize| -> Result<f64> {
                rec.get(i)
                    .ok_or_else(|| Error::Parse(format!("row {}: missing column", line + 2)))?
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("row {}: {e}", line + 2)))
            };
            omega.push(parse(0)?);
            values.push(parse(1)?);
        }
        Self::from_samples(omega, values)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_csv(File::create(path)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_csv(File::open(path)?)
    }
}
