//! Covariance-matrix input files.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use nalgebra::DMatrix;
use serde::Deserialize;
use serde_json::Value;

use cv_uncertainty::{CovarianceMatrix, PhaseSpace};

/// Only the interleaved `(p1, q1, p2, q2, ...)` ordering is accepted.
pub const ORDERING: &str = "pqpq";

/// JSON layout: `{"hbar": 1.0, "n_modes": 2, "ordering": "pqpq", "matrix": [[...], ...]}`.
/// `matrix` may also be a flat row-major list of `(2N)²` numbers.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CovarianceFile {
    pub hbar: f64,
    pub n_modes: usize,
    pub matrix: Value,
    #[serde(default = "default_ordering")]
    pub ordering: String,
}

fn number(v: &Value) -> Result<f64> {
    v.as_f64()
        .with_context(|| format!("matrix entry {v} is not a number"))
}

fn default_ordering() -> String {
    ORDERING.to_string()
}

impl CovarianceFile {
    pub fn read(path: &Path) -> Result<Self> {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn dense(&self) -> Result<DMatrix<f64>> {
        if self.ordering != ORDERING {
            bail!(
                "unsupported ordering '{}', expected '{ORDERING}'",
                self.ordering
            );
        }
        let dim = 2 * self.n_modes;
        let rows = self.matrix.as_array().context("matrix must be an array")?;
        let entries: Vec<f64> = if rows.iter().all(Value::is_array) {
            if rows.len() != dim
                || rows
                    .iter()
                    .any(|r| r.as_array().is_some_and(|r| r.len() != dim))
            {
                bail!("matrix must be {dim}x{dim} for n_modes = {}", self.n_modes);
            }
            rows.iter()
                .flat_map(|r| r.as_array().into_iter().flatten())
                .map(number)
                .collect::<Result<_>>()?
        } else {
            if rows.len() != dim * dim {
                bail!(
                    "flat matrix needs {} entries for n_modes = {}, got {}",
                    dim * dim,
                    self.n_modes,
                    rows.len()
                );
            }
            rows.iter().map(number).collect::<Result<_>>()?
        };
        let m = DMatrix::from_row_slice(dim, dim, &entries);
        if m.iter().any(|x| !x.is_finite()) {
            bail!("matrix has non-finite entries");
        }
        Ok(m)
    }

    /// The file's covariance, with `hbar` replaced by `override_hbar` when given.
    pub fn covariance(&self, override_hbar: Option<f64>) -> Result<CovarianceMatrix> {
        let hbar = resolve_hbar(self.hbar, override_hbar);
        let space = PhaseSpace::new(self.n_modes, hbar)?;
        Ok(CovarianceMatrix::new(space, self.dense()?)?)
    }
}

/// Picks `override_hbar` over the file value, warning on stderr when they differ.
pub fn resolve_hbar(file_hbar: f64, override_hbar: Option<f64>) -> f64 {
    match override_hbar {
        Some(h) if h != file_hbar => {
            eprintln!("warning: hbar = {h} overrides the file value {file_hbar}");
            h
        }
        Some(h) => h,
        None => file_hbar,
    }
}
