//! JSON forms shared by several modules.
//!
//! Complex matrices are nested `[re, im]` pairs in row-major order. Emitted
//! floats are rounded to 12 significant digits so that output is stable.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{CMat, C64};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IoError {
    #[error("MalformedMatrix: {0}")]
    MalformedMatrix(String),
    #[error("MalformedInput: {0}")]
    MalformedInput(String),
}

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    let r: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MatrixJson(pub Vec<Vec<[f64; 2]>>);

impl MatrixJson {
    pub fn from_matrix(m: &CMat) -> Self {
        MatrixJson(
            (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| [round12(m[(i, j)].re), round12(m[(i, j)].im)]).collect())
                .collect(),
        )
    }

    pub fn to_matrix(&self) -> Result<CMat, IoError> {
        let rows = self.0.len();
        if rows == 0 {
            return Err(IoError::MalformedMatrix("empty matrix".into()));
        }
        let cols = self.0[0].len();
        if let Some(i) = self.0.iter().position(|r| r.len() != cols) {
            return Err(IoError::MalformedMatrix(format!("row {i} has {} entries, expected {cols}", self.0[i].len())));
        }
        Ok(CMat::from_fn(rows, cols, |i, j| C64::new(self.0[i][j][0], self.0[i][j][1])))
    }
}

pub fn square_matrix(j: &MatrixJson, what: &str) -> Result<CMat, IoError> {
    let m = j.to_matrix()?;
    if !m.is_square() {
        return Err(IoError::MalformedMatrix(format!("{what} must be square")));
    }
    Ok(m)
}
