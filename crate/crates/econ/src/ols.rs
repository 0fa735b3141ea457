//! Ordinary least squares on dense design matrices.
//!
//! Solved through a Householder QR factorization; rank problems surface as
//! errors naming the first column that is collinear with its predecessors
//! rather than as silently unstable coefficients.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OlsError {
    #[error("need at least as many rows ({rows}) as columns ({cols})")]
    TooFewRows { rows: usize, cols: usize },
    #[error("column count {cols} does not match {names} names")]
    NameMismatch { cols: usize, names: usize },
    #[error("design matrix is rank deficient: column `{column}` is collinear with earlier columns")]
    RankDeficient { column: String },
}

/// Coefficients with their column names plus the row-wise decomposition of
/// the response. `fitted[k] + residuals[k]` reproduces the response exactly.
#[derive(Debug, Clone)]
pub struct RegressionResult {
    pub names: Vec<String>,
    pub coefficients: Vec<f64>,
    pub fitted: Vec<f64>,
    pub residuals: Vec<f64>,
    pub r_squared: f64,
}

impl RegressionResult {
    /// Coefficient looked up by column name.
    pub fn coefficient(&self, name: &str) -> Option<f64> {
        self.names.iter().position(|n| n == name).map(|k| self.coefficients[k])
    }
}

/// Least-squares fit of `response` on the columns of `design`.
pub fn ols(
    names: Vec<String>,
    design: DMatrix<f64>,
    response: DVector<f64>,
) -> Result<RegressionResult, OlsError> {
    let (rows, cols) = design.shape();
    if names.len() != cols {
        return Err(OlsError::NameMismatch { cols, names: names.len() });
    }
    if rows < cols {
        return Err(OlsError::TooFewRows { rows, cols });
    }

    let qr = design.clone().qr();
    let r = qr.r();
    // Without pivoting, a vanishing diagonal entry k means column k lies in
    // the span of columns 0..k.
    let scale = r.diagonal().amax();
    let tol = f64::EPSILON * (rows.max(cols) as f64) * scale.max(1.0);
    if let Some(k) = (0..cols).find(|&k| r[(k, k)].abs() <= tol) {
        return Err(OlsError::RankDeficient { column: names[k].clone() });
    }

    let rhs = qr.q().transpose() * &response;
    let coef = r
        .solve_upper_triangular(&rhs)
        .ok_or_else(|| OlsError::RankDeficient { column: names[cols - 1].clone() })?;

    let fitted_vec = design * &coef;
    let residuals: Vec<f64> = response.iter().zip(fitted_vec.iter()).map(|(y, f)| y - f).collect();
    let mean = response.mean();
    let sst: f64 = response.iter().map(|y| (y - mean).powi(2)).sum();
    let ssr: f64 = residuals.iter().map(|e| e * e).sum();
    let r_squared = if sst > 0.0 { 1.0 - ssr / sst } else { 1.0 };

    Ok(RegressionResult {
        names,
        coefficients: coef.iter().copied().collect(),
        fitted: fitted_vec.iter().copied().collect(),
        residuals,
        r_squared,
    })
}
