use nalgebra::DMatrix;

use crate::error::{check_dim, Error, Result};

/// Elementwise interval matrix `[lower, upper]`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalMatrix {
    lower: DMatrix<f64>,
    upper: DMatrix<f64>,
}

impl IntervalMatrix {
    pub fn new(lower: DMatrix<f64>, upper: DMatrix<f64>) -> Result<Self> {
        check_dim("interval rows", lower.nrows(), upper.nrows())?;
        check_dim("interval cols", lower.ncols(), upper.ncols())?;
        if lower.iter().zip(upper.iter()).any(|(l, u)| l > u) {
            return Err(Error::InvalidArgument(
                "interval lower bound exceeds upper bound".into(),
            ));
        }
        Ok(Self { lower, upper })
    }

    pub(crate) fn new_unchecked(lower: DMatrix<f64>, upper: DMatrix<f64>) -> Self {
        Self { lower, upper }
    }

    pub fn lower(&self) -> &DMatrix<f64> {
        &self.lower
    }

    pub fn upper(&self) -> &DMatrix<f64> {
        &self.upper
    }

    pub fn midpoint(&self) -> DMatrix<f64> {
        (&self.upper + &self.lower) * 0.5
    }

    pub fn radius(&self) -> DMatrix<f64> {
        (&self.upper - &self.lower) * 0.5
    }

    /// `‖ |mid| + rad ‖_F`, an upper bound on the Frobenius norm of every member.
    pub fn frobenius(&self) -> f64 {
        (self.midpoint().abs() + self.radius()).norm()
    }

    pub fn contains(&self, m: &DMatrix<f64>, tol: f64) -> bool {
        m.shape() == self.lower.shape()
            && m.iter()
                .zip(self.lower.iter().zip(self.upper.iter()))
                .all(|(v, (l, u))| *v >= l - tol && *v <= u + tol)
    }
}
