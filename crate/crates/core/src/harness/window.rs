//! Fixed-capacity window of the most recent `(x_k, u_k, x_{k+1})` transitions.

use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};

use crate::error::{check_dim, Error, Result};
use crate::estimator::Regression;

#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub x: DVector<f64>,
    pub u: DVector<f64>,
    pub x_next: DVector<f64>,
}

/// Ring buffer over transitions. Column `j` of [`SlidingWindow::x_plus`] is
/// always the successor of column `j` of [`SlidingWindow::x_minus`].
#[derive(Debug, Clone, PartialEq)]
pub struct SlidingWindow {
    capacity: usize,
    nx: usize,
    nu: usize,
    data: VecDeque<Transition>,
}

impl SlidingWindow {
    pub fn new(capacity: usize, nx: usize, nu: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::InvalidArgument("window capacity must be positive".into()));
        }
        Ok(Self {
            capacity,
            nx,
            nu,
            data: VecDeque::with_capacity(capacity),
        })
    }

    /// Appends a transition, evicting the oldest one when full.
    pub fn push(&mut self, x: &DVector<f64>, u: &DVector<f64>, x_next: &DVector<f64>) -> Result<()> {
        check_dim("window state", self.nx, x.len())?;
        check_dim("window input", self.nu, u.len())?;
        check_dim("window successor", self.nx, x_next.len())?;
        if self.data.len() == self.capacity {
            self.data.pop_front();
        }
        self.data.push_back(Transition {
            x: x.clone(),
            u: u.clone(),
            x_next: x_next.clone(),
        });
        Ok(())
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn fill(&self) -> usize {
        self.data.len()
    }

    pub fn is_full(&self) -> bool {
        self.data.len() == self.capacity
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.nx, self.nu)
    }

    /// Transitions from oldest to newest.
    pub fn transitions(&self) -> impl Iterator<Item = &Transition> {
        self.data.iter()
    }

    /// `X₊`, one successor state per column.
    pub fn x_plus(&self) -> DMatrix<f64> {
        self.columns(|t| &t.x_next, self.nx)
    }

    /// `X₋`.
    pub fn x_minus(&self) -> DMatrix<f64> {
        self.columns(|t| &t.x, self.nx)
    }

    /// `U₋`.
    pub fn u_minus(&self) -> DMatrix<f64> {
        self.columns(|t| &t.u, self.nu)
    }

    /// Data matrix `D = [X₋; U₋]`, with a leading row of ones for [`Regression::Affine`].
    pub fn data_matrix(&self, regression: Regression) -> DMatrix<f64> {
        let rows = regression.regressor_len(self.nx, self.nu);
        let mut d = DMatrix::zeros(rows, self.data.len());
        for (j, t) in self.data.iter().enumerate() {
            d.set_column(j, &regression.lift(&t.x, &t.u));
        }
        d
    }

    /// Points `z_j = [x_j; u_j]` used for covering radius and slope estimates.
    pub fn points(&self) -> Vec<DVector<f64>> {
        self.data
            .iter()
            .map(|t| Regression::Linear.lift(&t.x, &t.u))
            .collect()
    }

    fn columns(&self, pick: impl Fn(&Transition) -> &DVector<f64>, rows: usize) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(rows, self.data.len());
        for (j, t) in self.data.iter().enumerate() {
            m.set_column(j, pick(t));
        }
        m
    }
}
