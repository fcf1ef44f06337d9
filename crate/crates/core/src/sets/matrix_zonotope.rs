//! Matrix zonotopes `⟨C, {G_1, …, G_γ}⟩` and their column-stacked vector form.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use super::interval::IntervalMatrix;
use super::zonotope::{Reduction, Zonotope};
use crate::error::{check_dim, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixZonotope {
    center: DMatrix<f64>,
    generators: Vec<DMatrix<f64>>,
}

impl MatrixZonotope {
    /// Builds a matrix zonotope, dropping all-zero generators.
    pub fn new(center: DMatrix<f64>, generators: Vec<DMatrix<f64>>) -> Result<Self> {
        for g in &generators {
            if g.shape() != center.shape() {
                return Err(Error::InvalidArgument(format!(
                    "generator shape {:?} differs from center shape {:?}",
                    g.shape(),
                    center.shape()
                )));
            }
        }
        let generators = generators
            .into_iter()
            .filter(|g| g.iter().any(|v| *v != 0.0))
            .collect();
        Ok(Self { center, generators })
    }

    pub fn point(center: DMatrix<f64>) -> Self {
        Self {
            center,
            generators: Vec::new(),
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        self.center.shape()
    }

    pub fn center(&self) -> &DMatrix<f64> {
        &self.center
    }

    pub fn generators(&self) -> &[DMatrix<f64>] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    /// Column-stacked vector zonotope.
    pub fn vectorize(&self) -> Zonotope {
        let (n, m) = self.shape();
        let nm = n * m;
        let center = DVector::from_column_slice(self.center.as_slice());
        let mut g = DMatrix::zeros(nm, self.generators.len());
        for (j, gen) in self.generators.iter().enumerate() {
            g.column_mut(j).copy_from_slice(gen.as_slice());
        }
        Zonotope::new(center, g).expect("vectorized shapes agree")
    }

    /// Inverse of [`MatrixZonotope::vectorize`] for the given `(rows, cols)` shape.
    pub fn unvectorize(z: &Zonotope, shape: (usize, usize)) -> Result<Self> {
        let (n, m) = shape;
        check_dim("unvec dimension", n * m, z.dim())?;
        let center = DMatrix::from_column_slice(n, m, z.center().as_slice());
        let generators = z
            .generators()
            .column_iter()
            .map(|c| DMatrix::from_column_slice(n, m, c.as_slice()))
            .collect();
        Self::new(center, generators)
    }

    pub fn transpose(&self) -> Self {
        Self {
            center: self.center.transpose(),
            generators: self.generators.iter().map(|g| g.transpose()).collect(),
        }
    }

    /// Exact Minkowski sum of two matrix zonotopes of equal shape.
    pub fn minkowski_sum(&self, other: &MatrixZonotope) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::InvalidArgument(format!(
                "matrix zonotope shapes {:?} and {:?} differ",
                self.shape(),
                other.shape()
            )));
        }
        let mut generators = self.generators.clone();
        generators.extend(other.generators.iter().cloned());
        Ok(Self {
            center: &self.center + &other.center,
            generators,
        })
    }

    /// Appends generators of another set with the same shape, keeping this center.
    pub fn with_extra_generators(&self, extra: &[DMatrix<f64>]) -> Result<Self> {
        let mut generators = self.generators.clone();
        generators.extend(extra.iter().cloned());
        Self::new(self.center.clone(), generators)
    }

    /// Order reduction through the vector form; the result contains `self`.
    pub fn reduce(&self, q: usize) -> Result<Self> {
        self.reduce_with(q, Reduction::NormBox)
    }

    pub fn reduce_with(&self, q: usize, method: Reduction) -> Result<Self> {
        if self.generators.len() <= q {
            let (n, m) = self.shape();
            if q < n * m {
                return Err(Error::InvalidArgument(format!(
                    "reduction order {q} is smaller than the vectorized dimension {}",
                    n * m
                )));
            }
            return Ok(self.clone());
        }
        Self::unvectorize(&self.vectorize().reduce_with(q, method)?, self.shape())
    }

    /// Interval enclosure `C ∓ Σ_i |G_i|`.
    pub fn interval(&self) -> IntervalMatrix {
        let mut rad = DMatrix::zeros(self.center.nrows(), self.center.ncols());
        for g in &self.generators {
            rad += g.abs();
        }
        IntervalMatrix::new_unchecked(&self.center - &rad, &self.center + &rad)
    }

    /// Over-approximation of `{ A z : A ∈ self, z ∈ z }` with every cross term kept.
    pub fn times_zonotope(&self, z: &Zonotope) -> Result<Zonotope> {
        let (n, m) = self.shape();
        check_dim("matrix zonotope times zonotope", m, z.dim())?;
        let gz = z.num_generators();
        let terms = gz + self.generators.len() * (1 + gz);
        let mut g = DMatrix::zeros(n, terms);
        g.columns_mut(0, gz).copy_from(&(&self.center * z.generators()));
        let mut col = gz;
        for a in &self.generators {
            g.set_column(col, &(a * z.center()));
            g.columns_mut(col + 1, gz).copy_from(&(a * z.generators()));
            col += 1 + gz;
        }
        Zonotope::new(&self.center * z.center(), g)
    }

    /// Member `C + Σ β_i G_i` for the given factors.
    pub fn member(&self, beta: &[f64]) -> Result<DMatrix<f64>> {
        check_dim("matrix zonotope factors", self.generators.len(), beta.len())?;
        let mut out = self.center.clone();
        for (b, g) in beta.iter().zip(&self.generators) {
            out += g * *b;
        }
        Ok(out)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> DMatrix<f64> {
        let beta: Vec<f64> = (0..self.generators.len())
            .map(|_| rng.random_range(-1.0..=1.0))
            .collect();
        self.member(&beta).expect("factor count matches")
    }

    /// Matrix containment through the vector form.
    pub fn contains(&self, m: &DMatrix<f64>, tol: f64) -> Result<bool> {
        if m.shape() != self.shape() {
            return Err(Error::InvalidArgument(format!(
                "matrix shape {:?} differs from set shape {:?}",
                m.shape(),
                self.shape()
            )));
        }
        super::containment::contains_point(
            &self.vectorize(),
            &DVector::from_column_slice(m.as_slice()),
            tol,
        )
    }
}

/// Matrix zonotope with zero center and one generator `scale · E_s` per entry.
pub fn entrywise_box(rows: usize, cols: usize, scale: f64) -> MatrixZonotope {
    let mut generators = Vec::with_capacity(rows * cols);
    for j in 0..cols {
        for i in 0..rows {
            let mut e = DMatrix::zeros(rows, cols);
            e[(i, j)] = scale;
            generators.push(e);
        }
    }
    MatrixZonotope::new(DMatrix::zeros(rows, cols), generators).expect("shapes agree")
}
