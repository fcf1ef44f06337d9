//! Vector zonotopes `⟨c, G⟩ = { c + G β : ‖β‖_∞ ≤ 1 }`.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use super::interval::IntervalMatrix;
use crate::error::{check_dim, Error, Result};

/// A zonotope stored as a center and a generator matrix with one generator
/// per column. An empty generator matrix is the singleton `{center}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Zonotope {
    center: DVector<f64>,
    generators: DMatrix<f64>,
}

impl Zonotope {
    /// Builds a zonotope, dropping all-zero generator columns.
    pub fn new(center: DVector<f64>, generators: DMatrix<f64>) -> Result<Self> {
        check_dim("zonotope generator rows", center.len(), generators.nrows())?;
        Ok(Self {
            center,
            generators: drop_zero_columns(generators),
        })
    }

    pub fn from_slices(center: &[f64], generator_columns: &[Vec<f64>]) -> Result<Self> {
        let n = center.len();
        let mut g = DMatrix::zeros(n, generator_columns.len());
        for (j, col) in generator_columns.iter().enumerate() {
            check_dim("zonotope generator length", n, col.len())?;
            g.set_column(j, &DVector::from_column_slice(col));
        }
        Self::new(DVector::from_column_slice(center), g)
    }

    pub fn point(center: DVector<f64>) -> Self {
        let n = center.len();
        Self {
            center,
            generators: DMatrix::zeros(n, 0),
        }
    }

    /// Zonotope with center `c` and the diagonal generator matrix `diag(radius)`.
    pub fn boxed(center: DVector<f64>, radius: &DVector<f64>) -> Result<Self> {
        check_dim("box radius", center.len(), radius.len())?;
        if radius.iter().any(|r| *r < 0.0 || !r.is_finite()) {
            return Err(Error::InvalidArgument(
                "box radius must be finite and nonnegative".into(),
            ));
        }
        Self::new(center, DMatrix::from_diagonal(radius))
    }

    /// Smallest zonotope representation of the axis-aligned box `[lo, hi]`.
    pub fn from_bounds(lo: &DVector<f64>, hi: &DVector<f64>) -> Result<Self> {
        check_dim("box bounds", lo.len(), hi.len())?;
        if lo.iter().zip(hi.iter()).any(|(l, h)| l > h) {
            return Err(Error::InvalidArgument(
                "lower bound exceeds upper bound".into(),
            ));
        }
        Self::boxed((lo + hi) * 0.5, &((hi - lo) * 0.5))
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn num_generators(&self) -> usize {
        self.generators.ncols()
    }

    pub fn center(&self) -> &DVector<f64> {
        &self.center
    }

    pub fn generators(&self) -> &DMatrix<f64> {
        &self.generators
    }

    pub fn is_singleton(&self) -> bool {
        self.generators.ncols() == 0
    }

    /// `L Z = ⟨L c, L G⟩`.
    pub fn linear_map(&self, l: &DMatrix<f64>) -> Result<Self> {
        check_dim("linear map columns", self.dim(), l.ncols())?;
        Self::new(l * &self.center, l * &self.generators)
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            center: &self.center * factor,
            generators: drop_zero_columns(&self.generators * factor),
        }
    }

    pub fn translate(&self, offset: &DVector<f64>) -> Result<Self> {
        check_dim("translation", self.dim(), offset.len())?;
        Ok(Self {
            center: &self.center + offset,
            generators: self.generators.clone(),
        })
    }

    /// Exact Minkowski sum: centers add, generator matrices concatenate.
    pub fn minkowski_sum(&self, other: &Zonotope) -> Result<Self> {
        check_dim("minkowski sum", self.dim(), other.dim())?;
        let n = self.dim();
        let (g1, g2) = (self.num_generators(), other.num_generators());
        let mut g = DMatrix::zeros(n, g1 + g2);
        g.columns_mut(0, g1).copy_from(&self.generators);
        g.columns_mut(g1, g2).copy_from(&other.generators);
        Ok(Self {
            center: &self.center + &other.center,
            generators: g,
        })
    }

    /// Cartesian product with a block-diagonal generator matrix.
    pub fn cartesian_product(&self, other: &Zonotope) -> Self {
        let (n1, n2) = (self.dim(), other.dim());
        let (g1, g2) = (self.num_generators(), other.num_generators());
        let mut center = DVector::zeros(n1 + n2);
        center.rows_mut(0, n1).copy_from(&self.center);
        center.rows_mut(n1, n2).copy_from(&other.center);
        let mut g = DMatrix::zeros(n1 + n2, g1 + g2);
        g.view_mut((0, 0), (n1, g1)).copy_from(&self.generators);
        g.view_mut((n1, g1), (n2, g2)).copy_from(&other.generators);
        Self {
            center,
            generators: g,
        }
    }

    /// Per-dimension radius `Σ_j |G_ij|` of the interval hull.
    pub fn hull_radius(&self) -> DVector<f64> {
        abs_row_sums(&self.generators)
    }

    /// Smallest axis-aligned box containing the zonotope, as an `n × 1` interval matrix.
    pub fn interval_hull(&self) -> IntervalMatrix {
        let r = self.hull_radius();
        let lower = DMatrix::from_column_slice(self.dim(), 1, (&self.center - &r).as_slice());
        let upper = DMatrix::from_column_slice(self.dim(), 1, (&self.center + &r).as_slice());
        IntervalMatrix::new_unchecked(lower, upper)
    }

    /// Order reduction to at most `q` generators with [`Reduction::NormBox`].
    pub fn reduce(&self, q: usize) -> Result<Self> {
        self.reduce_with(q, Reduction::NormBox)
    }

    /// Order reduction to at most `q` generators; the result always contains `self`.
    ///
    /// Every method keeps `q - n` generators and encloses the rest in `n`
    /// generators of a box. The methods differ in which generators are kept
    /// and in the frame of the box.
    pub fn reduce_with(&self, q: usize, method: Reduction) -> Result<Self> {
        let Some((kept, rest)) = self.split_for_reduction(q, method)? else {
            return Ok(self.clone());
        };
        let enclosure = match method {
            Reduction::NormBox | Reduction::Girard => DMatrix::from_diagonal(&abs_row_sums(&rest)),
            Reduction::Pca => pca_box(&rest),
        };
        self.assemble(kept, enclosure)
    }

    /// Norm-sorted reduction that boxes the discarded generators in the
    /// coordinates of an invertible `frame`: the box is `frame · diag(Σ |frame⁻¹ h|)`.
    ///
    /// A box built in the frame `T` maps under `A` to a box in the frame `A T`
    /// exactly, so choosing frames that follow the dynamics avoids re-wrapping.
    pub fn reduce_in_frame(&self, q: usize, frame: &DMatrix<f64>) -> Result<Self> {
        let n = self.dim();
        if frame.shape() != (n, n) {
            return Err(Error::InvalidArgument(format!(
                "reduction frame is {:?}, expected ({n}, {n})",
                frame.shape()
            )));
        }
        let Some((kept, rest)) = self.split_for_reduction(q, Reduction::NormBox)? else {
            return Ok(self.clone());
        };
        let coords = frame
            .clone()
            .lu()
            .solve(&rest)
            .filter(|c| c.iter().all(|v| v.is_finite()))
            .ok_or_else(|| Error::Singular("reduction frame".into()))?;
        self.assemble(kept, frame * DMatrix::from_diagonal(&abs_row_sums(&coords)))
    }

    /// Kept generators (original order) and the rest, or `None` when already small enough.
    fn split_for_reduction(
        &self,
        q: usize,
        method: Reduction,
    ) -> Result<Option<(DMatrix<f64>, DMatrix<f64>)>> {
        let n = self.dim();
        if q < n {
            return Err(Error::InvalidArgument(format!(
                "reduction order {q} is smaller than the dimension {n}"
            )));
        }
        if self.num_generators() <= q {
            return Ok(None);
        }
        let keep = q - n;
        let score = |c: nalgebra::DVectorView<f64>| match method {
            Reduction::NormBox | Reduction::Pca => c.norm(),
            Reduction::Girard => c.lp_norm(1) - c.amax(),
        };
        let mut order: Vec<(usize, f64)> = self
            .generators
            .column_iter()
            .enumerate()
            .map(|(j, c)| (j, score(c)))
            .collect();
        // stable sort: ties keep their original order
        order.sort_by(|a, b| b.1.total_cmp(&a.1));

        let mut kept: Vec<usize> = order[..keep].iter().map(|(j, _)| *j).collect();
        kept.sort_unstable();
        let rest: Vec<usize> = order[keep..].iter().map(|(j, _)| *j).collect();
        Ok(Some((
            self.generators.select_columns(kept.iter()),
            self.generators.select_columns(rest.iter()),
        )))
    }

    fn assemble(&self, kept: DMatrix<f64>, enclosure: DMatrix<f64>) -> Result<Self> {
        let (k, e) = (kept.ncols(), enclosure.ncols());
        let mut g = DMatrix::zeros(self.dim(), k + e);
        g.columns_mut(0, k).copy_from(&kept);
        g.columns_mut(k, e).copy_from(&enclosure);
        Self::new(self.center.clone(), g)
    }

    /// Point `c + G β` for the given factor vector.
    pub fn point_at(&self, beta: &DVector<f64>) -> Result<DVector<f64>> {
        check_dim("factor vector", self.num_generators(), beta.len())?;
        Ok(&self.center + &self.generators * beta)
    }

    /// Uniform sample of the factor cube mapped into the set.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> DVector<f64> {
        let beta = DVector::from_iterator(
            self.num_generators(),
            (0..self.num_generators()).map(|_| rng.random_range(-1.0..=1.0)),
        );
        &self.center + &self.generators * beta
    }

    /// Sample of a random vertex of the factor cube (every `β_i = ±1`).
    pub fn sample_vertex<R: Rng + ?Sized>(&self, rng: &mut R) -> DVector<f64> {
        let beta = DVector::from_iterator(
            self.num_generators(),
            (0..self.num_generators()).map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 }),
        );
        &self.center + &self.generators * beta
    }

    /// Sum of interval-hull half-widths.
    pub fn radius_sum(&self) -> f64 {
        self.hull_radius().sum()
    }
}

/// Choice of generators to keep and frame of the enclosing box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reduction {
    /// Keep the largest generators by Euclidean norm; box the rest along the axes.
    #[default]
    NormBox,
    /// Keep generators with the largest `‖g‖₁ − ‖g‖_∞`; box the rest along the axes.
    Girard,
    /// Keep the largest generators by norm; box the rest along their principal axes.
    Pca,
}

/// Box of `rest` in the frame of its left singular vectors, as `n` generators.
fn pca_box(rest: &DMatrix<f64>) -> DMatrix<f64> {
    let n = rest.nrows();
    let u = match rest.clone().svd(true, false).u {
        Some(u) if u.ncols() == n => u,
        // fewer columns than rows: complete the frame with a QR of [U I]
        Some(u) => {
            let mut ext = DMatrix::zeros(n, u.ncols() + n);
            ext.columns_mut(0, u.ncols()).copy_from(&u);
            ext.columns_mut(u.ncols(), n).copy_from(&DMatrix::<f64>::identity(n, n));
            ext.qr().q().columns(0, n).into_owned()
        }
        None => DMatrix::identity(n, n),
    };
    let widths = abs_row_sums(&(u.transpose() * rest));
    u * DMatrix::from_diagonal(&widths)
}

fn abs_row_sums(g: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_iterator(
        g.nrows(),
        g.row_iter().map(|row| row.iter().map(|v| v.abs()).sum::<f64>()),
    )
}

pub(crate) fn drop_zero_columns(g: DMatrix<f64>) -> DMatrix<f64> {
    let nonzero: Vec<usize> = g
        .column_iter()
        .enumerate()
        .filter(|(_, c)| c.iter().any(|v| *v != 0.0))
        .map(|(j, _)| j)
        .collect();
    if nonzero.len() == g.ncols() {
        return g;
    }
    g.select_columns(nonzero.iter())
}
