//! Batch least-squares model set, the non-recursive comparison method.

use nalgebra::DMatrix;

use super::window::SlidingWindow;
use crate::error::{check_dim, Error, Result};
use crate::estimator::Regression;
use crate::sets::{MatrixZonotope, Zonotope};

/// `M_Σ = (X₊ ⊕ −M_w) D†` from the data in `window`.
pub fn batch_ls_model_set(
    window: &SlidingWindow,
    noise: &Zonotope,
    regression: Regression,
) -> Result<MatrixZonotope> {
    if window.is_empty() {
        return Err(Error::InvalidArgument("empty window".into()));
    }
    batch_ls_from_data(&window.x_plus(), &window.data_matrix(regression), noise)
}

/// Model set from explicit data: center `(X₊ − c_w 𝟙ᵀ) D†`, and one generator
/// `−g e_tᵀ D†` per noise generator `g` and data column `t`.
pub fn batch_ls_from_data(
    x_plus: &DMatrix<f64>,
    d: &DMatrix<f64>,
    noise: &Zonotope,
) -> Result<MatrixZonotope> {
    check_dim("data columns", x_plus.ncols(), d.ncols())?;
    check_dim("noise dimension", x_plus.nrows(), noise.dim())?;
    let svd = d.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let rank = svd.rank(1e-12 * smax.max(f64::MIN_POSITIVE) * d.nrows().max(d.ncols()) as f64);
    if rank < d.nrows() {
        return Err(Error::RankDeficient(format!(
            "data matrix has rank {rank}, need {} (input not persistently exciting)",
            d.nrows()
        )));
    }
    let pinv = svd
        .pseudo_inverse(1e-12 * smax)
        .map_err(|e| Error::Singular(e.to_string()))?;

    let mut shifted = x_plus.clone();
    for mut col in shifted.column_iter_mut() {
        col -= noise.center();
    }
    let center = shifted * &pinv;
    let mut generators = Vec::with_capacity(noise.num_generators() * d.ncols());
    for g in noise.generators().column_iter() {
        for t in 0..d.ncols() {
            generators.push(-(g * pinv.row(t)));
        }
    }
    MatrixZonotope::new(center, generators)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{dmatrix, dvector, DVector};

    #[test]
    fn scalar_hand_computed() {
        let mut w = SlidingWindow::new(2, 1, 1).unwrap();
        w.push(&dvector![1.0], &dvector![0.0], &dvector![2.0]).unwrap();
        w.push(&dvector![2.0], &dvector![0.0], &dvector![4.0]).unwrap();
        let noise = Zonotope::boxed(dvector![0.0], &dvector![0.1]).unwrap();
        // D = [1 2; 0 0] is rank deficient with the input row
        assert!(batch_ls_model_set(&w, &noise, Regression::Linear).is_err());

        let m = batch_ls_from_data(&dmatrix![2.0, 4.0], &dmatrix![1.0, 2.0], &noise).unwrap();
        assert!((m.center()[(0, 0)] - 2.0).abs() < 1e-12);
        assert_eq!(m.num_generators(), 2);
        // D† = [1, 2] / 5
        assert!((m.generators()[0][(0, 0)].abs() - 0.02).abs() < 1e-12);
        assert!((m.generators()[1][(0, 0)].abs() - 0.04).abs() < 1e-12);
    }

    #[test]
    fn exact_recovery_without_noise() {
        let a = dmatrix![0.9, 0.1; -0.2, 0.8];
        let b = dmatrix![0.5; 1.0];
        let mut w = SlidingWindow::new(6, 2, 1).unwrap();
        let mut x = dvector![1.0, -1.0];
        for k in 0..6 {
            let u = dvector![(k as f64).sin()];
            let next = &a * &x + &b * &u;
            w.push(&x, &u, &next).unwrap();
            x = next;
        }
        let m = batch_ls_model_set(&w, &Zonotope::point(DVector::zeros(2)), Regression::Linear).unwrap();
        let mut ab = DMatrix::zeros(2, 3);
        ab.columns_mut(0, 2).copy_from(&a);
        ab.columns_mut(2, 1).copy_from(&b);
        assert!((m.center() - ab).amax() < 1e-9);
        assert_eq!(m.num_generators(), 0);
    }
}
