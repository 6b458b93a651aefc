use ndarray::{Array1, Array2, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::symmetric_eigen;

/// Mean and leading principal directions of a feature matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaModel<T> {
    pub mean: Array1<T>,
    /// `n_components x dim`, orthonormal rows, each with its largest-magnitude
    /// entry positive.
    pub components: Array2<T>,
    /// Covariance eigenvalue for each component, nonincreasing.
    pub explained_variance: Vec<T>,
}

impl<T: Real> PcaModel<T> {
    pub fn n_components(&self) -> usize {
        self.components.nrows()
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    /// Projections of `x - mean` onto every component.
    pub fn project(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        Ok(self
            .components
            .axis_iter(Axis(0))
            .map(|c| {
                c.iter()
                    .zip(x.iter().zip(self.mean.iter()))
                    .map(|(&w, (&v, &m))| w * (v - m))
                    .sum()
            })
            .collect())
    }
}

/// Flip `v` so its largest-magnitude entry (first on ties) is positive.
fn canonical_sign<T: Real>(v: &mut ndarray::ArrayViewMut1<T>) {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v[best] < T::zero() {
        v.mapv_inplace(|x| -x);
    }
}

/// Top `n_components` principal directions of the rows of `x`.
pub fn pca_fit<T: Real>(x: ArrayView2<T>, n_components: usize) -> Result<PcaModel<T>> {
    let (n, d) = x.dim();
    if n_components == 0 || n_components > d {
        return Err(Error::invalid_input(format!(
            "cannot take {n_components} components of {d}-dimensional data"
        )));
    }
    if n < n_components + 1 {
        return Err(Error::invalid_input(format!(
            "{n} rows are too few for {n_components} components"
        )));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid_input("non-finite value in PCA input"));
    }
    let mean = x.mean_axis(Axis(0)).expect("n > 0");
    let centered = &x - &mean.view().insert_axis(Axis(0));
    let cov = centered.t().dot(&centered) / T::from_usize_lossy(n - 1);
    let (values, vectors) = symmetric_eigen(cov.view())?;

    let mut components = Array2::zeros((n_components, d));
    let mut explained_variance = Vec::with_capacity(n_components);
    for c in 0..n_components {
        let src = d - 1 - c;
        let mut row = components.row_mut(c);
        row.assign(&vectors.column(src));
        canonical_sign(&mut row);
        explained_variance.push(values[src].max(T::zero()));
    }
    Ok(PcaModel {
        mean,
        components,
        explained_variance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn line_through_offset() {
        // points on the y axis, shifted by (5, 5, 5)
        let x = array![
            [5.0f64, 3.0, 5.0],
            [5.0, 4.0, 5.0],
            [5.0, 6.0, 5.0],
            [5.0, 7.0, 5.0]
        ];
        let m = pca_fit(x.view(), 1).unwrap();
        assert!((m.components[[0, 1]] - 1.0).abs() < 1e-12);
        assert!(m.components[[0, 0]].abs() < 1e-12);
        assert_eq!(m.mean, array![5.0, 5.0, 5.0]);
    }

    #[test]
    fn too_few_rows() {
        let x = Array2::<f64>::zeros((3, 5));
        assert!(pca_fit(x.view(), 3).is_err());
        assert!(pca_fit(x.view(), 2).is_ok());
        assert!(pca_fit(x.view(), 0).is_err());
        assert!(pca_fit(x.view(), 6).is_err());
    }

    #[test]
    fn sign_is_canonical() {
        let x = array![[1.0f64, -2.0], [-1.0, 2.0], [0.5, -1.0], [-0.5, 1.1]];
        let m = pca_fit(x.view(), 2).unwrap();
        for row in m.components.axis_iter(Axis(0)) {
            let big = row.iter().cloned().fold(0.0f64, |a, b| if b.abs() > a.abs() { b } else { a });
            assert!(big > 0.0);
        }
    }
}
