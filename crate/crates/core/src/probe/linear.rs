//! Softmax regression trained by full-batch gradient descent with a
//! backtracking (Armijo) line search.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub n_classes: usize,
    pub epochs: usize,
    /// Initial step tried by the line search each epoch.
    pub lr: f64,
    pub l2: f64,
    /// Z-score features with training statistics before fitting.
    pub standardize: bool,
}

impl TrainConfig {
    pub fn new(n_classes: usize) -> Self {
        Self {
            n_classes,
            epochs: 200,
            lr: 1.0,
            l2: 1e-4,
            standardize: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel<T> {
    /// `classes x feature_dim`.
    pub weights: Array2<T>,
    pub bias: Array1<T>,
    pub classes: usize,
    pub feature_dim: usize,
    /// Objective after each accepted epoch; nonincreasing.
    pub training_log: Vec<T>,
    /// Per-feature (mean, scale) applied before the linear map.
    pub standardization: Option<(Array1<T>, Array1<T>)>,
}

pub struct Gradient<T> {
    pub loss: T,
    pub weights: Array2<T>,
    pub bias: Array1<T>,
}

/// Row-wise softmax, max-shifted.
pub fn softmax<T: Real>(logits: ArrayView2<T>) -> Array2<T> {
    let mut p = logits.to_owned();
    for mut row in p.axis_iter_mut(Axis(0)) {
        let m = row.iter().copied().fold(T::neg_infinity(), T::max);
        row.mapv_inplace(|v| (v - m).exp());
        let s = row.sum();
        row.mapv_inplace(|v| v / s);
    }
    p
}

fn logits<T: Real>(w: ArrayView2<T>, b: ArrayView1<T>, x: ArrayView2<T>) -> Array2<T> {
    x.dot(&w.t()) + b.insert_axis(Axis(0))
}

/// Mean softmax cross-entropy plus `l2/2 * ||W||^2` and its gradient.
pub fn loss_and_gradient<T: Real>(
    w: ArrayView2<T>,
    b: ArrayView1<T>,
    x: ArrayView2<T>,
    y: &[usize],
    l2: T,
) -> Gradient<T> {
    let n = T::from_usize_lossy(x.nrows());
    let z = logits(w, b, x);
    let mut p = softmax(z.view());
    let mut loss = T::zero();
    for (i, &c) in y.iter().enumerate() {
        // log-sum-exp form avoids log(0) for confident rows
        let row = z.row(i);
        let m = row.iter().copied().fold(T::neg_infinity(), T::max);
        let lse = m + row.iter().map(|&v| (v - m).exp()).sum::<T>().ln();
        loss = loss + (lse - row[c]);
        p[[i, c]] = p[[i, c]] - T::one();
    }
    loss = loss / n + l2 / T::lit(2.0) * w.iter().map(|&v| v * v).sum::<T>();
    p.mapv_inplace(|v| v / n);
    let gw = p.t().dot(&x) + &w.mapv(|v| v * l2);
    let gb = p.sum_axis(Axis(0));
    Gradient {
        loss,
        weights: gw,
        bias: gb,
    }
}

fn column_stats<T: Real>(x: ArrayView2<T>) -> (Array1<T>, Array1<T>) {
    let mean = x.mean_axis(Axis(0)).expect("nonempty");
    let var = x.var_axis(Axis(0), T::zero());
    let scale = var.mapv(|v| if v > T::zero() { v.sqrt() } else { T::one() });
    (mean, scale)
}

fn apply_standardization<T: Real>(x: ArrayView2<T>, s: &Option<(Array1<T>, Array1<T>)>) -> Array2<T> {
    match s {
        Some((m, sc)) => (&x - &m.view().insert_axis(Axis(0))) / sc.view().insert_axis(Axis(0)),
        None => x.to_owned(),
    }
}

fn check_labels(y: &[usize], n_classes: usize) -> Result<()> {
    if let Some((i, &c)) = y.iter().enumerate().find(|(_, &c)| c >= n_classes) {
        return Err(Error::invalid_input(format!(
            "label {c} at row {i} outside [0, {n_classes})"
        )));
    }
    Ok(())
}

/// Fit a softmax classifier from zero initialisation.
pub fn train<T: Real>(x: ArrayView2<T>, y: &[usize], config: &TrainConfig) -> Result<LinearModel<T>> {
    let (n, d) = x.dim();
    if n == 0 {
        return Err(Error::invalid_input("no training rows"));
    }
    if y.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: y.len(),
        });
    }
    if config.n_classes == 0 {
        return Err(Error::invalid_config("need at least one class"));
    }
    check_labels(y, config.n_classes)?;

    let standardization = config.standardize.then(|| column_stats(x));
    let xs = apply_standardization(x, &standardization);
    let k = config.n_classes;
    let l2 = T::lit(config.l2);
    let armijo = T::lit(1e-4);
    let min_step = T::lit(1e-14);
    let mut w = Array2::<T>::zeros((k, d));
    let mut b = Array1::<T>::zeros(k);
    let mut log = Vec::with_capacity(config.epochs);

    let mut g = loss_and_gradient(w.view(), b.view(), xs.view(), y, l2);
    for _ in 0..config.epochs {
        let gnorm2 = g.weights.iter().map(|&v| v * v).sum::<T>()
            + g.bias.iter().map(|&v| v * v).sum::<T>();
        if gnorm2 < T::lit(1e-24) {
            break;
        }
        let mut step = T::lit(config.lr);
        let accepted = loop {
            let w_try = &w - &g.weights.mapv(|v| v * step);
            let b_try = &b - &g.bias.mapv(|v| v * step);
            let g_try = loss_and_gradient(w_try.view(), b_try.view(), xs.view(), y, l2);
            if g_try.loss <= g.loss - armijo * step * gnorm2 {
                break Some((w_try, b_try, g_try));
            }
            step = step / T::lit(2.0);
            if step < min_step {
                break None;
            }
        };
        match accepted {
            Some((w_new, b_new, g_new)) => {
                w = w_new;
                b = b_new;
                g = g_new;
                log.push(g.loss);
            }
            None => break,
        }
    }

    Ok(LinearModel {
        weights: w,
        bias: b,
        classes: k,
        feature_dim: d,
        training_log: log,
        standardization,
    })
}

impl<T: Real> LinearModel<T> {
    fn check_dim(&self, x: ArrayView2<T>) -> Result<()> {
        if x.ncols() != self.feature_dim {
            return Err(Error::DimensionMismatch {
                expected: self.feature_dim,
                found: x.ncols(),
            });
        }
        Ok(())
    }

    pub fn logits(&self, x: ArrayView2<T>) -> Result<Array2<T>> {
        self.check_dim(x)?;
        let xs = apply_standardization(x, &self.standardization);
        Ok(logits(self.weights.view(), self.bias.view(), xs.view()))
    }

    pub fn predict_proba(&self, x: ArrayView2<T>) -> Result<Array2<T>> {
        Ok(softmax(self.logits(x)?.view()))
    }

    /// Arg-max class per row; ties go to the lowest class index.
    pub fn predict(&self, x: ArrayView2<T>) -> Result<Vec<usize>> {
        Ok(self
            .logits(x)?
            .axis_iter(Axis(0))
            .map(|row| {
                let mut best = 0;
                for (j, &v) in row.iter().enumerate() {
                    if v > row[best] {
                        best = j;
                    }
                }
                best
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn two_points_separable() {
        let x = array![[0.0f64, 1.0], [1.0, 0.0]];
        let m = train(x.view(), &[0, 1], &TrainConfig::new(2)).unwrap();
        assert_eq!(m.predict(x.view()).unwrap(), vec![0, 1]);
    }

    #[test]
    fn constant_labels() {
        let x = array![[0.0f64, 1.0], [1.0, 0.0], [2.0, 2.0]];
        let cfg = TrainConfig {
            epochs: 500,
            ..TrainConfig::new(3)
        };
        let m = train(x.view(), &[1, 1, 1], &cfg).unwrap();
        assert_eq!(m.predict(x.view()).unwrap(), vec![1, 1, 1]);
        let last = *m.training_log.last().unwrap();
        assert!(last < 0.05, "loss {last}");
    }

    #[test]
    fn loss_log_nonincreasing() {
        let x = array![[0.0f64, 1.0], [1.0, 0.2], [0.5, 0.5], [0.9, 0.1]];
        let m = train(x.view(), &[0, 1, 0, 1], &TrainConfig::new(2)).unwrap();
        for w in m.training_log.windows(2) {
            assert!(w[1] <= w[0] + 1e-9);
        }
    }

    #[test]
    fn label_out_of_range() {
        let x = array![[0.0f64], [1.0]];
        assert!(matches!(
            train(x.view(), &[0, 2], &TrainConfig::new(2)),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn softmax_rows_sum_to_one() {
        let z = array![[1000.0f64, -5.0, 3.0], [0.0, 0.0, 0.0]];
        let p = softmax(z.view());
        for row in p.axis_iter(Axis(0)) {
            assert!((row.sum() - 1.0).abs() < 1e-12);
        }
    }
}
