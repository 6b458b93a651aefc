use ndarray::{Array2, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::LinearModel;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub accuracy: f64,
    /// `None` for classes absent from `y`.
    pub per_class: Vec<Option<f64>>,
    /// Rows are true classes, columns predictions.
    pub confusion: Array2<usize>,
}

impl Evaluation {
    /// Score precomputed predictions.
    pub fn from_predictions(pred: &[usize], y: &[usize], n_classes: usize) -> Result<Self> {
        if pred.len() != y.len() {
            return Err(Error::DimensionMismatch {
                expected: y.len(),
                found: pred.len(),
            });
        }
        if y.is_empty() {
            return Err(Error::invalid_input("nothing to evaluate"));
        }
        let mut confusion = Array2::zeros((n_classes, n_classes));
        for (&t, &p) in y.iter().zip(pred) {
            if t >= n_classes || p >= n_classes {
                return Err(Error::invalid_input(format!(
                    "label outside [0, {n_classes})"
                )));
            }
            confusion[[t, p]] += 1;
        }
        let correct: usize = (0..n_classes).map(|c| confusion[[c, c]]).sum();
        let per_class = (0..n_classes)
            .map(|c| {
                let total: usize = confusion.row(c).sum();
                (total > 0).then(|| confusion[[c, c]] as f64 / total as f64)
            })
            .collect();
        Ok(Self {
            accuracy: correct as f64 / y.len() as f64,
            per_class,
            confusion,
        })
    }
}

/// Top-1 accuracy, per-class accuracy and confusion matrix of `model` on `(x, y)`.
pub fn evaluate<T: Real>(model: &LinearModel<T>, x: ArrayView2<T>, y: &[usize]) -> Result<Evaluation> {
    if x.nrows() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.nrows(),
            found: y.len(),
        });
    }
    let pred = model.predict(x)?;
    Evaluation::from_predictions(&pred, y, model.classes)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Baselines {
    /// Uniform guessing over the distinct observed classes.
    pub chance: f64,
    /// Always predicting the modal class.
    pub majority: f64,
}

pub fn baselines(y: &[usize]) -> Result<Baselines> {
    if y.is_empty() {
        return Err(Error::invalid_input("no labels"));
    }
    let k = y.iter().copied().max().unwrap_or(0) + 1;
    let mut counts = vec![0usize; k];
    for &c in y {
        counts[c] += 1;
    }
    let distinct = counts.iter().filter(|&&c| c > 0).count();
    let modal = counts.iter().copied().max().unwrap_or(0);
    Ok(Baselines {
        chance: 1.0 / distinct as f64,
        majority: modal as f64 / y.len() as f64,
    })
}
