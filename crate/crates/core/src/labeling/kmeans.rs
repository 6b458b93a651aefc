//! Lloyd's k-means with k-means++ seeding.

use ndarray::{Array2, ArrayView1, ArrayView2, Axis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KMeansConfig {
    pub k: usize,
    pub seed: u64,
    pub max_iter: usize,
    pub tol: f64,
}

impl KMeansConfig {
    pub fn new(k: usize, seed: u64) -> Self {
        Self {
            k,
            seed,
            max_iter: 100,
            tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterModel<T> {
    pub k: usize,
    /// `k x dim`.
    pub centroids: Array2<T>,
    /// Sum of squared distances of the training rows to their centroids.
    pub inertia: T,
    pub iterations_run: usize,
    pub seed: u64,
    /// Inertia after the seeding step and after every Lloyd iteration.
    pub inertia_history: Vec<T>,
}

impl<T: Real> ClusterModel<T> {
    pub fn dim(&self) -> usize {
        self.centroids.ncols()
    }
}

fn sq_dist<T: Real>(a: ArrayView1<T>, b: ArrayView1<T>) -> T {
    a.iter()
        .zip(b.iter())
        .map(|(&x, &y)| (x - y) * (x - y))
        .sum()
}

/// Nearest centroid and squared distance for every row; ties go to the
/// lower index.
fn nearest<T: Real>(x: ArrayView2<T>, centroids: ArrayView2<T>) -> (Vec<usize>, Vec<T>) {
    x.axis_iter(Axis(0))
        .map(|row| {
            let mut best = (0, T::infinity());
            for (j, c) in centroids.axis_iter(Axis(0)).enumerate() {
                let d = sq_dist(row, c);
                if d < best.1 {
                    best = (j, d);
                }
            }
            best
        })
        .unzip()
}

fn validate<T: Real>(x: ArrayView2<T>) -> Result<()> {
    for (i, row) in x.axis_iter(Axis(0)).enumerate() {
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid_input(format!("row {i} contains non-finite values")));
        }
    }
    Ok(())
}

fn plus_plus_init<T: Real>(x: ArrayView2<T>, k: usize, rng: &mut ChaCha8Rng) -> Array2<T> {
    let n = x.nrows();
    let mut chosen = Vec::with_capacity(k);
    chosen.push(rng.random_range(0..n));
    let mut d2: Vec<f64> = x
        .axis_iter(Axis(0))
        .map(|r| sq_dist(r, x.row(chosen[0])).to_f64_lossy())
        .collect();
    while chosen.len() < k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut pick = None;
            for (i, &d) in d2.iter().enumerate() {
                if d > 0.0 {
                    if target < d {
                        pick = Some(i);
                        break;
                    }
                    target -= d;
                }
            }
            // rounding can run past the end; fall back to the last positive weight
            pick.unwrap_or_else(|| d2.iter().rposition(|&d| d > 0.0).unwrap())
        } else {
            // every remaining point coincides with a chosen centre
            let free: Vec<usize> = (0..n).filter(|i| !chosen.contains(i)).collect();
            free[rng.random_range(0..free.len())]
        };
        chosen.push(pick);
        for (i, d) in d2.iter_mut().enumerate() {
            let nd = sq_dist(x.row(i), x.row(pick)).to_f64_lossy();
            if nd < *d {
                *d = nd;
            }
        }
    }
    let mut c = Array2::zeros((k, x.ncols()));
    for (j, &i) in chosen.iter().enumerate() {
        c.row_mut(j).assign(&x.row(i));
    }
    c
}

/// Move each centroid to the mean of its members. Empty clusters are reseeded
/// to the rows farthest from their own centroid, one distinct row each.
fn update_centroids<T: Real>(
    x: ArrayView2<T>,
    labels: &[usize],
    sq_dists: &[T],
    centroids: &mut Array2<T>,
) {
    let k = centroids.nrows();
    let mut sums = Array2::<T>::zeros(centroids.dim());
    let mut counts = vec![0usize; k];
    for (row, &l) in x.axis_iter(Axis(0)).zip(labels) {
        for (s, &v) in sums.row_mut(l).iter_mut().zip(row.iter()) {
            *s = *s + v;
        }
        counts[l] += 1;
    }
    let mut donors: Vec<usize> = (0..x.nrows()).collect();
    donors.sort_by(|&a, &b| {
        sq_dists[b]
            .partial_cmp(&sq_dists[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let mut donors = donors.into_iter();
    for (j, &count) in counts.iter().enumerate() {
        if count > 0 {
            let inv = T::one() / T::from_usize_lossy(count);
            centroids.row_mut(j).assign(&sums.row(j).mapv(|v| v * inv));
        } else if let Some(d) = donors.next() {
            centroids.row_mut(j).assign(&x.row(d));
        }
    }
}

/// Fit `config.k` centroids to the rows of `x`.
pub fn kmeans_fit<T: Real>(x: ArrayView2<T>, config: &KMeansConfig) -> Result<ClusterModel<T>> {
    let (n, _) = x.dim();
    let k = config.k;
    if k < 2 {
        return Err(Error::invalid_input(format!("k must be at least 2, got {k}")));
    }
    if n < k {
        return Err(Error::invalid_input(format!("{n} rows cannot form {k} clusters")));
    }
    validate(x)?;

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut centroids = plus_plus_init(x, k, &mut rng);
    let (mut labels, mut sq) = nearest(x, centroids.view());
    let mut inertia: T = sq.iter().copied().sum();
    let mut history = vec![inertia];
    let mut iterations = 0;
    let tol = T::lit(config.tol);

    while iterations < config.max_iter {
        iterations += 1;
        update_centroids(x, &labels, &sq, &mut centroids);
        let (new_labels, new_sq) = nearest(x, centroids.view());
        let new_inertia: T = new_sq.iter().copied().sum();
        debug_assert!(
            new_inertia <= inertia + inertia * T::lit(1e-12),
            "inertia increased: {inertia} -> {new_inertia}"
        );
        let changed = new_labels != labels;
        let improvement = if inertia > T::zero() {
            (inertia - new_inertia) / inertia
        } else {
            T::zero()
        };
        labels = new_labels;
        sq = new_sq;
        inertia = new_inertia;
        history.push(inertia);
        if !changed || inertia == T::zero() || improvement < tol {
            break;
        }
    }

    Ok(ClusterModel {
        k,
        centroids,
        inertia,
        iterations_run: iterations,
        seed: config.seed,
        inertia_history: history,
    })
}

/// Label every row with its nearest centroid (ties to the lowest index) and
/// return the Euclidean distance to it.
pub fn assign<T: Real>(model: &ClusterModel<T>, x: ArrayView2<T>) -> Result<(Vec<usize>, Vec<T>)> {
    if x.ncols() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            found: x.ncols(),
        });
    }
    let (labels, sq) = nearest(x, model.centroids.view());
    Ok((labels, sq.into_iter().map(|d| d.sqrt()).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn n_equals_k() {
        let x = array![[0.0f64, 0.0], [1.0, 0.0], [0.0, 5.0]];
        let m = kmeans_fit(x.view(), &KMeansConfig::new(3, 7)).unwrap();
        assert_eq!(m.inertia, 0.0);
        let (labels, d) = assign(&m, x.view()).unwrap();
        let mut sorted = labels.clone();
        sorted.sort();
        assert_eq!(sorted, vec![0, 1, 2]);
        assert!(d.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn errors() {
        let x = array![[0.0f64, 0.0], [1.0, 0.0]];
        assert!(kmeans_fit(x.view(), &KMeansConfig::new(3, 0)).is_err());
        assert!(kmeans_fit(x.view(), &KMeansConfig::new(1, 0)).is_err());
        let bad = array![[0.0f64, f64::NAN], [1.0, 0.0], [2.0, 2.0]];
        assert!(matches!(
            kmeans_fit(bad.view(), &KMeansConfig::new(2, 0)),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn centroids_assign_to_themselves() {
        let x = array![[0.0f64, 0.0], [0.1, 0.0], [4.0, 4.0], [4.1, 4.0], [9.0, 0.0]];
        let m = kmeans_fit(x.view(), &KMeansConfig::new(3, 1)).unwrap();
        let (labels, d) = assign(&m, m.centroids.view()).unwrap();
        assert_eq!(labels, vec![0, 1, 2]);
        assert!(d.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn tie_goes_to_lowest_index() {
        let model = ClusterModel {
            k: 6,
            centroids: array![
                [10.0f64, 10.0],
                [20.0, 20.0],
                [-1.0, 0.0],
                [30.0, 30.0],
                [40.0, 40.0],
                [1.0, 0.0]
            ],
            inertia: 0.0,
            iterations_run: 0,
            seed: 0,
            inertia_history: vec![],
        };
        let (labels, _) = assign(&model, array![[0.0, 0.0]].view()).unwrap();
        assert_eq!(labels, vec![2]);
        assert!(assign(&model, array![[0.0, 0.0, 0.0]].view()).is_err());
    }

    #[test]
    fn duplicate_points_still_seed() {
        let x = Array2::<f64>::zeros((5, 3));
        let m = kmeans_fit(x.view(), &KMeansConfig::new(2, 3)).unwrap();
        assert_eq!(m.inertia, 0.0);
    }

    #[test]
    fn empty_cluster_is_reseeded() {
        let x = array![[0.0f64], [0.0], [10.0], [11.0]];
        let mut c = array![[0.0f64], [100.0]];
        let labels = vec![0, 0, 0, 0];
        let sq = vec![0.0, 0.0, 100.0, 121.0];
        update_centroids(x.view(), &labels, &sq, &mut c);
        assert_eq!(c[[0, 0]], 5.25);
        assert_eq!(c[[1, 0]], 11.0);
    }
}
