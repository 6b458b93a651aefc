mod common;

use common::*;
use ndarray::{Array1, Array2};
use proptest::prelude::*;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use soundtex::probe::{baselines, evaluate, loss_and_gradient, softmax, train, Evaluation, TrainConfig};

fn normal(shape: (usize, usize), r: &mut impl Rng) -> Array2<f64> {
    Array2::from_shape_simple_fn(shape, || StandardNormal.sample(r))
}

proptest! {
    #[test]
    fn softmax_rows_sum_to_one(seed in 0u64..10_000, rows in 1usize..20, cols in 1usize..12, scale in 0.01f64..500.0) {
        let mut r = rng(seed);
        let logits = normal((rows, cols), &mut r) * scale;
        let p = softmax(logits.view());
        for row in p.rows() {
            prop_assert!((row.sum() - 1.0).abs() <= 1e-12);
            prop_assert!(row.iter().all(|v| (0.0..=1.0).contains(v)));
        }
    }

    #[test]
    fn bias_gradient_matches_finite_differences(seed in 0u64..10_000) {
        let mut r = rng(seed);
        let (c, d, n) = (3, 4, 9);
        let w = normal((c, d), &mut r);
        let b = Array1::from_shape_simple_fn(c, || StandardNormal.sample(&mut r));
        let x = normal((n, d), &mut r);
        let y: Vec<usize> = (0..n).map(|_| r.random_range(0..c)).collect();
        let g = loss_and_gradient(w.view(), b.view(), x.view(), &y, 0.1);
        let h = 1e-5;
        for i in 0..c {
            let mut bp = b.clone();
            bp[i] += h;
            let mut bm = b.clone();
            bm[i] -= h;
            let fd = (loss_and_gradient(w.view(), bp.view(), x.view(), &y, 0.1).loss
                - loss_and_gradient(w.view(), bm.view(), x.view(), &y, 0.1).loss)
                / (2.0 * h);
            prop_assert!((fd - g.bias[i]).abs() <= 1e-4 * fd.abs().max(g.bias[i].abs()).max(1e-6));
        }
    }
}

#[test]
fn training_loss_never_rises() {
    let mut r = rng(3);
    let x = normal((120, 6), &mut r);
    let y: Vec<usize> = x.rows().into_iter().map(|row| usize::from(row[0] + 0.5 * row[1] > 0.0)).collect();
    let model = train(x.view(), &y, &TrainConfig::new(2)).unwrap();
    assert!(!model.training_log.is_empty());
    for w in model.training_log.windows(2) {
        assert!(w[1] <= w[0] + 1e-9, "{} -> {}", w[0], w[1]);
    }
    assert!(model.weights.iter().chain(model.bias.iter()).all(|v| v.is_finite()));
    let eval = evaluate(&model, x.view(), &y).unwrap();
    assert!(eval.accuracy > 0.95);
}

#[test]
fn separable_blobs_reach_full_accuracy() {
    let (x, y) = blobs(&[[0.0, 0.0], [4.0, 0.0], [0.0, 4.0]], 50, 0.3, 5);
    let model = train(x.view(), &y, &TrainConfig::new(3)).unwrap();
    let eval = evaluate(&model, x.view(), &y).unwrap();
    assert!(eval.accuracy >= 0.99);
    assert_eq!(eval.confusion.sum(), 150);
}

#[test]
fn training_is_deterministic() {
    let (x, y) = blobs(&[[0.0, 0.0], [2.0, 1.0]], 40, 1.0, 6);
    let a = train(x.view(), &y, &TrainConfig::new(2)).unwrap();
    let b = train(x.view(), &y, &TrainConfig::new(2)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn baselines_and_per_class_accuracy() {
    let y: Vec<usize> = (0..60).map(|i| i % 30).collect();
    let base = baselines(&y).unwrap();
    assert!((base.chance - 1.0 / 30.0).abs() < 1e-15);
    assert_eq!(format!("{:.1}%", 100.0 * base.chance), "3.3%");

    let eval = Evaluation::from_predictions(&[0, 1, 1, 2], &[0, 1, 2, 2], 4).unwrap();
    assert_eq!(eval.accuracy, 0.75);
    assert_eq!(eval.per_class, vec![Some(1.0), Some(1.0), Some(0.5), None]);
    assert_eq!(eval.confusion[[2, 1]], 1);
}

#[test]
fn rejects_out_of_range_labels() {
    let x = Array2::<f64>::zeros((3, 2));
    assert!(train(x.view(), &[0, 1, 5], &TrainConfig::new(2)).is_err());
    assert!(train(x.view(), &[0, 1], &TrainConfig::new(2)).is_err());
}
