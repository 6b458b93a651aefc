//! Multinomial linear probe and baseline accounting.

mod linear;
mod metrics;

pub use linear::{loss_and_gradient, softmax, train, Gradient, LinearModel, TrainConfig};
pub use metrics::{baselines, evaluate, Baselines, Evaluation};
