//! Linear epsilon-insensitive regression trained by averaged stochastic
//! subgradient descent.
//!
//! The objective is `½‖w‖² + C · mean_i max(0, |w·x_i + b − y_i| − ε)` over
//! standardized features; the bias is not regularized. Step `t` (counted over
//! all sample visits) has size `1 / (C·t)`. After every epoch the mean of that
//! epoch's iterates is scored on the full objective and the best one so far
//! is kept, so the recorded loss history never increases.

use alloc::string::ToString;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::FeatureVector;
use crate::{Error, Result};

pub const FEATURES: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub epsilon: f64,
    /// Loss weight `C`.
    pub regularization: f64,
    pub epochs: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epsilon: 0.01,
            regularization: 1.0,
            epochs: 200,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidConfig(what.to_string()));
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return bad("epsilon must be a non-negative number");
        }
        if !(self.regularization > 0.0 && self.regularization.is_finite()) {
            return bad("regularization must be positive");
        }
        if self.epochs == 0 {
            return bad("epochs must be at least 1");
        }
        Ok(())
    }
}

/// Per-feature standardization `(x − mean) / scale`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scaler {
    pub mean: [f64; FEATURES],
    /// Population standard deviation, 1 for constant features.
    pub scale: [f64; FEATURES],
}

impl Scaler {
    pub fn fit(samples: &[[f64; FEATURES]]) -> Self {
        let n = samples.len().max(1) as f64;
        let mut mean = [0.0; FEATURES];
        for x in samples {
            for j in 0..FEATURES {
                mean[j] += x[j];
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut scale = [0.0; FEATURES];
        for x in samples {
            for j in 0..FEATURES {
                scale[j] += (x[j] - mean[j]) * (x[j] - mean[j]);
            }
        }
        for s in scale.iter_mut() {
            *s = libm::sqrt(*s / n);
            if !(*s > 1e-12) {
                *s = 1.0;
            }
        }
        Scaler { mean, scale }
    }

    pub fn transform(&self, x: &[f64; FEATURES]) -> [f64; FEATURES] {
        let mut out = [0.0; FEATURES];
        for j in 0..FEATURES {
            out[j] = (x[j] - self.mean[j]) / self.scale[j];
        }
        out
    }
}

/// A trained linear model over standardized features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionModel {
    /// Weights of the standardized features, in `FeatureVector` order.
    pub weights: [f64; FEATURES],
    pub bias: f64,
    pub scaler: Scaler,
    pub config: TrainConfig,
    /// Best objective after each epoch.
    pub loss_history: Vec<f64>,
}

fn dot(w: &[f64; FEATURES], x: &[f64; FEATURES]) -> f64 {
    w.iter().zip(x).map(|(a, b)| a * b).sum()
}

fn objective(
    w: &[f64; FEATURES],
    b: f64,
    xs: &[[f64; FEATURES]],
    ys: &[f64],
    cfg: &TrainConfig,
) -> f64 {
    let hinge: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (libm::fabs(dot(w, x) + b - y) - cfg.epsilon).max(0.0))
        .sum();
    0.5 * dot(w, w) + cfg.regularization * hinge / xs.len() as f64
}

impl RegressionModel {
    pub fn predict(&self, features: &FeatureVector) -> f64 {
        self.predict_raw(&features.to_array())
    }

    pub fn predict_raw(&self, x: &[f64; FEATURES]) -> f64 {
        dot(&self.weights, &self.scaler.transform(x)) + self.bias
    }

    /// Weights and intercept expressed over the unscaled features.
    pub fn raw_weights(&self) -> ([f64; FEATURES], f64) {
        let mut w = [0.0; FEATURES];
        let mut b = self.bias;
        for j in 0..FEATURES {
            w[j] = self.weights[j] / self.scaler.scale[j];
            b -= w[j] * self.scaler.mean[j];
        }
        (w, b)
    }

    pub fn is_finite(&self) -> bool {
        self.weights
            .iter()
            .chain(&self.scaler.mean)
            .chain(&self.scaler.scale)
            .all(|v| v.is_finite())
            && self.bias.is_finite()
    }
}

/// Fits a model to `(features, label)` pairs.
pub fn train(samples: &[(FeatureVector, f64)], config: &TrainConfig) -> Result<RegressionModel> {
    config.validate()?;
    if samples.is_empty() {
        return Err(Error::NoTrainingData);
    }
    let raw: Vec<[f64; FEATURES]> = samples.iter().map(|(f, _)| f.to_array()).collect();
    let scaler = Scaler::fit(&raw);
    let xs: Vec<[f64; FEATURES]> = raw.iter().map(|x| scaler.transform(x)).collect();
    let ys: Vec<f64> = samples.iter().map(|(_, y)| *y).collect();
    if xs.iter().flatten().chain(&ys).any(|v| !v.is_finite()) {
        return Err(Error::InvalidConfig("training data must be finite".into()));
    }

    let c = config.regularization;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut order: Vec<usize> = (0..xs.len()).collect();
    let mut w = [0.0; FEATURES];
    let mut b = 0.0;
    let mut t = 0u64;

    let mut best = (w, b, objective(&w, b, &xs, &ys, config));
    let mut history = Vec::with_capacity(config.epochs);
    for _ in 0..config.epochs {
        order.shuffle(&mut rng);
        let mut sum_w = [0.0; FEATURES];
        let mut sum_b = 0.0;
        for &i in &order {
            t += 1;
            let step = 1.0 / (c * t as f64);
            let residual = dot(&w, &xs[i]) + b - ys[i];
            let sign = if residual > config.epsilon {
                1.0
            } else if residual < -config.epsilon {
                -1.0
            } else {
                0.0
            };
            for j in 0..FEATURES {
                w[j] -= step * (w[j] + c * sign * xs[i][j]);
            }
            b -= step * c * sign;
            for j in 0..FEATURES {
                sum_w[j] += w[j];
            }
            sum_b += b;
        }
        let n = order.len() as f64;
        let avg_w = sum_w.map(|s| s / n);
        let avg_b = sum_b / n;
        let loss = objective(&avg_w, avg_b, &xs, &ys, config);
        if loss < best.2 {
            best = (avg_w, avg_b, loss);
        }
        history.push(best.2);
    }

    Ok(RegressionModel {
        weights: best.0,
        bias: best.1,
        scaler,
        config: *config,
        loss_history: history,
    })
}
