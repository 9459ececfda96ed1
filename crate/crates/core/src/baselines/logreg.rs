use alloc::vec;
use alloc::vec::Vec;

use super::{check_training, Classifier};
use crate::data::Label;
use crate::nn::Matrix;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogRegConfig {
    /// Weight of `½‖w‖²` added to the mean log-loss (bias unpenalized).
    pub l2: f64,
    pub tolerance: f64,
    pub max_iter: usize,
}

impl Default for LogRegConfig {
    fn default() -> Self {
        LogRegConfig {
            l2: 5e-4,
            tolerance: 1e-6,
            max_iter: 1000,
        }
    }
}

/// L2-penalized logistic regression fitted by full-batch gradient descent
/// with backtracking line search.
#[derive(Debug, Clone, PartialEq)]
pub struct LogReg {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub iterations: usize,
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + libm::exp(-z))
    } else {
        let e = libm::exp(z);
        e / (1.0 + e)
    }
}

/// `log(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + libm::log1p(libm::exp(-z))
    } else {
        libm::log1p(libm::exp(z))
    }
}

impl LogReg {
    pub fn zeros(dim: usize) -> Self {
        LogReg {
            weights: vec![0.0; dim],
            bias: 0.0,
            iterations: 0,
        }
    }

    pub fn probability(&self, x: &[f64]) -> f64 {
        sigmoid(self.logit(x))
    }

    fn logit(&self, x: &[f64]) -> f64 {
        self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + self.bias
    }

    /// Minimizes `(1/N)·Σ logloss + (l2/2)‖w‖²`. Duplicating the training
    /// set leaves the objective unchanged.
    pub fn fit(features: &Matrix, labels: &[Label], config: &LogRegConfig) -> Result<Self> {
        check_training(features, labels)?;
        let n = features.rows as f64;
        let d = features.cols;
        let y: Vec<f64> = labels.iter().map(|l| l.index() as f64).collect();
        let objective = |m: &LogReg| -> f64 {
            let mut s = 0.0;
            for (i, &yi) in y.iter().enumerate() {
                let z = m.logit(features.row(i));
                s += softplus(z) - yi * z;
            }
            let pen: f64 = m.weights.iter().map(|w| w * w).sum();
            s / n + 0.5 * config.l2 * pen
        };
        let gradient = |m: &LogReg| -> (Vec<f64>, f64) {
            let mut gw = vec![0.0; d];
            let mut gb = 0.0;
            for (i, &yi) in y.iter().enumerate() {
                let x = features.row(i);
                let r = sigmoid(m.logit(x)) - yi;
                gb += r;
                for (g, &v) in gw.iter_mut().zip(x) {
                    *g += r * v;
                }
            }
            for (g, &w) in gw.iter_mut().zip(&m.weights) {
                *g = *g / n + config.l2 * w;
            }
            (gw, gb / n)
        };

        let mut model = LogReg::zeros(d);
        let mut f = objective(&model);
        let mut step = 1.0;
        for it in 0..config.max_iter {
            let (gw, gb) = gradient(&model);
            let gnorm2 = gw.iter().map(|g| g * g).sum::<f64>() + gb * gb;
            model.iterations = it;
            if libm::sqrt(gnorm2) < config.tolerance {
                break;
            }
            step *= 2.0;
            loop {
                let trial = LogReg {
                    weights: model.weights.iter().zip(&gw).map(|(w, g)| w - step * g).collect(),
                    bias: model.bias - step * gb,
                    iterations: it,
                };
                let ft = objective(&trial);
                if ft <= f - 0.5 * step * gnorm2 {
                    model = trial;
                    f = ft;
                    break;
                }
                step *= 0.5;
                if step < 1e-20 {
                    return Ok(model);
                }
            }
        }
        Ok(model)
    }
}

impl Classifier for LogReg {
    fn predict(&self, x: &[f64]) -> Label {
        if self.probability(x) >= 0.5 {
            Label::Drowsy
        } else {
            Label::Alert
        }
    }
}
