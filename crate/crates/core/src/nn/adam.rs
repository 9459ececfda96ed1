use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig {
            learning_rate: 0.01,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-7,
        }
    }
}

impl AdamConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.learning_rate > 0.0
            && self.beta1 > 0.0
            && self.beta1 < 1.0
            && self.beta2 > 0.0
            && self.beta2 < 1.0
            && self.epsilon > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::Argument(alloc::format!("invalid Adam config {self:?}")))
        }
    }
}

/// Adam state over a fixed list of parameter tensors.
#[derive(Debug, Clone)]
pub struct Adam {
    pub config: AdamConfig,
    first: Vec<Vec<f64>>,
    second: Vec<Vec<f64>>,
    step: u64,
}

impl Adam {
    pub fn new(config: AdamConfig, shapes: &[usize]) -> Result<Self> {
        config.validate()?;
        Ok(Adam {
            config,
            first: shapes.iter().map(|&n| vec![0.0; n]).collect(),
            second: shapes.iter().map(|&n| vec![0.0; n]).collect(),
            step: 0,
        })
    }

    pub fn steps_taken(&self) -> u64 {
        self.step
    }

    /// One bias-corrected update of every tensor.
    pub fn step(&mut self, params: &mut [&mut [f64]], grads: &[&[f64]]) -> Result<()> {
        if params.len() != self.first.len() || grads.len() != self.first.len() {
            return Err(Error::dim(
                "adam tensor count",
                self.first.len(),
                params.len().min(grads.len()),
            ));
        }
        for i in 0..params.len() {
            let n = self.first[i].len();
            if params[i].len() != n || grads[i].len() != n {
                return Err(Error::dim("adam tensor", n, params[i].len()));
            }
        }
        self.step += 1;
        let AdamConfig {
            learning_rate,
            beta1,
            beta2,
            epsilon,
        } = self.config;
        let t = self.step as i32;
        let c1 = 1.0 - libm::pow(beta1, t as f64);
        let c2 = 1.0 - libm::pow(beta2, t as f64);
        for ((p, g), (m, v)) in params
            .iter_mut()
            .zip(grads)
            .zip(self.first.iter_mut().zip(self.second.iter_mut()))
        {
            for (((p, &g), m), v) in p.iter_mut().zip(g.iter()).zip(m.iter_mut()).zip(v.iter_mut()) {
                *m = beta1 * *m + (1.0 - beta1) * g;
                *v = beta2 * *v + (1.0 - beta2) * g * g;
                let m_hat = *m / c1;
                let v_hat = *v / c2;
                *p -= learning_rate * m_hat / (libm::sqrt(v_hat) + epsilon);
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_defaults() {
        let c = AdamConfig::default();
        assert_eq!(
            (c.learning_rate, c.beta1, c.beta2, c.epsilon),
            (0.01, 0.9, 0.999, 1e-7)
        );
    }

    #[test]
    fn first_step_moves_by_learning_rate() {
        let mut adam = Adam::new(AdamConfig::default(), &[1]).unwrap();
        let mut p = [1.0];
        let g = [0.3];
        adam.step(&mut [&mut p], &[&g]).unwrap();
        let expected = 1.0 - 0.01 * 0.3 / (0.3 + 1e-7);
        assert!((p[0] - expected).abs() < 1e-15);
        assert!((p[0] - 0.99).abs() < 1e-8);
    }

    #[test]
    fn zero_gradients_never_move_parameters() {
        let mut adam = Adam::new(AdamConfig::default(), &[3]).unwrap();
        let mut p = [1.5, -2.0, 0.25];
        for _ in 0..100 {
            adam.step(&mut [&mut p], &[&[0.0; 3]]).unwrap();
        }
        assert_eq!(p, [1.5, -2.0, 0.25]);
        assert_eq!(adam.steps_taken(), 100);
    }

    #[test]
    fn shape_mismatch() {
        let mut adam = Adam::new(AdamConfig::default(), &[2]).unwrap();
        let mut p = [0.0; 3];
        assert!(adam.step(&mut [&mut p], &[&[0.0; 3]]).is_err());
    }

    #[test]
    fn rejects_bad_betas() {
        let c = AdamConfig {
            beta1: 1.0,
            ..AdamConfig::default()
        };
        assert!(Adam::new(c, &[1]).is_err());
    }
}
