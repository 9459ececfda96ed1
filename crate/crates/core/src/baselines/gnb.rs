use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use super::{check_training, Classifier};
use crate::data::Label;
use crate::nn::Matrix;
use crate::Result;

/// Gaussian naive Bayes with class priors from frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianNb {
    pub means: [Vec<f64>; 2],
    pub vars: [Vec<f64>; 2],
    pub log_priors: [f64; 2],
}

impl GaussianNb {
    /// Every variance is inflated by `1e−9 ·` the largest per-feature variance
    /// of the whole training set (`1e−9` if that is zero).
    pub fn fit(features: &Matrix, labels: &[Label]) -> Result<Self> {
        check_training(features, labels)?;
        let d = features.cols;
        let n = features.rows as f64;
        let column_stats = |rows: &[usize]| -> (Vec<f64>, Vec<f64>) {
            let m = rows.len() as f64;
            let mut mean = vec![0.0; d];
            for &i in rows {
                for (a, &x) in mean.iter_mut().zip(features.row(i)) {
                    *a += x;
                }
            }
            mean.iter_mut().for_each(|v| *v /= m);
            let mut var = vec![0.0; d];
            for &i in rows {
                for ((a, &x), &mu) in var.iter_mut().zip(features.row(i)).zip(&mean) {
                    *a += (x - mu) * (x - mu);
                }
            }
            var.iter_mut().for_each(|v| *v /= m);
            (mean, var)
        };
        let all: Vec<usize> = (0..features.rows).collect();
        let max_var = column_stats(&all).1.into_iter().fold(0.0, f64::max);
        let floor = if max_var > 0.0 { 1e-9 * max_var } else { 1e-9 };

        let mut means = [Vec::new(), Vec::new()];
        let mut vars = [Vec::new(), Vec::new()];
        let mut log_priors = [0.0; 2];
        for c in 0..2 {
            let rows: Vec<usize> = (0..features.rows).filter(|&i| labels[i].index() == c).collect();
            let (m, mut v) = column_stats(&rows);
            v.iter_mut().for_each(|x| *x += floor);
            log_priors[c] = libm::log(rows.len() as f64 / n);
            means[c] = m;
            vars[c] = v;
        }
        Ok(GaussianNb {
            means,
            vars,
            log_priors,
        })
    }

    pub fn log_posteriors(&self, x: &[f64]) -> [f64; 2] {
        let lp = |c: usize| {
            let ll: f64 = x
                .iter()
                .zip(&self.means[c])
                .zip(&self.vars[c])
                .map(|((&v, &m), &s2)| -0.5 * (libm::log(TAU * s2) + (v - m) * (v - m) / s2))
                .sum();
            self.log_priors[c] + ll
        };
        [lp(0), lp(1)]
    }
}

impl Classifier for GaussianNb {
    fn predict(&self, x: &[f64]) -> Label {
        let [a, d] = self.log_posteriors(x);
        if d > a {
            Label::Drowsy
        } else {
            Label::Alert
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_likelihoods_follow_the_prior() {
        let x = Matrix::from_vec(9, 1, vec![1.0, 2.0, 3.0, 1.0, 2.0, 3.0, 1.0, 2.0, 3.0]).unwrap();
        let mut y = vec![Label::Drowsy; 9];
        y[..3].fill(Label::Alert);
        let m = GaussianNb::fit(&x, &y).unwrap();
        for v in [-4.0, 0.0, 2.0, 10.0] {
            assert_eq!(m.predict(&[v]), Label::Drowsy);
        }
    }

    #[test]
    fn constant_feature_is_finite() {
        let x = Matrix::from_vec(4, 2, vec![5.0, 0.0, 5.0, 0.1, 5.0, 1.0, 5.0, 1.1]).unwrap();
        let y = [Label::Alert, Label::Alert, Label::Drowsy, Label::Drowsy];
        let m = GaussianNb::fit(&x, &y).unwrap();
        let lp = m.log_posteriors(&[5.0, 0.05]);
        assert!(lp.iter().all(|v| v.is_finite()));
        assert_eq!(m.predict(&[5.0, 0.05]), Label::Alert);
        assert_eq!(m.predict(&[5.0, 1.05]), Label::Drowsy);
    }
}
