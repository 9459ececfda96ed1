use alloc::vec;
use alloc::vec::Vec;

use super::{check_training, linalg::cholesky_solve, Classifier};
use crate::data::Label;
use crate::nn::Matrix;
use crate::{Error, Result};

/// Two-class linear discriminant with a pooled (maximum-likelihood) covariance.
///
/// Drowsy is predicted when `w·x + b > 0`, with `w = Σ⁻¹(μ₁ − μ₀)` and
/// `b = −w·(μ₀ + μ₁)/2 + ln(π₁/π₀)`. This is the difference of the two class
/// discriminants, formed directly so the large class-wise terms never cancel.
#[derive(Debug, Clone, PartialEq)]
pub struct Lda {
    pub weights: Vec<f64>,
    pub bias: f64,
}

impl Lda {
    /// Covariance ridge is `1e−6 · trace/dim` (or `1e−6` when the pooled
    /// scatter is zero).
    pub fn fit(features: &Matrix, labels: &[Label]) -> Result<Self> {
        check_training(features, labels)?;
        let d = features.cols;
        let n = features.rows as f64;
        let mut means = [vec![0.0; d], vec![0.0; d]];
        let mut counts = [0usize; 2];
        for (i, &l) in labels.iter().enumerate() {
            counts[l.index()] += 1;
            for (m, &x) in means[l.index()].iter_mut().zip(features.row(i)) {
                *m += x;
            }
        }
        for c in 0..2 {
            means[c].iter_mut().for_each(|m| *m /= counts[c] as f64);
        }
        let mut cov = vec![0.0; d * d];
        for (i, &l) in labels.iter().enumerate() {
            let x = features.row(i);
            let mu = &means[l.index()];
            for r in 0..d {
                for c in 0..d {
                    cov[r * d + c] += (x[r] - mu[r]) * (x[c] - mu[c]);
                }
            }
        }
        cov.iter_mut().for_each(|v| *v /= n);
        let trace: f64 = (0..d).map(|i| cov[i * d + i]).sum();
        let ridge = if trace > 0.0 {
            1e-6 * trace / d as f64
        } else {
            1e-6
        };
        for i in 0..d {
            cov[i * d + i] += ridge;
        }
        let diff: Vec<f64> = means[1].iter().zip(&means[0]).map(|(a, b)| a - b).collect();
        let weights = cholesky_solve(&cov, &diff)
            .ok_or_else(|| Error::Fit("pooled covariance is not positive definite".into()))?;
        let midpoint: f64 = weights
            .iter()
            .zip(means[0].iter().zip(&means[1]))
            .map(|(w, (a, b))| w * 0.5 * (a + b))
            .sum();
        let bias = -midpoint + libm::log(counts[1] as f64 / counts[0] as f64);
        Ok(Lda { weights, bias })
    }

    /// Positive for drowsy evidence.
    pub fn decision(&self, x: &[f64]) -> f64 {
        self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + self.bias
    }
}

impl Classifier for Lda {
    fn predict(&self, x: &[f64]) -> Label {
        if self.decision(x) > 0.0 {
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
    fn single_points_split_at_the_bisector() {
        let x = Matrix::from_vec(2, 2, vec![-1.0, 0.0, 1.0, 0.0]).unwrap();
        let lda = Lda::fit(&x, &[Label::Alert, Label::Drowsy]).unwrap();
        assert_eq!(lda.predict(&[0.0, 0.0]), Label::Alert);
        assert_eq!(lda.predict(&[0.0, 5.0]), Label::Alert);
        assert_eq!(lda.predict(&[0.01, -3.0]), Label::Drowsy);
        assert_eq!(lda.predict(&[-0.01, 2.0]), Label::Alert);
    }

    #[test]
    fn one_class_is_a_fit_error() {
        let x = Matrix::from_vec(2, 1, vec![0.0, 1.0]).unwrap();
        assert!(matches!(Lda::fit(&x, &[Label::Alert; 2]), Err(Error::Fit(_))));
    }
}
