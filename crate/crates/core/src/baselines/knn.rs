use alloc::vec::Vec;

use super::{check_training, Classifier};
use crate::data::Label;
use crate::nn::Matrix;
use crate::{Error, Result};

pub const DEFAULT_K: usize = 5;

/// Euclidean k-nearest neighbors with majority vote.
#[derive(Debug, Clone, PartialEq)]
pub struct Knn {
    pub k: usize,
    features: Matrix,
    labels: Vec<Label>,
}

impl Knn {
    pub fn fit(features: &Matrix, labels: &[Label], k: usize) -> Result<Self> {
        check_training(features, labels)?;
        if k == 0 || k > features.rows {
            return Err(Error::Argument(alloc::format!(
                "k = {k} must lie in 1..={}",
                features.rows
            )));
        }
        Ok(Knn {
            k,
            features: features.clone(),
            labels: labels.to_vec(),
        })
    }

    /// Indices of the `k` nearest training rows; equal distances keep
    /// training order.
    pub fn neighbors(&self, x: &[f64]) -> Vec<usize> {
        let mut d: Vec<(f64, usize)> = (0..self.features.rows)
            .map(|i| {
                let dist: f64 = self
                    .features
                    .row(i)
                    .iter()
                    .zip(x)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                (dist, i)
            })
            .collect();
        d.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        d.into_iter().take(self.k).map(|(_, i)| i).collect()
    }
}

impl Classifier for Knn {
    /// Vote ties go to alert.
    fn predict(&self, x: &[f64]) -> Label {
        let drowsy = self
            .neighbors(x)
            .into_iter()
            .filter(|&i| self.labels[i] == Label::Drowsy)
            .count();
        if 2 * drowsy > self.k {
            Label::Drowsy
        } else {
            Label::Alert
        }
    }
}
