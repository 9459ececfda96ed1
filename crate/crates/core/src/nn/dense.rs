use alloc::vec;
use alloc::vec::Vec;

use super::Matrix;
use crate::{Error, Result};

/// Fully connected layer; `weights[k][c]` links input feature `k` to class `c`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseParams {
    pub in_features: usize,
    pub num_classes: usize,
    /// `[in_features][num_classes]`
    pub weights: Vec<f64>,
    pub biases: Vec<f64>,
}

impl DenseParams {
    pub fn zeros(in_features: usize, num_classes: usize) -> Self {
        DenseParams {
            in_features,
            num_classes,
            weights: vec![0.0; in_features * num_classes],
            biases: vec![0.0; num_classes],
        }
    }

    #[inline]
    pub fn weight(&self, k: usize, c: usize) -> f64 {
        self.weights[k * self.num_classes + c]
    }

    /// Weights of one class across all input features.
    pub fn class_column(&self, c: usize) -> Vec<f64> {
        (0..self.in_features).map(|k| self.weight(k, c)).collect()
    }
}

/// `logits[b][c] = Σ_k w[k][c]·x[b][k] + bias[c]`.
pub fn dense_forward(input: &Matrix, params: &DenseParams) -> Result<Matrix> {
    if input.cols != params.in_features {
        return Err(Error::dim("dense input features", params.in_features, input.cols));
    }
    let c = params.num_classes;
    let mut out = Matrix::zeros(input.rows, c);
    for b in 0..input.rows {
        let row = out.row_mut(b);
        row.copy_from_slice(&params.biases);
        for (k, &x) in input.row(b).iter().enumerate() {
            for (o, &w) in row.iter_mut().zip(&params.weights[k * c..(k + 1) * c]) {
                *o += w * x;
            }
        }
    }
    Ok(out)
}

/// Row-wise softmax with max subtraction.
pub fn softmax_rows(logits: &Matrix) -> Matrix {
    let mut p = logits.clone();
    for b in 0..p.rows {
        let row = p.row_mut(b);
        let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut z = 0.0;
        for v in row.iter_mut() {
            *v = libm::exp(*v - max);
            z += *v;
        }
        for v in row.iter_mut() {
            *v /= z;
        }
    }
    p
}

/// Returns `(logits, probabilities)`.
pub fn dense_softmax(input: &Matrix, params: &DenseParams) -> Result<(Matrix, Matrix)> {
    let logits = dense_forward(input, params)?;
    let probs = softmax_rows(&logits);
    Ok((logits, probs))
}

/// Returns `(d_input, d_weights, d_biases)` from the gradient w.r.t. the logits.
pub fn dense_backward(
    grad_logits: &Matrix,
    input: &Matrix,
    params: &DenseParams,
) -> (Matrix, Vec<f64>, Vec<f64>) {
    let c = params.num_classes;
    let mut dx = Matrix::zeros(input.rows, params.in_features);
    let mut dw = vec![0.0; params.in_features * c];
    let mut db = vec![0.0; c];
    for b in 0..input.rows {
        let g = grad_logits.row(b);
        for (d, &gc) in db.iter_mut().zip(g) {
            *d += gc;
        }
        let x = input.row(b);
        let dxr = dx.row_mut(b);
        for k in 0..params.in_features {
            let w = &params.weights[k * c..(k + 1) * c];
            let dwk = &mut dw[k * c..(k + 1) * c];
            let mut acc = 0.0;
            for ci in 0..c {
                dwk[ci] += x[k] * g[ci];
                acc += w[ci] * g[ci];
            }
            dxr[k] = acc;
        }
    }
    (dx, dw, db)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn zero_layer_is_uniform() {
        let x = Matrix::from_vec(1, 3, vec![1.0, -4.0, 2.5]).unwrap();
        let (_, p) = dense_softmax(&x, &DenseParams::zeros(3, 2)).unwrap();
        assert_eq!(p.data, vec![0.5, 0.5]);
    }

    #[test]
    fn closed_form_softmax() {
        let l = Matrix::from_vec(1, 2, vec![0.0, libm::log(3.0)]).unwrap();
        let p = softmax_rows(&l);
        assert!((p.data[0] - 0.25).abs() < 1e-15);
        assert!((p.data[1] - 0.75).abs() < 1e-15);
    }

    #[test]
    fn huge_logits_stay_finite() {
        let l = Matrix::from_vec(1, 2, vec![1000.0, -1000.0]).unwrap();
        let p = softmax_rows(&l);
        assert_eq!(p.data, vec![1.0, 0.0]);
    }

    #[test]
    fn feature_mismatch() {
        let x = Matrix::zeros(1, 4);
        assert!(dense_forward(&x, &DenseParams::zeros(3, 2)).is_err());
    }
}
