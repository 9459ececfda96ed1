use alloc::vec;
use alloc::vec::Vec;

use super::{lane_dot, lane_sum, FeatureTensor};
use crate::{Error, Result};

pub const BN_EPSILON: f64 = 1e-5;

/// Per-channel scale and shift. Statistics always come from the batch being
/// normalized; no running averages are kept.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchNormParams {
    pub gamma: Vec<f64>,
    pub beta: Vec<f64>,
    pub epsilon: f64,
}

impl BatchNormParams {
    pub fn identity(channels: usize) -> Self {
        BatchNormParams {
            gamma: vec![1.0; channels],
            beta: vec![0.0; channels],
            epsilon: BN_EPSILON,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatchNormOutput {
    pub output: FeatureTensor,
    /// `(x − mean)·inv_std`, kept for the backward pass.
    pub normalized: FeatureTensor,
    pub mean: Vec<f64>,
    pub var: Vec<f64>,
    pub inv_std: Vec<f64>,
}

/// Normalizes every channel over all `(batch, position)` entries.
pub fn batchnorm_forward(input: &FeatureTensor, params: &BatchNormParams) -> Result<BatchNormOutput> {
    let m = input.channels;
    if params.gamma.len() != m || params.beta.len() != m {
        return Err(Error::dim(
            "batch-norm channels",
            m,
            params.gamma.len().min(params.beta.len()),
        ));
    }
    if !(params.epsilon > 0.0) {
        return Err(Error::Argument("batch-norm epsilon must be positive".into()));
    }
    let count = input.batch * input.positions;
    if count < 2 {
        return Err(Error::DegenerateBatch { entries: count });
    }
    let inv_count = 1.0 / count as f64;
    let mut mean = vec![0.0; m];
    let mut var = vec![0.0; m];
    let mut inv_std = vec![0.0; m];
    for k in 0..m {
        let mut s = 0.0;
        for b in 0..input.batch {
            s += lane_sum(input.row(b, k), |v| v);
        }
        let mu = s * inv_count;
        let mut ss = 0.0;
        for b in 0..input.batch {
            ss += lane_sum(input.row(b, k), |v| (v - mu) * (v - mu));
        }
        mean[k] = mu;
        var[k] = ss * inv_count;
        inv_std[k] = 1.0 / libm::sqrt(var[k] + params.epsilon);
    }
    let mut normalized = FeatureTensor::zeros(input.batch, m, input.positions);
    let mut output = FeatureTensor::zeros(input.batch, m, input.positions);
    let n = input.positions;
    let rows = input
        .data
        .chunks_exact(n)
        .zip(normalized.data.chunks_exact_mut(n));
    for (r, ((x, h), y)) in rows.zip(output.data.chunks_exact_mut(n)).enumerate() {
        let k = r % m;
        let (mu, is, g, be) = (mean[k], inv_std[k], params.gamma[k], params.beta[k]);
        for ((&xi, hi), yi) in x.iter().zip(h).zip(y) {
            *hi = (xi - mu) * is;
            *yi = g * *hi + be;
        }
    }
    Ok(BatchNormOutput {
        output,
        normalized,
        mean,
        var,
        inv_std,
    })
}

/// Returns `(d_input, d_gamma, d_beta)`. Gradients flow through the batch mean
/// and variance.
pub fn batchnorm_backward(
    grad_out: &FeatureTensor,
    normalized: &FeatureTensor,
    inv_std: &[f64],
    gamma: &[f64],
) -> Result<(FeatureTensor, Vec<f64>, Vec<f64>)> {
    if !grad_out.same_shape(normalized) {
        return Err(Error::dim(
            "batch-norm backward",
            normalized.data.len(),
            grad_out.data.len(),
        ));
    }
    if inv_std.len() != grad_out.channels || gamma.len() != grad_out.channels {
        return Err(Error::dim(
            "batch-norm backward channels",
            grad_out.channels,
            inv_std.len(),
        ));
    }
    let m = grad_out.channels;
    let count = (grad_out.batch * grad_out.positions) as f64;
    let mut dx = FeatureTensor::zeros(grad_out.batch, m, grad_out.positions);
    let mut dgamma = vec![0.0; m];
    let mut dbeta = vec![0.0; m];
    for k in 0..m {
        let mut sum_dy = 0.0;
        let mut sum_dy_xh = 0.0;
        for b in 0..grad_out.batch {
            sum_dy += lane_sum(grad_out.row(b, k), |v| v);
            sum_dy_xh += lane_dot(grad_out.row(b, k), normalized.row(b, k));
        }
        dgamma[k] = sum_dy_xh;
        dbeta[k] = sum_dy;
        let scale = gamma[k] * inv_std[k] / count;
        for b in 0..grad_out.batch {
            let dy = grad_out.row(b, k);
            let xh = normalized.row(b, k);
            for ((d, &g), &h) in dx.row_mut(b, k).iter_mut().zip(dy).zip(xh) {
                *d = scale * (count * g - sum_dy - h * sum_dy_xh);
            }
        }
    }
    Ok((dx, dgamma, dbeta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn two_values_whiten_to_plus_minus_one() {
        let x = FeatureTensor::from_vec(1, 1, 2, vec![1.0, 3.0]).unwrap();
        let mut p = BatchNormParams::identity(1);
        p.epsilon = 1e-300;
        let out = batchnorm_forward(&x, &p).unwrap();
        assert!((out.output.data[0] + 1.0).abs() < 1e-12);
        assert!((out.output.data[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_channel_maps_to_zero() {
        let x = FeatureTensor::from_vec(2, 1, 3, vec![4.2; 6]).unwrap();
        let out = batchnorm_forward(&x, &BatchNormParams::identity(1)).unwrap();
        assert!(out.output.data.iter().all(|v| v.abs() < 1e-9));
    }

    #[test]
    fn zero_gamma_outputs_beta() {
        let x = FeatureTensor::from_vec(2, 1, 3, vec![1.0, -2.0, 3.0, 0.5, 9.0, 1.0]).unwrap();
        let p = BatchNormParams {
            gamma: vec![0.0],
            beta: vec![5.0],
            epsilon: BN_EPSILON,
        };
        let out = batchnorm_forward(&x, &p).unwrap();
        assert!(out.output.data.iter().all(|&v| v == 5.0));
    }

    #[test]
    fn single_entry_is_degenerate() {
        let x = FeatureTensor::from_vec(1, 3, 1, vec![1.0, 2.0, 3.0]).unwrap();
        let err = batchnorm_forward(&x, &BatchNormParams::identity(3)).unwrap_err();
        assert_eq!(err, Error::DegenerateBatch { entries: 1 });
    }
}
