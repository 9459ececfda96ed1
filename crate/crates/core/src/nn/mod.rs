//! Differentiable layer kernels with hand-derived gradients, plus Adam.
//!
//! All buffers are flat `f64` vectors. Feature tensors are laid out
//! `[batch][channel][position]`, matrices `[row][col]`.

mod activation;
mod adam;
mod batchnorm;
mod conv;
mod dense;
mod loss;
mod pool;
mod tensor;

/// `Σ f(v[i])` over four interleaved accumulators so the adds pipeline.
#[inline]
pub(crate) fn lane_sum(v: &[f64], f: impl Fn(f64) -> f64) -> f64 {
    let mut acc = [0.0; 4];
    let chunks = v.chunks_exact(4);
    let rest = chunks.remainder();
    for c in chunks {
        for i in 0..4 {
            acc[i] += f(c[i]);
        }
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + rest.iter().map(|&x| f(x)).sum::<f64>()
}

/// `Σ a[i]·b[i]`, accumulated like [`lane_sum`].
#[inline]
pub(crate) fn lane_dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0; 4];
    let (ca, cb) = (a.chunks_exact(4), b.chunks_exact(4));
    let tail: f64 = ca
        .remainder()
        .iter()
        .zip(cb.remainder())
        .map(|(x, y)| x * y)
        .sum();
    for (x, y) in ca.zip(cb) {
        for i in 0..4 {
            acc[i] += x[i] * y[i];
        }
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

pub use activation::{elu, elu_backward, elu_scalar, ELU_ALPHA};
pub use adam::{Adam, AdamConfig};
pub use batchnorm::{batchnorm_backward, batchnorm_forward, BatchNormOutput, BatchNormParams, BN_EPSILON};
pub use conv::{conv1d_backward, conv1d_forward, ConvLayerParams};
pub use dense::{dense_backward, dense_forward, dense_softmax, softmax_rows, DenseParams};
pub use loss::{cross_entropy_grad, cross_entropy_loss, PROB_FLOOR};
pub use pool::{avg_pool, avg_pool_backward, global_average_pool, global_average_pool_backward};
pub use tensor::{FeatureTensor, Matrix, Signal1D};
