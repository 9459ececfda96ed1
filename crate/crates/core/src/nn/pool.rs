use alloc::vec::Vec;

use super::{lane_sum, FeatureTensor, Matrix};
use crate::{Error, Result};

/// Mean over positions: `[batch][channels][n] → [batch][channels]`.
pub fn global_average_pool(input: &FeatureTensor) -> Matrix {
    let mut out = Matrix::zeros(input.batch, input.channels);
    let inv = 1.0 / input.positions as f64;
    for b in 0..input.batch {
        for k in 0..input.channels {
            out.data[b * input.channels + k] = lane_sum(input.row(b, k), |v| v) * inv;
        }
    }
    out
}

pub fn global_average_pool_backward(grad_out: &Matrix, positions: usize) -> FeatureTensor {
    let mut g = FeatureTensor::zeros(grad_out.rows, grad_out.cols, positions);
    let inv = 1.0 / positions as f64;
    for b in 0..grad_out.rows {
        for k in 0..grad_out.cols {
            g.row_mut(b, k).fill(grad_out.data[b * grad_out.cols + k] * inv);
        }
    }
    g
}

/// Non-overlapping window average with stride `pool`; the `positions % pool`
/// tail is discarded. Output is flattened channel-major into `[batch][channels·windows]`.
pub fn avg_pool(input: &FeatureTensor, pool: usize) -> Result<Matrix> {
    if pool == 0 || pool > input.positions {
        return Err(Error::dim("pool size", input.positions, pool));
    }
    let windows = input.positions / pool;
    let cols = input.channels * windows;
    let inv = 1.0 / pool as f64;
    let mut data = Vec::with_capacity(input.batch * cols);
    for b in 0..input.batch {
        for k in 0..input.channels {
            let row = input.row(b, k);
            data.extend(row.chunks_exact(pool).map(|w| w.iter().sum::<f64>() * inv));
        }
    }
    Matrix::from_vec(input.batch, cols, data)
}

pub fn avg_pool_backward(grad_out: &Matrix, channels: usize, positions: usize, pool: usize) -> FeatureTensor {
    let windows = positions / pool;
    let inv = 1.0 / pool as f64;
    let mut g = FeatureTensor::zeros(grad_out.rows, channels, positions);
    for b in 0..grad_out.rows {
        let src = grad_out.row(b);
        for k in 0..channels {
            let row = g.row_mut(b, k);
            for q in 0..windows {
                row[q * pool..(q + 1) * pool].fill(src[k * windows + q] * inv);
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn gap_is_the_mean() {
        let x = FeatureTensor::from_vec(1, 2, 3, vec![1.0, 2.0, 3.0, 7.0, 7.0, 7.0]).unwrap();
        let g = global_average_pool(&x);
        assert_eq!(g.data, vec![2.0, 7.0]);
    }

    #[test]
    fn gap_reduces_to_one_value_per_channel() {
        let x = FeatureTensor::zeros(3, 32, 321);
        let g = global_average_pool(&x);
        assert_eq!((g.rows, g.cols), (3, 32));
    }

    #[test]
    fn avg_pool_drops_the_tail() {
        let x = FeatureTensor::from_vec(1, 1, 5, vec![1.0, 3.0, 5.0, 7.0, 100.0]).unwrap();
        let p = avg_pool(&x, 2).unwrap();
        assert_eq!(p.data, vec![2.0, 6.0]);
        let g = avg_pool_backward(&Matrix::from_vec(1, 2, vec![1.0, 1.0]).unwrap(), 1, 5, 2);
        assert_eq!(g.data, vec![0.5, 0.5, 0.5, 0.5, 0.0]);
    }

    #[test]
    fn paper_pool_sizes_on_321_positions() {
        let x = FeatureTensor::zeros(1, 32, 321);
        assert_eq!(avg_pool(&x, 40).unwrap().cols, 32 * 8);
        assert_eq!(avg_pool(&x, 80).unwrap().cols, 32 * 4);
    }
}
