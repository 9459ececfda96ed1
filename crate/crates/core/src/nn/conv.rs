use alloc::vec;
use alloc::vec::Vec;

use super::FeatureTensor;
use crate::{Error, Result};

/// Bank of single-channel filters applied with stride 1 and no padding.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvLayerParams {
    pub num_filters: usize,
    pub kernel_len: usize,
    /// `[num_filters][kernel_len]`
    pub kernels: Vec<f64>,
    pub biases: Vec<f64>,
}

impl ConvLayerParams {
    pub fn zeros(num_filters: usize, kernel_len: usize) -> Self {
        ConvLayerParams {
            num_filters,
            kernel_len,
            kernels: vec![0.0; num_filters * kernel_len],
            biases: vec![0.0; num_filters],
        }
    }

    pub fn kernel(&self, k: usize) -> &[f64] {
        &self.kernels[k * self.kernel_len..(k + 1) * self.kernel_len]
    }

    fn check(&self) -> Result<()> {
        if self.kernel_len == 0 {
            return Err(Error::dim("kernel length", 1, 0));
        }
        if self.kernels.len() != self.num_filters * self.kernel_len {
            return Err(Error::dim(
                "conv kernels",
                self.num_filters * self.kernel_len,
                self.kernels.len(),
            ));
        }
        if self.biases.len() != self.num_filters {
            return Err(Error::dim("conv biases", self.num_filters, self.biases.len()));
        }
        Ok(())
    }
}

/// Common length of a batch of inputs; all inputs must match the first.
fn batch_len<S: AsRef<[f64]>>(inputs: &[S]) -> Result<usize> {
    let len = inputs.first().map(|s| s.as_ref().len()).unwrap_or(0);
    for s in inputs {
        if s.as_ref().len() != len {
            return Err(Error::dim("batch input length", len, s.as_ref().len()));
        }
    }
    Ok(len)
}

/// "Valid" cross-correlation: `out[b][k][j] = bias[k] + Σ_t kernel[k][t]·x[b][j+t]`.
pub fn conv1d_forward<S: AsRef<[f64]>>(inputs: &[S], params: &ConvLayerParams) -> Result<FeatureTensor> {
    params.check()?;
    if inputs.is_empty() {
        return Err(Error::dim("batch size", 1, 0));
    }
    let len = batch_len(inputs)?;
    if len < params.kernel_len {
        return Err(Error::dim("input length", params.kernel_len, len));
    }
    let n = len - params.kernel_len + 1;
    let (m, kl) = (params.num_filters, params.kernel_len);
    let mut out = FeatureTensor::zeros(inputs.len(), m, n);
    for (b, x) in inputs.iter().enumerate() {
        let x = x.as_ref();
        let rows = &mut out.data[b * m * n..(b + 1) * m * n];
        let mut k = 0;
        while k + FILTERS <= m {
            correlate_rows::<FILTERS>(
                x,
                &params.kernels[k * kl..(k + FILTERS) * kl],
                &params.biases[k..k + FILTERS],
                &mut rows[k * n..(k + FILTERS) * n],
            );
            k += FILTERS;
        }
        for k in k..m {
            correlate_rows::<1>(
                x,
                params.kernel(k),
                &params.biases[k..k + 1],
                &mut rows[k * n..(k + 1) * n],
            );
        }
    }
    Ok(out)
}

/// Kernel and bias gradients given the gradient w.r.t. the convolution output.
/// The input gradient is never needed (the conv layer sits on the data).
pub fn conv1d_backward<S: AsRef<[f64]>>(
    inputs: &[S],
    grad_out: &FeatureTensor,
    kernel_len: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if grad_out.batch != inputs.len() {
        return Err(Error::dim("conv backward batch", inputs.len(), grad_out.batch));
    }
    let n = grad_out.positions;
    let len = batch_len(inputs)?;
    if len != n + kernel_len - 1 {
        return Err(Error::dim("conv backward input length", n + kernel_len - 1, len));
    }
    let m = grad_out.channels;
    let mut dk = vec![0.0; m * kernel_len];
    let mut db = vec![0.0; m];
    for (b, x) in inputs.iter().enumerate() {
        let x = x.as_ref();
        let rows = &grad_out.data[b * m * n..(b + 1) * m * n];
        for k in 0..m {
            db[k] += rows[k * n..(k + 1) * n].iter().sum::<f64>();
        }
        let mut k = 0;
        while k + FILTERS <= m {
            accumulate_kernel_grads::<FILTERS>(
                x,
                &rows[k * n..(k + FILTERS) * n],
                &mut dk[k * kernel_len..(k + FILTERS) * kernel_len],
            );
            k += FILTERS;
        }
        for k in k..m {
            accumulate_kernel_grads::<1>(
                x,
                &rows[k * n..(k + 1) * n],
                &mut dk[k * kernel_len..(k + 1) * kernel_len],
            );
        }
    }
    Ok((dk, db))
}

const BLOCK: usize = 8;
/// Filters sharing each input load.
const FILTERS: usize = 2;

/// `out[f][j] = bias[f] + Σ_t w[f][t]·x[j+t]` for `F` filters at once, eight
/// positions per filter held in registers. `w` and `out` are filter-major.
#[inline]
fn correlate_rows<const F: usize>(x: &[f64], w: &[f64], bias: &[f64], out: &mut [f64]) {
    let kl = w.len() / F;
    let n = out.len() / F;
    let mut j = 0;
    while j + BLOCK <= n {
        let mut acc = [[0.0; BLOCK]; F];
        for f in 0..F {
            acc[f] = [bias[f]; BLOCK];
        }
        for t in 0..kl {
            let xs: &[f64; BLOCK] = x[j + t..j + t + BLOCK].try_into().unwrap();
            for f in 0..F {
                let wt = w[f * kl + t];
                for i in 0..BLOCK {
                    acc[f][i] += wt * xs[i];
                }
            }
        }
        for f in 0..F {
            out[f * n + j..f * n + j + BLOCK].copy_from_slice(&acc[f]);
        }
        j += BLOCK;
    }
    for f in 0..F {
        let wf = &w[f * kl..(f + 1) * kl];
        for jj in j..n {
            out[f * n + jj] = bias[f] + wf.iter().zip(&x[jj..]).map(|(a, b)| a * b).sum::<f64>();
        }
    }
}

/// `acc[f][t] += Σ_j g[f][j]·x[j+t]` for `F` filters at once, eight taps per
/// filter held in registers. `g` and `acc` are filter-major.
#[inline]
fn accumulate_kernel_grads<const F: usize>(x: &[f64], g: &[f64], acc: &mut [f64]) {
    let l = acc.len() / F;
    let n = g.len() / F;
    let mut t = 0;
    while t + BLOCK <= l {
        let mut a = [[0.0; BLOCK]; F];
        for j in 0..n {
            let xs: &[f64; BLOCK] = x[j + t..j + t + BLOCK].try_into().unwrap();
            for f in 0..F {
                let gj = g[f * n + j];
                for i in 0..BLOCK {
                    a[f][i] += gj * xs[i];
                }
            }
        }
        for f in 0..F {
            for (dst, v) in acc[f * l + t..f * l + t + BLOCK].iter_mut().zip(a[f]) {
                *dst += v;
            }
        }
        t += BLOCK;
    }
    for f in 0..F {
        let gf = &g[f * n..(f + 1) * n];
        for tt in t..l {
            acc[f * l + tt] += gf.iter().zip(&x[tt..]).map(|(a, b)| a * b).sum::<f64>();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn sliding_dot_product() {
        let p = ConvLayerParams {
            num_filters: 1,
            kernel_len: 2,
            kernels: vec![1.0, 1.0],
            biases: vec![0.0],
        };
        let out = conv1d_forward(&[vec![1.0, 2.0, 3.0, 4.0]], &p).unwrap();
        assert_eq!(out.data, vec![3.0, 5.0, 7.0]);
    }

    #[test]
    fn delta_kernel_is_identity_on_the_valid_range() {
        let mut p = ConvLayerParams::zeros(1, 64);
        p.kernels[0] = 1.0;
        let x: Vec<f64> = (0..384).map(|i| libm::sin(i as f64 * 0.3) * 10.0).collect();
        let out = conv1d_forward(&[x.clone()], &p).unwrap();
        assert_eq!(out.positions, 321);
        assert_eq!(out.row(0, 0), &x[..321]);
    }

    #[test]
    fn paper_shape() {
        let p = ConvLayerParams::zeros(32, 64);
        let out = conv1d_forward(&[vec![0.5; 384], vec![1.0; 384]], &p).unwrap();
        assert_eq!((out.batch, out.channels, out.positions), (2, 32, 321));
    }

    #[test]
    fn short_input_is_a_dimension_error() {
        let p = ConvLayerParams::zeros(2, 8);
        let err = conv1d_forward(&[vec![0.0; 7]], &p).unwrap_err();
        assert!(matches!(err, Error::Dimension { .. }));
    }

    #[test]
    fn ragged_batch_is_rejected() {
        let p = ConvLayerParams::zeros(1, 2);
        assert!(conv1d_forward(&[vec![0.0; 4], vec![0.0; 5]], &p).is_err());
    }
}
