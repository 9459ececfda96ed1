use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// One finite, non-empty single-channel trace.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal1D(Vec<f64>);

impl Signal1D {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::dim("signal length", 1, 0));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Argument(alloc::format!(
                "signal value at {i} is not finite"
            )));
        }
        Ok(Signal1D(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl AsRef<[f64]> for Signal1D {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// `[batch][channels][positions]` activations.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTensor {
    pub batch: usize,
    pub channels: usize,
    pub positions: usize,
    pub data: Vec<f64>,
}

impl FeatureTensor {
    pub fn zeros(batch: usize, channels: usize, positions: usize) -> Self {
        FeatureTensor {
            batch,
            channels,
            positions,
            data: vec![0.0; batch * channels * positions],
        }
    }

    pub fn from_vec(batch: usize, channels: usize, positions: usize, data: Vec<f64>) -> Result<Self> {
        let expected = batch * channels * positions;
        if data.len() != expected {
            return Err(Error::dim("feature tensor", expected, data.len()));
        }
        Ok(FeatureTensor {
            batch,
            channels,
            positions,
            data,
        })
    }

    #[inline]
    fn offset(&self, b: usize, k: usize) -> usize {
        (b * self.channels + k) * self.positions
    }

    /// Positions of channel `k` in sample `b`.
    #[inline]
    pub fn row(&self, b: usize, k: usize) -> &[f64] {
        let o = self.offset(b, k);
        &self.data[o..o + self.positions]
    }

    #[inline]
    pub fn row_mut(&mut self, b: usize, k: usize) -> &mut [f64] {
        let o = self.offset(b, k);
        &mut self.data[o..o + self.positions]
    }

    /// All channels of sample `b`, `[channels][positions]`.
    pub fn sample(&self, b: usize) -> &[f64] {
        let len = self.channels * self.positions;
        &self.data[b * len..(b + 1) * len]
    }

    pub fn same_shape(&self, other: &FeatureTensor) -> bool {
        self.batch == other.batch && self.channels == other.channels && self.positions == other.positions
    }
}

/// Row-major `[rows][cols]` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::dim("matrix", rows * cols, data.len()));
        }
        Ok(Matrix { rows, cols, data })
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }
}
