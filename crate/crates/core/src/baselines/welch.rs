use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use crate::{Error, Result, SAMPLE_RATE_HZ};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Window {
    /// Periodic Hann.
    Hann,
}

impl Window {
    fn coefficients(self, n: usize) -> Vec<f64> {
        match self {
            Window::Hann => (0..n)
                .map(|i| 0.5 - 0.5 * libm::cos(TAU * i as f64 / n as f64))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WelchConfig {
    pub fs: f64,
    pub segment_len: usize,
    pub overlap: f64,
    pub window: Window,
}

impl Default for WelchConfig {
    /// 1 s Hann segments with 50 % overlap (1 Hz resolution at 128 Hz).
    fn default() -> Self {
        WelchConfig {
            fs: SAMPLE_RATE_HZ as f64,
            segment_len: 128,
            overlap: 0.5,
            window: Window::Hann,
        }
    }
}

/// One-sided power spectral density.
#[derive(Debug, Clone, PartialEq)]
pub struct PsdEstimate {
    pub frequencies: Vec<f64>,
    pub power: Vec<f64>,
}

impl PsdEstimate {
    pub fn resolution(&self) -> f64 {
        self.frequencies.get(1).copied().unwrap_or(0.0)
    }

    /// `Σ power · Δf`.
    pub fn total_power(&self) -> f64 {
        self.power.iter().sum::<f64>() * self.resolution()
    }
}

/// Average of mean-removed, windowed periodograms scaled as a density, so
/// that `Σ power·Δf` approximates the signal variance.
pub fn welch_psd(signal: &[f64], config: &WelchConfig) -> Result<PsdEstimate> {
    let n = config.segment_len;
    if n < 2 {
        return Err(Error::dim("segment length", 2, n));
    }
    if signal.len() < n {
        return Err(Error::dim("signal length", n, signal.len()));
    }
    if !(0.0..1.0).contains(&config.overlap) {
        return Err(Error::Argument(alloc::format!(
            "overlap {} not in [0, 1)",
            config.overlap
        )));
    }
    if !(config.fs > 0.0) {
        return Err(Error::Argument("sampling rate must be positive".into()));
    }
    let step = n - (config.overlap * n as f64) as usize;
    let w = config.window.coefficients(n);
    let w_energy: f64 = w.iter().map(|v| v * v).sum();
    let bins = n / 2 + 1;
    let cos: Vec<f64> = (0..n).map(|m| libm::cos(TAU * m as f64 / n as f64)).collect();
    let sin: Vec<f64> = (0..n).map(|m| libm::sin(TAU * m as f64 / n as f64)).collect();

    let mut power = vec![0.0; bins];
    let mut segments = 0usize;
    let mut seg = vec![0.0; n];
    let mut start = 0;
    while start + n <= signal.len() {
        let chunk = &signal[start..start + n];
        let mean = chunk.iter().sum::<f64>() / n as f64;
        for ((s, &x), &wi) in seg.iter_mut().zip(chunk).zip(&w) {
            *s = (x - mean) * wi;
        }
        for (k, p) in power.iter_mut().enumerate() {
            let (mut re, mut im) = (0.0, 0.0);
            for (i, &s) in seg.iter().enumerate() {
                let m = (k * i) % n;
                re += s * cos[m];
                im -= s * sin[m];
            }
            *p += re * re + im * im;
        }
        segments += 1;
        start += step;
    }
    let scale = 1.0 / (config.fs * w_energy * segments as f64);
    for (k, p) in power.iter_mut().enumerate() {
        *p *= scale;
        // One-sided: fold negative frequencies except DC and Nyquist.
        if k != 0 && !(n % 2 == 0 && k == n / 2) {
            *p *= 2.0;
        }
    }
    let df = config.fs / n as f64;
    Ok(PsdEstimate {
        frequencies: (0..bins).map(|k| k as f64 * df).collect(),
        power,
    })
}
