use super::{welch_psd, PsdEstimate, WelchConfig};
use crate::{Error, Result};

/// Band edges in Hz. Each band is `[lo, hi)` except beta, which includes 30 Hz.
pub const BANDS: [(&str, f64, f64); 4] = [
    ("delta", 1.0, 4.0),
    ("theta", 4.0, 8.0),
    ("alpha", 8.0, 12.0),
    ("beta", 12.0, 30.0),
];

/// Relative powers; the four sum to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandPowerFeatures {
    pub delta: f64,
    pub theta: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl BandPowerFeatures {
    pub fn to_array(self) -> [f64; 4] {
        [self.delta, self.theta, self.alpha, self.beta]
    }
}

fn band_of(f: f64) -> Option<usize> {
    match f {
        f if (1.0..4.0).contains(&f) => Some(0),
        f if (4.0..8.0).contains(&f) => Some(1),
        f if (8.0..12.0).contains(&f) => Some(2),
        f if (12.0..=30.0).contains(&f) => Some(3),
        _ => None,
    }
}

/// Band power over the four-band total, which tiles 1–30 Hz.
pub fn relative_band_powers(psd: &PsdEstimate) -> Result<BandPowerFeatures> {
    let max_f = psd.frequencies.last().copied().unwrap_or(0.0);
    if max_f < 30.0 {
        return Err(Error::Argument(alloc::format!(
            "spectrum ends at {max_f} Hz, need 30 Hz"
        )));
    }
    let mut p = [0.0; 4];
    for (&f, &pw) in psd.frequencies.iter().zip(&psd.power) {
        if let Some(b) = band_of(f) {
            p[b] += pw;
        }
    }
    let total: f64 = p.iter().sum();
    if !(total > 0.0) {
        return Err(Error::UndefinedFeatures);
    }
    Ok(BandPowerFeatures {
        delta: p[0] / total,
        theta: p[1] / total,
        alpha: p[2] / total,
        beta: p[3] / total,
    })
}

/// Relative band powers of one sample with the default Welch settings.
pub fn band_powers(signal: &[f64]) -> Result<BandPowerFeatures> {
    relative_band_powers(&welch_psd(signal, &WelchConfig::default())?)
}
