//! Band-power features and the classical classifiers they feed.

mod bands;
mod gnb;
mod knn;
mod lda;
mod linalg;
mod logreg;
mod welch;

pub use bands::{band_powers, relative_band_powers, BandPowerFeatures, BANDS};
pub use gnb::GaussianNb;
pub use knn::{Knn, DEFAULT_K};
pub use lda::Lda;
pub use logreg::{LogReg, LogRegConfig};
pub use welch::{welch_psd, PsdEstimate, WelchConfig, Window};

use alloc::boxed::Box;
use alloc::format;

use crate::data::Label;
use crate::nn::Matrix;
use crate::{Error, Result};

pub trait Classifier {
    fn predict(&self, x: &[f64]) -> Label;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Lda,
    LogReg,
    GaussianNb,
    Knn,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Lda, Method::LogReg, Method::GaussianNb, Method::Knn];

    pub fn name(self) -> &'static str {
        match self {
            Method::Lda => "lda",
            Method::LogReg => "lr",
            Method::GaussianNb => "gnb",
            Method::Knn => "knn",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::Argument(format!("unknown baseline method '{s}'")))
    }

    /// Fits with default hyper-parameters.
    pub fn fit(self, features: &Matrix, labels: &[Label]) -> Result<Box<dyn Classifier>> {
        Ok(match self {
            Method::Lda => Box::new(Lda::fit(features, labels)?),
            Method::LogReg => Box::new(LogReg::fit(features, labels, &LogRegConfig::default())?),
            Method::GaussianNb => Box::new(GaussianNb::fit(features, labels)?),
            Method::Knn => Box::new(Knn::fit(features, labels, DEFAULT_K)?),
        })
    }
}

/// Shared fit preconditions: matching lengths and both classes present.
pub(crate) fn check_training(features: &Matrix, labels: &[Label]) -> Result<()> {
    if features.rows != labels.len() {
        return Err(Error::dim("labels", features.rows, labels.len()));
    }
    if features.cols == 0 {
        return Err(Error::Fit("features have no columns".into()));
    }
    let has = |l| labels.contains(&l);
    if !has(Label::Alert) || !has(Label::Drowsy) {
        return Err(Error::Fit("both classes must be present".into()));
    }
    Ok(())
}
