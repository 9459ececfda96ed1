//! Class activation maps and center-aligned heatmaps.
//!
//! With global average pooling in front of the dense layer, the logit of class
//! `c` decomposes over positions of the activation map:
//!
//! ```text
//! h_c = Σ_k w[k][c] · (1/n) Σ_j a[k][j] + b_c = (1/n) Σ_j M_c(j) + b_c
//! M_c(j) = Σ_k w[k][c] · a[k][j]
//! ```
//!
//! `M_c` has `n = L − l + 1` entries; entry `j` summarizes input positions
//! `j .. j + l`. The heatmap places `M_c(j)` at the center of that span,
//! mutes negative evidence, and ramps linearly to zero over the first and last
//! `l/2` input positions.

use alloc::vec;
use alloc::vec::Vec;

use crate::baselines::{band_powers, BandPowerFeatures};
use crate::data::{EegSample, Label};
use crate::model::{forward_samples, Mode, ModelConfig, ModelParams};
use crate::nn::{DenseParams, FeatureTensor};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ActivationMap {
    pub class_index: usize,
    pub values: Vec<f64>,
}

/// Heatmap over the input positions, normalized to `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Heatmap {
    pub class_index: usize,
    pub values: Vec<f64>,
}

impl Heatmap {
    /// First position of the maximum.
    pub fn argmax(&self) -> usize {
        argmax(&self.values)
    }
}

fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}

/// `M_c(j) = Σ_k w[k][c]·a[k][j]` for sample `sample` of an activation tensor.
pub fn activation_map(
    activations: &FeatureTensor,
    sample: usize,
    dense: &DenseParams,
    class: usize,
) -> Result<ActivationMap> {
    if class >= dense.num_classes {
        return Err(Error::Index {
            index: class,
            len: dense.num_classes,
        });
    }
    if sample >= activations.batch {
        return Err(Error::Index {
            index: sample,
            len: activations.batch,
        });
    }
    if dense.in_features != activations.channels {
        return Err(Error::dim(
            "activation channels",
            dense.in_features,
            activations.channels,
        ));
    }
    let mut values = vec![0.0; activations.positions];
    for k in 0..activations.channels {
        let w = dense.weight(k, class);
        for (m, &a) in values.iter_mut().zip(activations.row(sample, k)) {
            *m += w * a;
        }
    }
    Ok(ActivationMap {
        class_index: class,
        values,
    })
}

/// Unnormalized heatmap of length `input_len` (1-based formula):
///
/// ```text
/// H(i) = (2i − 2)/(l − 2) · ReLU(M(1))        1 ≤ i < l/2
/// H(i) = ReLU(M(i − l/2 + 1))                 l/2 ≤ i ≤ L − l/2
/// H(i) = (2L − 2i)/l · ReLU(M(L − l + 1))     L − l/2 < i ≤ L
/// ```
///
/// The left ramp divides by `l − 2` and the right one by `l`, which is kept as
/// published. ReLU is applied to the ramp end values as well.
pub fn heatmap(map: &ActivationMap, kernel_len: usize, input_len: usize) -> Result<Vec<f64>> {
    if kernel_len < 4 || kernel_len % 2 != 0 || kernel_len > input_len {
        return Err(Error::Argument(alloc::format!(
            "kernel length {kernel_len} must be even, ≥ 4 and ≤ {input_len}"
        )));
    }
    let n = input_len - kernel_len + 1;
    if map.values.len() != n {
        return Err(Error::dim("activation map", n, map.values.len()));
    }
    let relu = |v: f64| v.max(0.0);
    let (l, big_l) = (kernel_len as f64, input_len as f64);
    let half = kernel_len / 2;
    let first = relu(map.values[0]);
    let last = relu(map.values[n - 1]);
    let h = (1..=input_len)
        .map(|i| {
            if i < half {
                (2.0 * i as f64 - 2.0) / (l - 2.0) * first
            } else if i <= input_len - half {
                relu(map.values[i - half])
            } else {
                (2.0 * big_l - 2.0 * i as f64) / l * last
            }
        })
        .collect();
    Ok(h)
}

/// Divides by the maximum; an all-zero heatmap stays all zero.
pub fn normalize_heatmap(h: &[f64]) -> Vec<f64> {
    let max = h.iter().copied().fold(0.0, f64::max);
    if max > 0.0 {
        h.iter().map(|v| v / max).collect()
    } else {
        vec![0.0; h.len()]
    }
}

pub fn class_heatmap(map: &ActivationMap, kernel_len: usize, input_len: usize) -> Result<Heatmap> {
    let raw = heatmap(map, kernel_len, input_len)?;
    Ok(Heatmap {
        class_index: map.class_index,
        values: normalize_heatmap(&raw),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Explanation {
    pub probs: Vec<f64>,
    pub predicted: Label,
    pub maps: Vec<ActivationMap>,
    /// One per class, indexed by class.
    pub heatmaps: Vec<Heatmap>,
    /// `None` when the sample has no power in 1–30 Hz.
    pub band_powers: Option<BandPowerFeatures>,
}

/// Explains `bundle[index]`. The whole bundle is run through the network so
/// batch-norm statistics match bundle inference.
pub fn explain(
    bundle: &[&EegSample],
    index: usize,
    params: &ModelParams,
    config: &ModelConfig,
) -> Result<Explanation> {
    if !config.variant.has_gap() {
        return Err(Error::Argument(alloc::format!(
            "class activation maps need global average pooling; variant {} has none",
            config.variant.name()
        )));
    }
    if index >= bundle.len() {
        return Err(Error::Argument(alloc::format!(
            "sample {index} is not in the bundle of {}",
            bundle.len()
        )));
    }
    if bundle.len() < 2 {
        return Err(Error::DegenerateBatch {
            entries: bundle.len(),
        });
    }
    let fwd = forward_samples(config, params, bundle, Mode::Inference)?;
    let probs = fwd.probs.row(index).to_vec();
    let predicted = crate::model::argmax_label(&probs);
    let mut maps = Vec::with_capacity(config.num_classes);
    let mut heatmaps = Vec::with_capacity(config.num_classes);
    for c in 0..config.num_classes {
        let m = activation_map(&fwd.activations, index, &params.dense, c)?;
        heatmaps.push(class_heatmap(&m, config.kernel_len, config.input_len)?);
        maps.push(m);
    }
    let band_powers = match band_powers(&bundle[index].to_f64()) {
        Ok(b) => Some(b),
        Err(Error::UndefinedFeatures) => None,
        Err(e) => return Err(e),
    };
    Ok(Explanation {
        probs,
        predicted,
        maps,
        heatmaps,
        band_powers,
    })
}

/// Like [`explain`], locating `sample` in the bundle by value.
pub fn explain_sample(
    sample: &EegSample,
    bundle: &[&EegSample],
    params: &ModelParams,
    config: &ModelConfig,
) -> Result<Explanation> {
    let index = bundle
        .iter()
        .position(|s| *s == sample)
        .ok_or_else(|| Error::Argument("sample is not a member of the bundle".into()))?;
    explain(bundle, index, params, config)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(values: Vec<f64>) -> ActivationMap {
        ActivationMap {
            class_index: 1,
            values,
        }
    }

    #[test]
    fn weighted_sum_oracle() {
        let a = FeatureTensor::from_vec(1, 2, 3, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let dense = DenseParams {
            in_features: 2,
            num_classes: 1,
            weights: vec![1.0, -1.0],
            biases: vec![0.0],
        };
        let m = activation_map(&a, 0, &dense, 0).unwrap();
        assert_eq!(m.values, vec![-3.0, -3.0, -3.0]);
        assert!(activation_map(&a, 0, &dense, 1).is_err());
    }

    #[test]
    fn constant_map_profile() {
        let h = heatmap(&map(vec![1.0; 321]), 64, 384).unwrap();
        assert_eq!(h.len(), 384);
        assert_eq!(h[0], 0.0); // i = 1
        assert_eq!(h[31], 1.0); // i = 32
        assert!(h[31..352].iter().all(|&v| v == 1.0)); // through i = 352
        assert_eq!(h[383], 0.0); // i = 384
        assert!((h[30] - 60.0 / 62.0).abs() < 1e-15); // i = 31
        assert!((h[352] - 62.0 / 64.0).abs() < 1e-15); // i = 353
    }

    #[test]
    fn middle_branch_boundary() {
        let mut v: Vec<f64> = (0..321).map(|j| (j as f64 * 0.1).sin()).collect();
        v[0] = 0.37;
        let h = heatmap(&map(v.clone()), 64, 384).unwrap();
        assert_eq!(h[31], 0.37);
        assert_eq!(h[351], v[320].max(0.0));
    }

    #[test]
    fn negative_evidence_is_muted() {
        let h = heatmap(&map(vec![-2.0; 321]), 64, 384).unwrap();
        assert!(h.iter().all(|&v| v == 0.0));
        assert!(normalize_heatmap(&h).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn length_mismatch() {
        assert!(heatmap(&map(vec![1.0; 320]), 64, 384).is_err());
    }

    #[test]
    fn normalization() {
        let h = [0.0, 2.0, 4.0, 1.0];
        let n = normalize_heatmap(&h);
        assert_eq!(n, vec![0.0, 0.5, 1.0, 0.25]);
        let scaled: Vec<f64> = h.iter().map(|v| v * 7.5).collect();
        assert_eq!(normalize_heatmap(&scaled), n);
    }
}
