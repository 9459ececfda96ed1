use alloc::vec::Vec;
use rand::Rng as _;

use super::{ModelConfig, ModelParams, Variant};
use crate::data::EegSample;
use crate::nn::{
    avg_pool, avg_pool_backward, batchnorm_backward, batchnorm_forward, conv1d_backward, conv1d_forward,
    cross_entropy_grad, dense_backward, dense_softmax, elu, elu_backward, global_average_pool,
    global_average_pool_backward, BatchNormOutput, FeatureTensor, Matrix,
};
use crate::{rng::Rng, Error, Result};

pub enum Mode<'r> {
    /// Keeps the backward cache; dropout draws from the given stream.
    Train(&'r mut Rng),
    Inference,
}

/// Intermediate values only the backward pass needs.
#[derive(Debug, Clone)]
pub struct BackwardCache {
    inputs: Vec<Vec<f64>>,
    normalized: Option<FeatureTensor>,
    inv_std: Vec<f64>,
    pre_activation: FeatureTensor,
    dropout_mask: Option<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct Forward {
    pub probs: Matrix,
    pub logits: Matrix,
    /// Output of the activation layer (`h^a`), `[batch][filters][map_len]`.
    pub activations: FeatureTensor,
    /// Input of the dense layer after pooling (and dropout, when training).
    pub features: Matrix,
    pub cache: Option<BackwardCache>,
}

/// conv → batch-norm → ELU → pool → dense → softmax, with the variant's
/// layers skipped or swapped. Batch-norm statistics come from this batch.
pub fn forward<S: AsRef<[f64]>>(
    config: &ModelConfig,
    params: &ModelParams,
    inputs: &[S],
    mode: Mode<'_>,
) -> Result<Forward> {
    for x in inputs {
        if x.as_ref().len() != config.input_len {
            return Err(Error::dim("sample length", config.input_len, x.as_ref().len()));
        }
    }
    let conv_out = conv1d_forward(inputs, &params.conv)?;
    let (pre_activation, normalized, inv_std) = if config.variant.uses_batchnorm() {
        let BatchNormOutput {
            output,
            normalized,
            inv_std,
            ..
        } = batchnorm_forward(&conv_out, &params.bn)?;
        (output, Some(normalized), inv_std)
    } else {
        (conv_out, None, Vec::new())
    };
    let activations = if config.variant.uses_activation() {
        elu(&pre_activation, config.elu_alpha)
    } else {
        pre_activation.clone()
    };

    let training = matches!(mode, Mode::Train(_));
    let (features, dropout_mask) = match (config.variant, mode) {
        (
            Variant::AvgPool {
                pool_size,
                dropout_rate,
            },
            mode,
        ) => {
            let mut pooled = avg_pool(&activations, pool_size)?;
            let mut mask = None;
            if let Mode::Train(rng) = mode {
                if dropout_rate > 0.0 {
                    let keep = 1.0 / (1.0 - dropout_rate);
                    let m: Vec<f64> = (0..pooled.data.len())
                        .map(|_| {
                            if rng.random::<f64>() < dropout_rate {
                                0.0
                            } else {
                                keep
                            }
                        })
                        .collect();
                    for (v, s) in pooled.data.iter_mut().zip(&m) {
                        *v *= s;
                    }
                    mask = Some(m);
                }
            }
            (pooled, mask)
        }
        _ => (global_average_pool(&activations), None),
    };
    let (logits, probs) = dense_softmax(&features, &params.dense)?;

    let cache = training.then(|| BackwardCache {
        inputs: inputs.iter().map(|x| x.as_ref().to_vec()).collect(),
        normalized,
        inv_std,
        pre_activation,
        dropout_mask,
    });
    Ok(Forward {
        probs,
        logits,
        activations,
        features,
        cache,
    })
}

/// Forward over samples (converted to `f64`).
pub fn forward_samples(
    config: &ModelConfig,
    params: &ModelParams,
    samples: &[&EegSample],
    mode: Mode<'_>,
) -> Result<Forward> {
    let inputs: Vec<Vec<f64>> = samples.iter().map(|s| s.to_f64()).collect();
    forward(config, params, &inputs, mode)
}

/// Exact gradients of the mean cross-entropy w.r.t. every parameter.
pub fn backward(
    config: &ModelConfig,
    params: &ModelParams,
    fwd: &Forward,
    labels: &[usize],
) -> Result<ModelParams> {
    let cache = fwd
        .cache
        .as_ref()
        .ok_or(Error::State("forward ran in inference mode"))?;
    let mut grads = ModelParams::zeros(config);

    let g_logits = cross_entropy_grad(&fwd.probs, labels)?;
    let (mut g_features, dw, db) = dense_backward(&g_logits, &fwd.features, &params.dense);
    grads.dense.weights = dw;
    grads.dense.biases = db;

    if let Some(mask) = &cache.dropout_mask {
        for (g, m) in g_features.data.iter_mut().zip(mask) {
            *g *= m;
        }
    }
    let act = &fwd.activations;
    let g_act = match config.variant {
        Variant::AvgPool { pool_size, .. } => {
            avg_pool_backward(&g_features, act.channels, act.positions, pool_size)
        }
        _ => global_average_pool_backward(&g_features, act.positions),
    };
    let g_pre = if config.variant.uses_activation() {
        elu_backward(&g_act, &cache.pre_activation, act, config.elu_alpha)
    } else {
        g_act
    };
    let g_conv = match &cache.normalized {
        Some(normalized) => {
            let (g, dgamma, dbeta) =
                batchnorm_backward(&g_pre, normalized, &cache.inv_std, &params.bn.gamma)?;
            grads.bn.gamma = dgamma;
            grads.bn.beta = dbeta;
            g
        }
        None => g_pre,
    };
    let (dk, dcb) = conv1d_backward(&cache.inputs, &g_conv, config.kernel_len)?;
    grads.conv.kernels = dk;
    grads.conv.biases = dcb;
    Ok(grads)
}
