//! Model checkpoints.
//!
//! ```text
//! "ICNN" | u16 version (1)
//! u32 input_len | u32 kernel_len | u32 num_filters | u32 num_classes
//! u8 variant (0 full, 1 no-activation, 2 no-batchnorm, 3 avgpool) | u32 pool_size | f64 dropout_rate
//! u64 rng_seed | f64 bn_epsilon | f64 elu_alpha
//! f64 × (kernels, conv biases, gamma, beta, dense weights, dense biases)
//! ```
//! All little-endian. Array lengths follow from the configuration.

use std::path::Path;

use somno_core::model::{ModelConfig, ModelParams, Variant};

use crate::bytes::Reader;
use crate::error::{DecodeError, Error, Result};

pub const MAGIC: [u8; 4] = *b"ICNN";
pub const VERSION: u16 = 1;

pub fn encode_checkpoint(config: &ModelConfig, params: &ModelParams) -> Vec<u8> {
    let mut out = Vec::with_capacity(64 + 8 * params.num_scalars());
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    for v in [
        config.input_len,
        config.kernel_len,
        config.num_filters,
        config.num_classes,
    ] {
        out.extend_from_slice(&(v as u32).to_le_bytes());
    }
    let (tag, pool, rate) = match config.variant {
        Variant::Full => (0u8, 0, 0.0),
        Variant::NoActivation => (1, 0, 0.0),
        Variant::NoBatchNorm => (2, 0, 0.0),
        Variant::AvgPool {
            pool_size,
            dropout_rate,
        } => (3, pool_size, dropout_rate),
    };
    out.push(tag);
    out.extend_from_slice(&(pool as u32).to_le_bytes());
    out.extend_from_slice(&rate.to_le_bytes());
    out.extend_from_slice(&config.rng_seed.to_le_bytes());
    out.extend_from_slice(&config.bn_epsilon.to_le_bytes());
    out.extend_from_slice(&config.elu_alpha.to_le_bytes());
    for t in params.tensors() {
        for v in t {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

pub fn decode_checkpoint(bytes: &[u8]) -> Result<(ModelConfig, ModelParams), DecodeError> {
    let mut r = Reader::new(bytes);
    let magic = r.take::<4>("magic")?;
    if magic != MAGIC {
        return Err(DecodeError::new(
            0,
            format!("bad magic {magic:?}, expected \"ICNN\""),
        ));
    }
    let version = r.u16("version")?;
    if version != VERSION {
        return Err(DecodeError::new(
            4,
            format!("unsupported checkpoint version {version}"),
        ));
    }
    let input_len = r.u32("input_len")? as usize;
    let kernel_len = r.u32("kernel_len")? as usize;
    let num_filters = r.u32("num_filters")? as usize;
    let num_classes = r.u32("num_classes")? as usize;
    let tag_pos = r.pos;
    let tag = r.u8("variant")?;
    let pool_size = r.u32("pool_size")? as usize;
    let dropout_rate = r.f64("dropout_rate")?;
    let variant = match tag {
        0 => Variant::Full,
        1 => Variant::NoActivation,
        2 => Variant::NoBatchNorm,
        3 => Variant::AvgPool {
            pool_size,
            dropout_rate,
        },
        t => return Err(DecodeError::new(tag_pos, format!("unknown variant tag {t}"))),
    };
    let config = ModelConfig {
        input_len,
        kernel_len,
        num_filters,
        num_classes,
        variant,
        rng_seed: r.u64("rng_seed")?,
        bn_epsilon: r.f64("bn_epsilon")?,
        elu_alpha: r.f64("elu_alpha")?,
    };
    let params_pos = r.pos;
    config
        .validate()
        .map_err(|e| DecodeError::new(params_pos, format!("invalid configuration: {e}")))?;
    let mut params = ModelParams::zeros(&config);
    params.bn.epsilon = config.bn_epsilon;
    let needed = 8 * params.num_scalars();
    if r.remaining() != needed {
        return Err(DecodeError::new(
            params_pos,
            format!("expected {needed} bytes of parameters, found {}", r.remaining()),
        ));
    }
    for t in params.tensors_mut() {
        for v in t.iter_mut() {
            *v = r.f64("parameters")?;
        }
    }
    r.finish()?;
    Ok((config, params))
}

pub fn save_checkpoint(config: &ModelConfig, params: &ModelParams, path: &Path) -> Result<()> {
    std::fs::write(path, encode_checkpoint(config, params)).map_err(|e| Error::io(path, e))
}

pub fn load_checkpoint(path: &Path) -> Result<(ModelConfig, ModelParams)> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_checkpoint(&bytes).map_err(|e| e.at(path))
}
