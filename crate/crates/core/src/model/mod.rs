//! The interpretable CNN: configuration, parameters, forward/backward passes,
//! training and bundle inference.

mod network;
mod train;

pub use network::{backward, forward, forward_samples, BackwardCache, Forward, Mode};
pub(crate) use train::argmax_label;
pub use train::{predict_bundle, train, BundlePrediction, TrainConfig, TrainOutcome, Trainer};

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use rand::Rng as _;

use crate::nn::{BatchNormParams, ConvLayerParams, DenseParams, BN_EPSILON, ELU_ALPHA};
use crate::{rng, Error, Result, SAMPLE_LEN};

/// Architecture variants: the full model and the ablations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Variant {
    Full,
    NoActivation,
    NoBatchNorm,
    /// Window averaging (stride = `pool_size`, remainder discarded) followed by
    /// training-time dropout instead of global average pooling.
    AvgPool {
        pool_size: usize,
        dropout_rate: f64,
    },
}

impl Variant {
    pub const AVGPOOL40: Variant = Variant::AvgPool {
        pool_size: 40,
        dropout_rate: 0.875,
    };
    pub const AVGPOOL80: Variant = Variant::AvgPool {
        pool_size: 80,
        dropout_rate: 0.75,
    };

    pub fn name(&self) -> String {
        match self {
            Variant::Full => "full".into(),
            Variant::NoActivation => "no-activation".into(),
            Variant::NoBatchNorm => "no-batchnorm".into(),
            Variant::AvgPool { pool_size, .. } => format!("avgpool{pool_size}"),
        }
    }

    /// Accepts `full`, `no-activation`, `no-batchnorm`, `avgpool40`, `avgpool80`
    /// and `avgpool<N>:<rate>`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "full" => return Ok(Variant::Full),
            "no-activation" | "noactiv" | "no_activation" => return Ok(Variant::NoActivation),
            "no-batchnorm" | "nobatchnorm" | "no_batchnorm" => return Ok(Variant::NoBatchNorm),
            "avgpool40" => return Ok(Variant::AVGPOOL40),
            "avgpool80" => return Ok(Variant::AVGPOOL80),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("avgpool") {
            if let Some((size, rate)) = rest.split_once(':') {
                if let (Ok(pool_size), Ok(dropout_rate)) = (size.parse(), rate.parse()) {
                    return Ok(Variant::AvgPool {
                        pool_size,
                        dropout_rate,
                    });
                }
            }
        }
        Err(Error::Argument(format!("unknown variant '{s}'")))
    }

    pub fn uses_batchnorm(&self) -> bool {
        !matches!(self, Variant::NoBatchNorm)
    }

    pub fn uses_activation(&self) -> bool {
        !matches!(self, Variant::NoActivation)
    }

    /// Whether the dense layer sits directly on a global average (CAM applies).
    pub fn has_gap(&self) -> bool {
        !matches!(self, Variant::AvgPool { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelConfig {
    pub input_len: usize,
    pub kernel_len: usize,
    pub num_filters: usize,
    pub num_classes: usize,
    pub variant: Variant,
    pub rng_seed: u64,
    pub bn_epsilon: f64,
    pub elu_alpha: f64,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            input_len: SAMPLE_LEN,
            kernel_len: 64,
            num_filters: 32,
            num_classes: 2,
            variant: Variant::Full,
            rng_seed: 0,
            bn_epsilon: BN_EPSILON,
            elu_alpha: ELU_ALPHA,
        }
    }
}

impl ModelConfig {
    pub fn with_variant(mut self, variant: Variant) -> Self {
        self.variant = variant;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    /// Positions in the activation map, `input_len − kernel_len + 1`.
    pub fn map_len(&self) -> usize {
        self.input_len + 1 - self.kernel_len
    }

    pub fn dense_in_features(&self) -> usize {
        match self.variant {
            Variant::AvgPool { pool_size, .. } => self.num_filters * (self.map_len() / pool_size),
            _ => self.num_filters,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.kernel_len == 0 || self.kernel_len > self.input_len {
            return Err(Error::dim("kernel length", self.input_len, self.kernel_len));
        }
        if self.kernel_len % 2 != 0 {
            return Err(Error::Argument(format!(
                "kernel length {} must be even",
                self.kernel_len
            )));
        }
        if self.num_filters == 0 || self.num_classes < 2 {
            return Err(Error::Argument("need at least one filter and two classes".into()));
        }
        if !(self.bn_epsilon > 0.0) || !(self.elu_alpha > 0.0) {
            return Err(Error::Argument("epsilon and alpha must be positive".into()));
        }
        if let Variant::AvgPool {
            pool_size,
            dropout_rate,
        } = self.variant
        {
            if pool_size == 0 || pool_size > self.map_len() {
                return Err(Error::dim("pool size", self.map_len(), pool_size));
            }
            if !(0.0..1.0).contains(&dropout_rate) {
                return Err(Error::Argument(format!(
                    "dropout rate {dropout_rate} not in [0, 1)"
                )));
            }
        }
        Ok(())
    }
}

/// Learnable parameters. The same shape doubles as the gradient container.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub conv: ConvLayerParams,
    pub bn: BatchNormParams,
    pub dense: DenseParams,
}

impl ModelParams {
    pub fn zeros(config: &ModelConfig) -> Self {
        let mut bn = BatchNormParams::identity(config.num_filters);
        bn.gamma.iter_mut().for_each(|g| *g = 0.0);
        bn.epsilon = config.bn_epsilon;
        ModelParams {
            conv: ConvLayerParams::zeros(config.num_filters, config.kernel_len),
            bn,
            dense: DenseParams::zeros(config.dense_in_features(), config.num_classes),
        }
    }

    /// Tensors in declaration order: kernels, conv biases, gamma, beta, dense
    /// weights, dense biases.
    pub fn tensors(&self) -> [&[f64]; 6] {
        [
            &self.conv.kernels,
            &self.conv.biases,
            &self.bn.gamma,
            &self.bn.beta,
            &self.dense.weights,
            &self.dense.biases,
        ]
    }

    pub fn tensors_mut(&mut self) -> [&mut [f64]; 6] {
        [
            &mut self.conv.kernels,
            &mut self.conv.biases,
            &mut self.bn.gamma,
            &mut self.bn.beta,
            &mut self.dense.weights,
            &mut self.dense.biases,
        ]
    }

    pub fn shapes(&self) -> [usize; 6] {
        self.tensors().map(|t| t.len())
    }

    pub fn num_scalars(&self) -> usize {
        self.shapes().iter().sum()
    }

    pub fn flatten(&self) -> Vec<f64> {
        self.tensors().concat()
    }

    pub fn conforms_to(&self, config: &ModelConfig) -> bool {
        self.shapes() == ModelParams::zeros(config).shapes()
    }
}

/// Random initialization: conv kernels uniform in ±√(1/kernel_len), dense
/// weights uniform in ±√(1/num_filters), biases 0, gamma 1, beta 0.
pub fn init_model(config: &ModelConfig) -> Result<ModelParams> {
    config.validate()?;
    let mut rng = rng::seeded(rng::derive_seed(config.rng_seed, &[0x1717]));
    let mut p = ModelParams::zeros(config);
    let s = libm::sqrt(1.0 / config.kernel_len as f64);
    for w in &mut p.conv.kernels {
        *w = rng.random_range(-s..=s);
    }
    p.bn = BatchNormParams::identity(config.num_filters);
    p.bn.epsilon = config.bn_epsilon;
    let t = libm::sqrt(1.0 / config.num_filters as f64);
    for w in &mut p.dense.weights {
        *w = rng.random_range(-t..=t);
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameter_count_of_the_full_model() {
        let p = init_model(&ModelConfig::default()).unwrap();
        assert_eq!(p.num_scalars(), 32 * 64 + 32 + 2 * 32 + 32 * 2 + 2);
        assert_eq!(p.num_scalars(), 2210);
    }

    #[test]
    fn init_is_deterministic_and_bounded() {
        let cfg = ModelConfig::default().with_seed(99);
        let a = init_model(&cfg).unwrap();
        let b = init_model(&cfg).unwrap();
        assert_eq!(a.flatten(), b.flatten());
        assert!(a.bn.gamma.iter().all(|&g| g == 1.0));
        assert!(a.bn.beta.iter().all(|&g| g == 0.0));
        assert!(a.conv.biases.iter().chain(&a.dense.biases).all(|&v| v == 0.0));
        assert!(a.conv.kernels.iter().all(|w| w.abs() <= 0.125));
        let c = init_model(&cfg.with_seed(100)).unwrap();
        assert_ne!(a.flatten(), c.flatten());
    }

    #[test]
    fn variant_shapes() {
        let cfg = ModelConfig::default();
        assert_eq!(cfg.map_len(), 321);
        assert_eq!(cfg.with_variant(Variant::AVGPOOL40).dense_in_features(), 256);
        assert_eq!(cfg.with_variant(Variant::AVGPOOL80).dense_in_features(), 128);
    }

    #[test]
    fn variant_names_parse_back() {
        for v in [
            Variant::Full,
            Variant::NoActivation,
            Variant::NoBatchNorm,
            Variant::AVGPOOL40,
            Variant::AVGPOOL80,
        ] {
            assert_eq!(Variant::parse(&v.name()).unwrap(), v);
        }
        assert!(Variant::parse("maxpool").is_err());
    }

    #[test]
    fn odd_kernel_rejected() {
        let cfg = ModelConfig {
            kernel_len: 63,
            ..ModelConfig::default()
        };
        assert!(cfg.validate().is_err());
    }
}
