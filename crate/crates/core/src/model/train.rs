use alloc::vec::Vec;
use rand::seq::SliceRandom;

use super::{backward, forward, init_model, Mode, ModelConfig, ModelParams};
use crate::data::{EegSample, Label};
use crate::nn::{cross_entropy_loss, Adam, AdamConfig, Matrix};
use crate::rng::{self, Rng};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub batch_size: usize,
    pub epochs: usize,
    pub optimizer: AdamConfig,
    /// Seeds the shuffling and dropout streams, independently of initialization.
    pub shuffle_seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            batch_size: 50,
            epochs: 50,
            optimizer: AdamConfig::default(),
            shuffle_seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub params: ModelParams,
    /// Mean per-sample training loss of each epoch.
    pub epoch_losses: Vec<f64>,
}

/// Mini-batch Adam over a fixed training set, one epoch at a time.
pub struct Trainer {
    model: ModelConfig,
    batch_size: usize,
    params: ModelParams,
    adam: Adam,
    shuffle_rng: Rng,
    dropout_rng: Rng,
    inputs: Vec<Vec<f64>>,
    labels: Vec<usize>,
    order: Vec<usize>,
    epochs_done: usize,
}

impl Trainer {
    pub fn new(samples: &[&EegSample], model: &ModelConfig, train: &TrainConfig) -> Result<Self> {
        let params = init_model(model)?;
        Self::with_params(samples, model, train, params)
    }

    pub fn with_params(
        samples: &[&EegSample],
        model: &ModelConfig,
        train: &TrainConfig,
        params: ModelParams,
    ) -> Result<Self> {
        model.validate()?;
        if samples.is_empty() {
            return Err(Error::Data("empty training set".into()));
        }
        if train.batch_size < 2 {
            return Err(Error::Argument("batch size must be at least 2".into()));
        }
        if !params.conforms_to(model) {
            return Err(Error::dim(
                "model parameters",
                ModelParams::zeros(model).num_scalars(),
                params.num_scalars(),
            ));
        }
        let labels: Vec<usize> = samples.iter().map(|s| s.label.index()).collect();
        if !labels.contains(&0) || !labels.contains(&1) {
            return Err(Error::Data("training set must contain both classes".into()));
        }
        let adam = Adam::new(train.optimizer, &params.shapes())?;
        Ok(Trainer {
            model: *model,
            batch_size: train.batch_size,
            params,
            adam,
            shuffle_rng: rng::seeded(rng::derive_seed(train.shuffle_seed, &[0x5f])),
            dropout_rng: rng::seeded(rng::derive_seed(train.shuffle_seed, &[0xd0])),
            inputs: samples.iter().map(|s| s.to_f64()).collect(),
            labels,
            order: (0..samples.len()).collect(),
            epochs_done: 0,
        })
    }

    /// Number of optimizer steps per epoch; a trailing batch of one is dropped.
    pub fn batches_per_epoch(&self) -> usize {
        let n = self.inputs.len();
        let full = n / self.batch_size;
        full + usize::from(n % self.batch_size >= 2)
    }

    /// Runs one shuffled epoch and returns its mean per-sample loss.
    pub fn run_epoch(&mut self) -> Result<f64> {
        self.order.shuffle(&mut self.shuffle_rng);
        let mut loss_sum = 0.0;
        let mut seen = 0usize;
        let order = core::mem::take(&mut self.order);
        for chunk in order.chunks(self.batch_size) {
            if chunk.len() < 2 {
                continue;
            }
            let batch: Vec<&[f64]> = chunk.iter().map(|&i| self.inputs[i].as_slice()).collect();
            let labels: Vec<usize> = chunk.iter().map(|&i| self.labels[i]).collect();
            let fwd = forward(
                &self.model,
                &self.params,
                &batch,
                Mode::Train(&mut self.dropout_rng),
            )?;
            loss_sum += cross_entropy_loss(&fwd.probs, &labels)? * chunk.len() as f64;
            seen += chunk.len();
            let grads = backward(&self.model, &self.params, &fwd, &labels)?;
            let g = grads.tensors();
            self.adam.step(&mut self.params.tensors_mut(), &g)?;
        }
        self.order = order;
        self.epochs_done += 1;
        Ok(loss_sum / seen.max(1) as f64)
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn into_params(self) -> ModelParams {
        self.params
    }

    pub fn epochs_done(&self) -> usize {
        self.epochs_done
    }
}

/// Trains from a fresh initialization for `train.epochs` epochs.
pub fn train(samples: &[&EegSample], train: &TrainConfig, model: &ModelConfig) -> Result<TrainOutcome> {
    let mut trainer = Trainer::new(samples, model, train)?;
    let mut epoch_losses = Vec::with_capacity(train.epochs);
    for _ in 0..train.epochs {
        epoch_losses.push(trainer.run_epoch()?);
    }
    Ok(TrainOutcome {
        params: trainer.into_params(),
        epoch_losses,
    })
}

#[derive(Debug, Clone)]
pub struct BundlePrediction {
    pub labels: Vec<Label>,
    pub probs: Matrix,
}

impl BundlePrediction {
    pub fn accuracy(&self, truth: &[&EegSample]) -> f64 {
        let correct = self
            .labels
            .iter()
            .zip(truth)
            .filter(|(p, s)| **p == s.label)
            .count();
        correct as f64 / truth.len().max(1) as f64
    }
}

/// Class with the highest probability; ties go to the lower index (alert).
pub(crate) fn argmax_label(row: &[f64]) -> Label {
    if row[1] > row[0] {
        Label::Drowsy
    } else {
        Label::Alert
    }
}

/// Classifies a whole test bundle in one pass so batch-norm statistics come
/// from the bundle itself. Outputs therefore depend on bundle composition.
pub fn predict_bundle(
    samples: &[&EegSample],
    params: &ModelParams,
    config: &ModelConfig,
) -> Result<BundlePrediction> {
    if samples.len() < 2 {
        return Err(Error::DegenerateBatch {
            entries: samples.len(),
        });
    }
    let fwd = super::forward_samples(config, params, samples, Mode::Inference)?;
    let labels = (0..fwd.probs.rows)
        .map(|b| argmax_label(fwd.probs.row(b)))
        .collect();
    Ok(BundlePrediction {
        labels,
        probs: fwd.probs,
    })
}
