use alloc::vec::Vec;

use super::{loso_split, BaselineReport, EvalReport, FoldSpec};
use crate::baselines::{band_powers, Method};
use crate::data::{Label, LabeledSet};
use crate::model::{predict_bundle, ModelConfig, TrainConfig, Trainer, Variant};
use crate::nn::Matrix;
use crate::rng::derive_seed;
use crate::Result;

/// Initialization and shuffling seeds of a fold. They depend on the fold
/// alone, so every variant trained on the fold shares them.
pub fn fold_seeds(fold: &FoldSpec) -> (u64, u64) {
    (derive_seed(fold.seed, &[1]), derive_seed(fold.seed, &[2]))
}

/// Trains one fold for `train.epochs` epochs and returns the bundle accuracy
/// on the held-out subject after each epoch. Seeds in the configs are
/// replaced by [`fold_seeds`].
pub fn run_cnn_fold(
    set: &LabeledSet,
    fold: &FoldSpec,
    model: &ModelConfig,
    train: &TrainConfig,
) -> Result<Vec<f64>> {
    let (train_set, test_set) = fold.partition(set)?;
    let (init_seed, shuffle_seed) = fold_seeds(fold);
    let model = model.with_seed(init_seed);
    let train = TrainConfig {
        shuffle_seed,
        ..*train
    };
    let mut trainer = Trainer::new(&train_set, &model, &train)?;
    let mut curve = Vec::with_capacity(train.epochs);
    for _ in 0..train.epochs {
        trainer.run_epoch()?;
        let pred = predict_bundle(&test_set, trainer.params(), &model)?;
        curve.push(pred.accuracy(&test_set));
    }
    Ok(curve)
}

/// Full repeated leave-one-subject-out protocol for one model variant.
pub fn run_cnn_experiment(
    set: &LabeledSet,
    model: &ModelConfig,
    train: &TrainConfig,
    repeats: usize,
    master_seed: u64,
) -> Result<EvalReport> {
    let folds = loso_split(set, repeats, master_seed)?;
    let results = folds
        .into_iter()
        .map(|f| run_cnn_fold(set, &f, model, train).map(|c| (f, c)))
        .collect::<Result<Vec<_>>>()?;
    EvalReport::assemble(
        "cnn",
        &model.variant.name(),
        set.subjects(),
        repeats,
        train.epochs,
        &results,
    )
}

/// Runs [`run_cnn_experiment`] for each variant with the same fold seeds.
pub fn run_ablations(
    set: &LabeledSet,
    variants: &[Variant],
    model: &ModelConfig,
    train: &TrainConfig,
    repeats: usize,
    master_seed: u64,
) -> Result<Vec<EvalReport>> {
    variants
        .iter()
        .map(|&v| {
            let cfg = model.with_variant(v);
            cfg.validate()?;
            run_cnn_experiment(set, &cfg, train, repeats, master_seed)
        })
        .collect()
}

/// Relative band powers of every sample, one row each, in dataset order.
pub fn band_feature_matrix(set: &LabeledSet) -> Result<Matrix> {
    let mut data = Vec::with_capacity(set.len() * 4);
    for s in &set.samples {
        data.extend_from_slice(&band_powers(&s.to_f64())?.to_array());
    }
    Matrix::from_vec(set.len(), 4, data)
}

/// One leave-one-subject-out pass of a conventional classifier over
/// precomputed features (rows aligned with `set.samples`).
pub fn run_baseline_on_features(
    set: &LabeledSet,
    features: &Matrix,
    method: Method,
) -> Result<BaselineReport> {
    if features.rows != set.len() {
        return Err(crate::Error::dim("feature rows", set.len(), features.rows));
    }
    let subjects = set.subjects();
    if subjects.len() < 2 {
        return Err(crate::Error::Split(alloc::format!(
            "leave-one-subject-out needs at least 2 subjects, found {}",
            subjects.len()
        )));
    }
    let mut accuracy = Vec::with_capacity(subjects.len());
    for &test in &subjects {
        let mut train_rows = Vec::new();
        let mut train_labels: Vec<Label> = Vec::new();
        let mut test_rows = Vec::new();
        for (i, s) in set.samples.iter().enumerate() {
            if s.subject_id == test {
                test_rows.push(i);
            } else {
                train_rows.extend_from_slice(features.row(i));
                train_labels.push(s.label);
            }
        }
        let x = Matrix::from_vec(train_labels.len(), features.cols, train_rows)?;
        let model = method.fit(&x, &train_labels)?;
        let correct = test_rows
            .iter()
            .filter(|&&i| model.predict(features.row(i)) == set.samples[i].label)
            .count();
        accuracy.push(correct as f64 / test_rows.len() as f64);
    }
    Ok(BaselineReport {
        method,
        subjects,
        accuracy,
    })
}

/// Band-power features plus one leave-one-subject-out pass of `method`.
pub fn run_baseline_experiment(set: &LabeledSet, method: Method) -> Result<BaselineReport> {
    let features = band_feature_matrix(set)?;
    run_baseline_on_features(set, &features, method)
}
