use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use somno_core::data::{EegSample, Label};
use somno_core::model::*;
use somno_core::nn::cross_entropy_loss;
use somno_core::rng;

fn small(variant: Variant) -> ModelConfig {
    ModelConfig {
        input_len: 40,
        kernel_len: 8,
        num_filters: 3,
        variant,
        ..ModelConfig::default()
    }
}

fn random_inputs(r: &mut ChaCha8Rng, batch: usize, len: usize) -> Vec<Vec<f64>> {
    (0..batch)
        .map(|_| (0..len).map(|_| r.random_range(-2.0..2.0)).collect())
        .collect()
}

/// Loss with a freshly seeded dropout stream, so repeated calls agree.
fn loss(cfg: &ModelConfig, p: &ModelParams, x: &[Vec<f64>], y: &[usize]) -> f64 {
    let mut drop = rng::seeded(99);
    let f = forward(cfg, p, x, Mode::Train(&mut drop)).unwrap();
    cross_entropy_loss(&f.probs, y).unwrap()
}

#[test]
fn finite_differences_agree_for_every_variant() {
    let variants = [
        Variant::Full,
        Variant::NoActivation,
        Variant::NoBatchNorm,
        Variant::AvgPool {
            pool_size: 10,
            dropout_rate: 0.5,
        },
    ];
    for (i, v) in variants.into_iter().enumerate() {
        let cfg = small(v).with_seed(i as u64);
        let mut r = ChaCha8Rng::seed_from_u64(i as u64 + 10);
        let mut p = init_model(&cfg).unwrap();
        for t in p.tensors_mut() {
            t.iter_mut().for_each(|w| *w += r.random_range(-0.3..0.3));
        }
        let x = random_inputs(&mut r, 4, cfg.input_len);
        let y = [0, 1, 1, 0];
        let mut drop = rng::seeded(99);
        let fwd = forward(&cfg, &p, &x, Mode::Train(&mut drop)).unwrap();
        let grads = backward(&cfg, &p, &fwd, &y).unwrap();
        let analytic = grads.flatten();
        let h = 1e-5;
        let mut j = 0;
        for t in 0..6 {
            for e in 0..p.tensors()[t].len() {
                let (mut a, mut b) = (p.clone(), p.clone());
                a.tensors_mut()[t][e] += h;
                b.tensors_mut()[t][e] -= h;
                let num = (loss(&cfg, &a, &x, &y) - loss(&cfg, &b, &x, &y)) / (2.0 * h);
                let err = (analytic[j] - num).abs() / (1e-8 + analytic[j].abs().max(num.abs()));
                assert!(
                    err < 1e-4 || (analytic[j] - num).abs() < 1e-9,
                    "{}: tensor {t} element {e}: {} vs {num}",
                    v.name(),
                    analytic[j]
                );
                j += 1;
            }
        }
    }
}

#[test]
fn bundle_permutation_permutes_outputs() {
    let cfg = ModelConfig::default().with_seed(5);
    let p = init_model(&cfg).unwrap();
    let mut r = ChaCha8Rng::seed_from_u64(6);
    let x = random_inputs(&mut r, 6, cfg.input_len);
    let perm = [3, 0, 5, 1, 4, 2];
    let xp: Vec<Vec<f64>> = perm.iter().map(|&i| x[i].clone()).collect();
    let a = forward(&cfg, &p, &x, Mode::Inference).unwrap();
    let b = forward(&cfg, &p, &xp, Mode::Inference).unwrap();
    for (row, &i) in perm.iter().enumerate() {
        for c in 0..2 {
            assert!((b.probs.row(row)[c] - a.probs.row(i)[c]).abs() < 1e-12);
        }
    }
}

#[test]
fn bundle_composition_changes_predictions() {
    let cfg = ModelConfig::default().with_seed(5);
    let p = init_model(&cfg).unwrap();
    let mut r = ChaCha8Rng::seed_from_u64(7);
    let x = random_inputs(&mut r, 4, cfg.input_len);
    let mut other = x.clone();
    other[1].iter_mut().for_each(|v| *v *= 5.0);
    let a = forward(&cfg, &p, &x, Mode::Inference).unwrap();
    let b = forward(&cfg, &p, &other, Mode::Inference).unwrap();
    assert_ne!(a.probs.row(0), b.probs.row(0));
}

/// Conv outputs with zero batch mean and batch variance `1 − ε` are left
/// unchanged by batch-norm with gamma 1, beta 0.
#[test]
fn prewhitened_channels_make_batchnorm_transparent() {
    let cfg = ModelConfig {
        input_len: 2,
        kernel_len: 2,
        num_filters: 1,
        ..ModelConfig::default()
    };
    let mut p = init_model(&cfg).unwrap();
    p.conv.kernels = vec![1.0, 0.0];
    p.conv.biases = vec![0.0];
    p.dense.weights = vec![0.7, -0.4];
    p.dense.biases = vec![0.1, -0.2];
    let s = (1.0 - cfg.bn_epsilon).sqrt();
    let x = vec![vec![s, 9.0], vec![-s, 3.0], vec![s, -4.0], vec![-s, 0.5]];
    let full = forward(&cfg, &p, &x, Mode::Inference).unwrap();
    let nobn = forward(&cfg.with_variant(Variant::NoBatchNorm), &p, &x, Mode::Inference).unwrap();
    for (a, b) in full.probs.data.iter().zip(&nobn.probs.data) {
        assert!((a - b).abs() < 1e-6);
    }
}

fn separable(n_per_class: usize, seed: u64) -> Vec<EegSample> {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    (0..2 * n_per_class)
        .map(|i| {
            let label = if i % 2 == 0 { Label::Alert } else { Label::Drowsy };
            let f = if label == Label::Alert { 25.0 } else { 10.0 };
            let phase = r.random_range(0.0..std::f64::consts::TAU);
            let values = (0..384)
                .map(|t| {
                    ((std::f64::consts::TAU * f * t as f64 / 128.0 + phase).sin()
                        + 0.3 * r.random_range(-1.0..1.0)) as f32
                })
                .collect();
            EegSample::new(values, 1, label).unwrap()
        })
        .collect()
}

#[test]
fn training_loss_falls_on_a_separable_set() {
    let data = separable(60, 1);
    let refs: Vec<&EegSample> = data.iter().collect();
    let cfg = ModelConfig::default().with_seed(3);
    let tc = TrainConfig {
        epochs: 6,
        ..TrainConfig::default()
    };
    let out = train(&refs, &tc, &cfg).unwrap();
    let l = &out.epoch_losses;
    assert!(l.last().unwrap() < &(0.5 * l[0]), "{l:?}");
    let acc = predict_bundle(&refs, &out.params, &cfg).unwrap().accuracy(&refs);
    assert!(acc > 0.95, "{acc}");
}

#[test]
fn batches_per_epoch_drop_a_trailing_singleton() {
    let data = separable(3, 2);
    let refs: Vec<&EegSample> = data.iter().collect();
    let mut big = Vec::new();
    for i in 0..2022 {
        big.push(refs[i % refs.len()]);
    }
    let t = Trainer::new(&big, &ModelConfig::default(), &TrainConfig::default()).unwrap();
    assert_eq!(t.batches_per_epoch(), 41);
    let t = Trainer::new(&big[..2001], &ModelConfig::default(), &TrainConfig::default()).unwrap();
    assert_eq!(t.batches_per_epoch(), 40);
}

#[test]
fn zero_epochs_return_the_initialization() {
    let data = separable(5, 3);
    let refs: Vec<&EegSample> = data.iter().collect();
    let cfg = ModelConfig::default().with_seed(8);
    let train_cfg = TrainConfig {
        epochs: 0,
        ..TrainConfig::default()
    };
    let out = train(&refs, &train_cfg, &cfg).unwrap();
    assert_eq!(out.params, init_model(&cfg).unwrap());
    assert!(out.epoch_losses.is_empty());
}

#[test]
fn training_is_deterministic() {
    let data = separable(20, 4);
    let refs: Vec<&EegSample> = data.iter().collect();
    let cfg = ModelConfig::default()
        .with_variant(Variant::AVGPOOL40)
        .with_seed(2);
    let tc = TrainConfig {
        epochs: 2,
        shuffle_seed: 17,
        ..TrainConfig::default()
    };
    let a = train(&refs, &tc, &cfg).unwrap();
    let b = train(&refs, &tc, &cfg).unwrap();
    assert_eq!(a.params.flatten(), b.params.flatten());
    assert_eq!(a.epoch_losses, b.epoch_losses);
}

#[test]
fn single_class_training_is_rejected() {
    let data: Vec<EegSample> = separable(5, 5)
        .into_iter()
        .filter(|s| s.label == Label::Alert)
        .collect();
    let refs: Vec<&EegSample> = data.iter().collect();
    assert!(train(&refs, &TrainConfig::default(), &ModelConfig::default()).is_err());
}

#[test]
fn argmax_ties_go_to_alert() {
    let cfg = ModelConfig::default();
    let p = ModelParams::zeros(&cfg);
    let data = separable(2, 6);
    let refs: Vec<&EegSample> = data.iter().collect();
    // All-zero parameters give uniform probabilities.
    let pred = predict_bundle(&refs, &p, &cfg).unwrap();
    assert!(pred.labels.iter().all(|&l| l == Label::Alert));
    assert!(pred.probs.data.iter().all(|&v| v == 0.5));
}
