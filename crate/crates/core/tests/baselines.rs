use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use somno_core::baselines::*;
use somno_core::data::{synth_generate, EventKind, Label, SynthSpec};
use somno_core::data::{EegSample, LabeledSet};
use somno_core::eval::{run_baseline_experiment, run_baseline_on_features};
use somno_core::nn::Matrix;

fn sine(freq: f64, amp: f64) -> Vec<f64> {
    (0..384)
        .map(|t| amp * (std::f64::consts::TAU * freq * t as f64 / 128.0).sin())
        .collect()
}

fn noise(seed: u64) -> Vec<f64> {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    (0..384).map(|_| somno_core::rng::normal(&mut r)).collect()
}

#[test]
fn pure_alpha_tone() {
    let b = band_powers(&sine(10.0, 3.0)).unwrap();
    assert!(b.alpha > 0.9, "{b:?}");
}

#[test]
fn white_noise_power_is_unbiased() {
    // Averaged over realizations, total PSD power equals the variance.
    let mut ratio = 0.0;
    for seed in 0..200 {
        let x = noise(seed);
        let psd = welch_psd(&x, &WelchConfig::default()).unwrap();
        ratio += psd.total_power() / 200.0;
    }
    assert!((ratio - 1.0).abs() < 0.02, "{ratio}");
}

#[test]
fn offset_changes_nothing() {
    let x = noise(3);
    let shifted: Vec<f64> = x.iter().map(|v| v + 40.0).collect();
    let a = welch_psd(&x, &WelchConfig::default()).unwrap();
    let b = welch_psd(&shifted, &WelchConfig::default()).unwrap();
    for (p, q) in a.power.iter().zip(&b.power).skip(1) {
        assert!((p - q).abs() <= 1e-9 * (1.0 + p.abs()));
    }
}

#[test]
fn silent_signal_has_no_features() {
    assert_eq!(
        band_powers(&[0.0; 384]),
        Err(somno_core::Error::UndefinedFeatures)
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn relative_powers_partition_and_ignore_gain(seed in any::<u64>(), gain in 0.01f64..1000.0) {
        let x = noise(seed);
        let psd = welch_psd(&x, &WelchConfig::default()).unwrap();
        prop_assert!(psd.power.iter().all(|&p| p >= 0.0));
        let a = band_powers(&x).unwrap();
        prop_assert!((a.to_array().iter().sum::<f64>() - 1.0).abs() < 1e-9);
        let scaled: Vec<f64> = x.iter().map(|v| v * gain).collect();
        let b = band_powers(&scaled).unwrap();
        for (p, q) in a.to_array().iter().zip(b.to_array()) {
            prop_assert!((p - q).abs() < 1e-9);
        }
    }
}

/// Two noisy 2-D blobs, alert around (0, 0), drowsy around (2, 1).
fn blobs(n: usize, seed: u64) -> (Matrix, Vec<Label>) {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let mut data = Vec::new();
    let mut labels = Vec::new();
    for i in 0..n {
        let drowsy = i % 3 == 0;
        let (cx, cy) = if drowsy { (2.0, 1.0) } else { (0.0, 0.0) };
        data.push(cx + r.random_range(-1.2..1.2));
        data.push(cy + r.random_range(-1.2..1.2));
        labels.push(if drowsy { Label::Drowsy } else { Label::Alert });
    }
    (Matrix::from_vec(n, 2, data).unwrap(), labels)
}

fn doubled(x: &Matrix, y: &[Label]) -> (Matrix, Vec<Label>) {
    let mut data = x.data.clone();
    data.extend_from_slice(&x.data);
    (
        Matrix::from_vec(2 * x.rows, x.cols, data).unwrap(),
        [y, y].concat(),
    )
}

fn predictions(model: &dyn Classifier, probe: &Matrix) -> Vec<Label> {
    (0..probe.rows).map(|i| model.predict(probe.row(i))).collect()
}

#[test]
fn duplicating_the_training_set_changes_nothing() {
    let (x, y) = blobs(90, 1);
    let (x2, y2) = doubled(&x, &y);
    let (probe, _) = blobs(200, 2);
    let lda = (Lda::fit(&x, &y).unwrap(), Lda::fit(&x2, &y2).unwrap());
    assert!((lda.0.bias - lda.1.bias).abs() < 1e-9);
    assert_eq!(predictions(&lda.0, &probe), predictions(&lda.1, &probe));
    let gnb = (
        GaussianNb::fit(&x, &y).unwrap(),
        GaussianNb::fit(&x2, &y2).unwrap(),
    );
    assert_eq!(predictions(&gnb.0, &probe), predictions(&gnb.1, &probe));
    let cfg = LogRegConfig::default();
    let lr = (
        LogReg::fit(&x, &y, &cfg).unwrap(),
        LogReg::fit(&x2, &y2, &cfg).unwrap(),
    );
    for (a, b) in lr.0.weights.iter().zip(&lr.1.weights) {
        assert!((a - b).abs() < 1e-4);
    }
    assert_eq!(predictions(&lr.0, &probe), predictions(&lr.1, &probe));
    let knn = (Knn::fit(&x, &y, 1).unwrap(), Knn::fit(&x2, &y2, 1).unwrap());
    assert_eq!(predictions(&knn.0, &probe), predictions(&knn.1, &probe));
}

/// Equal-prior 1-D Gaussian classes with equal spread split at the midpoint.
#[test]
fn lda_and_gnb_split_symmetric_classes_at_the_midpoint() {
    let a = [-1.0, 0.0, 1.0];
    let d = [3.0, 4.0, 5.0];
    let x = Matrix::from_vec(6, 1, a.iter().chain(&d).copied().collect()).unwrap();
    let y = [[Label::Alert; 3], [Label::Drowsy; 3]].concat();
    let lda = Lda::fit(&x, &y).unwrap();
    let gnb = GaussianNb::fit(&x, &y).unwrap();
    assert!(lda.decision(&[2.0]).abs() < 1e-9);
    for v in [1.9, 2.1] {
        let want = if v > 2.0 { Label::Drowsy } else { Label::Alert };
        assert_eq!(lda.predict(&[v]), want);
        assert_eq!(gnb.predict(&[v]), want);
    }
    // Exact tie goes to alert.
    assert_eq!(gnb.predict(&[2.0]), Label::Alert);
}

/// At the optimum the penalized mean log-loss has zero gradient.
#[test]
fn logistic_fit_is_stationary() {
    let (x, y) = blobs(60, 3);
    let cfg = LogRegConfig::default();
    let m = LogReg::fit(&x, &y, &cfg).unwrap();
    let n = x.rows as f64;
    let mut gw = [0.0; 2];
    let mut gb = 0.0;
    for i in 0..x.rows {
        let z = m.weights[0] * x.row(i)[0] + m.weights[1] * x.row(i)[1] + m.bias;
        let p = 1.0 / (1.0 + (-z).exp());
        let r = p - y[i].index() as f64;
        gb += r / n;
        gw[0] += r * x.row(i)[0] / n;
        gw[1] += r * x.row(i)[1] / n;
    }
    gw[0] += cfg.l2 * m.weights[0];
    gw[1] += cfg.l2 * m.weights[1];
    let norm = (gw[0] * gw[0] + gw[1] * gw[1] + gb * gb).sqrt();
    assert!(norm < 1e-5, "{norm}");
}

#[test]
fn class_constant_features_are_perfectly_separated() {
    let samples: Vec<EegSample> = (0..24)
        .map(|i| {
            let label = if i % 2 == 0 { Label::Alert } else { Label::Drowsy };
            EegSample::new(vec![0.0; 384], 1 + (i / 8) as u16, label).unwrap()
        })
        .collect();
    let set = LabeledSet::new(samples);
    let rows: Vec<f64> = set
        .samples
        .iter()
        .flat_map(|s| match s.label {
            Label::Alert => [0.4, 0.3, 0.2, 0.1],
            Label::Drowsy => [0.1, 0.2, 0.3, 0.4],
        })
        .collect();
    let features = Matrix::from_vec(24, 4, rows).unwrap();
    for method in Method::ALL {
        let r = run_baseline_on_features(&set, &features, method).unwrap();
        assert_eq!(r.accuracy, vec![1.0; 3], "{}", method.name());
    }
}

#[test]
fn band_power_baselines_separate_spindles_from_emg() {
    let s = synth_generate(&SynthSpec {
        subjects: 4,
        samples_per_class: 30,
        events: vec![EventKind::Spindle, EventKind::Emg],
        seed: 9,
        ..SynthSpec::default()
    })
    .unwrap();
    for method in Method::ALL {
        let r = run_baseline_experiment(&s.set, method).unwrap();
        assert!(r.mean() >= 0.85, "{}: {}", method.name(), r.mean());
    }
}
