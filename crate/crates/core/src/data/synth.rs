//! Synthetic single-channel EEG with injected, annotated events.
//!
//! Background is Gaussian noise with a `1/f^tilt` power spectrum whose tilt
//! and gain vary per subject. Drowsy samples carry an alpha spindle (~10 Hz,
//! waxing-waning envelope) or a theta burst (~5 Hz); alert samples carry an
//! EMG episode (20–45 Hz) or a slow large-amplitude drift. The event window of
//! every sample is recorded.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use rand::Rng as _;

use super::{EegSample, Label, LabeledSet};
use crate::rng::{self, Rng};
use crate::{Result, SAMPLE_LEN, SAMPLE_RATE_HZ};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EventKind {
    Spindle,
    ThetaBurst,
    Emg,
    Drift,
}

impl EventKind {
    pub const ALL: [EventKind; 4] = [
        EventKind::Spindle,
        EventKind::ThetaBurst,
        EventKind::Emg,
        EventKind::Drift,
    ];

    /// Class the event is evidence for.
    pub fn label(self) -> Label {
        match self {
            EventKind::Spindle | EventKind::ThetaBurst => Label::Drowsy,
            EventKind::Emg | EventKind::Drift => Label::Alert,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EventKind::Spindle => "spindle",
            EventKind::ThetaBurst => "theta",
            EventKind::Emg => "emg",
            EventKind::Drift => "drift",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        EventKind::ALL.into_iter().find(|k| k.name() == s.trim())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    pub subjects: usize,
    pub samples_per_class: usize,
    /// Event kinds to draw from; each class uses the kinds that belong to it.
    pub events: Vec<EventKind>,
    /// Peak event amplitude in units of the background RMS.
    pub event_amplitude: f64,
    /// Background RMS in microvolts before the per-subject gain.
    pub background_uv: f64,
    /// Per-subject gain is log-uniform in `[1/gain_spread, gain_spread]`.
    pub gain_spread: f64,
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        SynthSpec {
            subjects: 8,
            samples_per_class: 100,
            events: EventKind::ALL.to_vec(),
            event_amplitude: 2.0,
            background_uv: 10.0,
            gain_spread: 2.0,
            seed: 0,
        }
    }
}

/// Injected event of one sample: positions `[start, end)`, zero-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EventAnnotation {
    pub sample_index: usize,
    pub kind: EventKind,
    pub start: usize,
    pub end: usize,
}

impl EventAnnotation {
    pub fn contains(&self, position: usize) -> bool {
        (self.start..self.end).contains(&position)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSet {
    pub set: LabeledSet,
    /// One entry per sample that received an event, in sample order.
    pub events: Vec<EventAnnotation>,
}

impl SynthSet {
    pub fn event_of(&self, sample_index: usize) -> Option<&EventAnnotation> {
        self.events
            .binary_search_by_key(&sample_index, |e| e.sample_index)
            .ok()
            .map(|i| &self.events[i])
    }
}

struct SubjectProfile {
    tilt: f64,
    gain: f64,
}

/// Generates `subjects × 2 × samples_per_class` samples, subject ids from 1,
/// alternating alert/drowsy within each subject. Deterministic in `seed`.
pub fn synth_generate(spec: &SynthSpec) -> Result<SynthSet> {
    let cos_table: Vec<f64> = (0..SAMPLE_LEN)
        .map(|m| libm::cos(TAU * m as f64 / SAMPLE_LEN as f64))
        .collect();
    let alert_kinds: Vec<EventKind> = spec
        .events
        .iter()
        .copied()
        .filter(|k| k.label() == Label::Alert)
        .collect();
    let drowsy_kinds: Vec<EventKind> = spec
        .events
        .iter()
        .copied()
        .filter(|k| k.label() == Label::Drowsy)
        .collect();

    let mut samples = Vec::with_capacity(spec.subjects * spec.samples_per_class * 2);
    let mut events = Vec::new();
    for s in 0..spec.subjects {
        let subject_id = (s + 1) as u16;
        let mut srng = rng::seeded(rng::derive_seed(spec.seed, &[s as u64]));
        let log_spread = libm::log(spec.gain_spread.max(1.0));
        let profile = SubjectProfile {
            tilt: srng.random_range(0.8..1.6),
            gain: libm::exp(srng.random_range(-1.0..=1.0) * log_spread),
        };
        for i in 0..2 * spec.samples_per_class {
            let label = if i % 2 == 0 { Label::Alert } else { Label::Drowsy };
            let mut r = rng::seeded(rng::derive_seed(spec.seed, &[s as u64, i as u64 + 1]));
            let sigma = spec.background_uv * profile.gain;
            let mut x = background(&mut r, profile.tilt, &cos_table);
            x.iter_mut().for_each(|v| *v *= sigma);
            let kinds = match label {
                Label::Alert => &alert_kinds,
                Label::Drowsy => &drowsy_kinds,
            };
            if !kinds.is_empty() {
                let kind = kinds[r.random_range(0..kinds.len())];
                let amp = spec.event_amplitude * sigma * r.random_range(0.75..1.25);
                let (start, end) = inject(&mut r, kind, amp, &mut x);
                events.push(EventAnnotation {
                    sample_index: samples.len(),
                    kind,
                    start,
                    end,
                });
            }
            let values = x.iter().map(|&v| v as f32).collect();
            samples.push(EegSample::new(values, subject_id, label)?);
        }
    }
    Ok(SynthSet {
        set: LabeledSet::new(samples),
        events,
    })
}

/// Unit-variance Gaussian noise with power ∝ 1/f^tilt.
fn background(r: &mut Rng, tilt: f64, cos_table: &[f64]) -> Vec<f64> {
    let n = SAMPLE_LEN;
    let df = SAMPLE_RATE_HZ as f64 / n as f64;
    let mut x = vec![0.0; n];
    let mut total = 0.0;
    for k in 1..n / 2 {
        let f = k as f64 * df;
        let amp = libm::pow(f, -tilt / 2.0);
        total += amp * amp;
        let (a, b) = (amp * rng::normal(r), amp * rng::normal(r));
        for (t, v) in x.iter_mut().enumerate() {
            let m = (k * t) % n;
            let cos = cos_table[m];
            // sin(θ) = cos(θ − π/2) = cos_table[m − n/4]
            let sin = cos_table[(m + 3 * n / 4) % n];
            *v += a * cos + b * sin;
        }
    }
    let scale = 1.0 / libm::sqrt(total);
    x.iter_mut().for_each(|v| *v *= scale);
    x
}

fn hann(i: usize, len: usize) -> f64 {
    0.5 - 0.5 * libm::cos(TAU * (i as f64 + 0.5) / len as f64)
}

/// Adds the event in place and returns its window.
fn inject(r: &mut Rng, kind: EventKind, amp: f64, x: &mut [f64]) -> (usize, usize) {
    let fs = SAMPLE_RATE_HZ as f64;
    let len = r.random_range((0.75 * fs) as usize..=(1.5 * fs) as usize);
    let start = r.random_range(0..=SAMPLE_LEN - len);
    let window = &mut x[start..start + len];
    let phase = r.random_range(0.0..TAU);
    match kind {
        EventKind::Spindle | EventKind::ThetaBurst => {
            let f = match kind {
                EventKind::Spindle => r.random_range(9.0..11.0),
                _ => r.random_range(4.5..6.0),
            };
            for (i, v) in window.iter_mut().enumerate() {
                *v += amp * hann(i, len) * libm::sin(TAU * f * i as f64 / fs + phase);
            }
        }
        EventKind::Emg => {
            let tones: Vec<(f64, f64)> = (0..8)
                .map(|_| (r.random_range(20.0..45.0), r.random_range(0.0..TAU)))
                .collect();
            let norm = 1.0 / libm::sqrt(tones.len() as f64 / 2.0);
            for (i, v) in window.iter_mut().enumerate() {
                let t = i as f64 / fs;
                let s: f64 = tones.iter().map(|&(f, p)| libm::sin(TAU * f * t + p)).sum();
                *v += amp * norm * hann(i, len) * s;
            }
        }
        EventKind::Drift => {
            let sign = if r.random::<bool>() { 1.0 } else { -1.0 };
            for (i, v) in window.iter_mut().enumerate() {
                // One slow raised-cosine bump, 1.5× the peak amplitude.
                let s = libm::sin(PI * (i as f64 + 0.5) / len as f64);
                *v += sign * 1.5 * amp * s * s;
            }
        }
    }
    (start, start + len)
}
