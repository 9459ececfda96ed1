//! Compact interpretable 1D-CNN for cross-subject drowsiness classification
//! from single-channel EEG.
//!
//! The crate is `no_std` (with `alloc`) and carries every numerical piece of
//! the pipeline:
//!
//! ```text
//! x[384] ── conv(32 × 64) ── batch-norm ── ELU ── GAP ── dense(32 → 2) ── softmax
//!                                           │
//!                                           └── class activation maps / heatmaps
//! ```
//!
//! - [`nn`]: layer kernels with hand-derived gradients and Adam.
//! - [`model`]: network assembly, training loop, bundle inference and ablation variants.
//! - [`cam`]: class activation maps and center-aligned heatmaps.
//! - [`data`]: samples, reaction-time labeling, session balancing, synthetic EEG.
//! - [`baselines`]: Welch PSD, relative band powers, LDA / LR / GaussianNB / KNN.
//! - [`eval`]: leave-one-subject-out harness and paired t-tests.
//!
//! File formats, the CLI and SVG output live in the `somno` companion crate.

#![no_std]

extern crate alloc;

pub mod baselines;
pub mod cam;
pub mod data;
pub mod error;
pub mod eval;
pub mod model;
pub mod nn;
pub mod rng;

pub use error::{Error, Result};

/// Sampling rate of every sample handled by the pipeline.
pub const SAMPLE_RATE_HZ: u32 = 128;
/// Points per sample (3 s at 128 Hz).
pub const SAMPLE_LEN: usize = 384;
