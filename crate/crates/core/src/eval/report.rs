use alloc::string::String;
use alloc::vec::Vec;

use super::FoldSpec;
use crate::baselines::Method;
use crate::data::Label;
use crate::{Error, Result};

/// Per-epoch accuracy of every (subject, repeat) fold of one model variant.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub method: String,
    pub variant: String,
    /// Ascending.
    pub subjects: Vec<u16>,
    pub repeats: usize,
    pub epochs: usize,
    /// Flattened `[subject][repeat][epoch]`.
    pub accuracy: Vec<f64>,
}

impl EvalReport {
    /// Collects fold curves in any order into the fixed report layout.
    pub fn assemble(
        method: &str,
        variant: &str,
        subjects: Vec<u16>,
        repeats: usize,
        epochs: usize,
        folds: &[(FoldSpec, Vec<f64>)],
    ) -> Result<Self> {
        let cells = subjects.len() * repeats;
        if folds.len() != cells {
            return Err(Error::dim("report folds", cells, folds.len()));
        }
        let mut accuracy = alloc::vec![f64::NAN; cells * epochs];
        let mut seen = alloc::vec![false; cells];
        for (fold, curve) in folds {
            let s = subjects
                .binary_search(&fold.test_subject)
                .map_err(|_| Error::Split(alloc::format!("unknown subject {}", fold.test_subject)))?;
            if fold.repeat_index >= repeats {
                return Err(Error::Index {
                    index: fold.repeat_index,
                    len: repeats,
                });
            }
            if curve.len() != epochs {
                return Err(Error::dim("fold accuracy curve", epochs, curve.len()));
            }
            let cell = s * repeats + fold.repeat_index;
            if core::mem::replace(&mut seen[cell], true) {
                return Err(Error::Split(alloc::format!(
                    "duplicate fold for subject {} repeat {}",
                    fold.test_subject,
                    fold.repeat_index
                )));
            }
            accuracy[cell * epochs..(cell + 1) * epochs].copy_from_slice(curve);
        }
        Ok(EvalReport {
            method: method.into(),
            variant: variant.into(),
            subjects,
            repeats,
            epochs,
            accuracy,
        })
    }

    /// Accuracy of one fold after `epoch` (1-based) epochs.
    pub fn get(&self, subject_index: usize, repeat: usize, epoch: usize) -> f64 {
        self.accuracy[(subject_index * self.repeats + repeat) * self.epochs + epoch - 1]
    }

    /// Mean over all folds, per epoch.
    pub fn mean_curve(&self) -> Vec<f64> {
        (1..=self.epochs).map(|e| mean(&self.subject_means(e))).collect()
    }

    /// Mean accuracy over folds after `epoch` epochs.
    pub fn mean_at(&self, epoch: usize) -> f64 {
        mean(&self.subject_means(epoch))
    }

    /// Standard error across subjects of the repeat-averaged accuracy.
    pub fn stderr_curve(&self) -> Vec<f64> {
        (1..=self.epochs)
            .map(|e| standard_error(&self.subject_means(e)))
            .collect()
    }

    /// Repeat-averaged accuracy of each subject after `epoch` epochs.
    pub fn subject_means(&self, epoch: usize) -> Vec<f64> {
        (0..self.subjects.len())
            .map(|s| (0..self.repeats).map(|r| self.get(s, r, epoch)).sum::<f64>() / self.repeats as f64)
            .collect()
    }

    /// First epoch (1-based) attaining the highest mean accuracy.
    pub fn peak_epoch(&self) -> usize {
        let curve = self.mean_curve();
        let mut best = 0;
        for (i, &v) in curve.iter().enumerate() {
            if v > curve[best] {
                best = i;
            }
        }
        best + 1
    }
}

/// Per-subject accuracy of one conventional classifier.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselineReport {
    pub method: Method,
    pub subjects: Vec<u16>,
    pub accuracy: Vec<f64>,
}

impl BaselineReport {
    pub fn mean(&self) -> f64 {
        mean(&self.accuracy)
    }

    pub fn standard_error(&self) -> f64 {
        standard_error(&self.accuracy)
    }
}

/// Two-class confusion counts, `counts[truth][predicted]`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Confusion {
    pub counts: [[usize; 2]; 2],
}

impl Confusion {
    pub fn from_labels(truth: &[Label], predicted: &[Label]) -> Self {
        let mut c = Confusion::default();
        for (t, p) in truth.iter().zip(predicted) {
            c.counts[t.index()][p.index()] += 1;
        }
        c
    }

    pub fn total(&self) -> usize {
        self.counts.iter().flatten().sum()
    }

    pub fn accuracy(&self) -> f64 {
        (self.counts[0][0] + self.counts[1][1]) as f64 / self.total().max(1) as f64
    }
}

pub(crate) fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len().max(1) as f64
}

pub(crate) fn standard_error(v: &[f64]) -> f64 {
    if v.len() < 2 {
        return 0.0;
    }
    let m = mean(v);
    let n = v.len() as f64;
    let var = v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    libm::sqrt(var / n)
}
