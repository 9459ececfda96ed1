//! Labeled samples, reaction-time labeling, session balancing and the
//! synthetic EEG generator.

mod balance;
mod labeling;
mod synth;

pub use balance::{filter_and_balance, filter_and_balance_with, BalanceConfig, SessionSelection};
pub use labeling::{
    compute_alert_rt, compute_global_rt, label_session, label_trial, percentile, LabeledSession,
    LabeledTrial, Session, Trial, TrialLabel, ALERT_FACTOR, ALERT_PERCENTILE, DROWSY_FACTOR, GLOBAL_WINDOW_S,
};
pub use synth::{synth_generate, EventAnnotation, EventKind, SynthSet, SynthSpec};

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::{Error, Result, SAMPLE_LEN};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum Label {
    Alert = 0,
    Drowsy = 1,
}

impl Label {
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Result<Self> {
        match i {
            0 => Ok(Label::Alert),
            1 => Ok(Label::Drowsy),
            other => Err(Error::Label(other)),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Label::Alert => "alert",
            Label::Drowsy => "drowsy",
        }
    }
}

/// One 3 s single-channel trace in microvolts.
#[derive(Debug, Clone, PartialEq)]
pub struct EegSample {
    pub values: Vec<f32>,
    pub subject_id: u16,
    pub label: Label,
}

impl EegSample {
    pub fn new(values: Vec<f32>, subject_id: u16, label: Label) -> Result<Self> {
        if values.len() != SAMPLE_LEN {
            return Err(Error::dim("sample length", SAMPLE_LEN, values.len()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Data(format!("sample value {i} is not finite")));
        }
        Ok(EegSample {
            values,
            subject_id,
            label,
        })
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(|&v| v as f64).collect()
    }
}

/// Ordered collection of samples from one or more subjects.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LabeledSet {
    pub samples: Vec<EegSample>,
}

impl LabeledSet {
    pub fn new(samples: Vec<EegSample>) -> Self {
        LabeledSet { samples }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Distinct subject ids in ascending order.
    pub fn subjects(&self) -> Vec<u16> {
        let mut ids: Vec<u16> = self.samples.iter().map(|s| s.subject_id).collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    /// Positions of one subject's samples, in file order.
    pub fn subject_indices(&self, subject: u16) -> Vec<usize> {
        self.samples
            .iter()
            .enumerate()
            .filter(|(_, s)| s.subject_id == subject)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn subject_samples(&self, subject: u16) -> Vec<&EegSample> {
        self.samples.iter().filter(|s| s.subject_id == subject).collect()
    }

    /// `[alert, drowsy]` counts.
    pub fn class_counts(&self) -> [usize; 2] {
        let mut c = [0; 2];
        for s in &self.samples {
            c[s.label.index()] += 1;
        }
        c
    }

    /// `[alert, drowsy]` counts per subject.
    pub fn per_subject_counts(&self) -> BTreeMap<u16, [usize; 2]> {
        let mut m = BTreeMap::new();
        for s in &self.samples {
            m.entry(s.subject_id).or_insert([0; 2])[s.label.index()] += 1;
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn sample_length_is_enforced() {
        assert!(EegSample::new(vec![0.0; 383], 1, Label::Alert).is_err());
        assert!(EegSample::new(vec![0.0; 384], 1, Label::Alert).is_ok());
        let mut v = vec![0.0; 384];
        v[3] = f32::NAN;
        assert!(EegSample::new(v, 1, Label::Alert).is_err());
    }

    #[test]
    fn counts_and_subjects() {
        let mk = |s, l| EegSample::new(vec![0.0; 384], s, l).unwrap();
        let set = LabeledSet::new(vec![
            mk(3, Label::Alert),
            mk(1, Label::Drowsy),
            mk(3, Label::Drowsy),
            mk(3, Label::Drowsy),
        ]);
        assert_eq!(set.subjects(), vec![1, 3]);
        assert_eq!(set.subject_indices(3), vec![0, 2, 3]);
        assert_eq!(set.class_counts(), [1, 3]);
        assert_eq!(set.per_subject_counts()[&3], [1, 2]);
    }
}
