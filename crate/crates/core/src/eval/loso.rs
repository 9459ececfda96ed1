use alloc::format;
use alloc::vec::Vec;

use crate::data::{EegSample, LabeledSet};
use crate::rng::derive_seed;
use crate::{Error, Result};

/// One train/test partition: a held-out subject within one repeat.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldSpec {
    pub test_subject: u16,
    pub train_subjects: Vec<u16>,
    pub repeat_index: usize,
    /// Derived from the master seed and the fold identity only.
    pub seed: u64,
}

impl FoldSpec {
    /// Splits `set` into (train, test) samples, each in dataset order.
    pub fn partition<'a>(&self, set: &'a LabeledSet) -> Result<(Vec<&'a EegSample>, Vec<&'a EegSample>)> {
        if self.train_subjects.contains(&self.test_subject) {
            return Err(Error::Split(format!(
                "subject {} is both training and test",
                self.test_subject
            )));
        }
        let mut train = Vec::new();
        let mut test = Vec::new();
        for s in &set.samples {
            if s.subject_id == self.test_subject {
                test.push(s);
            } else if self.train_subjects.contains(&s.subject_id) {
                train.push(s);
            }
        }
        if test.is_empty() || train.is_empty() {
            return Err(Error::Split(format!(
                "fold for subject {} has {} training and {} test samples",
                self.test_subject,
                train.len(),
                test.len()
            )));
        }
        Ok((train, test))
    }
}

/// One fold per subject per repeat, repeat-major, subjects ascending.
pub fn loso_split(set: &LabeledSet, repeats: usize, master_seed: u64) -> Result<Vec<FoldSpec>> {
    let subjects = set.subjects();
    if subjects.len() < 2 {
        return Err(Error::Split(format!(
            "leave-one-subject-out needs at least 2 subjects, found {}",
            subjects.len()
        )));
    }
    if repeats == 0 {
        return Err(Error::Argument("repeats must be at least 1".into()));
    }
    let mut folds = Vec::with_capacity(repeats * subjects.len());
    for r in 0..repeats {
        for &test in &subjects {
            folds.push(FoldSpec {
                test_subject: test,
                train_subjects: subjects.iter().copied().filter(|&s| s != test).collect(),
                repeat_index: r,
                seed: derive_seed(master_seed, &[r as u64, test as u64]),
            });
        }
    }
    Ok(folds)
}
