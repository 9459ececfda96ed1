//! Reaction-time labeling of lane-deviation trials.
//!
//! Each trial carries its local RT (deviation onset to steering response).
//! The session's alert-RT is the 5th percentile of local RTs; the global RT of
//! a trial averages local RTs over the preceding 90 s. A trial is alert when
//! both RTs are under 1.5 × alert-RT and drowsy when both exceed 2.5 ×
//! alert-RT; anything in between is excluded.

use alloc::format;
use alloc::vec::Vec;

use super::Label;
use crate::{Error, Result, SAMPLE_LEN};

pub const ALERT_PERCENTILE: f64 = 5.0;
pub const GLOBAL_WINDOW_S: f64 = 90.0;
pub const ALERT_FACTOR: f64 = 1.5;
pub const DROWSY_FACTOR: f64 = 2.5;

#[derive(Debug, Clone, PartialEq)]
pub struct Trial {
    /// Seconds from session start.
    pub onset_s: f64,
    /// Seconds from deviation onset to response.
    pub local_rt: f64,
    /// The 3 s of Oz signal preceding onset.
    pub window: Vec<f32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Session {
    pub subject_id: u16,
    /// Sorted by onset.
    pub trials: Vec<Trial>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrialLabel {
    Alert,
    Drowsy,
    Excluded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledTrial {
    pub label: Label,
    pub local_rt: f64,
    pub window: Vec<f32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSession {
    pub subject_id: u16,
    pub trials: Vec<LabeledTrial>,
}

impl LabeledSession {
    /// `[alert, drowsy]`
    pub fn counts(&self) -> [usize; 2] {
        let mut c = [0; 2];
        for t in &self.trials {
            c[t.label.index()] += 1;
        }
        c
    }
}

/// Percentile `p` (0–100) with linear interpolation at index `p/100·(N−1)`
/// of the sorted values.
pub fn percentile(values: &[f64], p: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Data("percentile of an empty set".into()));
    }
    if !(0.0..=100.0).contains(&p) {
        return Err(Error::Argument(format!("percentile {p} outside [0, 100]")));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let pos = p / 100.0 * (sorted.len() - 1) as f64;
    let lo = libm::floor(pos) as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    let frac = pos - lo as f64;
    Ok(sorted[lo] + frac * (sorted[hi] - sorted[lo]))
}

pub fn compute_alert_rt(session: &Session) -> Result<f64> {
    if session.trials.is_empty() {
        return Err(Error::Data(format!(
            "session of subject {} has no trials",
            session.subject_id
        )));
    }
    let rts: Vec<f64> = session.trials.iter().map(|t| t.local_rt).collect();
    percentile(&rts, ALERT_PERCENTILE)
}

/// Mean local RT over the trials whose onset lies in `(onset − 90 s, onset]`,
/// which always includes trial `index` itself. A trial exactly 90 s earlier
/// is outside the window.
pub fn compute_global_rt(session: &Session, index: usize) -> Result<f64> {
    let current = session.trials.get(index).ok_or(Error::Index {
        index,
        len: session.trials.len(),
    })?;
    let t = current.onset_s;
    let mut sum = current.local_rt;
    let mut count = 1usize;
    for (j, other) in session.trials.iter().enumerate() {
        if j != index && other.onset_s > t - GLOBAL_WINDOW_S && other.onset_s <= t {
            sum += other.local_rt;
            count += 1;
        }
    }
    Ok(sum / count as f64)
}

pub fn label_trial(local_rt: f64, global_rt: f64, alert_rt: f64) -> Result<TrialLabel> {
    if !(local_rt > 0.0 && global_rt > 0.0 && alert_rt > 0.0) {
        return Err(Error::Argument(format!(
            "reaction times must be positive (local {local_rt}, global {global_rt}, alert {alert_rt})"
        )));
    }
    let lo = ALERT_FACTOR * alert_rt;
    let hi = DROWSY_FACTOR * alert_rt;
    Ok(if local_rt < lo && global_rt < lo {
        TrialLabel::Alert
    } else if local_rt > hi && global_rt > hi {
        TrialLabel::Drowsy
    } else {
        TrialLabel::Excluded
    })
}

/// Labels every trial of a session and drops the excluded ones.
pub fn label_session(session: &Session) -> Result<LabeledSession> {
    if session.trials.windows(2).any(|w| w[1].onset_s < w[0].onset_s) {
        return Err(Error::Data(format!(
            "trials of subject {} are not sorted by onset",
            session.subject_id
        )));
    }
    if let Some(t) = session.trials.iter().find(|t| t.window.len() != SAMPLE_LEN) {
        return Err(Error::dim("trial window", SAMPLE_LEN, t.window.len()));
    }
    let alert_rt = compute_alert_rt(session)?;
    let mut trials = Vec::new();
    for (i, trial) in session.trials.iter().enumerate() {
        let global = compute_global_rt(session, i)?;
        let label = match label_trial(trial.local_rt, global, alert_rt)? {
            TrialLabel::Alert => Label::Alert,
            TrialLabel::Drowsy => Label::Drowsy,
            TrialLabel::Excluded => continue,
        };
        trials.push(LabeledTrial {
            label,
            local_rt: trial.local_rt,
            window: trial.window.clone(),
        });
    }
    Ok(LabeledSession {
        subject_id: session.subject_id,
        trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn session(trials: &[(f64, f64)]) -> Session {
        Session {
            subject_id: 1,
            trials: trials
                .iter()
                .map(|&(onset_s, local_rt)| Trial {
                    onset_s,
                    local_rt,
                    window: vec![0.0; SAMPLE_LEN],
                })
                .collect(),
        }
    }

    #[test]
    fn percentile_of_one_to_hundred() {
        let v: Vec<f64> = (1..=100).map(f64::from).collect();
        assert!((percentile(&v, 5.0).unwrap() - 5.95).abs() < 1e-12);
    }

    #[test]
    fn alert_rt_edge_cases() {
        assert_eq!(compute_alert_rt(&session(&[(0.0, 0.8)])).unwrap(), 0.8);
        let s = session(&[(0.0, 1.2), (10.0, 1.2), (20.0, 1.2)]);
        assert_eq!(compute_alert_rt(&s).unwrap(), 1.2);
        assert!(compute_alert_rt(&session(&[])).is_err());
    }

    #[test]
    fn global_rt_window() {
        let s = session(&[(0.0, 1.0), (50.0, 3.0)]);
        assert_eq!(compute_global_rt(&s, 0).unwrap(), 1.0);
        assert_eq!(compute_global_rt(&s, 1).unwrap(), 2.0);
        // Exactly 90 s earlier is outside; just inside counts.
        let s = session(&[(0.0, 5.0), (90.0, 1.0)]);
        assert_eq!(compute_global_rt(&s, 1).unwrap(), 1.0);
        let s = session(&[(0.0, 5.0), (89.5, 1.0)]);
        assert_eq!(compute_global_rt(&s, 1).unwrap(), 3.0);
    }

    #[test]
    fn threshold_rule() {
        assert_eq!(label_trial(1.0, 1.0, 1.0).unwrap(), TrialLabel::Alert);
        assert_eq!(label_trial(3.0, 3.0, 1.0).unwrap(), TrialLabel::Drowsy);
        assert_eq!(label_trial(2.0, 1.0, 1.0).unwrap(), TrialLabel::Excluded);
        assert_eq!(label_trial(1.0, 3.0, 1.0).unwrap(), TrialLabel::Excluded);
        assert!(label_trial(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn labeling_drops_excluded_trials() {
        // alert-RT of these RTs is close to 0.5
        let s = session(&[
            (0.0, 0.5),
            (100.0, 0.5),
            (200.0, 0.5),
            (300.0, 1.0),
            (400.0, 2.0),
            (401.0, 2.0),
        ]);
        let l = label_session(&s).unwrap();
        assert_eq!(l.counts(), [3, 2]);
    }

    #[test]
    fn unsorted_session_rejected() {
        assert!(label_session(&session(&[(5.0, 1.0), (1.0, 1.0)])).is_err());
    }
}
