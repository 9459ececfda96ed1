//! Session filtering and class balancing.
//!
//! 1. Sessions with fewer than `min_per_class` samples of either class are dropped.
//! 2. Each subject keeps one surviving session.
//! 3. The majority class of that session is trimmed to the minority count,
//!    keeping the shortest-RT alert or longest-RT drowsy trials.

use alloc::vec::Vec;

use super::{EegSample, Label, LabeledSession, LabeledSet, LabeledTrial};
use crate::Result;

/// How step 2 picks a subject's session.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SessionSelection {
    /// Largest `min(alert, drowsy)`; ties go to the higher min/max ratio, then
    /// to file order.
    LargestBalanced,
    /// Highest `min/max` ratio; ties go to the larger total, then file order.
    Ratio,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BalanceConfig {
    pub min_per_class: usize,
    pub selection: SessionSelection,
}

impl Default for BalanceConfig {
    fn default() -> Self {
        BalanceConfig {
            min_per_class: 50,
            selection: SessionSelection::LargestBalanced,
        }
    }
}

pub fn filter_and_balance(sessions: &[LabeledSession]) -> Result<LabeledSet> {
    filter_and_balance_with(sessions, &BalanceConfig::default())
}

/// Returns the balanced set, subjects in order of first appearance. An empty
/// set is returned when no session survives.
pub fn filter_and_balance_with(sessions: &[LabeledSession], config: &BalanceConfig) -> Result<LabeledSet> {
    let mut subjects: Vec<u16> = Vec::new();
    for s in sessions {
        if !subjects.contains(&s.subject_id) {
            subjects.push(s.subject_id);
        }
    }
    let mut out = Vec::new();
    for subject in subjects {
        let candidates = sessions.iter().filter(|s| s.subject_id == subject).filter(|s| {
            let [a, d] = s.counts();
            a >= config.min_per_class && d >= config.min_per_class
        });
        let mut best: Option<&LabeledSession> = None;
        for s in candidates {
            if best.is_none_or(|b| better(s.counts(), b.counts(), config.selection)) {
                best = Some(s);
            }
        }
        if let Some(session) = best {
            for t in balance_session(session) {
                out.push(EegSample::new(t.window.clone(), subject, t.label)?);
            }
        }
    }
    Ok(LabeledSet::new(out))
}

/// Strictly better than the incumbent (so earlier sessions win full ties).
fn better(c: [usize; 2], incumbent: [usize; 2], rule: SessionSelection) -> bool {
    let min = |c: [usize; 2]| c[0].min(c[1]);
    let total = |c: [usize; 2]| c[0] + c[1];
    // Compare min/max ratios by cross-multiplication.
    let ratio_cmp = |a: [usize; 2], b: [usize; 2]| {
        let (amin, amax) = (a[0].min(a[1]), a[0].max(a[1]));
        let (bmin, bmax) = (b[0].min(b[1]), b[0].max(b[1]));
        (amin * bmax).cmp(&(bmin * amax))
    };
    let key = match rule {
        SessionSelection::LargestBalanced => min(c).cmp(&min(incumbent)).then(ratio_cmp(c, incumbent)),
        SessionSelection::Ratio => ratio_cmp(c, incumbent).then(total(c).cmp(&total(incumbent))),
    };
    key.is_gt()
}

/// Trims the majority class, preserving the original trial order.
fn balance_session(session: &LabeledSession) -> Vec<&LabeledTrial> {
    let [a, d] = session.counts();
    let keep = a.min(d);
    let mut keep_flags = alloc::vec![true; session.trials.len()];
    if a != d {
        let majority = if a > d { Label::Alert } else { Label::Drowsy };
        let mut idx: Vec<usize> = (0..session.trials.len())
            .filter(|&i| session.trials[i].label == majority)
            .collect();
        // Stable: equal RTs keep file order.
        match majority {
            Label::Alert => {
                idx.sort_by(|&i, &j| session.trials[i].local_rt.total_cmp(&session.trials[j].local_rt))
            }
            Label::Drowsy => {
                idx.sort_by(|&i, &j| session.trials[j].local_rt.total_cmp(&session.trials[i].local_rt))
            }
        }
        for &i in &idx[keep..] {
            keep_flags[i] = false;
        }
    }
    session
        .trials
        .iter()
        .zip(keep_flags)
        .filter_map(|(t, k)| k.then_some(t))
        .collect()
}
