//! Accuracy tables and JSON summaries of evaluation runs.

use serde::Serialize;
use somno_core::eval::{paired_ttest, BaselineReport, EvalReport, TTest};

/// Significance level shown next to each test; never used to filter.
pub const ALPHA: f64 = 0.05;

pub const ACCURACY_HEADER: &str = "method,variant,subject,repeat,epoch,accuracy\n";

/// One row per (subject, repeat, epoch); repeats and epochs are 1-based.
pub fn accuracy_rows(report: &EvalReport) -> String {
    let mut out = String::new();
    for (si, subject) in report.subjects.iter().enumerate() {
        for r in 0..report.repeats {
            for e in 1..=report.epochs {
                out.push_str(&format!(
                    "{},{},{subject},{},{e},{}\n",
                    report.method,
                    report.variant,
                    r + 1,
                    report.get(si, r, e)
                ));
            }
        }
    }
    out
}

/// Baselines have no repeats or epochs; those cells are left empty.
pub fn baseline_rows(report: &BaselineReport) -> String {
    report
        .subjects
        .iter()
        .zip(&report.accuracy)
        .map(|(s, a)| format!("{},bandpower,{s},,,{a}\n", report.method.name()))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub method: String,
    pub variant: String,
    pub subjects: Vec<u16>,
    pub repeats: usize,
    pub epochs: usize,
    pub mean: Vec<f64>,
    pub stderr: Vec<f64>,
    pub peak_epoch: usize,
    pub peak_mean: f64,
    pub subject_means_at_peak: Vec<f64>,
}

impl RunSummary {
    pub fn new(r: &EvalReport) -> Self {
        let peak = r.peak_epoch();
        RunSummary {
            method: r.method.clone(),
            variant: r.variant.clone(),
            subjects: r.subjects.clone(),
            repeats: r.repeats,
            epochs: r.epochs,
            mean: r.mean_curve(),
            stderr: r.stderr_curve(),
            peak_epoch: peak,
            peak_mean: r.mean_at(peak),
            subject_means_at_peak: r.subject_means(peak),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BaselineSummary {
    pub method: String,
    pub subjects: Vec<u16>,
    pub accuracy: Vec<f64>,
    pub mean: f64,
    pub stderr: f64,
}

impl BaselineSummary {
    pub fn new(r: &BaselineReport) -> Self {
        BaselineSummary {
            method: r.method.name().into(),
            subjects: r.subjects.clone(),
            accuracy: r.accuracy.clone(),
            mean: r.mean(),
            stderr: r.standard_error(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TTestSummary {
    pub a: String,
    pub b: String,
    pub mean_difference: f64,
    /// `null` when the differences are constant and nonzero.
    pub t: Option<f64>,
    pub df: usize,
    pub p: f64,
    pub alpha: f64,
    pub significant: bool,
}

impl TTestSummary {
    pub fn compare(a_name: &str, a: &[f64], b_name: &str, b: &[f64]) -> crate::Result<Self> {
        let TTest { t, df, p } = paired_ttest(a, b)?;
        let diff = a.iter().zip(b).map(|(x, y)| x - y).sum::<f64>() / a.len() as f64;
        Ok(TTestSummary {
            a: a_name.into(),
            b: b_name.into(),
            mean_difference: diff,
            t: t.is_finite().then_some(t),
            df,
            p,
            alpha: ALPHA,
            significant: p < ALPHA,
        })
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Summary {
    pub runs: Vec<RunSummary>,
    pub baselines: Vec<BaselineSummary>,
    pub ttests: Vec<TTestSummary>,
}

impl Summary {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("summary serializes");
        s.push('\n');
        s
    }
}
