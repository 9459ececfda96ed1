//! Leave-one-subject-out evaluation, baselines comparison and paired tests.

mod experiment;
mod loso;
mod report;
mod special;
mod ttest;

pub use experiment::{
    band_feature_matrix, fold_seeds, run_ablations, run_baseline_experiment, run_baseline_on_features,
    run_cnn_experiment, run_cnn_fold,
};
pub use loso::{loso_split, FoldSpec};
pub use report::{BaselineReport, Confusion, EvalReport};
pub use special::{ln_beta, regularized_incomplete_beta, student_t_two_tailed};
pub use ttest::{paired_ttest, TTest};
