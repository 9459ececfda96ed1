//! Fold-level parallelism. Each fold carries its own seeds, so results do not
//! depend on scheduling or on the number of workers.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use somno_core::data::LabeledSet;
use somno_core::eval::{loso_split, run_cnn_fold, EvalReport, FoldSpec};
use somno_core::model::{ModelConfig, TrainConfig, Variant};

use crate::Result;

/// Runs `task` over `items` on up to `jobs` threads; output keeps input order.
pub fn map_jobs<T, R, F>(items: &[T], jobs: usize, task: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let jobs = jobs.clamp(1, items.len().max(1));
    if jobs == 1 {
        return items.iter().map(&task).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<R>>> = Mutex::new(items.iter().map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(item) = items.get(i) else { break };
                let r = task(item);
                slots.lock().expect("no worker panicked")[i] = Some(r);
            });
        }
    });
    slots
        .into_inner()
        .expect("no worker panicked")
        .into_iter()
        .map(|r| r.expect("every slot filled"))
        .collect()
}

/// Repeated leave-one-subject-out evaluation of one variant, folds spread
/// over `jobs` threads. Identical to the sequential harness for any `jobs`.
pub fn cnn_experiment(
    set: &LabeledSet,
    model: &ModelConfig,
    train: &TrainConfig,
    repeats: usize,
    master_seed: u64,
    jobs: usize,
) -> Result<EvalReport> {
    model.validate()?;
    let folds = loso_split(set, repeats, master_seed)?;
    let curves = map_jobs(&folds, jobs, |f| run_cnn_fold(set, f, model, train));
    let results = folds
        .into_iter()
        .zip(curves)
        .map(|(f, c)| c.map(|c| (f, c)))
        .collect::<Result<Vec<(FoldSpec, Vec<f64>)>, _>>()?;
    Ok(EvalReport::assemble(
        "cnn",
        &model.variant.name(),
        set.subjects(),
        repeats,
        train.epochs,
        &results,
    )?)
}

pub fn ablations(
    set: &LabeledSet,
    variants: &[Variant],
    model: &ModelConfig,
    train: &TrainConfig,
    repeats: usize,
    master_seed: u64,
    jobs: usize,
) -> Result<Vec<EvalReport>> {
    variants
        .iter()
        .map(|&v| cnn_experiment(set, &model.with_variant(v), train, repeats, master_seed, jobs))
        .collect()
}
