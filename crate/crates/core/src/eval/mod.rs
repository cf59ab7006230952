//! Effectiveness measures, stratified cross-validation and grid selection.

mod crossval;
mod folds;
mod metrics;

use thiserror::Error;

use crate::fuzzify::FuzzifyError;
use crate::kb::KbError;
use crate::learn::LearnError;

pub(crate) use crossval::used_datatypes;
pub use crossval::{crossval, train, Cell, CellResult, EvalReport, FoldOutcome, GridConfig, TrainedModel};
pub use folds::{strip_for_fold, strip_target, stratified_kfold};
pub use metrics::{metrics, MetricsRecord, MseMode};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("empty test set")]
    EmptyTestSet,
    #[error("{folds} folds need at least {folds} positives, got {positives}")]
    TooFewPositives { folds: usize, positives: usize },
    #[error(transparent)]
    Learn(#[from] LearnError),
    #[error(transparent)]
    Fuzzify(#[from] FuzzifyError),
    #[error(transparent)]
    Kb(#[from] KbError),
}
