//! Learning weighted fuzzy concept inclusions from crisp EL knowledge bases.
//!
//! The crate is organised bottom-up:
//!
//! - [`kb`]: concepts, axioms, knowledge bases, the completion-based closure
//!   and degree evaluation of fuzzy EL(D) concepts.
//! - [`fuzzify`]: construction of fuzzy datatypes over numeric data
//!   properties (equal-width partitions or 1-D fuzzy C-means).
//! - [`refine`]: the downward refinement operator used by the rule search.
//! - [`learn`]: rule induction (single-axiom search, the sequential covering
//!   weak learner, real-valued boosting and the FOIL-style baseline).
//! - [`eval`]: effectiveness measures, stratified folds and the
//!   cross-validation grid.
//! - [`io`]: text formats for knowledge bases, tabular datasets, examples,
//!   hypotheses and reports.
//!
//! Data-parallel loops (candidate scoring, fold/grid evaluation) use rayon
//! when the `parallel` feature is enabled and fall back to plain iterators
//! otherwise. See [`Execution`].

pub mod eval;
pub mod fuzzify;
pub mod io;
pub mod kb;
pub mod learn;
mod par;
pub mod refine;

pub use par::Execution;
