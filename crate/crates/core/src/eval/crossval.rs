use std::collections::{BTreeMap, BTreeSet};

use super::{metrics, strip_for_fold, strip_target, stratified_kfold, EvalError, MetricsRecord, MseMode};
use crate::fuzzify::{fuzzify_kb, FuzzificationConfig, FuzzificationMethod, FuzzyDatatype};
use crate::kb::{complete, Closure, Concept, DatatypePredicate, KnowledgeBase};
use crate::learn::{learn, Algorithm, Hypothesis, LearnError, LearnParams, LearningTask, TrainingSet};
use crate::par::map_collect;
use crate::refine::RefinementContext;
use crate::Execution;

/// Parameter grid and protocol for cross-validation.
#[derive(Debug, Clone, PartialEq)]
pub struct GridConfig {
    pub thetas: Vec<f64>,
    pub partitions: Vec<usize>,
    pub methods: Vec<FuzzificationMethod>,
    /// Number of folds; 1 trains and tests on every example.
    pub folds: usize,
    pub seed: u64,
    pub algorithm: Algorithm,
    /// Shared learner settings; `theta` is taken from the grid.
    pub learn: LearnParams,
    /// Shared C-means settings; method and partitions come from the grid.
    pub fuzzify: FuzzificationConfig,
    /// Fit fuzzy datatypes on each training fold rather than once on all data.
    pub refit_per_fold: bool,
    pub mse: MseMode,
    pub execution: Execution,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            thetas: vec![0.34, 0.64, 0.94, 1.0],
            partitions: vec![3, 5, 7],
            methods: vec![FuzzificationMethod::Uniform, FuzzificationMethod::CMeans],
            folds: 5,
            seed: 0,
            algorithm: Algorithm::Boost,
            learn: LearnParams::default(),
            fuzzify: FuzzificationConfig::default(),
            refit_per_fold: true,
            mse: MseMode::Transformed,
            execution: Execution::default(),
        }
    }
}

impl GridConfig {
    pub fn validate(&self) -> Result<(), EvalError> {
        if self.thetas.is_empty() || self.partitions.is_empty() || self.methods.is_empty() {
            return Err(EvalError::InvalidGrid("thetas, partitions and methods must be nonempty".into()));
        }
        if self.folds == 0 {
            return Err(EvalError::InvalidGrid("fold count must be at least 1".into()));
        }
        for cell in self.cells() {
            self.learn_params(&cell).validate()?;
            self.fuzzify_config(&cell).validate()?;
        }
        Ok(())
    }

    /// Grid cells ordered by method, partitions, then theta.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for &method in &self.methods {
            for &partitions in &self.partitions {
                for &theta in &self.thetas {
                    out.push(Cell { method, partitions, theta });
                }
            }
        }
        out
    }

    pub fn learn_params(&self, cell: &Cell) -> LearnParams {
        LearnParams { theta: cell.theta, execution: self.execution, ..self.learn.clone() }
    }

    pub fn fuzzify_config(&self, cell: &Cell) -> FuzzificationConfig {
        FuzzificationConfig { method: cell.method, partitions: cell.partitions, ..self.fuzzify.clone() }
    }
}

/// One configuration of the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub method: FuzzificationMethod,
    pub partitions: usize,
    pub theta: f64,
}

/// Result of training on one fold and testing on its held-out examples.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldOutcome {
    pub metrics: MetricsRecord,
    pub hypothesis: Option<Hypothesis>,
    /// Datatypes available to the learner on this fold.
    pub datatypes: Vec<FuzzyDatatype>,
    /// Why learning failed, when it did.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub cell: Cell,
    pub folds: Vec<FoldOutcome>,
    pub average: MetricsRecord,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub target: String,
    pub algorithm: Algorithm,
    pub folds: usize,
    pub cells: Vec<CellResult>,
    /// Index into `cells` of the selected configuration.
    pub best: usize,
    /// Selected cell per fuzzification method.
    pub best_by_method: Vec<(FuzzificationMethod, usize)>,
}

impl EvalReport {
    pub fn winner(&self) -> &CellResult {
        &self.cells[self.best]
    }
}

/// A hypothesis with the fuzzy datatypes it was learned over.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    pub hypothesis: Hypothesis,
    pub datatypes: Vec<FuzzyDatatype>,
}

fn predicate_map(datatypes: &BTreeMap<String, Vec<FuzzyDatatype>>) -> BTreeMap<String, Vec<DatatypePredicate>> {
    datatypes
        .iter()
        .map(|(p, list)| (p.clone(), list.iter().map(|d| d.predicate.clone()).collect()))
        .collect()
}

fn fit(
    train_kb: &KnowledgeBase,
    closure: &Closure,
    target: &str,
    examples: &TrainingSet,
    algorithm: Algorithm,
    params: &LearnParams,
    datatypes: &BTreeMap<String, Vec<FuzzyDatatype>>,
) -> Result<Hypothesis, EvalError> {
    let mut ctx = RefinementContext::new(
        train_kb,
        closure,
        predicate_map(datatypes),
        params.max_depth,
        params.max_conjuncts,
    )?;
    ctx.exclude_atom(target);
    let task = LearningTask::new(closure, &ctx, target, examples)?;
    Ok(learn(&task, algorithm, params)?)
}

/// Trains on every example of `examples` using `kb` with the target
/// assertions removed.
pub fn train(
    kb: &KnowledgeBase,
    target: &str,
    examples: &TrainingSet,
    algorithm: Algorithm,
    params: &LearnParams,
    fuzzify: &FuzzificationConfig,
) -> Result<TrainedModel, EvalError> {
    params.validate()?;
    if !kb.concepts().contains(target) {
        return Err(LearnError::InvalidTrainingSet(format!("target `{target}` is not a declared class")).into());
    }
    let train_kb = strip_target(kb, target);
    let datatypes = fuzzify_kb(&train_kb, fuzzify)?;
    let closure = complete(&train_kb);
    let hypothesis = fit(&train_kb, &closure, target, examples, algorithm, params, &datatypes)?;
    Ok(TrainedModel { hypothesis, datatypes: datatypes.into_values().flatten().collect() })
}

struct FoldData {
    train_kb: KnowledgeBase,
    closure: Closure,
    train: TrainingSet,
    test: TrainingSet,
}

/// Runs the grid over stratified folds and selects the configuration with
/// the highest averaged fF1F1 (ties: lower θ, then fewer partitions).
pub fn crossval(
    kb: &KnowledgeBase,
    target: &str,
    examples: &TrainingSet,
    grid: &GridConfig,
) -> Result<EvalReport, EvalError> {
    grid.validate()?;
    if !kb.concepts().contains(target) {
        return Err(LearnError::InvalidTrainingSet(format!("target `{target}` is not a declared class")).into());
    }
    for a in examples.positives.iter().chain(&examples.non_positives) {
        if !kb.individuals().contains(a) {
            return Err(crate::kb::KbError::UnknownIndividual(a.clone()).into());
        }
    }
    let test_sets = stratified_kfold(examples, grid.folds, grid.seed)?;
    let folds: Vec<FoldData> = map_collect(grid.execution, &test_sets, |test| {
        let (train_kb, train) = if grid.folds == 1 {
            (strip_target(kb, target), examples.clone())
        } else {
            let held_out: BTreeSet<String> = test.positives.iter().chain(&test.non_positives).cloned().collect();
            let (train, _) = examples.split(&held_out);
            (strip_for_fold(kb, target, &held_out), train)
        };
        let closure = complete(&train_kb);
        FoldData { train_kb, closure, train, test: test.clone() }
    });

    let full_kb = strip_target(kb, target);
    let full_closure = complete(&full_kb);
    let cells = grid.cells();

    let mut global = BTreeMap::new();
    if !grid.refit_per_fold {
        for &method in &grid.methods {
            for &partitions in &grid.partitions {
                let cell = Cell { method, partitions, theta: grid.thetas[0] };
                global.insert((method, partitions), fuzzify_kb(&full_kb, &grid.fuzzify_config(&cell))?);
            }
        }
    }

    let jobs: Vec<(usize, usize)> = (0..cells.len()).flat_map(|c| (0..folds.len()).map(move |f| (c, f))).collect();
    let outcomes: Vec<Result<FoldOutcome, EvalError>> = map_collect(grid.execution, &jobs, |&(c, f)| {
        let cell = &cells[c];
        let fold = &folds[f];
        let datatypes = match global.get(&(cell.method, cell.partitions)) {
            Some(d) => d.clone(),
            None => fuzzify_kb(&fold.train_kb, &grid.fuzzify_config(cell))?,
        };
        let params = grid.learn_params(cell);
        let learned =
            fit(&fold.train_kb, &fold.closure, target, &fold.train, grid.algorithm, &params, &datatypes);
        let (hypothesis, error) = match learned {
            Ok(h) => (Some(h), None),
            Err(EvalError::Learn(e @ LearnError::LearningFailed(_))) => (None, Some(e.to_string())),
            Err(e) => return Err(e),
        };
        let (predictions, labels) = predict_fold(&full_closure, hypothesis.as_ref(), &fold.test);
        Ok(FoldOutcome {
            metrics: metrics(&predictions, &labels, grid.mse)?,
            hypothesis,
            datatypes: datatypes.into_values().flatten().collect(),
            error,
        })
    });

    let mut outcomes = outcomes.into_iter();
    let mut results = Vec::with_capacity(cells.len());
    for cell in cells {
        let fold_outcomes = outcomes.by_ref().take(folds.len()).collect::<Result<Vec<_>, _>>()?;
        let average = MetricsRecord::macro_average(&fold_outcomes.iter().map(|o| o.metrics).collect::<Vec<_>>());
        results.push(CellResult { cell, folds: fold_outcomes, average });
    }

    let best = select(&results, |_| true).expect("grid is nonempty");
    let best_by_method = grid
        .methods
        .iter()
        .filter_map(|&m| select(&results, |c| c.method == m).map(|i| (m, i)))
        .collect();
    Ok(EvalReport {
        target: target.to_string(),
        algorithm: grid.algorithm,
        folds: grid.folds,
        cells: results,
        best,
        best_by_method,
    })
}

fn predict_fold(closure: &Closure, h: Option<&Hypothesis>, test: &TrainingSet) -> (Vec<f64>, Vec<bool>) {
    let mut predictions = Vec::with_capacity(test.len());
    let mut labels = Vec::with_capacity(test.len());
    for (name, label) in test
        .positives
        .iter()
        .map(|a| (a, true))
        .chain(test.non_positives.iter().map(|a| (a, false)))
    {
        let i = closure.individual_index(name).expect("test individuals belong to the KB");
        predictions.push(h.map_or(0.0, |h| h.predict_index(closure, i)));
        labels.push(label);
    }
    (predictions, labels)
}

/// Highest averaged fF1F1 among cells passing `filter`; ties go to the
/// lower θ, then the lower partition count, then the earlier cell.
fn select(results: &[CellResult], filter: impl Fn(&Cell) -> bool) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, r) in results.iter().enumerate() {
        if !filter(&r.cell) {
            continue;
        }
        let better = match best {
            None => true,
            Some(b) => {
                let o = &results[b];
                r.average.ff1f1 > o.average.ff1f1
                    || (r.average.ff1f1 == o.average.ff1f1
                        && (r.cell.theta, r.cell.partitions) < (o.cell.theta, o.cell.partitions))
            }
        };
        if better {
            best = Some(i);
        }
    }
    best
}

/// Datatypes referenced by the bodies of `h`, in listing order.
pub(crate) fn used_datatypes<'a>(h: &Hypothesis, all: &'a [FuzzyDatatype]) -> Vec<&'a FuzzyDatatype> {
    let mut labels = BTreeSet::new();
    for body in h.bodies() {
        collect_labels(body, &mut labels);
    }
    all.iter().filter(|d| labels.contains(&d.predicate.label)).collect()
}

fn collect_labels(c: &Concept, out: &mut BTreeSet<String>) {
    c.for_each_datatype(&mut |_, d| {
        out.insert(d.label.clone());
    });
}
