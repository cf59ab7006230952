//! `feb`: learn boosted fuzzy concept inclusions from EL knowledge bases.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use feb_core::eval::{self, GridConfig, MseMode};
use feb_core::fuzzify::{fuzzify_kb, FuzzificationConfig, FuzzificationMethod};
use feb_core::io;
use feb_core::kb::{complete, KnowledgeBase};
use feb_core::learn::{Algorithm, LearnParams, TrainingSet};
use feb_core::Execution;

#[derive(Parser)]
#[command(name = "feb", version, about = "Boosted fuzzy EL rule learning")]
struct Cli {
    /// Run every loop on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert a CSV table (last column = class) into a KB file.
    Convert(ConvertArgs),
    /// Print the fuzzy datatypes built for every numeric data property.
    Fuzzify(FuzzifyArgs),
    /// Learn one hypothesis on all examples.
    Learn(LearnArgs),
    /// Stratified cross-validation over the parameter grid.
    Crossval(CrossvalArgs),
    /// Degrees predicted by a hypothesis.
    Predict(PredictArgs),
}

#[derive(Args)]
struct ConvertArgs {
    table: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    /// Also write a `pos`/`neg` examples file for this class.
    #[arg(long, requires = "examples")]
    target: Option<String>,
    #[arg(long, requires = "target")]
    examples: Option<PathBuf>,
}

#[derive(Args)]
struct FuzzArgs {
    #[arg(long, default_value = "uniform")]
    method: FuzzificationMethod,
    #[arg(long, default_value_t = 3)]
    partitions: usize,
    /// C-means fuzzifier.
    #[arg(long, default_value_t = 2.0)]
    fuzzifier: f64,
    /// C-means stop threshold.
    #[arg(long, default_value_t = 0.05)]
    epsilon: f64,
    #[arg(long, default_value_t = 100)]
    max_iter: usize,
}

impl FuzzArgs {
    fn config(&self, seed: u64) -> FuzzificationConfig {
        FuzzificationConfig {
            method: self.method,
            partitions: self.partitions,
            fuzzifier: self.fuzzifier,
            epsilon: self.epsilon,
            max_iter: self.max_iter,
            seed,
        }
    }
}

#[derive(Args)]
struct FuzzifyArgs {
    #[arg(long)]
    kb: PathBuf,
    #[command(flatten)]
    fuzz: FuzzArgs,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct Problem {
    #[arg(long)]
    kb: PathBuf,
    #[arg(long)]
    target: String,
    /// `pos`/`neg` file; defaults to asserted instances of the target as
    /// positives and every other individual as non-positive.
    #[arg(long)]
    examples: Option<PathBuf>,
}

#[derive(Args)]
struct LearnerArgs {
    #[arg(long, default_value_t = 1.0)]
    eta: f64,
    #[arg(long, default_value_t = 1)]
    depth: usize,
    #[arg(long, default_value_t = 5)]
    conjuncts: usize,
    #[arg(long, default_value_t = 10)]
    iterations: usize,
    #[arg(long, default_value = "boost")]
    algorithm: Algorithm,
    #[arg(long, default_value_t = 0)]
    backtrack_k: usize,
    /// Use |h| in the weak-learner error.
    #[arg(long)]
    error_magnitude: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl LearnerArgs {
    fn params(&self, theta: f64, execution: Execution) -> LearnParams {
        LearnParams {
            theta,
            eta: self.eta,
            iterations: self.iterations,
            max_depth: self.depth,
            max_conjuncts: self.conjuncts,
            backtrack_k: self.backtrack_k,
            error_magnitude: self.error_magnitude,
            execution,
        }
    }
}

#[derive(Args)]
struct LearnArgs {
    #[command(flatten)]
    problem: Problem,
    #[command(flatten)]
    learner: LearnerArgs,
    #[arg(long, default_value_t = 0.94)]
    theta: f64,
    #[command(flatten)]
    fuzz: FuzzArgs,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CrossvalArgs {
    #[command(flatten)]
    problem: Problem,
    #[command(flatten)]
    learner: LearnerArgs,
    #[arg(long, default_value_t = 5)]
    folds: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [0.34, 0.64, 0.94, 1.0])]
    thetas: Vec<f64>,
    #[arg(long = "partitions", value_delimiter = ',', default_values_t = [3, 5, 7])]
    partition_counts: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [FuzzificationMethod::Uniform, FuzzificationMethod::CMeans])]
    methods: Vec<FuzzificationMethod>,
    /// Fit fuzzy datatypes once on all data instead of per training fold.
    #[arg(long)]
    global_fuzzify: bool,
    /// Report MSE on raw degrees against 0/1 labels.
    #[arg(long)]
    raw_mse: bool,
    #[arg(long, default_value_t = 2.0)]
    fuzzifier: f64,
    #[arg(long, default_value_t = 0.05)]
    epsilon: f64,
    #[arg(long, default_value_t = 100)]
    max_iter: usize,
    /// Directory for report.txt, report.kv and the selected hypotheses.
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct PredictArgs {
    #[arg(long)]
    kb: PathBuf,
    #[arg(long)]
    hypothesis: PathBuf,
    /// Individuals to score (comma separated); all individuals by default.
    #[arg(long, value_delimiter = ',')]
    individuals: Vec<String>,
}

fn read(path: &Path, what: &str) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {what} file `{}`", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).with_context(|| format!("cannot create directory `{}`", parent.display()))?;
    }
    fs::write(path, text).with_context(|| format!("cannot write `{}`", path.display()))
}

fn load_kb(path: &Path) -> Result<KnowledgeBase> {
    io::parse_kb(&read(path, "KB")?).with_context(|| format!("invalid KB file `{}`", path.display()))
}

fn load_problem(p: &Problem) -> Result<(KnowledgeBase, TrainingSet)> {
    let kb = load_kb(&p.kb)?;
    if !kb.concepts().contains(&p.target) {
        bail!("invalid config: target `{}` is not a class of `{}`", p.target, p.kb.display());
    }
    let examples = match &p.examples {
        Some(path) => io::parse_examples(&read(path, "examples")?)
            .with_context(|| format!("invalid examples file `{}`", path.display()))?,
        None => TrainingSet::from_closure(&complete(&kb), &p.target)
            .with_context(|| format!("no examples for target `{}`", p.target))?,
    };
    Ok((kb, examples))
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(path) => write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn convert(args: &ConvertArgs) -> Result<()> {
    let table = io::convert_table(&read(&args.table, "table")?)
        .with_context(|| format!("cannot convert `{}`", args.table.display()))?;
    write(&args.output, &io::serialize_kb(&table.kb))?;
    if let (Some(target), Some(path)) = (&args.target, &args.examples) {
        if !table.classes.contains_key(target) {
            bail!("invalid config: `{target}` is not a class of the table");
        }
        write(path, &io::serialize_examples(&table.examples_for(target)?))?;
    }
    eprintln!(
        "{} individuals, {} attributes, {} classes",
        table.classes.values().map(|m| m.len()).sum::<usize>(),
        table.attributes.len(),
        table.class_count()
    );
    Ok(())
}

fn fuzzify(args: &FuzzifyArgs) -> Result<()> {
    let kb = load_kb(&args.kb)?;
    let cfg = args.fuzz.config(0);
    cfg.validate().context("invalid config")?;
    let mut out = format!("# Fuzzy datatypes ({})\n", cfg.method.title());
    for list in fuzzify_kb(&kb, &cfg)?.values() {
        for d in list {
            out.push_str(&d.listing_line());
            out.push('\n');
        }
    }
    emit(args.output.as_deref(), &out)
}

fn learn(args: &LearnArgs, execution: Execution) -> Result<()> {
    let (kb, examples) = load_problem(&args.problem)?;
    let params = args.learner.params(args.theta, execution);
    params.validate().context("invalid config")?;
    let cfg = args.fuzz.config(args.learner.seed);
    cfg.validate().context("invalid config")?;
    let model = eval::train(&kb, &args.problem.target, &examples, args.learner.algorithm, &params, &cfg)?;
    emit(args.output.as_deref(), &io::serialize_hypothesis(&model.hypothesis, &model.datatypes))
}

fn crossval(args: &CrossvalArgs, execution: Execution) -> Result<()> {
    let (kb, examples) = load_problem(&args.problem)?;
    let grid = GridConfig {
        thetas: args.thetas.clone(),
        partitions: args.partition_counts.clone(),
        methods: args.methods.clone(),
        folds: args.folds,
        seed: args.learner.seed,
        algorithm: args.learner.algorithm,
        learn: args.learner.params(args.thetas.first().copied().unwrap_or(0.0), execution),
        fuzzify: FuzzificationConfig {
            fuzzifier: args.fuzzifier,
            epsilon: args.epsilon,
            max_iter: args.max_iter,
            seed: args.learner.seed,
            ..FuzzificationConfig::default()
        },
        refit_per_fold: !args.global_fuzzify,
        mse: if args.raw_mse { MseMode::Raw } else { MseMode::Transformed },
        execution,
    };
    grid.validate().context("invalid config")?;
    let report = eval::crossval(&kb, &args.problem.target, &examples, &grid)?;
    let table = io::report_table(&report);
    write(&args.out_dir.join("report.txt"), &table)?;
    write(&args.out_dir.join("report.kv"), &io::report_kv(&report))?;
    for (f, fold) in report.winner().folds.iter().enumerate() {
        let path = args.out_dir.join(format!("hypothesis_fold{}.txt", f + 1));
        let text = match &fold.hypothesis {
            Some(h) => io::serialize_hypothesis(h, &fold.datatypes),
            None => format!("# no hypothesis: {}\n", fold.error.as_deref().unwrap_or("learning failed")),
        };
        write(&path, &text)?;
    }
    print!("{table}");
    Ok(())
}

fn predict(args: &PredictArgs) -> Result<()> {
    let kb = load_kb(&args.kb)?;
    let model = io::parse_hypothesis(&read(&args.hypothesis, "hypothesis")?)
        .with_context(|| format!("invalid hypothesis file `{}`", args.hypothesis.display()))?;
    let closure = complete(&kb);
    let names: Vec<String> = if args.individuals.is_empty() {
        closure.individuals().to_vec()
    } else {
        args.individuals.clone()
    };
    let mut out = String::new();
    for name in &names {
        let d = closure.bed_hypothesis(&model.hypothesis, name)?;
        out.push_str(&format!("{name} {d}\n"));
    }
    print!("{out}");
    Ok(())
}

#[cfg(feature = "parallel")]
fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("FEB_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().with_context(|| format!("invalid config: FEB_THREADS=`{raw}`"))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("cannot configure thread pool")?;
    }
    Ok(())
}

#[cfg(not(feature = "parallel"))]
fn configure_threads() -> Result<()> {
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    configure_threads()?;
    let execution = if cli.sequential { Execution::Sequential } else { Execution::Parallel };
    match &cli.command {
        Command::Convert(a) => convert(a),
        Command::Fuzzify(a) => fuzzify(a),
        Command::Learn(a) => learn(a, execution),
        Command::Crossval(a) => crossval(a, execution),
        Command::Predict(a) => predict(a),
    }
}
