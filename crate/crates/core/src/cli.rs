//! Command-line orchestration: induction, baselines, evaluation, heatmaps
//! and tree export.
//!
//! Matrix and gold corpora are aligned by record order; when a gold sentence
//! carries an id it must equal the matrix id.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::constituency::{branching_baseline, mart_parse, parse_bracketed, Branching, ConstTree};
use crate::dep::{self, chain_baseline, ChainDirection, Decoder, DepTree, RootMode, ScoreDirection, ScoreOptions};
use crate::error::Error;
use crate::heatmap::render_heatmap;
use crate::matrix::{ImpactMatrix, MatrixCorpus, Metric, UnitKind};
use crate::metrics::{self, BracketCounts, BracketOptions, Counts, EvalReport};
use crate::pkm::{load_corpus, save_corpus};
use crate::rng::random_matrix_with_units;
use crate::treebank::{
    read_conllu, read_ptb, read_scidtb, strip_punct, write_conllu_to, Bracket, GoldSentence, PunctPolicy,
};

/// Failure of a CLI run, split by exit status.
#[derive(Debug)]
pub enum CliError {
    /// Invalid flags or flag combinations (exit status 1).
    Usage(String),
    /// Unreadable, malformed or misaligned data (exit status 2).
    Data(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Data(err) => write!(f, "data error: {err}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        CliError::Data(err)
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

#[derive(Parser, Debug)]
#[command(
    name = "impact-probe",
    version,
    about = "Induce and evaluate syntactic trees from impact matrices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Induce trees from a matrix corpus and score them against gold.
    Induce(TaskArgs),
    /// Score structural baselines (chains, branching, random matrices).
    Baseline(TaskArgs),
    /// Score an existing prediction file against gold.
    Eval(TaskArgs),
    /// Render one matrix as an ASCII PGM heatmap.
    Heatmap(HeatmapArgs),
    /// Decode every matrix and write the trees as CoNLL-U.
    ExportConllu(ExportArgs),
    /// Write a synthetic random-matrix corpus shaped like a gold corpus.
    RandomMatrices(RandomArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Task {
    Dep,
    Const,
    Disc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ParserChoice {
    Eisner,
    Cle,
    Mart,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RootChoice {
    Gold,
    Heuristic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PunctChoice {
    Strip,
    Keep,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GoldFormat {
    Conllu,
    Ptb,
    Scidtb,
    Brackets,
}

#[derive(Args, Debug, Clone)]
pub struct TaskArgs {
    #[arg(value_enum)]
    pub task: Task,
    /// Matrix corpus (.pkm).
    #[arg(long)]
    pub matrices: Option<PathBuf>,
    /// Gold corpus; CoNLL-U for dep, PTB for const, SciDTB for disc.
    #[arg(long)]
    pub gold: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub gold_format: Option<GoldFormat>,
    /// Require the matrix corpus to carry this metric (dist, prob, synthetic).
    #[arg(long)]
    pub metric_source: Option<Metric>,
    /// Predictions for `eval`: CoNLL-U, or one bracketed tree per line.
    #[arg(long)]
    pub pred: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub parser: Option<ParserChoice>,
    /// Arc scores: h2d, d2h, sym. Baselines: right, left, random.
    #[arg(long)]
    pub direction: Option<String>,
    #[arg(long, default_value_t = 0.0)]
    pub beta: f64,
    #[arg(long, value_enum)]
    pub root: Option<RootChoice>,
    #[arg(long, default_value_t = 0.0)]
    pub lambda: f64,
    /// Comma-separated: uas, uuas, ned, dist, f1, tags.
    #[arg(long, value_delimiter = ',')]
    pub metrics: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',', default_value = "0,1,2,5")]
    pub distances: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "NP,VP,PP,S,SBAR")]
    pub tags: Vec<String>,
    #[arg(long, value_enum)]
    pub punct: Option<PunctChoice>,
    /// Do not count the whole-sentence span in bracket F1.
    #[arg(long)]
    pub no_full_span: bool,
    /// Report path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    pub format: Format,
    /// Also write the induced trees here.
    #[arg(long)]
    pub trees: Option<PathBuf>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone)]
pub struct HeatmapArgs {
    #[arg(long)]
    pub matrices: PathBuf,
    #[arg(long)]
    pub id: String,
    /// Output file; `<id>.pgm` when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct ExportArgs {
    #[arg(long)]
    pub matrices: PathBuf,
    /// Gold CoNLL-U, needed only for `--root gold`.
    #[arg(long)]
    pub gold: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ParserChoice::Eisner)]
    pub parser: ParserChoice,
    #[arg(long, default_value = "h2d")]
    pub direction: String,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, value_enum, default_value_t = RootChoice::Heuristic)]
    pub root: RootChoice,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct RandomArgs {
    #[arg(value_enum)]
    pub task: Task,
    #[arg(long)]
    pub gold: PathBuf,
    #[arg(long, value_enum)]
    pub gold_format: Option<GoldFormat>,
    #[arg(long, value_enum)]
    pub punct: Option<PunctChoice>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

/// Resolved settings of a scoring run (`induce`, `baseline` or `eval`).
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub task: Task,
    pub matrices: Option<PathBuf>,
    pub metric_source: Option<Metric>,
    pub gold: PathBuf,
    pub gold_format: GoldFormat,
    pub pred: Option<PathBuf>,
    pub score: ScoreOptions,
    pub root: RootChoice,
    pub parser: ParserChoice,
    pub baseline: Option<BaselineChoice>,
    pub metrics: Vec<MetricChoice>,
    pub distances: Vec<usize>,
    pub tags: Vec<String>,
    pub lambda: f64,
    pub punct: PunctChoice,
    pub brackets: BracketOptions,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub trees: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaselineChoice {
    Right,
    Left,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MetricChoice {
    Uas,
    Uuas,
    Ned,
    Distance,
    F1,
    Tags,
}

impl MetricChoice {
    fn parse(s: &str) -> Result<Self, CliError> {
        Ok(match s.trim() {
            "uas" => MetricChoice::Uas,
            "uuas" => MetricChoice::Uuas,
            "ned" => MetricChoice::Ned,
            "dist" | "distance" => MetricChoice::Distance,
            "f1" => MetricChoice::F1,
            "tags" => MetricChoice::Tags,
            other => return usage(format!("unknown metric {other:?}")),
        })
    }

    fn is_dependency(self) -> bool {
        !matches!(self, MetricChoice::F1 | MetricChoice::Tags)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Induce,
    Baseline,
    Eval,
}

impl RunConfig {
    fn from_args(args: &TaskArgs, mode: Mode) -> Result<Self, CliError> {
        let task = args.task;
        let Some(gold) = args.gold.clone() else {
            return usage("--gold is required");
        };

        let parser = match (task, args.parser) {
            (Task::Const, None) => ParserChoice::Mart,
            (_, None) => ParserChoice::Eisner,
            (Task::Const, Some(ParserChoice::Mart)) => ParserChoice::Mart,
            (Task::Const, Some(p)) => return usage(format!("parser {p:?} cannot build constituency trees")),
            (_, Some(ParserChoice::Mart)) => return usage("mart builds constituency trees only"),
            (_, Some(p)) => p,
        };

        let root = match (task, args.root) {
            (Task::Disc, Some(RootChoice::Gold)) => {
                return usage("discourse evaluation always infers the root; drop --root gold")
            }
            (Task::Disc, _) => RootChoice::Heuristic,
            (_, Some(r)) => r,
            (_, None) => RootChoice::Gold,
        };

        let mut direction = ScoreDirection::HeadImpactsDep;
        let mut baseline = None;
        match (mode, args.direction.as_deref()) {
            (Mode::Baseline, None) => return usage("baseline needs --direction right|left|random"),
            (Mode::Baseline, Some("right")) => baseline = Some(BaselineChoice::Right),
            (Mode::Baseline, Some("left")) => baseline = Some(BaselineChoice::Left),
            (Mode::Baseline, Some("random")) => baseline = Some(BaselineChoice::Random),
            (Mode::Baseline, Some(other)) => {
                return usage(format!("unknown baseline {other:?}; expected right, left or random"))
            }
            (_, Some(d)) => direction = d.parse().map_err(CliError::Usage)?,
            (_, None) => {}
        }

        let score = ScoreOptions {
            direction,
            distance_bias_beta: args.beta,
            root_mode: RootMode::Heuristic,
        };
        if score.validate().is_err() {
            return usage(format!("--beta must be finite and >= 0, got {}", args.beta));
        }
        if !(args.lambda >= 0.0 && args.lambda.is_finite()) {
            return usage(format!("--lambda must be finite and >= 0, got {}", args.lambda));
        }

        let metrics = match &args.metrics {
            Some(list) => list
                .iter()
                .map(|m| MetricChoice::parse(m))
                .collect::<Result<Vec<_>, _>>()?,
            None => match task {
                Task::Dep => vec![MetricChoice::Uas, MetricChoice::Uuas, MetricChoice::Ned],
                Task::Disc => vec![MetricChoice::Uas, MetricChoice::Distance],
                Task::Const => vec![MetricChoice::F1, MetricChoice::Tags],
            },
        };
        for m in &metrics {
            if m.is_dependency() == (task == Task::Const) {
                return usage(format!("metric {m:?} does not apply to {task:?} trees"));
            }
        }

        let gold_format = args.gold_format.unwrap_or(match task {
            Task::Dep => GoldFormat::Conllu,
            Task::Const => GoldFormat::Ptb,
            Task::Disc => GoldFormat::Scidtb,
        });

        match mode {
            Mode::Induce if args.matrices.is_none() => return usage("induce needs --matrices"),
            Mode::Eval if args.pred.is_none() => return usage("eval needs --pred"),
            _ => {}
        }

        Ok(RunConfig {
            task,
            matrices: args.matrices.clone(),
            metric_source: args.metric_source,
            gold,
            gold_format,
            pred: args.pred.clone(),
            score,
            root,
            parser,
            baseline,
            metrics,
            distances: args.distances.clone(),
            tags: args.tags.clone(),
            lambda: args.lambda,
            punct: args.punct.unwrap_or(match task {
                Task::Const => PunctChoice::Strip,
                _ => PunctChoice::Keep,
            }),
            brackets: BracketOptions {
                include_full_span: !args.no_full_span,
            },
            seed: args.seed,
            out: args.out.clone(),
            format: args.format,
            trees: args.trees.clone(),
        })
    }
}

/// Parse arguments and run; returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("impact-probe: {err}");
            err.exit_code()
        }
    }
}

pub fn execute(command: &Command) -> Result<(), CliError> {
    match command {
        Command::Induce(args) => run(&RunConfig::from_args(args, Mode::Induce)?),
        Command::Baseline(args) => run(&RunConfig::from_args(args, Mode::Baseline)?),
        Command::Eval(args) => run(&RunConfig::from_args(args, Mode::Eval)?),
        Command::Heatmap(args) => heatmap(args),
        Command::ExportConllu(args) => export_conllu(args),
        Command::RandomMatrices(args) => random_matrices(args),
    }
}

/// One aligned evaluation unit: a predicted structure and its gold.
struct Outcome {
    id: String,
    tokens: Vec<String>,
    prediction: Prediction,
    gold: GoldSentence,
}

enum Prediction {
    Dep(Vec<usize>),
    Const(ConstTree),
}

/// Run an `induce`, `baseline` or `eval` configuration and write its report.
pub fn run(config: &RunConfig) -> Result<(), CliError> {
    let gold = read_gold(&config.gold, config.gold_format)?;
    let policy = PunctPolicy::default();

    let outcomes: Vec<Outcome> = if let Some(pred) = &config.pred {
        evaluate_predictions(config, &gold, pred, &policy)?
    } else if let Some(baseline) = config.baseline {
        gold.par_iter()
            .enumerate()
            .map(|(k, g)| baseline_outcome(config, baseline, k, g, &policy))
            .collect::<Result<_, CliError>>()?
    } else {
        let path = config.matrices.as_ref().expect("validated");
        let corpus = load_corpus(path)?;
        if let Some(metric) = config.metric_source {
            if corpus.metric != metric {
                return Err(Error::Alignment(format!(
                    "matrix corpus holds {} matrices, --metric-source asks for {}",
                    corpus.metric, metric
                ))
                .into());
            }
        }
        if corpus.len() != gold.len() {
            return Err(
                Error::Alignment(format!("{} matrices but {} gold sentences", corpus.len(), gold.len())).into(),
            );
        }
        corpus
            .matrices()
            .par_iter()
            .zip(gold.par_iter())
            .enumerate()
            .map(|(k, (m, g))| {
                check_id(k, m, g)?;
                let g = apply_policy(config, g, &policy);
                let m = align_matrix(m, g.0.len(), &g.1, g.2)?;
                induce_outcome(config, m.id().to_owned(), &m, g.0)
            })
            .collect::<Result<_, CliError>>()?
    };

    if let Some(path) = &config.trees {
        write_trees(path, &outcomes)?;
    }

    let reports = score(config, &outcomes)?;
    let text = match config.format {
        Format::Tsv => render_tsv(&reports),
        Format::Json => render_json(&reports),
    };
    write_output(config.out.as_deref(), &text)
}

fn read_gold(path: &Path, format: GoldFormat) -> Result<Vec<GoldSentence>, CliError> {
    Ok(match format {
        GoldFormat::Conllu => read_conllu(path)?,
        GoldFormat::Ptb => read_ptb(path)?,
        GoldFormat::Scidtb => read_scidtb(path)?,
        GoldFormat::Brackets => read_bracket_file(path)?,
    })
}

/// One unlabeled bracketed tree per line.
fn read_bracket_file(path: &Path) -> Result<Vec<GoldSentence>, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(idx, line)| {
            let (tree, words) = parse_bracketed(line).map_err(|e| Error::parse(idx + 1, e.to_string()))?;
            Ok(GoldSentence {
                tokens: words,
                gold_brackets: Some(
                    tree.constituents()
                        .map(|(start, end)| Bracket {
                            start,
                            end,
                            tag: String::new(),
                        })
                        .collect(),
                ),
                ..Default::default()
            })
        })
        .collect()
}

fn sentence_id(k: usize, g: &GoldSentence) -> String {
    g.id.clone().unwrap_or_else(|| (k + 1).to_string())
}

fn check_id(k: usize, m: &ImpactMatrix, g: &GoldSentence) -> Result<(), Error> {
    match &g.id {
        Some(id) if id != m.id() => Err(Error::Alignment(format!(
            "record {}: matrix id {:?} does not match gold id {:?}",
            k + 1,
            m.id(),
            id
        ))),
        _ => Ok(()),
    }
}

/// Gold sentence after the punctuation policy, with the retained indices
/// into the original and the original length.
fn apply_policy(config: &RunConfig, g: &GoldSentence, policy: &PunctPolicy) -> (GoldSentence, Vec<usize>, usize) {
    match config.punct {
        PunctChoice::Keep => (g.clone(), (0..g.len()).collect(), g.len()),
        PunctChoice::Strip => (strip_punct(g, policy), policy.retained(g), g.len()),
    }
}

/// Matrices over the full sentence are reduced to the retained units;
/// matrices already over the retained units pass through.
fn align_matrix(m: &ImpactMatrix, kept: usize, keep: &[usize], original: usize) -> Result<ImpactMatrix, Error> {
    if m.len() == kept {
        Ok(m.clone())
    } else if m.len() == original {
        m.submatrix(keep)
    } else {
        Err(Error::Alignment(format!(
            "record {:?}: matrix has {} units, gold has {} ({} after punctuation policy)",
            m.id(),
            m.len(),
            original,
            kept
        )))
    }
}

/// Gold-root mode on a corpus without heads is a flag error, not a data error.
fn gold_root(id: &str, g: &GoldSentence) -> Result<usize, CliError> {
    g.gold_root()
        .ok_or_else(|| CliError::Usage(format!("--root gold needs gold heads, sentence {id:?} has none")))
}

fn induce_outcome(config: &RunConfig, id: String, m: &ImpactMatrix, gold: GoldSentence) -> Result<Outcome, CliError> {
    let tokens = gold.tokens.clone();
    let prediction = match config.task {
        Task::Const => Prediction::Const(mart_parse(m, config.lambda)?),
        Task::Dep | Task::Disc => {
            let root_mode = match config.root {
                RootChoice::Gold => RootMode::Gold(gold_root(&id, &gold)?),
                RootChoice::Heuristic => RootMode::Heuristic,
            };
            let opts = ScoreOptions {
                root_mode,
                ..config.score
            };
            let decoder = match config.parser {
                ParserChoice::Cle => Decoder::Cle,
                _ => Decoder::Eisner,
            };
            Prediction::Dep(dep::decode(m, &opts, decoder)?.heads().to_vec())
        }
    };
    Ok(Outcome {
        id,
        tokens,
        prediction,
        gold,
    })
}

fn baseline_outcome(
    config: &RunConfig,
    baseline: BaselineChoice,
    k: usize,
    g: &GoldSentence,
    policy: &PunctPolicy,
) -> Result<Outcome, CliError> {
    let id = sentence_id(k, g);
    let (gold, _, _) = apply_policy(config, g, policy);
    let n = gold.len();
    if n == 0 {
        return Err(Error::Alignment(format!("sentence {id:?} is empty")).into());
    }

    if baseline == BaselineChoice::Random {
        let m = random_matrix_with_units(id.clone(), gold.tokens.clone(), config.seed.wrapping_add(k as u64))?;
        return induce_outcome(config, id, &m, gold);
    }

    let prediction = match config.task {
        Task::Const => Prediction::Const(branching_baseline(
            n,
            if baseline == BaselineChoice::Right {
                Branching::Right
            } else {
                Branching::Left
            },
        )?),
        Task::Dep | Task::Disc => {
            let (direction, edge_root) = match baseline {
                BaselineChoice::Right => (ChainDirection::Right, n),
                _ => (ChainDirection::Left, 1),
            };
            let root = match config.root {
                RootChoice::Gold => gold_root(&id, &gold)?,
                RootChoice::Heuristic => edge_root,
            };
            Prediction::Dep(chain_baseline(n, direction, root)?.heads().to_vec())
        }
    };
    Ok(Outcome {
        id,
        tokens: gold.tokens.clone(),
        prediction,
        gold,
    })
}

fn evaluate_predictions(
    config: &RunConfig,
    gold: &[GoldSentence],
    pred_path: &Path,
    policy: &PunctPolicy,
) -> Result<Vec<Outcome>, CliError> {
    let mismatch = |p: usize| {
        CliError::Data(Error::Alignment(format!(
            "{} predicted sentences but {} gold sentences",
            p,
            gold.len()
        )))
    };

    match config.task {
        Task::Dep | Task::Disc => {
            let pred = read_conllu(pred_path)?;
            if pred.len() != gold.len() {
                return Err(mismatch(pred.len()));
            }
            gold.iter()
                .zip(pred)
                .enumerate()
                .map(|(k, (g, p))| {
                    let id = sentence_id(k, g);
                    let heads = p
                        .gold_heads
                        .ok_or_else(|| Error::Alignment(format!("prediction {} has no heads", k + 1)))?;
                    if heads.len() != g.len() {
                        return Err(Error::LengthMismatch {
                            predicted: heads.len(),
                            gold: g.len(),
                        }
                        .into());
                    }
                    let (gold_s, heads) = match config.punct {
                        PunctChoice::Keep => (g.clone(), heads),
                        PunctChoice::Strip => {
                            // Strip the prediction with the gold tags.
                            let as_gold = GoldSentence {
                                gold_heads: Some(heads),
                                ..g.clone()
                            };
                            let stripped = strip_punct(&as_gold, policy);
                            (strip_punct(g, policy), stripped.gold_heads.unwrap())
                        }
                    };
                    Ok(Outcome {
                        id,
                        tokens: gold_s.tokens.clone(),
                        prediction: Prediction::Dep(heads),
                        gold: gold_s,
                    })
                })
                .collect()
        }
        Task::Const => {
            let pred = read_bracket_file(pred_path)?;
            if pred.len() != gold.len() {
                return Err(mismatch(pred.len()));
            }
            gold.iter()
                .zip(pred)
                .enumerate()
                .map(|(k, (g, p))| {
                    let id = sentence_id(k, g);
                    let (gold_s, _, _) = apply_policy(config, g, policy);
                    let spans = p
                        .gold_brackets
                        .unwrap_or_default()
                        .into_iter()
                        .map(|b| (b.start, b.end))
                        .chain((1..=p.tokens.len()).map(|i| (i, i)));
                    let tree = ConstTree::from_spans(p.tokens.len(), spans)?;
                    Ok(Outcome {
                        id,
                        tokens: gold_s.tokens.clone(),
                        prediction: Prediction::Const(tree),
                        gold: gold_s,
                    })
                })
                .collect()
        }
    }
}

type HeadMetric = fn(&[usize], &[usize]) -> crate::Result<Counts>;

/// Per-metric reports, in the requested metric order.
fn score(config: &RunConfig, outcomes: &[Outcome]) -> Result<Vec<EvalReport>, CliError> {
    let mut reports = Vec::new();
    for metric in &config.metrics {
        match metric {
            MetricChoice::Uas | MetricChoice::Uuas | MetricChoice::Ned => {
                let (name, f): (&str, HeadMetric) = match metric {
                    MetricChoice::Uas => ("uas", metrics::uas),
                    MetricChoice::Uuas => ("uuas", metrics::uuas),
                    _ => ("ned", metrics::ned),
                };
                let mut report = EvalReport::new(name);
                for o in outcomes {
                    report.push(o.id.clone(), f(dep_prediction(o)?, dep_gold(o)?)?);
                }
                reports.push(report);
            }
            MetricChoice::Distance => {
                let mut buckets: Vec<EvalReport> = config
                    .distances
                    .iter()
                    .map(|d| EvalReport::new(format!("acc_d{d}")))
                    .collect();
                for o in outcomes {
                    let counts = metrics::accuracy_by_distance(dep_prediction(o)?, dep_gold(o)?, &config.distances)?;
                    for (report, c) in buckets.iter_mut().zip(counts) {
                        report.push(o.id.clone(), c);
                    }
                }
                reports.extend(buckets);
            }
            MetricChoice::F1 => {
                let mut precision = EvalReport::new("precision");
                let mut recall = EvalReport::new("recall");
                let mut f1 = EvalReport::new("f1");
                for o in outcomes {
                    let tree = const_prediction(o)?;
                    let gold = o.gold.gold_brackets.as_deref().unwrap_or_default();
                    let c: BracketCounts = metrics::bracket_f1(tree, gold, o.gold.len(), config.brackets)?;
                    precision.push(o.id.clone(), c.precision());
                    recall.push(o.id.clone(), c.recall());
                    f1.push(o.id.clone(), c.f1());
                }
                reports.extend([precision, recall, f1]);
            }
            MetricChoice::Tags => {
                for tag in &config.tags {
                    let mut report = EvalReport::new(format!("tag_{tag}"));
                    for o in outcomes {
                        let gold = o.gold.gold_brackets.as_deref().unwrap_or_default();
                        report.push(o.id.clone(), metrics::tag_accuracy(const_prediction(o)?, gold, tag));
                    }
                    reports.push(report);
                }
            }
        }
    }
    Ok(reports)
}

fn dep_prediction(o: &Outcome) -> Result<&[usize], CliError> {
    match &o.prediction {
        Prediction::Dep(h) => Ok(h),
        Prediction::Const(_) => usage("dependency metric on a constituency prediction"),
    }
}

fn dep_gold(o: &Outcome) -> Result<&[usize], CliError> {
    o.gold
        .gold_heads
        .as_deref()
        .ok_or_else(|| CliError::Data(Error::Alignment(format!("sentence {:?} has no gold heads", o.id))))
}

fn const_prediction(o: &Outcome) -> Result<&ConstTree, CliError> {
    match &o.prediction {
        Prediction::Const(t) => Ok(t),
        Prediction::Dep(_) => usage("constituency metric on a dependency prediction"),
    }
}

fn write_trees(path: &Path, outcomes: &[Outcome]) -> Result<(), CliError> {
    let mut buf = Vec::new();
    let deps: Vec<(Vec<String>, DepTree)> = outcomes
        .iter()
        .filter_map(|o| match &o.prediction {
            Prediction::Dep(h) => Some(DepTree::new(h.clone()).map(|t| (o.tokens.clone(), t))),
            Prediction::Const(_) => None,
        })
        .collect::<Result<_, _>>()?;
    write_conllu_to(&deps, &mut buf).map_err(|e| Error::io(path, e))?;
    for o in outcomes {
        if let Prediction::Const(t) = &o.prediction {
            buf.extend_from_slice(t.to_bracketed(&o.tokens).as_bytes());
            buf.push(b'\n');
        }
    }
    fs::write(path, buf).map_err(|e| Error::io(path, e).into())
}

fn fmt_score(c: &Counts) -> String {
    c.percentage().map_or_else(|| "-".to_owned(), |v| format!("{v:.4}"))
}

/// Aggregates first, then one row per sentence and metric.
pub fn render_tsv(reports: &[EvalReport]) -> String {
    let mut out = String::from("metric\tcorrect\ttotal\tscore\n");
    for r in reports {
        writeln!(
            out,
            "{}\t{}\t{}\t{}",
            r.metric,
            r.counts.correct,
            r.counts.total,
            fmt_score(&r.counts)
        )
        .unwrap();
    }
    out.push('\n');
    out.push_str("id\tmetric\tcorrect\ttotal\tscore\n");
    let sentences = reports.first().map_or(0, |r| r.per_sentence.len());
    for k in 0..sentences {
        for r in reports {
            let s = &r.per_sentence[k];
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}",
                s.id,
                r.metric,
                s.counts.correct,
                s.counts.total,
                fmt_score(&s.counts)
            )
            .unwrap();
        }
    }
    out
}

#[derive(Serialize)]
struct JsonOutput<'a> {
    reports: Vec<JsonReport<'a>>,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    metric: &'a str,
    correct: usize,
    total: usize,
    score: Option<f64>,
    per_sentence: Vec<JsonSentence<'a>>,
}

#[derive(Serialize)]
struct JsonSentence<'a> {
    id: &'a str,
    correct: usize,
    total: usize,
    score: Option<f64>,
}

pub fn render_json(reports: &[EvalReport]) -> String {
    let reports: Vec<JsonReport> = reports
        .iter()
        .map(|r| JsonReport {
            metric: &r.metric,
            correct: r.counts.correct,
            total: r.counts.total,
            score: r.score(),
            per_sentence: r
                .per_sentence
                .iter()
                .map(|s| JsonSentence {
                    id: &s.id,
                    correct: s.counts.correct,
                    total: s.counts.total,
                    score: s.counts.percentage(),
                })
                .collect(),
        })
        .collect();
    let mut text = serde_json::to_string_pretty(&JsonOutput { reports }).expect("report serializes");
    text.push('\n');
    text
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::io(p, e).into()),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())
                .and_then(|_| lock.flush())
                .map_err(|e| Error::io("<stdout>", e).into())
        }
    }
}

fn heatmap(args: &HeatmapArgs) -> Result<(), CliError> {
    let corpus = load_corpus(&args.matrices)?;
    let m = corpus
        .get(&args.id)
        .ok_or_else(|| Error::Alignment(format!("no matrix with id {:?}", args.id)))?;
    let out = args
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{}.pgm", args.id)));
    fs::write(&out, render_heatmap(m).to_pgm()).map_err(|e| Error::io(&out, e).into())
}

fn export_conllu(args: &ExportArgs) -> Result<(), CliError> {
    let direction: ScoreDirection = args.direction.parse().map_err(CliError::Usage)?;
    let decoder = match args.parser {
        ParserChoice::Eisner => Decoder::Eisner,
        ParserChoice::Cle => Decoder::Cle,
        ParserChoice::Mart => return usage("export-conllu writes dependency trees; use eisner or cle"),
    };
    let base = ScoreOptions {
        direction,
        distance_bias_beta: args.beta,
        root_mode: RootMode::Heuristic,
    };
    if base.validate().is_err() {
        return usage(format!("--beta must be finite and >= 0, got {}", args.beta));
    }

    let corpus = load_corpus(&args.matrices)?;
    let gold = match (args.root, &args.gold) {
        (RootChoice::Gold, None) => return usage("--root gold needs --gold"),
        (RootChoice::Gold, Some(path)) => {
            let gold = read_conllu(path)?;
            if gold.len() != corpus.len() {
                return Err(
                    Error::Alignment(format!("{} matrices but {} gold sentences", corpus.len(), gold.len())).into(),
                );
            }
            Some(gold)
        }
        (RootChoice::Heuristic, _) => None,
    };

    let trees = corpus
        .matrices()
        .par_iter()
        .enumerate()
        .map(|(k, m)| {
            let root_mode = match &gold {
                Some(gold) => {
                    check_id(k, m, &gold[k])?;
                    if gold[k].len() != m.len() {
                        return Err(Error::LengthMismatch {
                            predicted: m.len(),
                            gold: gold[k].len(),
                        }
                        .into());
                    }
                    RootMode::Gold(gold_root(m.id(), &gold[k])?)
                }
                None => RootMode::Heuristic,
            };
            let tree = dep::decode(m, &ScoreOptions { root_mode, ..base }, decoder)?;
            Ok((m.units().to_vec(), tree))
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let mut buf = Vec::new();
    write_conllu_to(&trees, &mut buf).map_err(|e| Error::io(&args.out, e))?;
    fs::write(&args.out, buf).map_err(|e| Error::io(&args.out, e).into())
}

fn random_matrices(args: &RandomArgs) -> Result<(), CliError> {
    let format = args.gold_format.unwrap_or(match args.task {
        Task::Dep => GoldFormat::Conllu,
        Task::Const => GoldFormat::Ptb,
        Task::Disc => GoldFormat::Scidtb,
    });
    let gold = read_gold(&args.gold, format)?;
    let policy = PunctPolicy::default();
    let punct = args.punct.unwrap_or(match args.task {
        Task::Const => PunctChoice::Strip,
        _ => PunctChoice::Keep,
    });

    let kind = if args.task == Task::Disc {
        UnitKind::Span
    } else {
        UnitKind::Token
    };
    let mut corpus = MatrixCorpus::new(kind, Metric::Synthetic);
    corpus.meta.insert("generator".into(), "splitmix64".into());
    corpus.meta.insert("seed".into(), args.seed.into());
    for (k, g) in gold.iter().enumerate() {
        let g = match punct {
            PunctChoice::Strip => strip_punct(g, &policy),
            PunctChoice::Keep => g.clone(),
        };
        let m = random_matrix_with_units(sentence_id(k, &g), g.tokens.clone(), args.seed.wrapping_add(k as u64))?;
        let m = if kind == UnitKind::Span {
            ImpactMatrix::new(m.id(), kind, Metric::Synthetic, m.units().to_vec(), m.to_rows())?
        } else {
            m
        };
        corpus.push(m)?;
    }
    save_corpus(&corpus, &args.out)?;
    Ok(())
}
