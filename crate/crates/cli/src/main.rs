use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anafor::{
    baseline_resolve_document, build_instances, evaluate, parse_document, parse_trace, render_trace, resolve_document,
    serialize_document, train, Comparison, Context, Document, Lexicon, Metrics, NameDictionary, PreferenceWeights,
    ResolvedDocument, TrainConfig,
};
use anyhow::{bail, Context as _, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

#[derive(Parser)]
#[command(name = "anafor", version, about = "Pronoun resolution for annotated Turkish narrative text")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Resolve pronouns with the weighted preferences.
    Resolve(ResolveArgs),
    /// Resolve every pronoun to its most recent surviving candidate.
    Baseline(ResolveArgs),
    /// Learn preference weights from a gold-annotated corpus.
    Train(TrainArgs),
    /// Score resolutions against gold annotations.
    Eval(EvalArgs),
    /// Evaluate the system and the baseline side by side.
    Compare(CompareArgs),
}

#[derive(Args)]
struct Resources {
    /// Gazetteer of person names, one per line. Without it nothing resolves.
    #[arg(long, env = "ANAFOR_DICT")]
    dict: Option<PathBuf>,

    /// Replacement pronoun and suffix tables.
    #[arg(long)]
    lexicon: Option<PathBuf>,

    /// Preceding sentences searched for candidates.
    #[arg(long, default_value_t = 3)]
    scope: usize,
}

impl Resources {
    fn context(&self) -> Result<Context> {
        let dictionary = match &self.dict {
            Some(path) => NameDictionary::load(path)?,
            None => NameDictionary::default(),
        };
        let lexicon = match &self.lexicon {
            Some(path) => Lexicon::load(path)?,
            None => Lexicon::default(),
        };
        Ok(Context::new(dictionary).with_lexicon(lexicon).with_scope(self.scope))
    }
}

#[derive(Args)]
struct ResolveArgs {
    #[command(flatten)]
    resources: Resources,

    /// Preference weights (`name = value` lines); defaults to the built-in scores.
    #[arg(long)]
    weights: Option<PathBuf>,

    /// Write the per-pronoun trace instead of the rewritten text.
    #[arg(long)]
    trace: bool,

    /// Output file for a single input.
    #[arg(short, long, conflicts_with = "out_dir")]
    output: Option<PathBuf>,

    /// Directory receiving `<stem>.resolved.txt` and `<stem>.trace.tsv` per input.
    #[arg(long)]
    out_dir: Option<PathBuf>,

    #[arg(required = true)]
    inputs: Vec<PathBuf>,
}

#[derive(Args)]
struct TrainArgs {
    #[command(flatten)]
    resources: Resources,

    #[arg(long, default_value_t = 0.05)]
    lr: f64,

    #[arg(long, default_value_t = 100)]
    epochs: usize,

    /// Starting weights; all ones by default.
    #[arg(long)]
    init: Option<PathBuf>,

    /// Where to write the learned weights (stdout by default).
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(required = true)]
    corpus: Vec<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Kv,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    resources: Resources,

    #[arg(long)]
    weights: Option<PathBuf>,

    /// Score a previously written trace instead of resolving (single gold file only).
    #[arg(long)]
    trace: Option<PathBuf>,

    /// Evaluate the most-recent baseline instead of the system.
    #[arg(long, conflicts_with = "trace")]
    baseline: bool,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[arg(required = true)]
    gold: Vec<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    resources: Resources,

    #[arg(long)]
    weights: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[arg(required = true)]
    gold: Vec<PathBuf>,
}

fn load_weights(path: Option<&Path>) -> Result<PreferenceWeights> {
    Ok(match path {
        Some(p) => PreferenceWeights::load(p)?,
        None => PreferenceWeights::default(),
    })
}

fn load_document(path: &Path, lexicon: &Lexicon) -> Result<Document> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_document(&text, lexicon).with_context(|| format!("parsing {}", path.display()))
}

/// Loads every input in parallel, keeping the input order.
fn load_all(paths: &[PathBuf], lexicon: &Lexicon) -> Result<Vec<Document>> {
    paths.par_iter().map(|p| load_document(p, lexicon)).collect()
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => io::stdout().lock().write_all(text.as_bytes()).context("writing to stdout"),
    }
}

fn stem(path: &Path) -> String {
    path.file_stem().map_or_else(|| "input".to_string(), |s| s.to_string_lossy().into_owned())
}

fn cmd_resolve(args: &ResolveArgs, baseline: bool) -> Result<()> {
    let ctx = args.resources.context()?;
    let weights = load_weights(args.weights.as_deref())?;
    if args.inputs.len() > 1 && args.out_dir.is_none() && args.output.is_some() {
        bail!("--output takes a single input; use --out-dir for several");
    }
    let resolve = |doc: &Document| -> ResolvedDocument {
        if baseline {
            baseline_resolve_document(doc, &ctx)
        } else {
            resolve_document(doc, &ctx, &weights)
        }
    };
    let results: Vec<ResolvedDocument> = args
        .inputs
        .par_iter()
        .map(|p| load_document(p, &ctx.lexicon).map(|d| resolve(&d)))
        .collect::<Result<_>>()?;

    if let Some(dir) = &args.out_dir {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for (input, r) in args.inputs.iter().zip(&results) {
            let stem = stem(input);
            write_output(Some(&dir.join(format!("{stem}.resolved.txt"))), &serialize_document(&r.paraphrased))?;
            write_output(Some(&dir.join(format!("{stem}.trace.tsv"))), &render_trace(&r.resolutions))?;
        }
        return Ok(());
    }
    let mut out = String::new();
    for r in &results {
        if args.trace {
            out.push_str(&render_trace(&r.resolutions));
        } else {
            out.push_str(&serialize_document(&r.paraphrased));
        }
    }
    write_output(args.output.as_deref(), &out)
}

fn cmd_train(args: &TrainArgs) -> Result<()> {
    if !(args.lr.is_finite() && args.lr >= 0.0) {
        bail!("learning rate must be a non-negative number");
    }
    let ctx = args.resources.context()?;
    let corpus = load_all(&args.corpus, &ctx.lexicon)?;
    let set = build_instances(&corpus, &ctx)?;
    let config = TrainConfig {
        learning_rate: args.lr,
        max_epochs: args.epochs,
        initial: match &args.init {
            Some(p) => PreferenceWeights::load(p)?,
            None => TrainConfig::default().initial,
        },
    };
    let report = train(&set.instances, &config);
    eprintln!(
        "instances {} (skipped {}, unlabeled {}), epochs {}, errors in last epoch {}",
        set.instances.len(),
        set.skipped,
        set.unlabeled,
        report.epochs,
        report.final_errors
    );
    write_output(args.out.as_deref(), &report.weights.to_string())
}

fn pooled(decisions: impl IntoIterator<Item = Result<Metrics>>) -> Result<Metrics> {
    decisions
        .into_iter()
        .try_fold(Metrics::from_counts(0, 0, 0), |acc, m| Ok(acc.combine(&m?)))
}

fn render_metrics(m: &Metrics, format: Format) -> String {
    match format {
        Format::Text => m.to_string(),
        Format::Kv => m.to_kv(""),
    }
}

fn cmd_eval(args: &EvalArgs) -> Result<()> {
    let ctx = args.resources.context()?;
    let gold = load_all(&args.gold, &ctx.lexicon)?;
    let metrics = if let Some(trace) = &args.trace {
        if gold.len() != 1 {
            bail!("--trace scores exactly one gold file");
        }
        let text = fs::read_to_string(trace).with_context(|| format!("reading {}", trace.display()))?;
        let decisions = parse_trace(&text, &trace.display().to_string())?;
        evaluate(&decisions, &gold[0])?
    } else {
        let weights = load_weights(args.weights.as_deref())?;
        let per_doc: Vec<Result<Metrics>> = gold
            .par_iter()
            .map(|doc| {
                let r = if args.baseline {
                    baseline_resolve_document(doc, &ctx)
                } else {
                    resolve_document(doc, &ctx, &weights)
                };
                Ok(evaluate(&r.decisions(), doc)?)
            })
            .collect();
        pooled(per_doc)?
    };
    write_output(None, &render_metrics(&metrics, args.format))
}

fn cmd_compare(args: &CompareArgs) -> Result<()> {
    let ctx = args.resources.context()?;
    let weights = load_weights(args.weights.as_deref())?;
    let gold = load_all(&args.gold, &ctx.lexicon)?;
    let per_doc: Vec<(Result<Metrics>, Result<Metrics>)> = gold
        .par_iter()
        .map(|doc| {
            let system = resolve_document(doc, &ctx, &weights);
            let baseline = baseline_resolve_document(doc, &ctx);
            (
                evaluate(&system.decisions(), doc).map_err(Into::into),
                evaluate(&baseline.decisions(), doc).map_err(Into::into),
            )
        })
        .collect();
    let (system, baseline): (Vec<_>, Vec<_>) = per_doc.into_iter().unzip();
    let comparison = Comparison::new(pooled(system)?, pooled(baseline)?);
    let text = match args.format {
        Format::Text => comparison.to_string(),
        Format::Kv => comparison.to_kv(),
    };
    write_output(None, &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Resolve(args) => cmd_resolve(args, false),
        Command::Baseline(args) => cmd_resolve(args, true),
        Command::Train(args) => cmd_train(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Compare(args) => cmd_compare(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("anafor: {e:#}");
            ExitCode::FAILURE
        }
    }
}
