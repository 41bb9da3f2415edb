//! Command line front end wiring the toolkit into complete workflows:
//! train a tagger, tag text, sweep condensed tagset variants, inspect
//! unknown words, and generate synthetic corpora.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 internal
//! invariant violation. Output files are written to a temporary file
//! and renamed into place, so a failed run never leaves partial output.

use std::collections::BTreeSet;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use tagfold::tagset::parse_scheme_file;
use tagfold::{
    analyze_unknown_words, emit_report, generate_synthetic_corpus, parse_closed_file,
    parse_guesser_file, scheme_code_enumerate, split_corpus, sweep, Error, ExperimentConfig,
    HmmModel, Lexicon, ReportFormat, Sentence, SplitMode, Strictness, SyntheticSpec, TaggedCorpus,
    Token, UnknownAnalysis,
};

#[derive(Parser)]
#[command(name = "tagfold", version, about = "Train, condense, and evaluate HMM part-of-speech taggers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train a tagger on a vertical-format corpus and write the model
    Train(TrainArgs),
    /// Tag a corpus with a trained model, emitting vertical output
    Tag(TagArgs),
    /// Retrain under condensed tagset variants and report accuracy
    Sweep(SweepArgs),
    /// Describe how test-only words look in the full corpus lexicon
    AnalyzeUnknowns(AnalyzeArgs),
    /// Generate a corpus from a known model for controlled experiments
    Synth(SynthArgs),
}

#[derive(Copy, Clone, ValueEnum)]
enum ModeArg {
    /// Train on the leading fraction, test on the unseen remainder
    #[value(name = "held_out")]
    HeldOut,
    /// Train on everything, test on an evenly spaced sample of it
    #[value(name = "in_sample")]
    InSample,
}

impl From<ModeArg> for SplitMode {
    fn from(mode: ModeArg) -> SplitMode {
        match mode {
            ModeArg::HeldOut => SplitMode::HeldOut,
            ModeArg::InSample => SplitMode::InSample,
        }
    }
}

#[derive(Args)]
struct TrainArgs {
    /// Tagged corpus in vertical format
    #[arg(long, value_name = "FILE")]
    corpus: PathBuf,
    /// Output path for the trained model
    #[arg(long, value_name = "FILE")]
    model: PathBuf,
    /// Closed-class tag list, one tag per line
    #[arg(long, value_name = "FILE")]
    closed: Option<PathBuf>,
    /// Leave transition probabilities unsmoothed
    #[arg(long)]
    no_smoothing: bool,
    /// Reject malformed corpus lines instead of skipping them
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct TagArgs {
    /// Model file produced by the train subcommand
    #[arg(long, value_name = "FILE")]
    model: PathBuf,
    /// Input corpus; tokens may be tagged or untagged
    #[arg(long, value_name = "FILE")]
    corpus: PathBuf,
    /// Guesser rule file applied to unknown words
    #[arg(long, value_name = "FILE")]
    guesser: Option<PathBuf>,
    /// Output path; standard output when omitted
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Reject malformed corpus lines instead of skipping them
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// Tagged corpus in vertical format
    #[arg(long, value_name = "FILE")]
    corpus: PathBuf,
    /// Feature and reduction rule declarations
    #[arg(long, value_name = "FILE")]
    rules: PathBuf,
    /// Closed-class tag list, one tag per line
    #[arg(long, value_name = "FILE")]
    closed: Option<PathBuf>,
    /// Guesser rule file; tags absent from a condensed tagset are dropped
    #[arg(long, value_name = "FILE")]
    guesser: Option<PathBuf>,
    /// Scheme codes to run: "all" or a comma-separated list
    #[arg(long, default_value = "all")]
    codes: String,
    /// Evaluation regime
    #[arg(long, value_enum, default_value = "held_out")]
    mode: ModeArg,
    /// Fraction of sentences used for training
    #[arg(long, default_value_t = 0.95)]
    split: f64,
    /// Leave transition probabilities unsmoothed
    #[arg(long)]
    no_smoothing: bool,
    /// Number of scheme variants retrained in parallel
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Report file; standard output when omitted
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Plot-points file ordered by tagset size
    #[arg(long, value_name = "FILE")]
    plot_out: Option<PathBuf>,
    /// Reject malformed corpus lines instead of skipping them
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Tagged corpus in vertical format
    #[arg(long, value_name = "FILE")]
    corpus: PathBuf,
    /// Fraction of sentences used for training
    #[arg(long, default_value_t = 0.95)]
    split: f64,
    /// Analysis file; standard output when omitted
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Reject malformed corpus lines instead of skipping them
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct SynthArgs {
    /// Number of base tags before feature axes are applied
    #[arg(long, default_value_t = 8)]
    base_tags: usize,
    /// Feature axes as LETTER:CARDINALITY pairs, e.g. G:2,N:3
    #[arg(long, value_name = "SPEC", default_value = "")]
    axes: String,
    /// Number of distinct word types
    #[arg(long, default_value_t = 2000)]
    vocab: usize,
    /// Fraction of word types drawn ambiguous, in [0, 1)
    #[arg(long, default_value_t = 0.4)]
    ambiguity: f64,
    /// Token budget for the generated corpus
    #[arg(long, default_value_t = 50_000)]
    tokens: usize,
    /// Mean sentence length
    #[arg(long, default_value_t = 8)]
    mean_len: usize,
    /// Hard cap on sentence length
    #[arg(long, default_value_t = 40)]
    max_len: usize,
    /// Encode each word's lowest tag in its final two characters
    #[arg(long)]
    suffix_coded: bool,
    /// Generator seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Corpus output path
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
    /// True-parameter sidecar path; <OUT>.truth when omitted
    #[arg(long, value_name = "FILE")]
    truth_out: Option<PathBuf>,
    /// Write the matching feature rule file here (requires axes)
    #[arg(long, value_name = "FILE")]
    rules_out: Option<PathBuf>,
    /// Write the matching guesser file here (requires --suffix-coded)
    #[arg(long, value_name = "FILE")]
    guesser_out: Option<PathBuf>,
}

/// A flag combination or value clap alone cannot reject.
#[derive(Debug)]
struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for UsageError {}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    if let Err(err) = run(cli) {
        eprintln!("tagfold: {err}");
        std::process::exit(exit_code(&err));
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Train(args) => cmd_train(&args),
        Command::Tag(args) => cmd_tag(&args),
        Command::Sweep(args) => cmd_sweep(&args),
        Command::AnalyzeUnknowns(args) => cmd_analyze_unknowns(&args),
        Command::Synth(args) => cmd_synth(&args),
    }
}

fn exit_code(err: &anyhow::Error) -> i32 {
    if err.downcast_ref::<UsageError>().is_some() {
        return 1;
    }
    fn is_internal(err: &Error) -> bool {
        match err {
            Error::Internal(_) => true,
            Error::VariantFailed { source, .. } => is_internal(source),
            _ => false,
        }
    }
    match err.downcast_ref::<Error>() {
        Some(err) if is_internal(err) => 3,
        _ => 2,
    }
}

fn cmd_train(args: &TrainArgs) -> anyhow::Result<()> {
    let corpus = read_corpus(&args.corpus, args.strict)?;
    let closed = read_closed(args.closed.as_deref())?;
    let model = HmmModel::train(&corpus, !args.no_smoothing, &closed)?;
    write_atomic(&args.model, &model.to_model_string())?;
    println!(
        "trained on {} tokens in {} sentences",
        corpus.token_count(),
        corpus.sentences().len()
    );
    println!(
        "tagset size {} ({} closed), lexicon {} words",
        model.n_tags(),
        model.tagset_spec().closed().len(),
        model.lexicon().n_words()
    );
    println!("model written to {}", args.model.display());
    Ok(())
}

fn cmd_tag(args: &TagArgs) -> anyhow::Result<()> {
    let model = HmmModel::parse_model(&read_file(&args.model)?)?;
    let corpus = read_corpus(&args.corpus, args.strict)?;
    let guesser = match &args.guesser {
        Some(path) => {
            let rules = parse_guesser_file(&read_file(path)?)?;
            rules.validate(&model.tagset_spec())?;
            Some(rules)
        }
        None => None,
    };

    let mut tagged = Vec::with_capacity(corpus.sentences().len());
    for sentence in corpus.sentences() {
        let tags = model.viterbi(sentence, guesser.as_ref())?;
        let tokens: Vec<Token> = sentence
            .tokens()
            .iter()
            .zip(&tags)
            .map(|(token, tag)| Token::tagged(token.surface(), tag))
            .collect::<Result<_, _>>()?;
        tagged.push(Sentence::new(tokens)?);
    }
    let output = TaggedCorpus::new(tagged)?.to_vertical();
    emit(args.out.as_deref(), &output)
}

fn cmd_sweep(args: &SweepArgs) -> anyhow::Result<()> {
    let corpus = read_corpus(&args.corpus, args.strict)?;
    let scheme_file = parse_scheme_file(&read_file(&args.rules)?)?;
    let closed = read_closed(args.closed.as_deref())?;
    let guesser = match &args.guesser {
        Some(path) => Some(parse_guesser_file(&read_file(path)?)?),
        None => None,
    };
    let codes: Vec<String> = if args.codes == "all" {
        scheme_code_enumerate(&scheme_file.letters())?
    } else {
        args.codes
            .split(',')
            .map(|code| code.trim().to_string())
            .filter(|code| !code.is_empty())
            .collect()
    };
    if codes.is_empty() {
        return Err(UsageError("--codes named no scheme codes".to_string()).into());
    }

    let config = ExperimentConfig {
        train_fraction: args.split,
        mode: args.mode.into(),
        sample_size: None,
        smoothing: !args.no_smoothing,
        closed,
        guesser,
    };
    let reports = sweep(&corpus, &scheme_file, &codes, &config, args.workers.max(1))?;
    emit(args.out.as_deref(), &emit_report(&reports, ReportFormat::Tsv))?;
    if let Some(plot) = &args.plot_out {
        write_atomic(plot, &emit_report(&reports, ReportFormat::PlotPoints))?;
    }
    Ok(())
}

fn cmd_analyze_unknowns(args: &AnalyzeArgs) -> anyhow::Result<()> {
    let corpus = read_corpus(&args.corpus, args.strict)?;
    let (train, test) = split_corpus(&corpus, args.split, SplitMode::HeldOut, 0)?;
    let full_lexicon = Lexicon::build(&corpus)?;
    let train_lexicon = Lexicon::build(&train)?;
    let analysis = analyze_unknown_words(&full_lexicon, &train_lexicon, &test);
    emit(args.out.as_deref(), &render_analysis(&analysis, args.split))
}

fn cmd_synth(args: &SynthArgs) -> anyhow::Result<()> {
    let axes = parse_axes(&args.axes)?;
    if args.rules_out.is_some() && axes.is_empty() {
        return Err(UsageError("--rules-out requires at least one axis in --axes".to_string()).into());
    }
    if args.guesser_out.is_some() && !args.suffix_coded {
        return Err(UsageError("--guesser-out requires --suffix-coded".to_string()).into());
    }

    let spec = SyntheticSpec {
        base_tags: args.base_tags,
        axes,
        vocab_size: args.vocab,
        ambiguity_target: args.ambiguity,
        tokens: args.tokens,
        mean_sentence_len: args.mean_len,
        max_sentence_len: args.max_len,
        suffix_coded: args.suffix_coded,
        seed: args.seed,
    };
    let output = generate_synthetic_corpus(&spec)?;

    write_atomic(&args.out, &output.corpus.to_vertical())?;
    let truth_path = args
        .truth_out
        .clone()
        .unwrap_or_else(|| default_truth_path(&args.out));
    write_atomic(&truth_path, &output.truth.to_truth_string())?;
    if let Some(path) = &args.rules_out {
        write_atomic(path, &output.rules_text)?;
    }
    if let Some(path) = &args.guesser_out {
        let text = output.guesser_text.as_deref().ok_or_else(|| {
            Error::Internal("suffix-coded generation produced no guesser".to_string())
        })?;
        write_atomic(path, text)?;
    }

    println!(
        "wrote {} tokens in {} sentences to {}",
        output.corpus.token_count(),
        output.corpus.sentences().len(),
        args.out.display()
    );
    println!(
        "tagset size {}, true parameters in {}",
        output.truth.tags().len(),
        truth_path.display()
    );
    Ok(())
}

/// Parses an axes flag such as "G:2,N:3"; the empty string means none.
fn parse_axes(text: &str) -> Result<Vec<(char, usize)>, UsageError> {
    let mut axes = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (letter, cardinality) = part
            .split_once(':')
            .ok_or_else(|| UsageError(format!("axis {part:?} is not LETTER:CARDINALITY")))?;
        let mut chars = letter.chars();
        let letter = match (chars.next(), chars.next()) {
            (Some(c), None) => c,
            _ => return Err(UsageError(format!("axis letter {letter:?} is not one character"))),
        };
        let cardinality: usize = cardinality
            .parse()
            .map_err(|_| UsageError(format!("axis cardinality {cardinality:?} is not a number")))?;
        axes.push((letter, cardinality));
    }
    Ok(axes)
}

fn render_analysis(analysis: &UnknownAnalysis, split: f64) -> String {
    let pct = |part: usize, whole: usize| -> String {
        if whole == 0 {
            "-".to_string()
        } else {
            format!("{:.2}%", 100.0 * part as f64 / whole as f64)
        }
    };
    let mut out = String::new();
    out.push_str(&format!("unknown word analysis at train fraction {split}\n"));
    out.push_str("counts are over distinct word types, not token occurrences\n");
    out.push_str(&format!("unknown types          {}\n", analysis.total_unknown));
    out.push_str(&format!("unknown tokens         {}\n", analysis.total_unknown_tokens));
    out.push_str(&format!(
        "found in full lexicon  {} ({} of types)\n",
        analysis.found_in_full_lexicon,
        pct(analysis.found_in_full_lexicon, analysis.total_unknown)
    ));
    out.push_str(&format!(
        "single tag there       {} ({} of found)\n",
        analysis.single_tag,
        pct(analysis.single_tag, analysis.found_in_full_lexicon)
    ));
    out.push_str(&format!(
        "multiple tags there    {} ({} of found)\n",
        analysis.multi_tag,
        pct(analysis.multi_tag, analysis.found_in_full_lexicon)
    ));
    out.push_str("tags per unknown type (0 means unseen in the full lexicon):\n");
    for (n_tags, count) in &analysis.tag_count_histogram {
        out.push_str(&format!("  {n_tags}: {count}\n"));
    }
    out
}

fn read_file(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|err| Error::Io(std::io::Error::new(err.kind(), format!("{}: {err}", path.display()))))
}

fn read_corpus(path: &Path, strict: bool) -> anyhow::Result<TaggedCorpus> {
    let text = read_file(path)?;
    let strictness = if strict { Strictness::Strict } else { Strictness::Lenient };
    let outcome = TaggedCorpus::parse(&text, strictness)?;
    for (line, reason) in &outcome.skipped {
        eprintln!("warning: {}:{line}: skipped: {reason}", path.display());
    }
    Ok(outcome.corpus)
}

fn read_closed(path: Option<&Path>) -> anyhow::Result<BTreeSet<String>> {
    match path {
        Some(path) => Ok(parse_closed_file(&read_file(path)?)?),
        None => Ok(BTreeSet::new()),
    }
}

/// Writes through a temporary file in the target directory so the
/// destination is either absent or complete, never partial.
fn write_atomic(path: &Path, contents: &str) -> anyhow::Result<()> {
    let dir = match path.parent() {
        Some(parent) if !parent.as_os_str().is_empty() => parent,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path)
        .map_err(|err| Error::Io(std::io::Error::new(err.error.kind(), format!("{}: {}", path.display(), err.error))))?;
    Ok(())
}

fn default_truth_path(out: &Path) -> PathBuf {
    let mut os = out.as_os_str().to_os_string();
    os.push(".truth");
    PathBuf::from(os)
}

fn emit(path: Option<&Path>, contents: &str) -> anyhow::Result<()> {
    match path {
        Some(path) => write_atomic(path, contents),
        None => {
            std::io::stdout().write_all(contents.as_bytes())?;
            Ok(())
        }
    }
}
