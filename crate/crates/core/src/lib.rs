//! HMM part-of-speech tagging with tools for condensing tagsets and
//! measuring how tagging accuracy responds to tagset granularity.

pub mod corpus;
pub mod error;
pub mod experiment;
pub mod hmm;
pub mod synthetic;
pub mod tagset;
pub mod unknown;

pub use corpus::{
    split_corpus, Lexicon, ParseOutcome, Sentence, SplitMode, Strictness, TaggedCorpus, Token,
};
pub use error::{Error, Result};
pub use experiment::{
    degree_of_ambiguity, emit_report, evaluate, format_ratio_pct, run_experiment, sweep,
    EvalReport, ExperimentConfig, ReportFormat, REPORT_TSV_HEADER,
};
pub use hmm::{HmmModel, Hypothesis, BOUNDARY};
pub use synthetic::{generate_synthetic_corpus, GenerativeHmm, SyntheticOutput, SyntheticSpec};
pub use tagset::{
    match_pattern, parse_closed_file, parse_scheme_file, scheme_code_enumerate, Feature,
    ReductionRule, ReductionScheme, SchemeFile, TagsetSpec,
};
pub use unknown::{
    analyze_unknown_words, guess_tags, parse_guesser_file, GuesserRule, GuesserRules,
    SurfaceFeature, UnknownAnalysis,
};
