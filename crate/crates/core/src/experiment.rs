//! Evaluation metrics, the reduce-train-decode experiment pipeline,
//! sweeps over scheme codes, and report emission.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::corpus::{split_corpus, SplitMode, TaggedCorpus};
use crate::error::{Error, Result};
use crate::hmm::HmmModel;
use crate::tagset::{ReductionScheme, SchemeFile, TagsetSpec};
use crate::unknown::GuesserRules;

/// Token-level evaluation of one experiment run. Counts partition the
/// test tokens into unambiguous-known, ambiguous-known, and unknown.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalReport {
    pub scheme_code: String,
    pub tagset_size: usize,
    pub n_tokens: usize,
    /// Tokens whose hypothesis set has more than one tag, unknown words
    /// included. Numerator of the degree of ambiguity.
    pub n_multi_hypothesis: usize,
    /// Known tokens with more than one hypothesized tag.
    pub n_ambiguous: usize,
    pub ambiguous_correct: usize,
    /// Tokens absent from the training lexicon.
    pub n_unknown: usize,
    pub unknown_correct: usize,
    /// Known tokens with exactly one hypothesized tag.
    pub n_unambiguous: usize,
    pub unambiguous_correct: usize,
    /// False when the run cannot produce unknown words (training on the
    /// whole corpus); the unknown column then renders as `-`.
    pub unknown_reported: bool,
}

impl EvalReport {
    pub fn total_correct(&self) -> usize {
        self.unambiguous_correct + self.ambiguous_correct + self.unknown_correct
    }

    pub fn degree_of_ambiguity_pct(&self) -> f64 {
        ratio_pct(self.n_multi_hypothesis, self.n_tokens)
    }

    pub fn ambiguous_accuracy_pct(&self) -> f64 {
        ratio_pct(self.ambiguous_correct, self.n_ambiguous)
    }

    pub fn unknown_accuracy_pct(&self) -> f64 {
        ratio_pct(self.unknown_correct, self.n_unknown)
    }

    pub fn unambiguous_accuracy_pct(&self) -> f64 {
        ratio_pct(self.unambiguous_correct, self.n_unambiguous)
    }

    pub fn overall_accuracy_pct(&self) -> f64 {
        ratio_pct(self.total_correct(), self.n_tokens)
    }

    /// Checks the category partition and the weighted-accuracy identity.
    /// Violations are bugs, not data errors.
    pub fn check_consistency(&self) -> Result<()> {
        let partition = self.n_unambiguous + self.n_ambiguous + self.n_unknown;
        if partition != self.n_tokens {
            return Err(Error::Internal(format!(
                "categories cover {partition} tokens of {}",
                self.n_tokens
            )));
        }
        if self.unambiguous_correct > self.n_unambiguous
            || self.ambiguous_correct > self.n_ambiguous
            || self.unknown_correct > self.n_unknown
        {
            return Err(Error::Internal("more correct tokens than tokens".into()));
        }
        if self.n_multi_hypothesis < self.n_ambiguous || self.n_multi_hypothesis > self.n_tokens {
            return Err(Error::Internal(format!(
                "multi-hypothesis count {} outside [{}, {}]",
                self.n_multi_hypothesis, self.n_ambiguous, self.n_tokens
            )));
        }
        if self.n_tokens > 0 {
            let weighted = (self.unambiguous_accuracy_pct() * self.n_unambiguous as f64
                + self.ambiguous_accuracy_pct() * self.n_ambiguous as f64
                + self.unknown_accuracy_pct() * self.n_unknown as f64)
                / self.n_tokens as f64;
            let overall = self.overall_accuracy_pct();
            if (weighted - overall).abs() > 1e-9 {
                return Err(Error::Internal(format!(
                    "weighted accuracy {weighted} disagrees with overall {overall}"
                )));
            }
        }
        Ok(())
    }
}

fn ratio_pct(num: usize, den: usize) -> f64 {
    if den == 0 {
        return 100.0;
    }
    100.0 * num as f64 / den as f64
}

/// Formats `100 * num / den` with two decimals, rounding half-up in
/// exact integer arithmetic. An empty denominator prints as `100.00`
/// (an accuracy over no tokens is vacuously perfect).
pub fn format_ratio_pct(num: u64, den: u64) -> String {
    if den == 0 {
        return "100.00".to_string();
    }
    let hundredths = (num as u128 * 10_000 * 2 + den as u128) / (den as u128 * 2);
    format!("{}.{:02}", hundredths / 100, hundredths % 100)
}

/// Percentage of test tokens with more than one hypothesized tag.
/// Unknown words count when their hypothesis set exceeds one.
pub fn degree_of_ambiguity(
    test: &TaggedCorpus,
    model: &HmmModel,
    guesser: Option<&GuesserRules>,
) -> Result<f64> {
    let mut multi = 0usize;
    for sentence in test.sentences() {
        for hyp in model.hypothesize_sentence(sentence, guesser)? {
            if hyp.candidate_tags.len() > 1 {
                multi += 1;
            }
        }
    }
    Ok(100.0 * multi as f64 / test.token_count() as f64)
}

/// Scores predictions against gold tags, splitting tokens into
/// unambiguous-known, ambiguous-known, and unknown. The caller supplies
/// one predicted tag sequence per test sentence.
pub fn evaluate(
    test: &TaggedCorpus,
    predicted: &[Vec<String>],
    model: &HmmModel,
    guesser: Option<&GuesserRules>,
) -> Result<EvalReport> {
    let expected_tokens = test.token_count();
    let got_tokens: usize = predicted.iter().map(Vec::len).sum();
    if predicted.len() != test.sentences().len() || got_tokens != expected_tokens {
        return Err(Error::LengthMismatch {
            expected: expected_tokens,
            got: got_tokens,
        });
    }

    let mut report = EvalReport {
        scheme_code: String::new(),
        tagset_size: model.n_tags(),
        n_tokens: expected_tokens,
        n_multi_hypothesis: 0,
        n_ambiguous: 0,
        ambiguous_correct: 0,
        n_unknown: 0,
        unknown_correct: 0,
        n_unambiguous: 0,
        unambiguous_correct: 0,
        unknown_reported: true,
    };

    for (sentence, tags) in test.sentences().iter().zip(predicted) {
        if tags.len() != sentence.len() {
            return Err(Error::LengthMismatch {
                expected: sentence.len(),
                got: tags.len(),
            });
        }
        let hypotheses = model.hypothesize_sentence(sentence, guesser)?;
        for ((token, tag), hyp) in sentence.tokens().iter().zip(tags).zip(&hypotheses) {
            let gold = token.gold_tag().ok_or_else(|| Error::UntaggedToken {
                surface: token.surface().to_string(),
            })?;
            let correct = tag == gold;
            if hyp.candidate_tags.len() > 1 {
                report.n_multi_hypothesis += 1;
            }
            if hyp.is_unknown {
                report.n_unknown += 1;
                report.unknown_correct += correct as usize;
            } else if hyp.candidate_tags.len() > 1 {
                report.n_ambiguous += 1;
                report.ambiguous_correct += correct as usize;
            } else {
                report.n_unambiguous += 1;
                report.unambiguous_correct += correct as usize;
            }
        }
    }

    report.check_consistency()?;
    Ok(report)
}

/// Settings shared by every variant of an experiment.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub train_fraction: f64,
    pub mode: SplitMode,
    /// Token target for the in-sample test set. `None` derives it from
    /// the complement of the train fraction, with a floor of one token.
    pub sample_size: Option<usize>,
    pub smoothing: bool,
    /// Closed-class tags, named in the unreduced tagset.
    pub closed: BTreeSet<String>,
    pub guesser: Option<GuesserRules>,
}

impl Default for ExperimentConfig {
    fn default() -> ExperimentConfig {
        ExperimentConfig {
            train_fraction: 0.95,
            mode: SplitMode::HeldOut,
            sample_size: None,
            smoothing: true,
            closed: BTreeSet::new(),
            guesser: None,
        }
    }
}

impl ExperimentConfig {
    fn resolved_sample_size(&self, corpus_tokens: usize) -> usize {
        self.sample_size.unwrap_or_else(|| {
            let derived = ((1.0 - self.train_fraction) * corpus_tokens as f64).round() as usize;
            derived.max(1)
        })
    }
}

/// Runs one variant end to end: reduce the corpus, split, train, decode
/// the test portion, and score it.
pub fn run_experiment(
    corpus: &TaggedCorpus,
    scheme: &ReductionScheme,
    config: &ExperimentConfig,
) -> Result<EvalReport> {
    let reduced = scheme.reduce_corpus(corpus)?;
    let tagset_size = reduced.tagset().len();
    let (full_spec, _) = TagsetSpec::from_corpus(corpus, &config.closed);
    let reduced_closed = scheme.reduce_spec(&full_spec).closed().clone();

    let sample_size = config.resolved_sample_size(corpus.token_count());
    let (train, test) = split_corpus(&reduced, config.train_fraction, config.mode, sample_size)?;
    let model = HmmModel::train(&train, config.smoothing, &reduced_closed)?;

    let guesser = config.guesser.as_ref();
    let mut predicted = Vec::with_capacity(test.sentences().len());
    for sentence in test.sentences() {
        predicted.push(model.viterbi(sentence, guesser)?);
    }

    let mut report = evaluate(&test, &predicted, &model, guesser)?;
    report.scheme_code = scheme.code().to_string();
    report.tagset_size = tagset_size;
    report.unknown_reported = config.mode == SplitMode::HeldOut;
    Ok(report)
}

/// Runs one experiment per scheme code, up to `workers` at a time.
/// Reports come back in input order; any failing variant aborts the
/// sweep, naming the earliest failing code.
pub fn sweep(
    corpus: &TaggedCorpus,
    file: &SchemeFile,
    codes: &[String],
    config: &ExperimentConfig,
    workers: usize,
) -> Result<Vec<EvalReport>> {
    if codes.is_empty() {
        return Err(Error::EmptyInput);
    }
    let schemes: Vec<ReductionScheme> = codes
        .iter()
        .map(|code| ReductionScheme::new(file, code))
        .collect::<Result<_>>()?;

    let slots: Vec<Mutex<Option<Result<EvalReport>>>> =
        schemes.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = workers.clamp(1, schemes.len());

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(scheme) = schemes.get(i) else {
                    break;
                };
                let result = run_experiment(corpus, scheme, config);
                *slots[i].lock().expect("worker cannot panic holding the slot lock") = Some(result);
            });
        }
    });

    let mut reports = Vec::with_capacity(slots.len());
    for (slot, code) in slots.into_iter().zip(codes) {
        let result = slot
            .into_inner()
            .expect("worker cannot panic holding the slot lock")
            .expect("every slot is filled before the scope ends");
        match result {
            Ok(report) => reports.push(report),
            Err(err) => {
                return Err(Error::VariantFailed {
                    code: code.clone(),
                    source: Box::new(err),
                });
            }
        }
    }
    Ok(reports)
}

/// Output layouts for a batch of reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    /// One tab-separated row per report, header included.
    Tsv,
    /// Human-readable blocks with the counting conventions spelled out.
    Pretty,
    /// `tagset_size,accuracy_pct,index` points for plotting ambiguous
    /// accuracy against tagset size, largest tagset first.
    PlotPoints,
}

pub const REPORT_TSV_HEADER: &str = "index\tscheme\ttagset_size\tambiguity_pct\tambiguous_acc_pct\tunknown_acc_pct\toverall_acc_pct\tn_ambiguous\tn_unknown\tn_tokens";

/// Renders reports in the requested format. Indices are 1-based input
/// positions.
pub fn emit_report(reports: &[EvalReport], format: ReportFormat) -> String {
    match format {
        ReportFormat::Tsv => {
            let mut out = String::from(REPORT_TSV_HEADER);
            out.push('\n');
            for (i, r) in reports.iter().enumerate() {
                let unknown = if r.unknown_reported {
                    format_ratio_pct(r.unknown_correct as u64, r.n_unknown as u64)
                } else {
                    "-".to_string()
                };
                out.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                    i + 1,
                    r.scheme_code,
                    r.tagset_size,
                    format_ratio_pct(r.n_multi_hypothesis as u64, r.n_tokens as u64),
                    format_ratio_pct(r.ambiguous_correct as u64, r.n_ambiguous as u64),
                    unknown,
                    format_ratio_pct(r.total_correct() as u64, r.n_tokens as u64),
                    r.n_ambiguous,
                    r.n_unknown,
                    r.n_tokens,
                ));
            }
            out
        }
        ReportFormat::Pretty => {
            let mut out = String::from(
                "conventions: degree of ambiguity counts every token with more than\n\
                 one hypothesized tag, unknown words included; accuracies over empty\n\
                 categories print as 100.00; unknown accuracy is token-level.\n",
            );
            for (i, r) in reports.iter().enumerate() {
                out.push_str(&format!(
                    "\n[{}] scheme {}  tagset size {}\n",
                    i + 1,
                    r.scheme_code,
                    r.tagset_size
                ));
                out.push_str(&format!(
                    "  tokens {}  degree of ambiguity {}%\n",
                    r.n_tokens,
                    format_ratio_pct(r.n_multi_hypothesis as u64, r.n_tokens as u64)
                ));
                out.push_str(&format!(
                    "  ambiguous known   {}%  ({}/{})\n",
                    format_ratio_pct(r.ambiguous_correct as u64, r.n_ambiguous as u64),
                    r.ambiguous_correct,
                    r.n_ambiguous
                ));
                if r.unknown_reported {
                    out.push_str(&format!(
                        "  unknown           {}%  ({}/{})\n",
                        format_ratio_pct(r.unknown_correct as u64, r.n_unknown as u64),
                        r.unknown_correct,
                        r.n_unknown
                    ));
                } else {
                    out.push_str("  unknown           -       (not measurable in this mode)\n");
                }
                out.push_str(&format!(
                    "  overall           {}%  ({}/{})\n",
                    format_ratio_pct(r.total_correct() as u64, r.n_tokens as u64),
                    r.total_correct(),
                    r.n_tokens
                ));
            }
            out
        }
        ReportFormat::PlotPoints => {
            let mut order: Vec<usize> = (0..reports.len()).collect();
            order.sort_by(|&a, &b| {
                reports[b]
                    .tagset_size
                    .cmp(&reports[a].tagset_size)
                    .then(a.cmp(&b))
            });
            let mut out = String::from("tagset_size,accuracy_pct,index\n");
            for i in order {
                let r = &reports[i];
                out.push_str(&format!(
                    "{},{},{}\n",
                    r.tagset_size,
                    format_ratio_pct(r.ambiguous_correct as u64, r.n_ambiguous as u64),
                    i + 1
                ));
            }
            out
        }
    }
}
