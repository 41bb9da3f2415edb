//! Surface-feature guesser for unknown words and lexicon-lookup
//! analysis of where unknown words come from.

use std::collections::{BTreeMap, BTreeSet};

use crate::corpus::{Lexicon, TaggedCorpus};
use crate::error::{Error, Result};
use crate::tagset::{match_pattern, TagsetSpec};

/// A surface characteristic of a word form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SurfaceFeature {
    Suffix(String),
    Prefix(String),
    HasCapital,
    AllCapitals,
    HasDigit,
    HasHyphen,
    /// Matches against the word's shape string, where uppercase letters
    /// become `X`, lowercase letters `x`, digits `d`, and everything
    /// else stays itself. The pattern may use `*` wildcards.
    Shape(String),
}

impl SurfaceFeature {
    /// Parses a feature spec such as `suffix:ed`, `cap`, or `shape:Xx*`.
    pub fn parse(spec: &str) -> Result<SurfaceFeature> {
        let bad = |msg: String| Error::InvalidGuesser { line: 0, msg };
        if let Some(text) = spec.strip_prefix("suffix:") {
            if text.is_empty() {
                return Err(bad("empty suffix".into()));
            }
            return Ok(SurfaceFeature::Suffix(text.to_string()));
        }
        if let Some(text) = spec.strip_prefix("prefix:") {
            if text.is_empty() {
                return Err(bad("empty prefix".into()));
            }
            return Ok(SurfaceFeature::Prefix(text.to_string()));
        }
        if let Some(pattern) = spec.strip_prefix("shape:") {
            if pattern.is_empty() {
                return Err(bad("empty shape pattern".into()));
            }
            return Ok(SurfaceFeature::Shape(pattern.to_string()));
        }
        match spec {
            "cap" => Ok(SurfaceFeature::HasCapital),
            "allcap" => Ok(SurfaceFeature::AllCapitals),
            "digit" => Ok(SurfaceFeature::HasDigit),
            "hyphen" => Ok(SurfaceFeature::HasHyphen),
            other => Err(bad(format!("unknown feature spec {other:?}"))),
        }
    }

    pub fn matches(&self, word: &str) -> bool {
        match self {
            SurfaceFeature::Suffix(text) => word.ends_with(text.as_str()),
            SurfaceFeature::Prefix(text) => word.starts_with(text.as_str()),
            SurfaceFeature::HasCapital => word.chars().any(char::is_uppercase),
            SurfaceFeature::AllCapitals => {
                let mut saw_letter = false;
                for c in word.chars() {
                    if c.is_alphabetic() {
                        saw_letter = true;
                        if !c.is_uppercase() {
                            return false;
                        }
                    }
                }
                saw_letter
            }
            SurfaceFeature::HasDigit => word.chars().any(|c| c.is_ascii_digit()),
            SurfaceFeature::HasHyphen => word.contains('-'),
            SurfaceFeature::Shape(pattern) => {
                let shape: String = word
                    .chars()
                    .map(|c| {
                        if c.is_uppercase() {
                            'X'
                        } else if c.is_lowercase() {
                            'x'
                        } else if c.is_ascii_digit() {
                            'd'
                        } else {
                            c
                        }
                    })
                    .collect();
                match_pattern(pattern, &shape).is_some()
            }
        }
    }
}

/// One guesser rule. Lower priority numbers are consulted first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuesserRule {
    pub priority: u32,
    pub feature: SurfaceFeature,
    pub allowed_tags: BTreeSet<String>,
}

/// An ordered guesser rule set.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GuesserRules {
    rules: Vec<GuesserRule>,
}

impl GuesserRules {
    /// Builds a rule set. Priorities must be unique; rules are kept in
    /// ascending priority order.
    pub fn new(mut rules: Vec<GuesserRule>) -> Result<GuesserRules> {
        rules.sort_by_key(|r| r.priority);
        for pair in rules.windows(2) {
            if pair[0].priority == pair[1].priority {
                return Err(Error::InvalidGuesser {
                    line: 0,
                    msg: format!("duplicate priority {}", pair[0].priority),
                });
            }
        }
        for rule in &rules {
            if rule.allowed_tags.is_empty() {
                return Err(Error::InvalidGuesser {
                    line: 0,
                    msg: format!("rule {} has no tags", rule.priority),
                });
            }
        }
        Ok(GuesserRules { rules })
    }

    pub fn rules(&self) -> &[GuesserRule] {
        &self.rules
    }

    /// Checks every rule tag against the open-class tags of `tagset`.
    pub fn validate(&self, tagset: &TagsetSpec) -> Result<()> {
        for rule in &self.rules {
            for tag in &rule.allowed_tags {
                if !tagset.tags().contains(tag) || tagset.is_closed(tag) {
                    return Err(Error::GuesserTagUnknown {
                        priority: rule.priority,
                        tag: tag.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Candidate tags for an unknown word: the highest-priority matching
    /// rule's tags intersected with the open-class set, falling back to
    /// the full open-class set when no rule matches or the intersection
    /// is empty.
    pub fn guess(&self, word: &str, tagset: &TagsetSpec) -> BTreeSet<String> {
        let open: BTreeSet<String> = tagset.open_tags().cloned().collect();
        for rule in &self.rules {
            if !rule.feature.matches(word) {
                continue;
            }
            let narrowed: BTreeSet<String> =
                rule.allowed_tags.intersection(&open).cloned().collect();
            if narrowed.is_empty() {
                return open;
            }
            return narrowed;
        }
        open
    }
}

/// Candidate tags for an unknown word under an optional rule set. With
/// no rules this is the full open-class set.
pub fn guess_tags(word: &str, rules: Option<&GuesserRules>, tagset: &TagsetSpec) -> BTreeSet<String> {
    match rules {
        Some(rules) => rules.guess(word, tagset),
        None => tagset.open_tags().cloned().collect(),
    }
}

/// Parses a guesser rule file.
///
/// ```text
/// GUESS 1 allcap -> NP
/// GUESS 2 suffix:ed -> VBD,VBN
/// ```
pub fn parse_guesser_file(text: &str) -> Result<GuesserRules> {
    let mut rules = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw).trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let [keyword, priority, feature_spec, arrow, tag_list] = tokens.as_slice() else {
            return Err(Error::InvalidGuesser {
                line: line_no,
                msg: "expected GUESS <priority> <feature-spec> -> tag[,tag...]".into(),
            });
        };
        if *keyword != "GUESS" {
            return Err(Error::InvalidGuesser {
                line: line_no,
                msg: format!("unknown directive {keyword:?}"),
            });
        }
        if *arrow != "->" {
            return Err(Error::InvalidGuesser {
                line: line_no,
                msg: format!("expected ->, got {arrow:?}"),
            });
        }
        let priority: u32 = priority.parse().map_err(|_| Error::InvalidGuesser {
            line: line_no,
            msg: format!("bad priority {priority:?}"),
        })?;
        let feature = SurfaceFeature::parse(feature_spec).map_err(|e| match e {
            Error::InvalidGuesser { msg, .. } => Error::InvalidGuesser { line: line_no, msg },
            other => other,
        })?;
        let allowed_tags: BTreeSet<String> = tag_list
            .split(',')
            .filter(|t| !t.is_empty())
            .map(str::to_string)
            .collect();
        if allowed_tags.is_empty() {
            return Err(Error::InvalidGuesser {
                line: line_no,
                msg: "empty tag list".into(),
            });
        }
        rules.push(GuesserRule {
            priority,
            feature,
            allowed_tags,
        });
    }
    GuesserRules::new(rules).map_err(|e| match e {
        Error::InvalidGuesser { msg, .. } => Error::InvalidGuesser { line: 0, msg },
        other => other,
    })
}

/// Type-level summary of where a test set's unknown words stand in a
/// larger reference lexicon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownAnalysis {
    /// Distinct test surface forms absent from the training lexicon.
    pub total_unknown: usize,
    /// Token occurrences of those forms in the test corpus.
    pub total_unknown_tokens: usize,
    /// Unknown types present in the full reference lexicon.
    pub found_in_full_lexicon: usize,
    /// Unknown types with exactly one tag in the reference lexicon.
    pub single_tag: usize,
    /// Unknown types with more than one tag there.
    pub multi_tag: usize,
    /// Reference tag count per unknown type; key 0 means not found.
    pub tag_count_histogram: BTreeMap<usize, usize>,
}

impl UnknownAnalysis {
    pub fn single_tag_fraction(&self) -> f64 {
        if self.found_in_full_lexicon == 0 {
            return 0.0;
        }
        self.single_tag as f64 / self.found_in_full_lexicon as f64
    }
}

/// Looks up every unknown test word (by type) in a reference lexicon
/// and reports how many tags each could have carried.
pub fn analyze_unknown_words(
    full_lexicon: &Lexicon,
    train_lexicon: &Lexicon,
    test_corpus: &TaggedCorpus,
) -> UnknownAnalysis {
    let mut unknown_types: BTreeSet<&str> = BTreeSet::new();
    let mut unknown_tokens = 0usize;
    for sentence in test_corpus.sentences() {
        for token in sentence.tokens() {
            if !train_lexicon.contains(token.surface()) {
                unknown_types.insert(token.surface());
                unknown_tokens += 1;
            }
        }
    }

    let mut histogram: BTreeMap<usize, usize> = BTreeMap::new();
    let mut found = 0;
    let mut single = 0;
    let mut multi = 0;
    for surface in &unknown_types {
        let n_tags = full_lexicon.tags_of(surface).len();
        *histogram.entry(n_tags).or_insert(0) += 1;
        match n_tags {
            0 => {}
            1 => {
                found += 1;
                single += 1;
            }
            _ => {
                found += 1;
                multi += 1;
            }
        }
    }

    UnknownAnalysis {
        total_unknown: unknown_types.len(),
        total_unknown_tokens: unknown_tokens,
        found_in_full_lexicon: found,
        single_tag: single,
        multi_tag: multi,
        tag_count_histogram: histogram,
    }
}
