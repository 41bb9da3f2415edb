//! Vertical-format corpora: one token per line, blank lines between
//! sentences, a tab separating surface form from tag.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

/// A single token, optionally carrying a gold tag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    surface: String,
    gold_tag: Option<String>,
}

impl Token {
    /// Builds a tagged token. Surface and tag must be non-empty and free
    /// of whitespace so the vertical format stays unambiguous.
    pub fn tagged(surface: impl Into<String>, tag: impl Into<String>) -> Result<Token> {
        let surface = surface.into();
        let tag = tag.into();
        check_field(&surface, "surface form")?;
        check_field(&tag, "tag")?;
        Ok(Token {
            surface,
            gold_tag: Some(tag),
        })
    }

    /// Builds an untagged token (test-time input).
    pub fn untagged(surface: impl Into<String>) -> Result<Token> {
        let surface = surface.into();
        check_field(&surface, "surface form")?;
        Ok(Token {
            surface,
            gold_tag: None,
        })
    }

    pub fn surface(&self) -> &str {
        &self.surface
    }

    pub fn gold_tag(&self) -> Option<&str> {
        self.gold_tag.as_deref()
    }
}

fn check_field(text: &str, what: &str) -> Result<()> {
    if text.is_empty() {
        return Err(Error::MalformedLine {
            line: 0,
            msg: format!("empty {what}"),
        });
    }
    if text.chars().any(char::is_whitespace) {
        return Err(Error::MalformedLine {
            line: 0,
            msg: format!("{what} {text:?} contains whitespace"),
        });
    }
    Ok(())
}

/// A non-empty sequence of tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    tokens: Vec<Token>,
}

impl Sentence {
    pub fn new(tokens: Vec<Token>) -> Result<Sentence> {
        if tokens.is_empty() {
            return Err(Error::Internal("empty sentence".into()));
        }
        Ok(Sentence { tokens })
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// How strictly the parser treats malformed lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strictness {
    /// Any malformed line is an error.
    Strict,
    /// Malformed lines are skipped and reported.
    Lenient,
}

/// Result of a lenient parse: the corpus plus any skipped lines.
#[derive(Debug)]
pub struct ParseOutcome {
    pub corpus: TaggedCorpus,
    /// `(line_number, reason)` for every line dropped in lenient mode.
    pub skipped: Vec<(usize, String)>,
}

/// A corpus of sentences. Sentences may mix tagged and untagged tokens;
/// training requires a fully tagged corpus and checks separately.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedCorpus {
    sentences: Vec<Sentence>,
}

impl TaggedCorpus {
    pub fn new(sentences: Vec<Sentence>) -> Result<TaggedCorpus> {
        if sentences.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(TaggedCorpus { sentences })
    }

    pub fn sentences(&self) -> &[Sentence] {
        &self.sentences
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(Sentence::len).sum()
    }

    /// Distinct tags appearing on tagged tokens, in sorted order.
    pub fn tagset(&self) -> BTreeSet<String> {
        let mut tags = BTreeSet::new();
        for sentence in &self.sentences {
            for token in sentence.tokens() {
                if let Some(tag) = token.gold_tag() {
                    tags.insert(tag.to_string());
                }
            }
        }
        tags
    }

    pub fn fully_tagged(&self) -> bool {
        self.sentences
            .iter()
            .all(|s| s.tokens().iter().all(|t| t.gold_tag().is_some()))
    }

    /// Parses vertical format. Lines starting with `#` are comments.
    /// A line with no tab is an untagged token; one tab separates
    /// surface from tag; more fields are malformed.
    pub fn parse(text: &str, strictness: Strictness) -> Result<ParseOutcome> {
        let mut sentences = Vec::new();
        let mut current: Vec<Token> = Vec::new();
        let mut skipped = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.strip_suffix('\r').unwrap_or(raw);
            if line.starts_with('#') {
                continue;
            }
            if line.trim().is_empty() {
                if !current.is_empty() {
                    sentences.push(Sentence::new(std::mem::take(&mut current))?);
                }
                continue;
            }

            let token = parse_token_line(line).map_err(|e| relocate(e, line_no));
            match token {
                Ok(token) => current.push(token),
                Err(err) => match strictness {
                    Strictness::Strict => return Err(err),
                    Strictness::Lenient => skipped.push((line_no, err.to_string())),
                },
            }
        }
        if !current.is_empty() {
            sentences.push(Sentence::new(current)?);
        }

        Ok(ParseOutcome {
            corpus: TaggedCorpus::new(sentences)?,
            skipped,
        })
    }

    /// Serializes back to vertical format. Parsing the output yields an
    /// equal corpus.
    pub fn to_vertical(&self) -> String {
        let mut out = String::new();
        for (i, sentence) in self.sentences.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            for token in sentence.tokens() {
                out.push_str(token.surface());
                if let Some(tag) = token.gold_tag() {
                    out.push('\t');
                    out.push_str(tag);
                }
                out.push('\n');
            }
        }
        out
    }
}

fn parse_token_line(line: &str) -> Result<Token> {
    let mut parts = line.split('\t');
    let surface = parts.next().unwrap_or("");
    match (parts.next(), parts.next()) {
        (None, _) => Token::untagged(surface),
        (Some(tag), None) => Token::tagged(surface, tag),
        (Some(_), Some(_)) => Err(Error::MalformedLine {
            line: 0,
            msg: format!("expected at most one tab, got {:?}", line),
        }),
    }
}

fn relocate(err: Error, line: usize) -> Error {
    match err {
        Error::MalformedLine { msg, .. } => Error::MalformedLine { line, msg },
        other => other,
    }
}

/// Train/test split strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitMode {
    /// Leading fraction of sentences trains, the remainder tests.
    HeldOut,
    /// Train on everything, test on a sample drawn from the training data.
    InSample,
}

/// Splits a corpus into train and test portions.
///
/// Held-out mode takes the first `ceil(fraction * n_sentences)` sentences
/// for training and the rest for testing. In-sample mode trains on the
/// whole corpus and tests on evenly spaced sentences totalling at least
/// `sample_size` tokens.
pub fn split_corpus(
    corpus: &TaggedCorpus,
    fraction: f64,
    mode: SplitMode,
    sample_size: usize,
) -> Result<(TaggedCorpus, TaggedCorpus)> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::InvalidFraction { fraction });
    }
    let sentences = corpus.sentences();
    match mode {
        SplitMode::HeldOut => {
            let n = sentences.len();
            // Small epsilon guards against 0.95 * 20 evaluating to 19.000000000000004.
            let cut = ((fraction * n as f64) - 1e-9).ceil() as usize;
            let cut = cut.clamp(1, n);
            if cut == n {
                return Err(Error::EmptyTestSplit { fraction });
            }
            let train = TaggedCorpus::new(sentences[..cut].to_vec())?;
            let test = TaggedCorpus::new(sentences[cut..].to_vec())?;
            Ok((train, test))
        }
        SplitMode::InSample => {
            let total = corpus.token_count();
            if sample_size > total {
                return Err(Error::SampleTooLarge {
                    requested: sample_size,
                    available: total,
                });
            }
            let s = sentences.len();
            let mut chosen: Vec<Sentence> = Vec::new();
            for k in 1..=s {
                chosen.clear();
                let mut tokens = 0;
                for j in 0..k {
                    let sentence = &sentences[j * s / k];
                    tokens += sentence.len();
                    chosen.push(sentence.clone());
                }
                if tokens >= sample_size {
                    break;
                }
            }
            let test = TaggedCorpus::new(std::mem::take(&mut chosen))?;
            Ok((corpus.clone(), test))
        }
    }
}

/// Word -> tag -> count map extracted from a tagged corpus.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Lexicon {
    entries: BTreeMap<String, BTreeMap<String, u64>>,
}

impl Lexicon {
    pub fn build(corpus: &TaggedCorpus) -> Result<Lexicon> {
        let mut entries: BTreeMap<String, BTreeMap<String, u64>> = BTreeMap::new();
        for sentence in corpus.sentences() {
            for token in sentence.tokens() {
                let tag = token.gold_tag().ok_or_else(|| Error::UntaggedToken {
                    surface: token.surface().to_string(),
                })?;
                *entries
                    .entry(token.surface().to_string())
                    .or_default()
                    .entry(tag.to_string())
                    .or_insert(0) += 1;
            }
        }
        Ok(Lexicon { entries })
    }

    pub fn from_entries(entries: BTreeMap<String, BTreeMap<String, u64>>) -> Lexicon {
        Lexicon { entries }
    }

    pub fn contains(&self, surface: &str) -> bool {
        self.entries.contains_key(surface)
    }

    /// Tags observed for a surface form, sorted.
    pub fn tags_of(&self, surface: &str) -> Vec<&str> {
        self.entries
            .get(surface)
            .map(|tags| tags.keys().map(String::as_str).collect())
            .unwrap_or_default()
    }

    pub fn count(&self, surface: &str, tag: &str) -> u64 {
        self.entries
            .get(surface)
            .and_then(|tags| tags.get(tag))
            .copied()
            .unwrap_or(0)
    }

    /// Total token count across all entries.
    pub fn total_count(&self) -> u64 {
        self.entries
            .values()
            .flat_map(|tags| tags.values())
            .sum()
    }

    pub fn n_words(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str, u64)> + '_ {
        self.entries.iter().flat_map(|(word, tags)| {
            tags.iter().map(move |(tag, &count)| (word.as_str(), tag.as_str(), count))
        })
    }

    /// Serializes as tab-separated `surface, tag, count` rows sorted by
    /// surface then tag.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (word, tag, count) in self.iter() {
            out.push_str(&format!("{word}\t{tag}\t{count}\n"));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Lexicon> {
        let mut entries: BTreeMap<String, BTreeMap<String, u64>> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.strip_suffix('\r').unwrap_or(raw);
            if line.starts_with('#') || line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let [word, tag, count] = fields.as_slice() else {
                return Err(Error::MalformedLine {
                    line: line_no,
                    msg: format!("expected 3 tab-separated fields, got {}", fields.len()),
                });
            };
            let count: u64 = count.parse().map_err(|_| Error::MalformedLine {
                line: line_no,
                msg: format!("bad count {count:?}"),
            })?;
            if count == 0 {
                return Err(Error::MalformedLine {
                    line: line_no,
                    msg: "zero count".into(),
                });
            }
            let prev = entries
                .entry(word.to_string())
                .or_default()
                .insert(tag.to_string(), count);
            if prev.is_some() {
                return Err(Error::MalformedLine {
                    line: line_no,
                    msg: format!("duplicate entry for {word:?} {tag:?}"),
                });
            }
        }
        Ok(Lexicon { entries })
    }
}
