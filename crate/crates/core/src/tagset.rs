//! Tagset descriptions and feature-based reduction schemes.
//!
//! A scheme file declares grammatical features, each with an ordered
//! list of rewrite rules. A scheme code such as `GnDc` picks, per
//! feature, whether the distinction is kept (uppercase) or collapsed by
//! applying the feature's rules (lowercase).

use std::collections::{BTreeMap, BTreeSet};

use crate::corpus::{Sentence, TaggedCorpus, Token};
use crate::error::{Error, Result};

/// The tags of a corpus together with which of them are closed-class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagsetSpec {
    tags: BTreeSet<String>,
    closed: BTreeSet<String>,
}

impl TagsetSpec {
    pub fn new(tags: BTreeSet<String>, closed: BTreeSet<String>) -> Result<TagsetSpec> {
        if let Some(tag) = closed.difference(&tags).next() {
            return Err(Error::UnknownTag { tag: tag.clone() });
        }
        Ok(TagsetSpec { tags, closed })
    }

    /// Derives the tagset from a corpus. Declared closed-class tags that
    /// never occur in the corpus are dropped and reported as warnings.
    pub fn from_corpus(
        corpus: &TaggedCorpus,
        declared_closed: &BTreeSet<String>,
    ) -> (TagsetSpec, Vec<String>) {
        let tags = corpus.tagset();
        let mut warnings = Vec::new();
        let mut closed = BTreeSet::new();
        for tag in declared_closed {
            if tags.contains(tag) {
                closed.insert(tag.clone());
            } else {
                warnings.push(format!("closed-class tag {tag:?} does not occur in the corpus"));
            }
        }
        (TagsetSpec { tags, closed }, warnings)
    }

    pub fn tags(&self) -> &BTreeSet<String> {
        &self.tags
    }

    pub fn closed(&self) -> &BTreeSet<String> {
        &self.closed
    }

    pub fn is_closed(&self, tag: &str) -> bool {
        self.closed.contains(tag)
    }

    /// Open-class tags in sorted order.
    pub fn open_tags(&self) -> impl Iterator<Item = &String> {
        self.tags.iter().filter(|t| !self.closed.contains(*t))
    }

    pub fn size(&self) -> usize {
        self.tags.len()
    }
}

/// One rewrite rule: a glob pattern and a replacement that may splice
/// in `$k` captures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionRule {
    pattern: String,
    replacement: String,
}

impl ReductionRule {
    pub fn new(pattern: impl Into<String>, replacement: impl Into<String>) -> Result<ReductionRule> {
        let pattern = pattern.into();
        let replacement = replacement.into();
        if pattern.is_empty() {
            return Err(Error::InvalidScheme {
                line: 0,
                msg: "empty pattern".into(),
            });
        }
        let stars = pattern.matches('*').count();
        let mut chars = replacement.chars().peekable();
        while let Some(c) = chars.next() {
            if c != '$' {
                continue;
            }
            let Some(digit) = chars.peek().and_then(|c| c.to_digit(10)) else {
                continue;
            };
            chars.next();
            let k = digit as usize;
            if k == 0 || k > stars {
                return Err(Error::InvalidScheme {
                    line: 0,
                    msg: format!(
                        "replacement {replacement:?} references ${k} but pattern {pattern:?} has {stars} wildcard(s)"
                    ),
                });
            }
        }
        Ok(ReductionRule { pattern, replacement })
    }

    pub fn pattern(&self) -> &str {
        &self.pattern
    }

    pub fn replacement(&self) -> &str {
        &self.replacement
    }

    /// Applies the rule, returning `None` when the pattern does not match.
    pub fn apply(&self, tag: &str) -> Option<String> {
        let captures = match_pattern(&self.pattern, tag)?;
        let mut out = String::new();
        let mut chars = self.replacement.chars().peekable();
        while let Some(c) = chars.next() {
            if c == '$' {
                if let Some(digit) = chars.peek().and_then(|c| c.to_digit(10)) {
                    chars.next();
                    out.push_str(&captures[digit as usize - 1]);
                    continue;
                }
            }
            out.push(c);
        }
        Some(out)
    }
}

/// Matches `pattern` against `text`. `*` matches any run of characters,
/// greedily from the left: the first wildcard takes the longest segment
/// that still lets the rest of the pattern match. Returns one captured
/// string per wildcard.
pub fn match_pattern(pattern: &str, text: &str) -> Option<Vec<String>> {
    if !pattern.contains('*') {
        return (pattern == text).then(Vec::new);
    }
    let parts: Vec<&str> = pattern.split('*').collect();
    let rest = text.strip_prefix(parts[0])?;
    let mut rest = rest.strip_suffix(parts[parts.len() - 1])?;
    let mut captures_rev: Vec<String> = Vec::new();
    for part in parts[1..parts.len() - 1].iter().rev() {
        if part.is_empty() {
            captures_rev.push(String::new());
            continue;
        }
        let pos = rest.rfind(part)?;
        captures_rev.push(rest[pos + part.len()..].to_string());
        rest = &rest[..pos];
    }
    captures_rev.push(rest.to_string());
    captures_rev.reverse();
    Some(captures_rev)
}

/// A grammatical feature: a letter, a human-readable description, and
/// the rules that collapse the feature's distinctions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Feature {
    pub letter: char,
    pub description: String,
    pub rules: Vec<ReductionRule>,
}

/// All features declared by a scheme file, in declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeFile {
    features: Vec<Feature>,
}

impl SchemeFile {
    pub fn new(features: Vec<Feature>) -> Result<SchemeFile> {
        if features.is_empty() {
            return Err(Error::InvalidFeatures {
                msg: "a scheme file must declare at least one feature".into(),
            });
        }
        let mut seen = BTreeSet::new();
        for feature in &features {
            if !feature.letter.is_ascii_alphabetic() {
                return Err(Error::InvalidFeatures {
                    msg: format!("feature letter {:?} is not a letter", feature.letter),
                });
            }
            if !seen.insert(feature.letter.to_ascii_uppercase()) {
                return Err(Error::DuplicateFeature {
                    letter: feature.letter,
                });
            }
        }
        Ok(SchemeFile { features })
    }

    pub fn features(&self) -> &[Feature] {
        &self.features
    }

    /// Feature letters in declaration order, uppercased.
    pub fn letters(&self) -> String {
        self.features
            .iter()
            .map(|f| f.letter.to_ascii_uppercase())
            .collect()
    }
}

/// Parses a scheme file.
///
/// ```text
/// FEATURE G gender
/// RULE *-UTR-* => $1-$2
/// RULE *-UTR => $1
/// ```
///
/// `RULE` lines attach to the most recent `FEATURE`. Lines starting
/// with `#` and blank lines are ignored.
pub fn parse_scheme_file(text: &str) -> Result<SchemeFile> {
    let mut features: Vec<Feature> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw).trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[0] {
            "FEATURE" => {
                let Some(letter_tok) = tokens.get(1) else {
                    return Err(Error::InvalidScheme {
                        line: line_no,
                        msg: "FEATURE needs a letter".into(),
                    });
                };
                let mut chars = letter_tok.chars();
                let (Some(letter), None) = (chars.next(), chars.next()) else {
                    return Err(Error::InvalidScheme {
                        line: line_no,
                        msg: format!("feature letter {letter_tok:?} must be a single character"),
                    });
                };
                features.push(Feature {
                    letter,
                    description: tokens[2..].join(" "),
                    rules: Vec::new(),
                });
            }
            "RULE" => {
                let Some(feature) = features.last_mut() else {
                    return Err(Error::InvalidScheme {
                        line: line_no,
                        msg: "RULE before any FEATURE".into(),
                    });
                };
                let [_, pattern, arrow, replacement] = tokens.as_slice() else {
                    return Err(Error::InvalidScheme {
                        line: line_no,
                        msg: "expected RULE <pattern> => <replacement>".into(),
                    });
                };
                if *arrow != "=>" {
                    return Err(Error::InvalidScheme {
                        line: line_no,
                        msg: format!("expected =>, got {arrow:?}"),
                    });
                }
                let rule = ReductionRule::new(*pattern, *replacement).map_err(|e| match e {
                    Error::InvalidScheme { msg, .. } => Error::InvalidScheme { line: line_no, msg },
                    other => other,
                })?;
                feature.rules.push(rule);
            }
            other => {
                return Err(Error::InvalidScheme {
                    line: line_no,
                    msg: format!("unknown directive {other:?}"),
                });
            }
        }
    }
    SchemeFile::new(features)
}

/// Parses a closed-class file: one tag per line, `#` comments allowed.
pub fn parse_closed_file(text: &str) -> Result<BTreeSet<String>> {
    let mut closed = BTreeSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw).trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line.split_whitespace().count() != 1 {
            return Err(Error::MalformedLine {
                line: line_no,
                msg: format!("expected a single tag, got {line:?}"),
            });
        }
        closed.insert(line.to_string());
    }
    Ok(closed)
}

/// A scheme file specialised by a code: per feature, keep the
/// distinction (uppercase) or collapse it (lowercase).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionScheme {
    features: Vec<Feature>,
    apply_mask: Vec<bool>,
    code: String,
}

impl ReductionScheme {
    pub fn new(file: &SchemeFile, code: &str) -> Result<ReductionScheme> {
        let features = file.features();
        let code_chars: Vec<char> = code.chars().collect();
        if code_chars.len() != features.len() {
            return Err(Error::CodeMismatch {
                code: code.to_string(),
                features: file.letters(),
            });
        }
        let mut apply_mask = Vec::with_capacity(features.len());
        for (c, feature) in code_chars.iter().zip(features) {
            if c.to_ascii_uppercase() != feature.letter.to_ascii_uppercase() {
                return Err(Error::CodeMismatch {
                    code: code.to_string(),
                    features: file.letters(),
                });
            }
            apply_mask.push(c.is_ascii_lowercase());
        }
        Ok(ReductionScheme {
            features: features.to_vec(),
            apply_mask,
            code: code.to_string(),
        })
    }

    pub fn code(&self) -> &str {
        &self.code
    }

    /// Rewrites one tag. Collapsed features apply in declaration order;
    /// within a feature the first matching rule wins. A rule producing
    /// an empty tag leaves the tag unchanged for that feature.
    pub fn reduce_tag(&self, tag: &str) -> String {
        let mut current = tag.to_string();
        for (feature, &active) in self.features.iter().zip(&self.apply_mask) {
            if !active {
                continue;
            }
            for rule in &feature.rules {
                if let Some(result) = rule.apply(&current) {
                    if !result.is_empty() {
                        current = result;
                    }
                    break;
                }
            }
        }
        current
    }

    /// The image of a tagset under this scheme.
    pub fn reduce_tagset(&self, tags: &BTreeSet<String>) -> BTreeSet<String> {
        tags.iter().map(|t| self.reduce_tag(t)).collect()
    }

    /// Reduces a tagset spec. A reduced tag is closed-class only when
    /// every original tag mapping to it is closed-class.
    pub fn reduce_spec(&self, spec: &TagsetSpec) -> TagsetSpec {
        let mut open_images = BTreeSet::new();
        let mut all_images = BTreeSet::new();
        for tag in spec.tags() {
            let image = self.reduce_tag(tag);
            if !spec.is_closed(tag) {
                open_images.insert(image.clone());
            }
            all_images.insert(image);
        }
        let closed = all_images
            .iter()
            .filter(|t| !open_images.contains(*t))
            .cloned()
            .collect();
        TagsetSpec {
            tags: all_images,
            closed,
        }
    }

    /// Rewrites every gold tag in a corpus, memoizing per distinct tag.
    pub fn reduce_corpus(&self, corpus: &TaggedCorpus) -> Result<TaggedCorpus> {
        let mut memo: BTreeMap<String, String> = BTreeMap::new();
        let mut sentences = Vec::with_capacity(corpus.sentences().len());
        for sentence in corpus.sentences() {
            let mut tokens = Vec::with_capacity(sentence.len());
            for token in sentence.tokens() {
                let mapped = match token.gold_tag() {
                    Some(tag) => {
                        let reduced = memo
                            .entry(tag.to_string())
                            .or_insert_with(|| self.reduce_tag(tag))
                            .clone();
                        Token::tagged(token.surface(), reduced)?
                    }
                    None => token.clone(),
                };
                tokens.push(mapped);
            }
            sentences.push(Sentence::new(tokens)?);
        }
        TaggedCorpus::new(sentences)
    }
}

/// Enumerates all `2^k` scheme codes for the given feature letters,
/// ordered by the number of collapsed features and then positionwise
/// with uppercase before lowercase.
pub fn scheme_code_enumerate(letters: &str) -> Result<Vec<String>> {
    let letters: Vec<char> = letters.chars().collect();
    let k = letters.len();
    if k == 0 || k > 16 {
        return Err(Error::InvalidFeatures {
            msg: format!("expected between 1 and 16 feature letters, got {k}"),
        });
    }
    let mut seen = BTreeSet::new();
    for &l in &letters {
        if !l.is_ascii_alphabetic() {
            return Err(Error::InvalidFeatures {
                msg: format!("feature letter {l:?} is not a letter"),
            });
        }
        if !seen.insert(l.to_ascii_uppercase()) {
            return Err(Error::DuplicateFeature { letter: l });
        }
    }
    let mut codes: Vec<String> = (0..1u32 << k)
        .map(|mask| {
            letters
                .iter()
                .enumerate()
                .map(|(i, l)| {
                    if mask >> (k - 1 - i) & 1 == 1 {
                        l.to_ascii_lowercase()
                    } else {
                        l.to_ascii_uppercase()
                    }
                })
                .collect()
        })
        .collect();
    codes.sort_by_key(|code| {
        let lowered = code.chars().filter(char::is_ascii_lowercase).count();
        (lowered, code.clone())
    });
    Ok(codes)
}
