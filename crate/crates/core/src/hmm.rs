//! First-order HMM tagger: training, transition and emission estimates,
//! per-word tag hypotheses, and Viterbi decoding in log space.

use std::collections::BTreeSet;

use crate::corpus::{Lexicon, Sentence, TaggedCorpus};
use crate::error::{Error, Result};
use crate::tagset::{ReductionScheme, TagsetSpec};
use crate::unknown::{guess_tags, GuesserRules};

/// Pseudo-tag bracketing every sentence at both ends. Reserved: corpora
/// must not use it as a real tag.
pub const BOUNDARY: &str = "<s>";

const MODEL_HEADER: &str = "HMMTAG-MODEL 1";

/// A trained tagging model. Immutable after training; raw counts are
/// stored so smoothing stays a pure view decision.
#[derive(Debug, Clone, PartialEq)]
pub struct HmmModel {
    /// Real tags in sorted order; ids are positions in this list. The
    /// boundary pseudo-tag takes id `tags.len()`.
    tags: Vec<String>,
    closed: Vec<bool>,
    tag_freq: Vec<u64>,
    boundary_freq: u64,
    /// Transition counts, `(n+1) x (n+1)` row-major with the boundary
    /// in the last row and column.
    trans: Vec<u64>,
    lexicon: Lexicon,
    smoothing: bool,
}

/// Candidate tags for one word position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypothesis {
    pub word_position: usize,
    /// Sorted, nonempty.
    pub candidate_tags: Vec<String>,
    pub is_unknown: bool,
}

impl HmmModel {
    /// Trains on a fully tagged corpus. Tags in `closed` that never
    /// occur in the corpus are ignored.
    pub fn train(corpus: &TaggedCorpus, smoothing: bool, closed: &BTreeSet<String>) -> Result<HmmModel> {
        let lexicon = Lexicon::build(corpus)?;
        let tag_set = corpus.tagset();
        if tag_set.contains(BOUNDARY) {
            return Err(Error::ReservedTag {
                tag: BOUNDARY.to_string(),
            });
        }
        let tags: Vec<String> = tag_set.into_iter().collect();
        let n = tags.len();
        let n1 = n + 1;
        let closed_flags: Vec<bool> = tags.iter().map(|t| closed.contains(t)).collect();

        let mut tag_freq = vec![0u64; n];
        let mut trans = vec![0u64; n1 * n1];
        let mut boundary_freq = 0u64;
        for sentence in corpus.sentences() {
            let mut prev = n;
            for token in sentence.tokens() {
                let tag = token.gold_tag().ok_or_else(|| Error::UntaggedToken {
                    surface: token.surface().to_string(),
                })?;
                let id = tags
                    .binary_search_by(|probe| probe.as_str().cmp(tag))
                    .map_err(|_| Error::Internal(format!("tag {tag:?} missing from tagset")))?;
                trans[prev * n1 + id] += 1;
                tag_freq[id] += 1;
                prev = id;
            }
            trans[prev * n1 + n] += 1;
            boundary_freq += 1;
        }

        Ok(HmmModel {
            tags,
            closed: closed_flags,
            tag_freq,
            boundary_freq,
            trans,
            lexicon,
            smoothing,
        })
    }

    pub fn tags(&self) -> &[String] {
        &self.tags
    }

    pub fn n_tags(&self) -> usize {
        self.tags.len()
    }

    pub fn smoothing(&self) -> bool {
        self.smoothing
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    pub fn boundary_freq(&self) -> u64 {
        self.boundary_freq
    }

    pub fn tag_freq(&self, tag: &str) -> Result<u64> {
        let node = self.node_id(tag)?;
        Ok(self.freq_of(node))
    }

    /// Raw transition count between two tags (or the boundary).
    pub fn transition_count(&self, from: &str, to: &str) -> Result<u64> {
        let from = self.node_id(from)?;
        let to = self.node_id(to)?;
        Ok(self.trans[from * (self.tags.len() + 1) + to])
    }

    /// The model's tagset with closed-class flags.
    pub fn tagset_spec(&self) -> TagsetSpec {
        let tags: BTreeSet<String> = self.tags.iter().cloned().collect();
        let closed: BTreeSet<String> = self
            .tags
            .iter()
            .zip(&self.closed)
            .filter(|(_, &c)| c)
            .map(|(t, _)| t.clone())
            .collect();
        TagsetSpec::new(tags, closed).expect("closed flags are drawn from the tag list")
    }

    fn node_id(&self, tag: &str) -> Result<usize> {
        if tag == BOUNDARY {
            return Ok(self.tags.len());
        }
        self.tags
            .binary_search_by(|probe| probe.as_str().cmp(tag))
            .map_err(|_| Error::UnknownTag {
                tag: tag.to_string(),
            })
    }

    fn freq_of(&self, node: usize) -> u64 {
        if node == self.tags.len() {
            self.boundary_freq
        } else {
            self.tag_freq[node]
        }
    }

    /// P(to | from) over tags and the boundary. With smoothing on this
    /// is `(count + 1) / (freq + T)` where `T` counts the boundary too;
    /// off it is the raw ratio, taken as 0 for an unseen row.
    pub fn transition_prob(&self, from: &str, to: &str) -> Result<f64> {
        let from = self.node_id(from)?;
        let to = self.node_id(to)?;
        Ok(self.transition_prob_ids(from, to))
    }

    fn transition_prob_ids(&self, from: usize, to: usize) -> f64 {
        let n1 = self.tags.len() + 1;
        let count = self.trans[from * n1 + to];
        let freq = self.freq_of(from);
        if self.smoothing {
            (count as f64 + 1.0) / (freq as f64 + n1 as f64)
        } else if freq == 0 {
            0.0
        } else {
            count as f64 / freq as f64
        }
    }

    /// P(word | tag): the lexicon ratio for known words, a constant 1
    /// for unknown words so only transitions discriminate.
    pub fn emission_prob(&self, word: &str, tag: &str) -> Result<f64> {
        let id = self.node_id(tag)?;
        if id == self.tags.len() {
            return Err(Error::UnknownTag {
                tag: BOUNDARY.to_string(),
            });
        }
        Ok(self.emission_prob_id(word, id))
    }

    fn emission_prob_id(&self, word: &str, tag_id: usize) -> f64 {
        if !self.lexicon.contains(word) {
            return 1.0;
        }
        self.lexicon.count(word, &self.tags[tag_id]) as f64 / self.tag_freq[tag_id] as f64
    }

    /// Candidate tags for one word: the exact lexicon tag set when the
    /// word is known, otherwise the open-class tags as narrowed by the
    /// guesser.
    pub fn hypothesize(
        &self,
        word: &str,
        position: usize,
        guesser: Option<&GuesserRules>,
    ) -> Result<Hypothesis> {
        self.hypothesize_with(word, position, guesser, &self.tagset_spec())
    }

    fn hypothesize_with(
        &self,
        word: &str,
        position: usize,
        guesser: Option<&GuesserRules>,
        spec: &TagsetSpec,
    ) -> Result<Hypothesis> {
        if self.lexicon.contains(word) {
            return Ok(Hypothesis {
                word_position: position,
                candidate_tags: self
                    .lexicon
                    .tags_of(word)
                    .into_iter()
                    .map(str::to_string)
                    .collect(),
                is_unknown: false,
            });
        }
        let candidates: Vec<String> = guess_tags(word, guesser, spec).into_iter().collect();
        if candidates.is_empty() {
            return Err(Error::EmptyOpenClass {
                surface: word.to_string(),
            });
        }
        Ok(Hypothesis {
            word_position: position,
            candidate_tags: candidates,
            is_unknown: true,
        })
    }

    /// Hypotheses for every token of a sentence.
    pub fn hypothesize_sentence(
        &self,
        sentence: &Sentence,
        guesser: Option<&GuesserRules>,
    ) -> Result<Vec<Hypothesis>> {
        let spec = self.tagset_spec();
        sentence
            .tokens()
            .iter()
            .enumerate()
            .map(|(i, token)| self.hypothesize_with(token.surface(), i, guesser, &spec))
            .collect()
    }

    /// Most probable tag sequence for a sentence, candidates restricted
    /// to each word's hypothesis set. Score ties resolve to the earliest
    /// candidate in sorted tag order at every backpointer choice.
    pub fn viterbi(&self, sentence: &Sentence, guesser: Option<&GuesserRules>) -> Result<Vec<String>> {
        let hypotheses = self.hypothesize_sentence(sentence, guesser)?;
        let words: Vec<&str> = sentence.tokens().iter().map(|t| t.surface()).collect();
        let mut candidates = Vec::with_capacity(hypotheses.len());
        for hyp in &hypotheses {
            let ids: Vec<usize> = hyp
                .candidate_tags
                .iter()
                .map(|t| self.node_id(t))
                .collect::<Result<_>>()?;
            candidates.push(ids);
        }
        let (path, _) = decode(self, &words, &candidates)?;
        Ok(path.into_iter().map(|id| self.tags[id].clone()).collect())
    }

    /// Viterbi over caller-supplied candidate sets, returning the path
    /// and its log probability. Candidates are evaluated in the order
    /// given, so ties resolve to the earliest listed candidate.
    pub fn viterbi_restricted(
        &self,
        words: &[String],
        candidates: &[Vec<String>],
    ) -> Result<(Vec<String>, f64)> {
        if words.is_empty() {
            return Err(Error::EmptyInput);
        }
        if words.len() != candidates.len() {
            return Err(Error::LengthMismatch {
                expected: words.len(),
                got: candidates.len(),
            });
        }
        let mut id_candidates = Vec::with_capacity(candidates.len());
        for (word, tags) in words.iter().zip(candidates) {
            if tags.is_empty() {
                return Err(Error::EmptyOpenClass {
                    surface: word.clone(),
                });
            }
            let ids: Vec<usize> = tags
                .iter()
                .map(|t| {
                    let id = self.node_id(t)?;
                    if id == self.tags.len() {
                        return Err(Error::UnknownTag {
                            tag: BOUNDARY.to_string(),
                        });
                    }
                    Ok(id)
                })
                .collect::<Result<_>>()?;
            id_candidates.push(ids);
        }
        let words: Vec<&str> = words.iter().map(String::as_str).collect();
        let (path, score) = decode(self, &words, &id_candidates)?;
        Ok((
            path.into_iter().map(|id| self.tags[id].clone()).collect(),
            score,
        ))
    }

    /// Merges this model's counts under a reduction scheme, as if the
    /// corpus had been reduced before training.
    pub fn remap_counts(&self, scheme: &ReductionScheme) -> Result<HmmModel> {
        let n = self.tags.len();
        let images: Vec<String> = self.tags.iter().map(|t| scheme.reduce_tag(t)).collect();
        for image in &images {
            if image == BOUNDARY {
                return Err(Error::ReservedTag {
                    tag: image.clone(),
                });
            }
        }
        let new_tags: Vec<String> = images
            .iter()
            .cloned()
            .collect::<BTreeSet<String>>()
            .into_iter()
            .collect();
        let new_n = new_tags.len();
        let map: Vec<usize> = images
            .iter()
            .map(|image| {
                new_tags
                    .binary_search(image)
                    .expect("every image is in the new tag list")
            })
            .collect();
        let node_map = |node: usize| if node == n { new_n } else { map[node] };

        let mut closed = vec![true; new_n];
        let mut tag_freq = vec![0u64; new_n];
        for (i, &m) in map.iter().enumerate() {
            if !self.closed[i] {
                closed[m] = false;
            }
            tag_freq[m] += self.tag_freq[i];
        }

        let n1 = n + 1;
        let new_n1 = new_n + 1;
        let mut trans = vec![0u64; new_n1 * new_n1];
        for from in 0..n1 {
            for to in 0..n1 {
                trans[node_map(from) * new_n1 + node_map(to)] += self.trans[from * n1 + to];
            }
        }

        let mut entries: std::collections::BTreeMap<String, std::collections::BTreeMap<String, u64>> =
            std::collections::BTreeMap::new();
        for (word, tag, count) in self.lexicon.iter() {
            let id = self
                .tags
                .binary_search_by(|probe| probe.as_str().cmp(tag))
                .expect("lexicon tags come from the tagset");
            *entries
                .entry(word.to_string())
                .or_default()
                .entry(new_tags[map[id]].clone())
                .or_insert(0) += count;
        }

        Ok(HmmModel {
            tags: new_tags,
            closed,
            tag_freq,
            boundary_freq: self.boundary_freq,
            trans,
            lexicon: Lexicon::from_entries(entries),
            smoothing: self.smoothing,
        })
    }

    /// Canonical text serialization. `parse_model` accepts exactly this
    /// layout, so serialize-parse-serialize is byte-identical.
    pub fn to_model_string(&self) -> String {
        let n = self.tags.len();
        let n1 = n + 1;
        let mut out = String::new();
        out.push_str(MODEL_HEADER);
        out.push('\n');
        out.push_str(if self.smoothing { "SMOOTHING on\n" } else { "SMOOTHING off\n" });
        out.push_str(&format!("BOUNDARY {} {}\n", BOUNDARY, self.boundary_freq));
        out.push_str(&format!("TAGS {n}\n"));
        for (i, tag) in self.tags.iter().enumerate() {
            let class = if self.closed[i] { "closed" } else { "open" };
            out.push_str(&format!("{tag}\t{class}\t{}\n", self.tag_freq[i]));
        }
        // File order puts the boundary row and column first.
        let file_nodes: Vec<usize> = std::iter::once(n).chain(0..n).collect();
        let name_of = |node: usize| if node == n { BOUNDARY } else { self.tags[node].as_str() };
        let mut rows = Vec::new();
        for &from in &file_nodes {
            for &to in &file_nodes {
                let count = self.trans[from * n1 + to];
                if count > 0 {
                    rows.push(format!("{}\t{}\t{count}\n", name_of(from), name_of(to)));
                }
            }
        }
        out.push_str(&format!("TRANS {}\n", rows.len()));
        for row in rows {
            out.push_str(&row);
        }
        let lex: Vec<(String, String, u64)> = self
            .lexicon
            .iter()
            .map(|(w, t, c)| (w.to_string(), t.to_string(), c))
            .collect();
        out.push_str(&format!("LEX {}\n", lex.len()));
        for (word, tag, count) in lex {
            out.push_str(&format!("{word}\t{tag}\t{count}\n"));
        }
        out
    }

    /// Parses the canonical model format, validating section structure,
    /// ordering, and the row-sum invariants.
    pub fn parse_model(text: &str) -> Result<HmmModel> {
        let mut lines = text.lines().enumerate();
        let mut next_line = |expect: &str| -> Result<(usize, String)> {
            lines
                .next()
                .map(|(i, raw)| (i + 1, raw.strip_suffix('\r').unwrap_or(raw).to_string()))
                .ok_or_else(|| Error::InvalidModel {
                    line: 0,
                    msg: format!("unexpected end of file, expected {expect}"),
                })
        };
        let bad = |line: usize, msg: String| Error::InvalidModel { line, msg };

        let (line_no, header) = next_line("header")?;
        if header != MODEL_HEADER {
            return Err(bad(line_no, format!("expected {MODEL_HEADER:?}")));
        }
        let (line_no, smoothing_line) = next_line("SMOOTHING")?;
        let smoothing = match smoothing_line.as_str() {
            "SMOOTHING on" => true,
            "SMOOTHING off" => false,
            other => return Err(bad(line_no, format!("expected SMOOTHING on|off, got {other:?}"))),
        };
        let (line_no, boundary_line) = next_line("BOUNDARY")?;
        let boundary_freq = match boundary_line.split(' ').collect::<Vec<_>>().as_slice() {
            ["BOUNDARY", BOUNDARY, freq] => freq
                .parse::<u64>()
                .ok()
                .filter(|&f| f > 0)
                .ok_or_else(|| bad(line_no, format!("bad boundary frequency {freq:?}")))?,
            _ => return Err(bad(line_no, "expected BOUNDARY <s> <freq>".into())),
        };

        let (line_no, tags_line) = next_line("TAGS")?;
        let n: usize = tags_line
            .strip_prefix("TAGS ")
            .and_then(|s| s.parse().ok())
            .filter(|&n| n > 0)
            .ok_or_else(|| bad(line_no, "expected TAGS <count>".into()))?;
        let mut tags: Vec<String> = Vec::with_capacity(n);
        let mut closed = Vec::with_capacity(n);
        let mut tag_freq = Vec::with_capacity(n);
        for _ in 0..n {
            let (line_no, row) = next_line("tag row")?;
            let fields: Vec<&str> = row.split('\t').collect();
            let [tag, class, freq] = fields.as_slice() else {
                return Err(bad(line_no, format!("expected tag\tclass\tfreq, got {row:?}")));
            };
            if *tag == BOUNDARY {
                return Err(bad(line_no, "boundary pseudo-tag listed as a real tag".into()));
            }
            if let Some(last) = tags.last() {
                if last.as_str() >= *tag {
                    return Err(bad(line_no, format!("tag {tag:?} out of sorted order")));
                }
            }
            let is_closed = match *class {
                "closed" => true,
                "open" => false,
                other => return Err(bad(line_no, format!("bad class {other:?}"))),
            };
            let freq: u64 = freq
                .parse()
                .ok()
                .filter(|&f| f > 0)
                .ok_or_else(|| bad(line_no, format!("bad frequency {freq:?}")))?;
            tags.push(tag.to_string());
            closed.push(is_closed);
            tag_freq.push(freq);
        }
        let n1 = n + 1;
        // Maps a node to its position in file order (boundary first).
        let file_index = |tags: &[String], name: &str| -> Option<usize> {
            if name == BOUNDARY {
                return Some(0);
            }
            tags.binary_search_by(|p| p.as_str().cmp(name)).ok().map(|i| i + 1)
        };

        let (line_no, trans_line) = next_line("TRANS")?;
        let m: usize = trans_line
            .strip_prefix("TRANS ")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad(line_no, "expected TRANS <count>".into()))?;
        let mut trans = vec![0u64; n1 * n1];
        let mut last_order = None;
        for _ in 0..m {
            let (line_no, row) = next_line("transition row")?;
            let fields: Vec<&str> = row.split('\t').collect();
            let [from, to, count] = fields.as_slice() else {
                return Err(bad(line_no, format!("expected from\tto\tcount, got {row:?}")));
            };
            let from_idx = file_index(&tags, from)
                .ok_or_else(|| bad(line_no, format!("unknown tag {from:?}")))?;
            let to_idx = file_index(&tags, to)
                .ok_or_else(|| bad(line_no, format!("unknown tag {to:?}")))?;
            let order = from_idx * n1 + to_idx;
            if last_order.is_some_and(|prev| prev >= order) {
                return Err(bad(line_no, format!("transition row {from:?} {to:?} out of order")));
            }
            last_order = Some(order);
            let count: u64 = count
                .parse()
                .ok()
                .filter(|&c| c > 0)
                .ok_or_else(|| bad(line_no, format!("bad count {count:?}")))?;
            // Back from file order to internal ids (boundary last).
            let internal = |idx: usize| if idx == 0 { n } else { idx - 1 };
            trans[internal(from_idx) * n1 + internal(to_idx)] = count;
        }
        for node in 0..n1 {
            let row_sum: u64 = (0..n1).map(|to| trans[node * n1 + to]).sum();
            let freq = if node == n { boundary_freq } else { tag_freq[node] };
            if row_sum != freq {
                let name = if node == n { BOUNDARY } else { &tags[node] };
                return Err(bad(
                    0,
                    format!("transition row {name:?} sums to {row_sum}, frequency says {freq}"),
                ));
            }
        }

        let (line_no, lex_line) = next_line("LEX")?;
        let k: usize = lex_line
            .strip_prefix("LEX ")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad(line_no, "expected LEX <count>".into()))?;
        let mut entries: std::collections::BTreeMap<String, std::collections::BTreeMap<String, u64>> =
            std::collections::BTreeMap::new();
        let mut last_key: Option<(String, String)> = None;
        let mut lex_tag_totals = vec![0u64; n];
        for _ in 0..k {
            let (line_no, row) = next_line("lexicon row")?;
            let fields: Vec<&str> = row.split('\t').collect();
            let [word, tag, count] = fields.as_slice() else {
                return Err(bad(line_no, format!("expected word\ttag\tcount, got {row:?}")));
            };
            let tag_id = tags
                .binary_search_by(|p| p.as_str().cmp(tag))
                .map_err(|_| bad(line_no, format!("unknown tag {tag:?}")))?;
            let key = (word.to_string(), tag.to_string());
            if last_key.as_ref().is_some_and(|prev| prev >= &key) {
                return Err(bad(line_no, format!("lexicon row {word:?} {tag:?} out of order")));
            }
            let count: u64 = count
                .parse()
                .ok()
                .filter(|&c| c > 0)
                .ok_or_else(|| bad(line_no, format!("bad count {count:?}")))?;
            lex_tag_totals[tag_id] += count;
            entries
                .entry(key.0.clone())
                .or_default()
                .insert(key.1.clone(), count);
            last_key = Some(key);
        }
        for (id, (&total, freq)) in lex_tag_totals.iter().zip(&tag_freq).enumerate() {
            if total != *freq {
                return Err(bad(
                    0,
                    format!(
                        "lexicon counts for tag {:?} sum to {total}, frequency says {freq}",
                        tags[id]
                    ),
                ));
            }
        }
        for (i, raw) in lines {
            if !raw.trim().is_empty() {
                return Err(bad(i + 1, format!("trailing content {raw:?}")));
            }
        }

        Ok(HmmModel {
            tags,
            closed,
            tag_freq,
            boundary_freq,
            trans,
            lexicon: Lexicon::from_entries(entries),
            smoothing,
        })
    }
}

/// Scoring interface shared by trained models and the synthetic
/// generator's true parameters.
pub(crate) trait LatticeModel {
    /// Id used for the boundary pseudo-tag; real tag ids lie below it.
    fn boundary_id(&self) -> usize;
    fn log_transition(&self, from: usize, to: usize) -> f64;
    fn log_emission(&self, word: &str, tag: usize) -> f64;
}

impl LatticeModel for HmmModel {
    fn boundary_id(&self) -> usize {
        self.tags.len()
    }

    fn log_transition(&self, from: usize, to: usize) -> f64 {
        self.transition_prob_ids(from, to).ln()
    }

    fn log_emission(&self, word: &str, tag: usize) -> f64 {
        self.emission_prob_id(word, tag).ln()
    }
}

/// Viterbi over the given per-position candidate id sets. Returns the
/// best path and its log probability. Within every maximization the
/// earliest candidate wins ties, so output is deterministic.
pub(crate) fn decode<M: LatticeModel>(
    model: &M,
    words: &[&str],
    candidates: &[Vec<usize>],
) -> Result<(Vec<usize>, f64)> {
    if words.is_empty() {
        return Err(Error::EmptyInput);
    }
    if words.len() != candidates.len() {
        return Err(Error::LengthMismatch {
            expected: words.len(),
            got: candidates.len(),
        });
    }
    if candidates.iter().any(Vec::is_empty) {
        return Err(Error::Internal("empty candidate set reached the decoder".into()));
    }
    let boundary = model.boundary_id();

    let mut scores: Vec<Vec<f64>> = Vec::with_capacity(words.len());
    let mut back: Vec<Vec<usize>> = Vec::with_capacity(words.len());
    scores.push(
        candidates[0]
            .iter()
            .map(|&c| model.log_transition(boundary, c) + model.log_emission(words[0], c))
            .collect(),
    );
    back.push(vec![0; candidates[0].len()]);

    for t in 1..words.len() {
        let prev_scores = &scores[t - 1];
        let prev_candidates = &candidates[t - 1];
        let mut row = Vec::with_capacity(candidates[t].len());
        let mut pointers = Vec::with_capacity(candidates[t].len());
        for &c in &candidates[t] {
            let mut best_k = 0;
            let mut best = prev_scores[0] + model.log_transition(prev_candidates[0], c);
            for (k, &p) in prev_candidates.iter().enumerate().skip(1) {
                let score = prev_scores[k] + model.log_transition(p, c);
                if score > best {
                    best = score;
                    best_k = k;
                }
            }
            row.push(best + model.log_emission(words[t], c));
            pointers.push(best_k);
        }
        scores.push(row);
        back.push(pointers);
    }

    let last = words.len() - 1;
    let mut best_k = 0;
    let mut best = scores[last][0] + model.log_transition(candidates[last][0], boundary);
    for (k, &c) in candidates[last].iter().enumerate().skip(1) {
        let score = scores[last][k] + model.log_transition(c, boundary);
        if score > best {
            best = score;
            best_k = k;
        }
    }

    let mut path = vec![0usize; words.len()];
    let mut k = best_k;
    for t in (0..words.len()).rev() {
        path[t] = candidates[t][k];
        k = back[t][k];
    }
    Ok((path, best))
}
