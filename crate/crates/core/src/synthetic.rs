//! Seeded synthetic corpora drawn from an explicit generating HMM. The
//! generator stands in for annotated corpora that cannot be shipped:
//! it produces a corpus, the true parameters that generated it, a
//! matching feature rule file, and optionally a suffix guesser.

use std::collections::BTreeMap;

use rand::distr::weighted::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp, Gamma};

use crate::corpus::{Sentence, TaggedCorpus, Token};
use crate::error::{Error, Result};
use crate::hmm::{decode, LatticeModel, BOUNDARY};

/// Parameters of a synthetic corpus. The seed fully determines the
/// output.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    /// Number of base categories, named `T00`, `T01`, ...
    pub base_tags: usize,
    /// Feature axes crossed with the base tags: letter and cardinality.
    /// An axis `('G', 2)` appends `-G0` or `-G1` to every tag.
    pub axes: Vec<(char, usize)>,
    pub vocab_size: usize,
    /// Target fraction of tokens whose word type carries more than one
    /// tag. Realized per-tag emission mass, so token-level.
    pub ambiguity_target: f64,
    pub tokens: usize,
    /// Sentence lengths are geometric with this mean, truncated below
    /// `max_sentence_len`.
    pub mean_sentence_len: usize,
    pub max_sentence_len: usize,
    /// Encode each word's lowest tag id as a two-letter suffix, making
    /// the tag recoverable from the surface form alone.
    pub suffix_coded: bool,
    pub seed: u64,
}

/// The generator's true parameters, usable as a decoding oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerativeHmm {
    /// Sorted; ids are positions, the boundary takes id `tags.len()`.
    tags: Vec<String>,
    /// `(n+1) x (n+1)` transition probabilities, boundary last.
    trans: Vec<f64>,
    surfaces: Vec<String>,
    word_ids: BTreeMap<String, usize>,
    /// Tag ids per word, sorted ascending.
    word_tags: Vec<Vec<usize>>,
    /// Emission probability per word and tag; absent means zero.
    emissions: Vec<BTreeMap<usize, f64>>,
}

/// Everything `generate_synthetic_corpus` produces.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticOutput {
    pub corpus: TaggedCorpus,
    pub truth: GenerativeHmm,
    /// Scheme rule file text collapsing each feature axis.
    pub rules_text: String,
    /// Suffix guesser file text, present when the spec is suffix-coded.
    pub guesser_text: Option<String>,
}

impl SyntheticSpec {
    fn n_tags(&self) -> usize {
        self.axes
            .iter()
            .fold(self.base_tags, |acc, (_, card)| acc * card)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Error::InfeasibleSpec { msg };
        if self.base_tags == 0 || self.base_tags > 99 {
            return Err(bad(format!("base tag count {} outside 1..=99", self.base_tags)));
        }
        let mut letters = std::collections::BTreeSet::new();
        for &(letter, card) in &self.axes {
            if !letter.is_ascii_uppercase() {
                return Err(bad(format!("axis letter {letter:?} must be an uppercase letter")));
            }
            if !letters.insert(letter) {
                return Err(bad(format!("duplicate axis letter {letter:?}")));
            }
            if !(2..=9).contains(&card) {
                return Err(bad(format!("axis {letter} cardinality {card} outside 2..=9")));
            }
        }
        let n_tags = self.n_tags();
        if n_tags > 676 {
            return Err(bad(format!("{n_tags} tags exceed the 676 the suffix code can name")));
        }
        if !(0.0..1.0).contains(&self.ambiguity_target) {
            return Err(bad(format!("ambiguity target {} outside [0, 1)", self.ambiguity_target)));
        }
        if self.ambiguity_target > 0.0 && n_tags < 2 {
            return Err(bad("ambiguity needs at least two tags".to_string()));
        }
        if self.tokens == 0 {
            return Err(bad("token budget is zero".to_string()));
        }
        if self.mean_sentence_len < 2 {
            return Err(bad(format!(
                "mean sentence length {} must be at least 2",
                self.mean_sentence_len
            )));
        }
        if self.max_sentence_len == 0 {
            return Err(bad("max sentence length is zero".to_string()));
        }
        let n_ambiguous = self.n_ambiguous_types();
        if self.vocab_size < n_ambiguous + n_tags {
            return Err(bad(format!(
                "vocabulary of {} cannot hold {} ambiguous types and one unambiguous word per {} tags",
                self.vocab_size, n_ambiguous, n_tags
            )));
        }
        Ok(())
    }

    fn n_ambiguous_types(&self) -> usize {
        if self.ambiguity_target == 0.0 {
            return 0;
        }
        ((self.vocab_size as f64 * self.ambiguity_target).round() as usize).max(1)
    }

    fn tag_names(&self) -> Vec<String> {
        let mut names: Vec<String> = (0..self.base_tags).map(|b| format!("T{b:02}")).collect();
        for &(letter, card) in &self.axes {
            names = names
                .iter()
                .flat_map(|name| (0..card).map(move |v| format!("{name}-{letter}{v}")))
                .collect();
        }
        names
    }

    fn rules_text(&self) -> String {
        let mut out = String::new();
        for &(letter, card) in &self.axes {
            out.push_str(&format!("FEATURE {letter} synthetic axis\n"));
            for v in 0..card {
                out.push_str(&format!("RULE *-{letter}{v}-* => $1-$2\n"));
                out.push_str(&format!("RULE *-{letter}{v} => $1\n"));
            }
        }
        out
    }
}

fn suffix_for(tag_id: usize) -> String {
    let a = (b'a' + (tag_id / 26) as u8) as char;
    let b = (b'a' + (tag_id % 26) as u8) as char;
    format!("{a}{b}")
}

/// Samples a corpus from a freshly drawn generating HMM.
///
/// Word types split into unambiguous (one tag; the first cover every
/// tag) and ambiguous (two or, for a tenth of them, three tags). Each
/// tag's emission row gives the ambiguous types a total mass equal to
/// the ambiguity target, which makes the target token-level. Sentence
/// lengths follow the per-tag boundary transition mass of
/// `1 / mean_sentence_len`; the final sentence is clipped so the token
/// budget is met exactly.
pub fn generate_synthetic_corpus(spec: &SyntheticSpec) -> Result<SyntheticOutput> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let tags = spec.tag_names();
    let n_tags = tags.len();
    debug_assert!(tags.windows(2).all(|w| w[0] < w[1]));

    let n_ambiguous = spec.n_ambiguous_types();
    let n_unambiguous = spec.vocab_size - n_ambiguous;
    let mut word_tags: Vec<Vec<usize>> = Vec::with_capacity(spec.vocab_size);
    for i in 0..n_unambiguous {
        let tag = if i < n_tags { i } else { rng.random_range(0..n_tags) };
        word_tags.push(vec![tag]);
    }
    for _ in 0..n_ambiguous {
        let k = if n_tags >= 3 && rng.random::<f64>() < 0.1 { 3 } else { 2 };
        let mut chosen = rand::seq::index::sample(&mut rng, n_tags, k).into_vec();
        chosen.sort_unstable();
        word_tags.push(chosen);
    }

    let surfaces: Vec<String> = word_tags
        .iter()
        .enumerate()
        .map(|(i, tags_of)| {
            if spec.suffix_coded {
                format!("w{i:05}{}", suffix_for(tags_of[0]))
            } else {
                format!("w{i:05}")
            }
        })
        .collect();

    let exp = Exp::new(1.0).expect("rate 1 is valid");
    let word_weight: Vec<f64> = (0..spec.vocab_size).map(|_| exp.sample(&mut rng) + 1e-3).collect();

    let mut unambiguous_of: Vec<Vec<usize>> = vec![Vec::new(); n_tags];
    let mut ambiguous_of: Vec<Vec<usize>> = vec![Vec::new(); n_tags];
    for (word, tags_of) in word_tags.iter().enumerate() {
        if tags_of.len() == 1 {
            unambiguous_of[tags_of[0]].push(word);
        } else {
            for &t in tags_of {
                ambiguous_of[t].push(word);
            }
        }
    }

    let mut emissions: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); spec.vocab_size];
    let mut emission_words: Vec<Vec<usize>> = Vec::with_capacity(n_tags);
    let mut emission_dists: Vec<WeightedIndex<f64>> = Vec::with_capacity(n_tags);
    for t in 0..n_tags {
        let beta = if ambiguous_of[t].is_empty() { 0.0 } else { spec.ambiguity_target };
        let unambiguous_sum: f64 = unambiguous_of[t].iter().map(|&w| word_weight[w]).sum();
        let ambiguous_sum: f64 = ambiguous_of[t].iter().map(|&w| word_weight[w]).sum();
        let mut words = Vec::new();
        let mut probs = Vec::new();
        for &w in &unambiguous_of[t] {
            words.push(w);
            probs.push(word_weight[w] / unambiguous_sum * (1.0 - beta));
        }
        for &w in &ambiguous_of[t] {
            words.push(w);
            probs.push(word_weight[w] / ambiguous_sum * beta);
        }
        for (&w, &p) in words.iter().zip(&probs) {
            emissions[w].insert(t, p);
        }
        emission_dists.push(
            WeightedIndex::new(&probs)
                .map_err(|e| Error::Internal(format!("emission weights for tag {t}: {e}")))?,
        );
        emission_words.push(words);
    }

    let n1 = n_tags + 1;
    let p_end = 1.0 / spec.mean_sentence_len as f64;
    let gamma = Gamma::new(0.3, 1.0).expect("shape 0.3 scale 1 is valid");
    let mut trans = vec![0.0f64; n1 * n1];
    for from in 0..n_tags {
        let raw: Vec<f64> = (0..n_tags).map(|_| gamma.sample(&mut rng) + 1e-6).collect();
        let total: f64 = raw.iter().sum();
        for (to, &weight) in raw.iter().enumerate() {
            trans[from * n1 + to] = weight / total * (1.0 - p_end);
        }
        trans[from * n1 + n_tags] = p_end;
    }
    {
        let raw: Vec<f64> = (0..n_tags).map(|_| gamma.sample(&mut rng) + 1e-6).collect();
        let total: f64 = raw.iter().sum();
        for (to, &weight) in raw.iter().enumerate() {
            trans[n_tags * n1 + to] = weight / total;
        }
    }
    let row_dists: Vec<WeightedIndex<f64>> = (0..n_tags)
        .map(|from| WeightedIndex::new(&trans[from * n1..from * n1 + n1]))
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Internal(format!("transition weights: {e}")))?;
    let boundary_dist = WeightedIndex::new(&trans[n_tags * n1..n_tags * n1 + n_tags])
        .map_err(|e| Error::Internal(format!("initial weights: {e}")))?;

    let mut sentences = Vec::new();
    let mut produced = 0usize;
    while produced < spec.tokens {
        let mut tokens = Vec::new();
        let mut state = boundary_dist.sample(&mut rng);
        loop {
            let word = emission_words[state][emission_dists[state].sample(&mut rng)];
            tokens.push(Token::tagged(surfaces[word].clone(), tags[state].clone())?);
            produced += 1;
            if produced == spec.tokens || tokens.len() >= spec.max_sentence_len {
                break;
            }
            let next = row_dists[state].sample(&mut rng);
            if next == n_tags {
                break;
            }
            state = next;
        }
        sentences.push(Sentence::new(tokens)?);
    }

    let word_ids = surfaces
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i))
        .collect();
    let guesser_text = spec.suffix_coded.then(|| {
        let mut out = String::new();
        for (t, tag) in tags.iter().enumerate() {
            out.push_str(&format!("GUESS {} suffix:{} -> {}\n", t + 1, suffix_for(t), tag));
        }
        out
    });

    Ok(SyntheticOutput {
        corpus: TaggedCorpus::new(sentences)?,
        truth: GenerativeHmm {
            tags,
            trans,
            surfaces,
            word_ids,
            word_tags,
            emissions,
        },
        rules_text: spec.rules_text(),
        guesser_text,
    })
}

impl GenerativeHmm {
    pub fn tags(&self) -> &[String] {
        &self.tags
    }

    /// True tag ids of a word type, or `None` for foreign surfaces.
    pub fn tags_of_word(&self, surface: &str) -> Option<&[usize]> {
        self.word_ids.get(surface).map(|&w| self.word_tags[w].as_slice())
    }

    /// Fraction of corpus tokens whose word type has more than one tag
    /// under the true assignment.
    pub fn token_ambiguity(&self, corpus: &TaggedCorpus) -> f64 {
        let mut ambiguous = 0usize;
        for sentence in corpus.sentences() {
            for token in sentence.tokens() {
                if self
                    .tags_of_word(token.surface())
                    .is_some_and(|tags| tags.len() > 1)
                {
                    ambiguous += 1;
                }
            }
        }
        ambiguous as f64 / corpus.token_count() as f64
    }

    fn tag_id(&self, tag: &str) -> Result<usize> {
        self.tags
            .binary_search_by(|probe| probe.as_str().cmp(tag))
            .map_err(|_| Error::UnknownTag {
                tag: tag.to_string(),
            })
    }

    /// Viterbi under the true parameters, restricted to the given
    /// candidate tags per position. Same tie-break as the trained
    /// decoder: earliest listed candidate wins.
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
            id_candidates.push(tags.iter().map(|t| self.tag_id(t)).collect::<Result<Vec<_>>>()?);
        }
        let words: Vec<&str> = words.iter().map(String::as_str).collect();
        let (path, score) = decode(self, &words, &id_candidates)?;
        Ok((
            path.into_iter().map(|id| self.tags[id].clone()).collect(),
            score,
        ))
    }

    /// Canonical sidecar serialization of the true parameters.
    pub fn to_truth_string(&self) -> String {
        let n = self.tags.len();
        let n1 = n + 1;
        let mut out = String::from("HMMTAG-TRUTH 1\n");
        out.push_str(&format!("BOUNDARY {BOUNDARY}\n"));
        out.push_str(&format!("TAGS {n}\n"));
        for tag in &self.tags {
            out.push_str(tag);
            out.push('\n');
        }
        let name_of = |node: usize| if node == n { BOUNDARY } else { self.tags[node].as_str() };
        let file_nodes: Vec<usize> = std::iter::once(n).chain(0..n).collect();
        let mut rows = Vec::new();
        for &from in &file_nodes {
            for &to in &file_nodes {
                let p = self.trans[from * n1 + to];
                if p > 0.0 {
                    rows.push(format!("{}\t{}\t{}\n", name_of(from), name_of(to), p));
                }
            }
        }
        out.push_str(&format!("TRANS {}\n", rows.len()));
        for row in rows {
            out.push_str(&row);
        }
        let mut emit_rows = Vec::new();
        for t in 0..n {
            for (word, emission) in self.surfaces.iter().zip(&self.emissions) {
                if let Some(p) = emission.get(&t) {
                    emit_rows.push(format!("{}\t{}\t{}\n", self.tags[t], word, p));
                }
            }
        }
        out.push_str(&format!("EMIT {}\n", emit_rows.len()));
        for row in emit_rows {
            out.push_str(&row);
        }
        out
    }
}

impl LatticeModel for GenerativeHmm {
    fn boundary_id(&self) -> usize {
        self.tags.len()
    }

    fn log_transition(&self, from: usize, to: usize) -> f64 {
        self.trans[from * (self.tags.len() + 1) + to].ln()
    }

    fn log_emission(&self, word: &str, tag: usize) -> f64 {
        self.word_ids
            .get(word)
            .and_then(|&w| self.emissions[w].get(&tag))
            .copied()
            .unwrap_or(0.0)
            .ln()
    }
}
