//! Helpers shared by the integration test targets: an exhaustive
//! decoding oracle and random generators for corpora and rule sets.

#![allow(dead_code)]

use rand::prelude::*;

use tagfold::tagset::{Feature, ReductionRule, SchemeFile};
use tagfold::{HmmModel, Sentence, TaggedCorpus, Token, BOUNDARY};

/// Scores one candidate path with the same left-to-right fold the
/// decoder uses, so tie comparisons against decoder output are exact.
pub fn fold_path_score(model: &HmmModel, words: &[String], path: &[String]) -> f64 {
    let n = words.len();
    let mut score = model.transition_prob(BOUNDARY, &path[0]).unwrap().ln()
        + model.emission_prob(&words[0], &path[0]).unwrap().ln();
    for t in 1..n {
        score += model.transition_prob(&path[t - 1], &path[t]).unwrap().ln();
        score += model.emission_prob(&words[t], &path[t]).unwrap().ln();
    }
    score + model.transition_prob(&path[n - 1], BOUNDARY).unwrap().ln()
}

fn next_odometer(indices: &mut [usize], radices: &[usize]) -> bool {
    for pos in (0..indices.len()).rev() {
        indices[pos] += 1;
        if indices[pos] < radices[pos] {
            return true;
        }
        indices[pos] = 0;
    }
    false
}

fn fold_prefix_score(
    model: &HmmModel,
    words: &[String],
    candidates: &[Vec<String>],
    indices: &[usize],
) -> f64 {
    let first = &candidates[0][indices[0]];
    let mut score = model.transition_prob(BOUNDARY, first).unwrap().ln()
        + model.emission_prob(&words[0], first).unwrap().ln();
    for t in 1..indices.len() {
        let prev = &candidates[t - 1][indices[t - 1]];
        let cur = &candidates[t][indices[t]];
        score += model.transition_prob(prev, cur).unwrap().ln();
        score += model.emission_prob(&words[t], cur).unwrap().ln();
    }
    score
}

/// Exhaustive decode. Every lattice cell value is recomputed by folding
/// all prefixes outright, with no recurrence, and the declared
/// earliest-candidate rule then selects the path. Also returns the
/// maximum over whole-path fold scores as an extra cross-check; it must
/// equal the selected score.
pub fn enumerate_decode(
    model: &HmmModel,
    words: &[String],
    candidates: &[Vec<String>],
) -> (Vec<String>, f64, f64) {
    let n = words.len();
    let mut cells: Vec<Vec<f64>> = Vec::with_capacity(n);
    for t in 0..n {
        let radices: Vec<usize> = candidates[..=t].iter().map(Vec::len).collect();
        assert!(radices.iter().all(|&r| r > 0));
        let mut row = vec![f64::NEG_INFINITY; candidates[t].len()];
        let mut indices = vec![0usize; t + 1];
        loop {
            let score = fold_prefix_score(model, words, candidates, &indices);
            let slot = &mut row[indices[t]];
            if score > *slot {
                *slot = score;
            }
            if !next_odometer(&mut indices, &radices) {
                break;
            }
        }
        cells.push(row);
    }

    let transition = |from: &str, to: &str| model.transition_prob(from, to).unwrap().ln();
    let last = n - 1;
    let mut best_j = 0;
    let mut best = cells[last][0] + transition(&candidates[last][0], BOUNDARY);
    for (j, tag) in candidates[last].iter().enumerate().skip(1) {
        let score = cells[last][j] + transition(tag, BOUNDARY);
        if score > best {
            best = score;
            best_j = j;
        }
    }

    let mut path_indices = vec![0usize; n];
    path_indices[last] = best_j;
    for t in (1..n).rev() {
        let target = &candidates[t][path_indices[t]];
        let mut best_k = 0;
        let mut best_prefix = cells[t - 1][0] + transition(&candidates[t - 1][0], target);
        for (k, tag) in candidates[t - 1].iter().enumerate().skip(1) {
            let score = cells[t - 1][k] + transition(tag, target);
            if score > best_prefix {
                best_prefix = score;
                best_k = k;
            }
        }
        path_indices[t - 1] = best_k;
    }

    let full_radices: Vec<usize> = candidates.iter().map(Vec::len).collect();
    let mut indices = vec![0usize; n];
    let mut max_whole_path = f64::NEG_INFINITY;
    loop {
        let path: Vec<String> = indices
            .iter()
            .zip(candidates)
            .map(|(&i, c)| c[i].clone())
            .collect();
        let score = fold_path_score(model, words, &path);
        if score > max_whole_path {
            max_whole_path = score;
        }
        if !next_odometer(&mut indices, &full_radices) {
            break;
        }
    }

    let path = path_indices
        .iter()
        .zip(candidates)
        .map(|(&i, c)| c[i].clone())
        .collect();
    (path, best, max_whole_path)
}

/// Random tagged corpus over tags `T0..` and words `w0..`. Every tag is
/// guaranteed to occur at least once so the trained tagset is exactly
/// `n_tags` wide.
pub fn random_corpus(
    rng: &mut impl Rng,
    n_tags: usize,
    vocab: usize,
    n_sentences: usize,
    max_len: usize,
) -> TaggedCorpus {
    let tags: Vec<String> = (0..n_tags).map(|i| format!("T{i}")).collect();
    let words: Vec<String> = (0..vocab).map(|i| format!("w{i}")).collect();
    let mut sentences = Vec::with_capacity(n_sentences);
    let mut pending: Vec<usize> = (0..n_tags).collect();
    for _ in 0..n_sentences {
        let len = rng.random_range(1..=max_len);
        let mut tokens = Vec::with_capacity(len);
        for _ in 0..len {
            let tag = pending.pop().unwrap_or_else(|| rng.random_range(0..n_tags));
            let word = rng.random_range(0..vocab);
            tokens.push(Token::tagged(words[word].clone(), tags[tag].clone()).unwrap());
        }
        sentences.push(Sentence::new(tokens).unwrap());
    }
    while let Some(tag) = pending.pop() {
        let word = rng.random_range(0..vocab);
        sentences.push(
            Sentence::new(vec![
                Token::tagged(words[word].clone(), tags[tag].clone()).unwrap()
            ])
            .unwrap(),
        );
    }
    TaggedCorpus::new(sentences).unwrap()
}

/// Random corpus over two-segment tags like `N-X1` so reduction rules
/// have structure to strip.
pub fn random_segmented_corpus(rng: &mut impl Rng, n_sentences: usize) -> TaggedCorpus {
    let bases = ["N", "V", "J"];
    let segments = ["X1", "X2", "Y1", "Y2"];
    let mut sentences = Vec::with_capacity(n_sentences);
    for _ in 0..n_sentences {
        let len = rng.random_range(1..=8);
        let mut tokens = Vec::with_capacity(len);
        for _ in 0..len {
            let base = bases[rng.random_range(0..bases.len())];
            let tag = if rng.random::<f64>() < 0.8 {
                format!("{base}-{}", segments[rng.random_range(0..segments.len())])
            } else {
                base.to_string()
            };
            let word = format!("w{}", rng.random_range(0..40));
            tokens.push(Token::tagged(word, tag).unwrap());
        }
        sentences.push(Sentence::new(tokens).unwrap());
    }
    TaggedCorpus::new(sentences).unwrap()
}

/// Random rule file over the same segment vocabulary
/// `random_segmented_corpus` draws from. Rules are built from safe
/// templates; replacements never name the boundary tag.
pub fn random_scheme_file(rng: &mut impl Rng) -> SchemeFile {
    let letters = ['A', 'B', 'C'];
    let n_features = rng.random_range(1..=letters.len());
    let segments = ["X1", "X2", "Y1", "Y2"];
    let mut features = Vec::with_capacity(n_features);
    for &letter in letters.iter().take(n_features) {
        let n_rules = rng.random_range(1..=4);
        let mut rules = Vec::with_capacity(n_rules);
        for _ in 0..n_rules {
            let segment = segments[rng.random_range(0..segments.len())];
            let rule = match rng.random_range(0..4) {
                0 => ReductionRule::new(format!("*-{segment}"), "$1"),
                1 => ReductionRule::new(format!("*-{segment}"), "$1-Z"),
                2 => ReductionRule::new("N-*", "N"),
                _ => ReductionRule::new("*", "ALL"),
            };
            rules.push(rule.unwrap());
        }
        features.push(Feature {
            letter,
            description: "random feature".to_string(),
            rules,
        });
    }
    SchemeFile::new(features).unwrap()
}

/// Random code for `file`: one uppercase or lowercase letter per
/// feature.
pub fn random_code(rng: &mut impl Rng, file: &SchemeFile) -> String {
    file.letters()
        .chars()
        .map(|c| {
            if rng.random::<bool>() {
                c.to_ascii_uppercase()
            } else {
                c.to_ascii_lowercase()
            }
        })
        .collect()
}
