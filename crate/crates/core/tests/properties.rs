//! Randomized properties over parsing, splitting, training, decoding,
//! reduction, and evaluation, plus structural checks on the shipped
//! sample files.

mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use common::{enumerate_decode, random_corpus};
use tagfold::tagset::{parse_scheme_file, ReductionScheme, SchemeFile};
use tagfold::unknown::{GuesserRule, GuesserRules, SurfaceFeature};
use tagfold::{
    guess_tags, run_experiment, scheme_code_enumerate, split_corpus, ExperimentConfig, HmmModel,
    SplitMode, Strictness, TaggedCorpus, TagsetSpec, BOUNDARY,
};

fn corpus_from_seed(seed: u64, n_tags: usize, vocab: usize) -> TaggedCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_sentences = rng.random_range(2..=10);
    random_corpus(&mut rng, n_tags, vocab, n_sentences, 7)
}

proptest! {
    #[test]
    fn vertical_round_trip(seed in 0u64..4000, n_tags in 1usize..6, vocab in 1usize..12) {
        let corpus = corpus_from_seed(seed, n_tags, vocab);
        let text = corpus.to_vertical();
        let outcome = TaggedCorpus::parse(&text, Strictness::Strict).unwrap();
        prop_assert!(outcome.skipped.is_empty());
        prop_assert_eq!(outcome.corpus.to_vertical(), text);
    }

    #[test]
    fn held_out_split_partitions_sentences(
        seed in 0u64..4000,
        fraction in 0.05f64..0.949,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n_sentences = rng.random_range(20..=40);
        let corpus = random_corpus(&mut rng, 3, 8, n_sentences, 7);
        let (train, test) = split_corpus(&corpus, fraction, SplitMode::HeldOut, 0).unwrap();
        let mut joined = train.sentences().to_vec();
        joined.extend_from_slice(test.sentences());
        prop_assert_eq!(joined, corpus.sentences().to_vec());
    }

    #[test]
    fn split_refuses_to_leave_no_test_sentences(fraction in 0.76f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let corpus = random_corpus(&mut rng, 2, 4, 2, 4);
        let n = corpus.sentences().len() as f64;
        prop_assume!((fraction * n - 1e-9).ceil() as usize == corpus.sentences().len());
        let refused = matches!(
            split_corpus(&corpus, fraction, SplitMode::HeldOut, 0),
            Err(tagfold::Error::EmptyTestSplit { .. })
        );
        prop_assert!(refused);
    }

    #[test]
    fn lexicon_conserves_token_mass(seed in 0u64..4000) {
        let corpus = corpus_from_seed(seed, 4, 10);
        let model = HmmModel::train(&corpus, true, &BTreeSet::new()).unwrap();
        prop_assert_eq!(model.lexicon().total_count(), corpus.token_count() as u64);
    }

    #[test]
    fn smoothed_rows_sum_to_one(seed in 0u64..4000, smoothing in any::<bool>()) {
        let corpus = corpus_from_seed(seed, 5, 10);
        let model = HmmModel::train(&corpus, smoothing, &BTreeSet::new()).unwrap();
        let mut nodes: Vec<String> = model.tags().to_vec();
        nodes.push(BOUNDARY.to_string());
        for from in &nodes {
            let row_freq = if from == BOUNDARY {
                model.boundary_freq()
            } else {
                model.tag_freq(from).unwrap()
            };
            if !smoothing && row_freq == 0 {
                continue;
            }
            let sum: f64 = nodes
                .iter()
                .map(|to| model.transition_prob(from, to).unwrap())
                .sum();
            prop_assert!((sum - 1.0).abs() <= 1e-9, "row {} sums to {}", from, sum);
        }
    }

    #[test]
    fn viterbi_matches_exhaustive_enumeration(seed in 0u64..800) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n_tags = rng.random_range(1..=4);
        let vocab = rng.random_range(2..=6);
        let corpus = random_corpus(&mut rng, n_tags, vocab, 6, 6);
        let model = HmmModel::train(&corpus, true, &BTreeSet::new()).unwrap();

        let len = rng.random_range(1..=6);
        let words: Vec<String> = (0..len)
            .map(|_| {
                if rng.random::<f64>() < 0.2 {
                    "novel".to_string()
                } else {
                    format!("w{}", rng.random_range(0..vocab))
                }
            })
            .collect();
        let candidates: Vec<Vec<String>> = words
            .iter()
            .enumerate()
            .map(|(i, w)| model.hypothesize(w, i, None).unwrap().candidate_tags)
            .collect();

        let (path, score) = model.viterbi_restricted(&words, &candidates).unwrap();
        let (oracle_path, oracle_score, max_whole_path) =
            enumerate_decode(&model, &words, &candidates);
        prop_assert!(score == oracle_score, "{score} vs oracle {oracle_score}");
        prop_assert!(score == max_whole_path, "{score} vs path max {max_whole_path}");
        prop_assert_eq!(path, oracle_path);
    }

    #[test]
    fn widening_candidates_never_lowers_score(seed in 0u64..1500) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n_tags = rng.random_range(2..=5);
        let corpus = random_corpus(&mut rng, n_tags, 6, 6, 6);
        let model = HmmModel::train(&corpus, true, &BTreeSet::new()).unwrap();

        let len = rng.random_range(1..=5);
        let words: Vec<String> = (0..len).map(|_| format!("w{}", rng.random_range(0..6))).collect();
        let narrow: Vec<Vec<String>> = words
            .iter()
            .enumerate()
            .map(|(i, w)| model.hypothesize(w, i, None).unwrap().candidate_tags)
            .collect();
        let wide: Vec<Vec<String>> = words.iter().map(|_| model.tags().to_vec()).collect();

        let (_, narrow_score) = model.viterbi_restricted(&words, &narrow).unwrap();
        let (_, wide_score) = model.viterbi_restricted(&words, &wide).unwrap();
        prop_assert!(wide_score >= narrow_score);
    }

    #[test]
    fn decoding_is_repeatable(seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let corpus = random_corpus(&mut rng, 4, 8, 6, 6);
        let model = HmmModel::train(&corpus, true, &BTreeSet::new()).unwrap();
        let sentence = &corpus.sentences()[0];
        prop_assert_eq!(
            model.viterbi(sentence, None).unwrap(),
            model.viterbi(sentence, None).unwrap()
        );
    }

    #[test]
    fn guesser_rules_do_not_reach_back(seed in 0u64..2000, word_idx in 0usize..20) {
        let tags: BTreeSet<String> = ["NN", "VB", "JJ"].iter().map(|s| s.to_string()).collect();
        let spec = TagsetSpec::new(tags, BTreeSet::new()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let words = [
            "walking", "walked", "talks", "Paris", "x-ray", "1984", "of", "tree", "sing",
            "hummed", "cats", "Rome", "re-run", "77", "to", "leaf", "doing", "said", "dogs",
            "Oslo",
        ];
        let word = words[word_idx];

        let base = GuesserRules::new(vec![
            GuesserRule {
                priority: 10,
                feature: SurfaceFeature::parse("suffix:ing").unwrap(),
                allowed_tags: ["VB".to_string()].into(),
            },
            GuesserRule {
                priority: 20,
                feature: SurfaceFeature::parse("cap").unwrap(),
                allowed_tags: ["NN".to_string()].into(),
            },
        ])
        .unwrap();
        let suffix = ["ed", "s", "-ray", "84"][rng.random_range(0..4)];
        let extended = GuesserRules::new(
            base.rules()
                .iter()
                .cloned()
                .chain(std::iter::once(GuesserRule {
                    priority: 30,
                    feature: SurfaceFeature::parse(&format!("suffix:{suffix}")).unwrap(),
                    allowed_tags: ["JJ".to_string()].into(),
                }))
                .collect(),
        )
        .unwrap();

        let matched_by_base = word.ends_with("ing")
            || word.chars().next().is_some_and(char::is_uppercase);
        if matched_by_base {
            prop_assert_eq!(
                guess_tags(word, Some(&base), &spec),
                guess_tags(word, Some(&extended), &spec)
            );
        }
    }

    #[test]
    fn experiment_partitions_and_bounds_hold(seed in 0u64..600, held_out in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let corpus = random_corpus(&mut rng, 4, 10, 12, 6);
        let file = parse_scheme_file("FEATURE A unused axis\nRULE NO-MATCH => NO-MATCH\n").unwrap();
        let scheme = ReductionScheme::new(&file, "A").unwrap();
        let config = ExperimentConfig {
            mode: if held_out { SplitMode::HeldOut } else { SplitMode::InSample },
            train_fraction: 0.8,
            ..ExperimentConfig::default()
        };
        let report = run_experiment(&corpus, &scheme, &config).unwrap();

        prop_assert_eq!(
            report.n_unambiguous + report.n_ambiguous + report.n_unknown,
            report.n_tokens
        );
        for pct in [
            report.degree_of_ambiguity_pct(),
            report.ambiguous_accuracy_pct(),
            report.unknown_accuracy_pct(),
            report.overall_accuracy_pct(),
        ] {
            prop_assert!((0.0..=100.0).contains(&pct));
        }
        if !held_out {
            prop_assert_eq!(report.n_unknown, 0);
        }
    }
}

struct SampleSet {
    corpus: TaggedCorpus,
    file: SchemeFile,
}

fn load_samples() -> Vec<SampleSet> {
    let pairs = [
        (
            include_str!("../../../samples/toy_sv.vert"),
            include_str!("../../../samples/swedish_gndc.rules"),
        ),
        (
            include_str!("../../../samples/toy_fr.vert"),
            include_str!("../../../samples/french_gnpv.rules"),
        ),
        (
            include_str!("../../../samples/toy_en.vert"),
            include_str!("../../../samples/english_capnv.rules"),
        ),
    ];
    pairs
        .iter()
        .map(|(corpus_text, rules_text)| SampleSet {
            corpus: TaggedCorpus::parse(corpus_text, Strictness::Strict)
                .unwrap()
                .corpus,
            file: parse_scheme_file(rules_text).unwrap(),
        })
        .collect()
}

#[test]
fn shipped_rule_files_are_idempotent() {
    for sample in load_samples() {
        let tags = sample.corpus.tagset();
        for code in scheme_code_enumerate(&sample.file.letters()).unwrap() {
            let scheme = ReductionScheme::new(&sample.file, &code).unwrap();
            for tag in &tags {
                let once = scheme.reduce_tag(tag);
                assert_eq!(scheme.reduce_tag(&once), once, "code {code} on {tag}");
            }
        }
    }
}

#[test]
fn shipped_rule_files_commute() {
    for sample in load_samples() {
        let tags = sample.corpus.tagset();
        let letters: Vec<char> = sample.file.letters().chars().collect();
        for i in 0..letters.len() {
            for j in i + 1..letters.len() {
                let only = |active: char| -> ReductionScheme {
                    let code: String = letters
                        .iter()
                        .map(|&c| if c == active { c.to_ascii_lowercase() } else { c })
                        .collect();
                    ReductionScheme::new(&sample.file, &code).unwrap()
                };
                let first = only(letters[i]);
                let second = only(letters[j]);
                for tag in &tags {
                    assert_eq!(
                        second.reduce_tag(&first.reduce_tag(tag)),
                        first.reduce_tag(&second.reduce_tag(tag)),
                        "features {} and {} on {tag}",
                        letters[i],
                        letters[j]
                    );
                }
            }
        }
    }
}

#[test]
fn shipped_rule_files_never_expand_tagsets() {
    for sample in load_samples() {
        let tags = sample.corpus.tagset();
        for code in scheme_code_enumerate(&sample.file.letters()).unwrap() {
            let scheme = ReductionScheme::new(&sample.file, &code).unwrap();
            let reduced = scheme.reduce_tagset(&tags);
            assert!(reduced.len() <= tags.len(), "code {code}");
            let lowered = code.chars().filter(|c| c.is_lowercase()).count();
            if lowered == 0 {
                assert_eq!(reduced, tags);
            }
        }
    }
}

#[test]
fn shipped_samples_train_and_sweep() {
    let closed_texts = [
        include_str!("../../../samples/closed_sv.txt"),
        include_str!("../../../samples/closed_fr.txt"),
        include_str!("../../../samples/closed_en.txt"),
    ];
    for (sample, closed_text) in load_samples().into_iter().zip(closed_texts) {
        let closed = tagfold::parse_closed_file(closed_text).unwrap();
        let (spec, warnings) = TagsetSpec::from_corpus(&sample.corpus, &closed);
        assert!(warnings.is_empty(), "closed declarations missing from corpus: {warnings:?}");
        assert!(spec.open_tags().next().is_some());

        let config = ExperimentConfig {
            mode: SplitMode::InSample,
            closed,
            ..ExperimentConfig::default()
        };
        let codes: Vec<String> = scheme_code_enumerate(&sample.file.letters())
            .unwrap()
            .into_iter()
            .take(4)
            .collect();
        let reports = tagfold::sweep(&sample.corpus, &sample.file, &codes, &config, 2).unwrap();
        assert_eq!(reports.len(), 4);
        assert!(reports[0].tagset_size >= reports.last().unwrap().tagset_size);
    }
}

#[test]
fn shipped_guesser_validates_against_toy_english() {
    let corpus = TaggedCorpus::parse(
        include_str!("../../../samples/toy_en.vert"),
        Strictness::Strict,
    )
    .unwrap()
    .corpus;
    let closed = tagfold::parse_closed_file(include_str!("../../../samples/closed_en.txt")).unwrap();
    let (spec, _) = TagsetSpec::from_corpus(&corpus, &closed);
    let guesser =
        tagfold::parse_guesser_file(include_str!("../../../samples/english_guesser.rules")).unwrap();
    guesser.validate(&spec).unwrap();
    assert_eq!(guesser.rules().len(), 7);

    let guessed = guess_tags("Gothenburg", Some(&guesser), &spec);
    assert_eq!(
        guessed.into_iter().collect::<Vec<_>>(),
        vec!["NP-PL".to_string(), "NP-SG".to_string()]
    );
}
