//! Property tests for the pipeline invariants.

use std::collections::BTreeSet;

use pmsearch_core::corpus::{CorpusStore, DocumentRecord, Topic};
use pmsearch_core::eval::{evaluate_run, precision_at_k, r_precision, Qrels, RunEntry};
use pmsearch_core::expand::{
    expand_topic, DiseaseEntry, DiseaseKb, ExpansionWeights, GeneEntry, GeneKb,
};
use pmsearch_core::index::{Bm25Params, FieldedIndex};
use pmsearch_core::ranking::{RankedList, ScoredDoc};
use pmsearch_core::rerank::{
    apply_title_penalty, min_max_scale, rerank_top_k, title_mentions_disease, KeywordLists,
    LogisticModel, RerankConfig, FEATURE_COUNT,
};
use pmsearch_core::tokenize::TokenizerConfig;

use proptest::prelude::*;

const VOCAB: [&str; 12] = [
    "melanoma",
    "lung",
    "cancer",
    "braf",
    "egfr",
    "therapy",
    "tumor",
    "cell",
    "patient",
    "gene",
    "trial",
    "carcinoma",
];

fn vocab_text(max_tokens: usize) -> impl Strategy<Value = String> {
    prop::collection::vec(0..VOCAB.len(), 0..=max_tokens).prop_map(|picks| {
        picks
            .into_iter()
            .map(|i| VOCAB[i])
            .collect::<Vec<_>>()
            .join(" ")
    })
}

fn arb_docs(max_docs: usize) -> impl Strategy<Value = Vec<DocumentRecord>> {
    prop::collection::vec((vocab_text(5), vocab_text(15)), 1..=max_docs).prop_map(|rows| {
        rows.into_iter()
            .enumerate()
            .map(|(i, (title, abstract_text))| {
                DocumentRecord::new(format!("d{i:03}"), title, abstract_text)
            })
            .collect()
    })
}

fn build_index(docs: Vec<DocumentRecord>) -> FieldedIndex {
    let (store, _) = CorpusStore::ingest(docs);
    FieldedIndex::build(store, Bm25Params::default(), TokenizerConfig::default()).unwrap()
}

fn query_of(words: &[usize], weight: f64) -> pmsearch_core::expand::ExpandedQuery {
    use pmsearch_core::expand::{ClauseOrigin, WeightedClause};
    pmsearch_core::expand::ExpandedQuery {
        topic_number: 1,
        clauses: words
            .iter()
            .map(|&w| WeightedClause {
                surface: VOCAB[w % VOCAB.len()].to_string(),
                weight,
                origin: ClauseOrigin::DiseaseOriginal,
            })
            .collect(),
        disease_surfaces: Vec::new(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ingest_is_idempotent_and_counts_add_up(
        ids in prop::collection::vec(0u32..20, 0..60),
    ) {
        let records: Vec<DocumentRecord> = ids
            .iter()
            .enumerate()
            .map(|(pos, id)| DocumentRecord::new(format!("id{id}"), format!("t{pos}"), format!("a{pos}")))
            .collect();
        let (store_a, report_a) = CorpusStore::ingest(records.clone());
        let (store_b, report_b) = CorpusStore::ingest(records.clone());
        prop_assert_eq!(&store_a, &store_b);
        prop_assert_eq!(report_a, report_b);
        prop_assert_eq!(report_a.kept + report_a.discarded, records.len() as u64);
        // The kept record for an id is the stream's first with that id.
        for doc in store_a.iter() {
            let first = records.iter().find(|r| r.doc_id == doc.doc_id).unwrap();
            prop_assert_eq!(doc, first);
        }
    }

    #[test]
    fn search_results_always_match_in_the_abstract(
        docs in arb_docs(30),
        words in prop::collection::vec(0usize..VOCAB.len(), 1..5),
    ) {
        let index = build_index(docs);
        let query = query_of(&words, 1.0);
        let result = index.search(&query, 1000).unwrap();
        let tokenizer = TokenizerConfig::default();
        let clause_tokens: BTreeSet<String> = query
            .clauses
            .iter()
            .flat_map(|c| tokenizer.tokenize(&c.surface))
            .collect();
        for entry in &result.entries {
            let doc = index.store().get(&entry.doc_id).unwrap();
            let abstract_tokens = tokenizer.tokenize(&doc.abstract_text);
            prop_assert!(
                abstract_tokens.iter().any(|t| clause_tokens.contains(t)),
                "{} retrieved without an abstract match",
                entry.doc_id
            );
        }
        // Determinism: identical inputs, identical output.
        let again = index.search(&query, 1000).unwrap();
        prop_assert_eq!(result, again);
    }

    #[test]
    fn expansion_clause_weights_follow_their_origin(
        synonyms in prop::collection::vec(0usize..VOCAB.len(), 0..4),
        aliases in prop::collection::vec(0usize..VOCAB.len(), 0..4),
    ) {
        let mut diseases = DiseaseKb::new();
        diseases.insert(DiseaseEntry::new(
            "lung cancer",
            "carcinoma of lung",
            synonyms.iter().map(|&i| VOCAB[i].to_string()).collect(),
            vec!["NSCLC".to_string()],
        ).unwrap()).unwrap();
        let mut genes = GeneKb::new();
        genes.insert(GeneEntry::new(
            "EGFR",
            aliases.iter().map(|&i| VOCAB[i].to_string()).collect(),
        ).unwrap());
        let topic = Topic {
            number: 1,
            disease: "lung cancer".to_string(),
            gene: "EGFR".to_string(),
            demographic: String::new(),
        };
        let weights = ExpansionWeights::default();
        let query = expand_topic(&topic, &diseases, &genes, &[("LC".to_string(), 3)], &weights).unwrap();
        for clause in &query.clauses {
            prop_assert_eq!(clause.weight, weights.weight_for(clause.origin));
            if !matches!(clause.origin,
                pmsearch_core::expand::ClauseOrigin::DiseaseOriginal
                | pmsearch_core::expand::ClauseOrigin::GeneOriginal)
            {
                prop_assert!(clause.weight <= 0.5);
            }
        }
        let again = expand_topic(&topic, &diseases, &genes, &[("LC".to_string(), 3)], &weights).unwrap();
        prop_assert_eq!(query, again);
    }

    #[test]
    fn expansion_only_grows_the_candidate_set(
        docs in arb_docs(25),
        disease in 0usize..VOCAB.len(),
        gene in 0usize..VOCAB.len(),
        synonyms in prop::collection::vec(0usize..VOCAB.len(), 0..3),
        aliases in prop::collection::vec(0usize..VOCAB.len(), 0..3),
    ) {
        let index = build_index(docs);
        let topic = Topic {
            number: 1,
            disease: VOCAB[disease].to_string(),
            gene: VOCAB[gene].to_string(),
            demographic: String::new(),
        };
        let weights = ExpansionWeights::default();
        let baseline = expand_topic(&topic, &DiseaseKb::new(), &GeneKb::new(), &[], &weights).unwrap();
        let mut diseases = DiseaseKb::new();
        diseases.insert(DiseaseEntry::new(
            VOCAB[disease],
            "",
            synonyms.iter().map(|&i| VOCAB[i].to_string()).collect(),
            vec![],
        ).unwrap()).unwrap();
        let mut genes = GeneKb::new();
        genes.insert(GeneEntry::new(
            VOCAB[gene],
            aliases.iter().map(|&i| VOCAB[i].to_string()).collect(),
        ).unwrap());
        let expanded = expand_topic(&topic, &diseases, &genes, &[], &weights).unwrap();

        let base_ids: BTreeSet<String> = index.search(&baseline, 1000).unwrap()
            .doc_ids().map(str::to_string).collect();
        let expanded_ids: BTreeSet<String> = index.search(&expanded, 1000).unwrap()
            .doc_ids().map(str::to_string).collect();
        prop_assert!(base_ids.is_subset(&expanded_ids));
    }

    #[test]
    fn penalty_preserves_group_order_and_scales_exactly(
        rows in prop::collection::vec((0u32..1000, prop::bool::ANY), 1..40),
        factor_percent in 1u32..=100,
    ) {
        let factor = factor_percent as f64 / 100.0;
        let docs: Vec<DocumentRecord> = rows
            .iter()
            .enumerate()
            .map(|(i, (_, in_title))| {
                let title = if *in_title { "advanced lung cancer" } else { "other disease" };
                DocumentRecord::new(format!("d{i:03}"), title, "body")
            })
            .collect();
        let (store, _) = CorpusStore::ingest(docs);
        let mut input = RankedList::new(
            1,
            rows.iter()
                .enumerate()
                .map(|(i, (score, _))| ScoredDoc::new(format!("d{i:03}"), *score as f64))
                .collect(),
        );
        input.sort();
        let surfaces = vec!["lung cancer".to_string()];
        let output = apply_title_penalty(&input, &store, &surfaces, factor);
        prop_assert!(output.is_valid());

        let mentions = |id: &str| {
            title_mentions_disease(&store.get(id).unwrap().title, &surfaces)
        };
        for entry in &output.entries {
            let before = input.entries.iter().find(|e| e.doc_id == entry.doc_id).unwrap();
            if mentions(&entry.doc_id) {
                prop_assert_eq!(entry.score, before.score);
            } else {
                prop_assert_eq!(entry.score, before.score * factor);
            }
        }
        // Within each group, relative order is unchanged.
        let group = |list: &RankedList, wanted: bool| -> Vec<String> {
            list.entries
                .iter()
                .filter(|e| mentions(&e.doc_id) == wanted)
                .map(|e| e.doc_id.clone())
                .collect()
        };
        prop_assert_eq!(group(&input, true), group(&output, true));
        prop_assert_eq!(group(&input, false), group(&output, false));
    }

    #[test]
    fn min_max_scaling_preserves_argsort(
        scores in prop::collection::vec(-10_000i64..10_000, 1..50),
    ) {
        let input: Vec<f64> = scores.iter().map(|&s| s as f64 / 100.0).collect();
        let output = min_max_scale(&input).unwrap();
        prop_assert!(output.iter().all(|s| (0.0..=1.0).contains(s)));
        let argsort = |values: &[f64]| -> Vec<usize> {
            let mut order: Vec<usize> = (0..values.len()).collect();
            order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap().then(a.cmp(&b)));
            order
        };
        prop_assert_eq!(argsort(&input), argsort(&output));
    }

    #[test]
    fn top_k_fusion_keeps_head_multiset_and_tail_bits(
        scores in prop::collection::vec(0u32..1000, 1..40),
        k in 1usize..60,
        weight_tenths in prop::collection::vec(-10i32..=10, FEATURE_COUNT),
    ) {
        let docs: Vec<DocumentRecord> = scores
            .iter()
            .enumerate()
            .map(|(i, _)| {
                DocumentRecord::new(
                    format!("d{i:03}"),
                    format!("title {}", VOCAB[i % VOCAB.len()]),
                    format!("{} body", VOCAB[(i * 7) % VOCAB.len()]),
                )
            })
            .collect();
        let (store, _) = CorpusStore::ingest(docs);
        let mut input = RankedList::new(
            1,
            scores
                .iter()
                .enumerate()
                .map(|(i, s)| ScoredDoc::new(format!("d{i:03}"), *s as f64 / 1000.0))
                .collect(),
        );
        input.sort();
        let mut weights = [0.0; FEATURE_COUNT];
        for (w, t) in weights.iter_mut().zip(&weight_tenths) {
            *w = *t as f64 / 10.0;
        }
        let model = LogisticModel::from_parts(weights, 0.1, 1.0, None, 0, 0.0).unwrap();
        let config = RerankConfig::new(0.6, k).unwrap();
        let surfaces = vec!["lung".to_string()];
        let output = rerank_top_k(&input, &model, &store, &surfaces, &KeywordLists::default(), &config).unwrap();

        let cut = k.min(input.len());
        let head_in: BTreeSet<&str> = input.entries[..cut].iter().map(|e| e.doc_id.as_str()).collect();
        let head_out: BTreeSet<&str> = output.entries[..cut].iter().map(|e| e.doc_id.as_str()).collect();
        prop_assert_eq!(head_in, head_out);
        for (inp, out) in input.entries[cut..].iter().zip(&output.entries[cut..]) {
            prop_assert_eq!(&inp.doc_id, &out.doc_id);
            prop_assert_eq!(inp.score.to_bits(), out.score.to_bits());
        }
        // Fused head stays sorted.
        prop_assert!(output.entries[..cut].windows(2).all(|w| w[0].score >= w[1].score));
    }

    #[test]
    fn metrics_ignore_everything_below_the_cutoff(
        grades in prop::collection::vec(0u32..3, 15..40),
        swap in (0usize..100, 0usize..100),
    ) {
        let mut qrels = Qrels::new();
        for (i, grade) in grades.iter().enumerate() {
            qrels.insert(1, format!("d{i:03}"), *grade).unwrap();
        }
        let entries: Vec<ScoredDoc> = (0..grades.len())
            .map(|i| ScoredDoc::new(format!("d{i:03}"), 100.0 - i as f64))
            .collect();
        let list = RankedList::new(1, entries.clone());
        let relevant = qrels.relevant_count(1);
        let cutoff = relevant.max(10);
        prop_assume!(cutoff + 1 < grades.len());

        // Swap two documents somewhere below the cutoff.
        let tail_len = grades.len() - cutoff;
        let a = cutoff + swap.0 % tail_len;
        let b = cutoff + swap.1 % tail_len;
        let mut shuffled = entries;
        shuffled.swap(a, b);
        // Keep scores attached to positions so the list stays sorted.
        let rescored: Vec<ScoredDoc> = shuffled
            .into_iter()
            .enumerate()
            .map(|(i, e)| ScoredDoc::new(e.doc_id, 100.0 - i as f64))
            .collect();
        let permuted = RankedList::new(1, rescored);

        prop_assert_eq!(precision_at_k(&list, &qrels, 10), precision_at_k(&permuted, &qrels, 10));
        prop_assert_eq!(r_precision(&list, &qrels), r_precision(&permuted, &qrels));
    }

    #[test]
    fn run_metrics_are_invariant_to_positive_affine_score_maps(
        grades in prop::collection::vec(0u32..2, 1..25),
        scale_percent in 1u32..500,
        shift in -50i32..50,
    ) {
        let mut qrels = Qrels::new();
        for (i, grade) in grades.iter().enumerate() {
            qrels.insert(4, format!("d{i:03}"), *grade).unwrap();
        }
        let make_run = |a: f64, c: f64| -> Vec<RunEntry> {
            (0..grades.len())
                .map(|i| RunEntry {
                    topic_number: 4,
                    doc_id: format!("d{i:03}"),
                    rank: (i + 1) as u32,
                    score: a * (100.0 - i as f64) + c,
                    run_tag: "tag".to_string(),
                })
                .collect()
        };
        let base = evaluate_run(&make_run(1.0, 0.0), &qrels).unwrap();
        let mapped = evaluate_run(&make_run(scale_percent as f64 / 100.0, shift as f64), &qrels).unwrap();
        prop_assert_eq!(base, mapped);
    }
}
