//! Wires the stages together: per-topic query building under a retrieval
//! strategy, search, reranking, and training-set assembly.

use std::collections::BTreeMap;

use anyhow::{anyhow, Result};

use pmsearch_core::corpus::Topic;
use pmsearch_core::expand::{
    expand_topic, mine_acronyms, DiseaseKb, ExpandedQuery, ExpansionWeights, GeneKb,
};
use pmsearch_core::index::FieldedIndex;
use pmsearch_core::ranking::RankedList;
use pmsearch_core::rerank::{
    apply_title_penalty, rerank_pipeline, KeywordLists, LogisticModel, RerankConfig,
};

use crate::config::{Strategy, TitleMatch};

/// Everything a batch run needs, loaded once and shared across topics.
pub struct SearchContext {
    pub index: FieldedIndex,
    pub diseases: DiseaseKb,
    pub genes: GeneKb,
    pub weights: ExpansionWeights,
    pub rerank: RerankConfig,
    pub keywords: KeywordLists,
    pub depth: usize,
    pub title_match: TitleMatch,
}

impl SearchContext {
    /// Expands a topic according to the strategy: the baseline sees no
    /// knowledge bases at all, `expand` sees everything except acronyms,
    /// and the later strategies add KB acronyms plus the most frequent
    /// corpus-mined one.
    pub fn expanded_query(&self, topic: &Topic, strategy: Strategy) -> Result<ExpandedQuery> {
        let query = match strategy {
            Strategy::Baseline => {
                expand_topic(topic, &DiseaseKb::new(), &GeneKb::new(), &[], &self.weights)?
            }
            Strategy::Expand => {
                let masked = self.disease_kb_without_acronyms(&topic.disease);
                expand_topic(topic, &masked, &self.genes, &[], &self.weights)?
            }
            Strategy::ExpandAcronym | Strategy::Heuristic | Strategy::Full => {
                let mined = mine_acronyms(self.index.store(), &topic.disease)?;
                expand_topic(topic, &self.diseases, &self.genes, &mined, &self.weights)?
            }
        };
        Ok(query)
    }

    fn disease_kb_without_acronyms(&self, disease: &str) -> DiseaseKb {
        let mut kb = DiseaseKb::new();
        if let Some(entry) = self.diseases.lookup(disease) {
            let mut entry = entry.clone();
            entry.acronyms.clear();
            kb.insert(entry).expect("single entry cannot collide");
        }
        kb
    }

    /// The disease surfaces the title tests run against, per the configured
    /// matching mode.
    pub fn disease_surfaces(&self, topic: &Topic, query: &ExpandedQuery) -> Vec<String> {
        match self.title_match {
            TitleMatch::AllSurfaces => query.disease_surfaces.clone(),
            TitleMatch::OriginalOnly => vec![topic.disease.clone()],
        }
    }

    /// Runs one topic end to end under the strategy. `model` is required
    /// for [`Strategy::Full`] only.
    pub fn run_topic(
        &self,
        topic: &Topic,
        strategy: Strategy,
        model: Option<&LogisticModel>,
    ) -> Result<RankedList> {
        let query = self.expanded_query(topic, strategy)?;
        let raw = self.index.search(&query, self.depth)?;
        match strategy {
            Strategy::Baseline | Strategy::Expand | Strategy::ExpandAcronym => Ok(raw),
            Strategy::Heuristic => {
                let surfaces = self.disease_surfaces(topic, &query);
                Ok(apply_title_penalty(
                    &raw,
                    self.index.store(),
                    &surfaces,
                    self.rerank.penalty_factor(),
                ))
            }
            Strategy::Full => {
                let model =
                    model.ok_or_else(|| anyhow!("strategy `full` requires a trained model"))?;
                let surfaces = self.disease_surfaces(topic, &query);
                Ok(rerank_pipeline(
                    &raw,
                    model,
                    self.index.store(),
                    &surfaces,
                    &self.keywords,
                    &self.rerank,
                )?)
            }
        }
    }

    pub fn run_topics(
        &self,
        topics: &[Topic],
        strategy: Strategy,
        model: Option<&LogisticModel>,
    ) -> Result<Vec<RankedList>> {
        topics
            .iter()
            .map(|topic| self.run_topic(topic, strategy, model))
            .collect()
    }

    /// Disease surfaces per topic under the training strategy
    /// (expand+acronym), keyed by topic number. Feature extraction at
    /// training time and at rerank time sees the same surfaces.
    pub fn topic_surfaces(&self, topics: &[Topic]) -> Result<BTreeMap<u32, Vec<String>>> {
        let mut map = BTreeMap::new();
        for topic in topics {
            let query = self.expanded_query(topic, Strategy::ExpandAcronym)?;
            map.insert(topic.number, self.disease_surfaces(topic, &query));
        }
        Ok(map)
    }
}
