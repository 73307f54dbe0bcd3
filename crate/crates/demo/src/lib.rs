//! Browser demo over the bundled synthetic collection: a relatedness
//! calculator, a per-topic term-selection explorer and 11-point
//! precision-recall curves for baseline vs expanded retrieval.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use qexpand::analysis::Stoplist;
use qexpand::eval::{binarize_qrels, evaluate_topic, Judgments};
use qexpand::expansion::{SelectionConfig, SelectionMode};
use qexpand::index::InvertedIndex;
use qexpand::pipeline::{run_topics, RunMode, RunSettings};
use qexpand::relatedness::{
    ewc, CollocationTable, ConceptSpace, EwcParams, RelatednessModel, TaxonomyGraph,
};
use qexpand::retrieval::Model;
use qexpand::trec::{parse_documents, parse_qrels, parse_topics, Topic};

const CORPUS: &str = include_str!("../../../data/toy/corpus.trec");
const TOPICS: &str = include_str!("../../../data/toy/topics.trec");
const QRELS: &str = include_str!("../../../data/toy/qrels.txt");
const CONCEPTS: &str = include_str!("../../../data/toy/concepts.trec");
const WN_DATA: &str = include_str!("../../../data/toy/wordnet/data.noun");
const WN_INDEX: &str = include_str!("../../../data/toy/wordnet/index.noun");

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Measures {
    pub esa: f64,
    pub wnp: f64,
    pub coll: f64,
    pub ewc: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateRow {
    pub stem: String,
    pub surface: String,
    pub dfr_weight: f64,
    pub pairs: Vec<Measures>,
    pub scores: Vec<u8>,
    pub selected: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopicSelection {
    pub topic_id: String,
    pub query: Vec<String>,
    pub candidates: Vec<CandidateRow>,
    pub expanded: Vec<String>,
    pub ap_baseline: f64,
    pub ap_expanded: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Curves {
    pub baseline: [f64; 11],
    pub expanded: [f64; 11],
    pub map_baseline: f64,
    pub map_expanded: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    pub model: Model,
    pub mode: SelectionMode,
    pub t1: f64,
    pub t2: f64,
    pub ewc: EwcParams,
}

impl Settings {
    fn run(&self, mode: RunMode) -> RunSettings {
        RunSettings {
            model: self.model,
            mode,
            selection: SelectionConfig {
                t1: self.t1,
                t2: self.t2,
                mode: self.mode,
                ewc: self.ewc,
                ..SelectionConfig::default()
            },
            depth: 1000,
        }
    }

    fn run_mode(&self) -> RunMode {
        match self.mode {
            SelectionMode::Ewc => RunMode::Ewc,
            SelectionMode::Esa => RunMode::Esa,
        }
    }
}

pub struct Demo {
    index: InvertedIndex,
    stoplist: Stoplist,
    topics: Vec<Topic>,
    judgments: Judgments,
    relatedness: RelatednessModel,
}

impl Demo {
    /// Build every structure from the embedded collection.
    pub fn load() -> qexpand::Result<Self> {
        let stoplist = Stoplist::bundled();
        let corpus = parse_documents(CORPUS)?;
        let index = InvertedIndex::build(&corpus, &stoplist)?;
        let mut taxonomy = TaxonomyGraph::new();
        taxonomy.read_data('n', WN_DATA)?;
        taxonomy.read_index(WN_INDEX)?;
        let relatedness = RelatednessModel {
            concepts: ConceptSpace::build(&parse_documents(CONCEPTS)?, &stoplist)?,
            taxonomy,
            collocations: CollocationTable::build(&corpus, &stoplist),
            params: EwcParams::default(),
        };
        Ok(Demo {
            index,
            topics: parse_topics(TOPICS)?,
            judgments: binarize_qrels(&parse_qrels(QRELS)?, 2),
            stoplist,
            relatedness,
        })
    }

    pub fn topics(&self) -> &[Topic] {
        &self.topics
    }

    pub fn relatedness(&self, w1: &str, w2: &str, params: &EwcParams) -> Measures {
        let r = &self.relatedness;
        let esa = r.esa(w1, w2);
        let wnp = r.wordnet_path(w1, w2);
        let coll = r.collocations.index(w1, w2, params.xi);
        Measures {
            esa,
            wnp,
            coll,
            ewc: ewc(esa, wnp, coll, params),
        }
    }

    fn topic(&self, topic_id: &str) -> qexpand::Result<&Topic> {
        self.topics
            .iter()
            .find(|t| t.topic_id == topic_id)
            .ok_or_else(|| qexpand::Error::Config(format!("unknown topic {topic_id:?}")))
    }

    /// Candidate decisions and per-topic AP for one topic.
    pub fn selection(
        &mut self,
        topic_id: &str,
        settings: &Settings,
    ) -> qexpand::Result<TopicSelection> {
        let topic = self.topic(topic_id)?.clone();
        self.relatedness.params = settings.ewc;
        let rel = &self.relatedness;
        let topics = [topic];
        let base = run_topics(
            &self.index,
            &topics,
            &self.stoplist,
            None,
            &settings.run(RunMode::Baseline),
        )?;
        let exp = run_topics(
            &self.index,
            &topics,
            &self.stoplist,
            Some(rel),
            &settings.run(settings.run_mode()),
        )?;
        let outcome = &exp.outcomes[0];
        let empty = Default::default();
        let relevant = self.judgments.get(topic_id).unwrap_or(&empty);
        let ap = |docs: &[qexpand::retrieval::ScoredDoc]| {
            evaluate_topic(topic_id, docs, relevant).average_precision
        };
        Ok(TopicSelection {
            topic_id: topic_id.to_owned(),
            query: outcome.query.surfaces.clone(),
            candidates: outcome
                .decisions
                .iter()
                .map(|d| CandidateRow {
                    stem: d.candidate.stem.clone(),
                    surface: d.candidate.surface.clone(),
                    dfr_weight: d.candidate.dfr_weight,
                    pairs: d
                        .pairs
                        .iter()
                        .map(|p| Measures {
                            esa: p.esa,
                            wnp: p.wnp,
                            coll: p.coll,
                            ewc: p.ewc,
                        })
                        .collect(),
                    scores: d.scores.clone(),
                    selected: d.selected,
                })
                .collect(),
            expanded: outcome.expanded.tokens.clone(),
            ap_baseline: ap(&base.outcomes[0].results),
            ap_expanded: ap(&outcome.results),
        })
    }

    /// Topic-averaged interpolated precision for baseline and expanded runs.
    pub fn curves(&mut self, settings: &Settings) -> qexpand::Result<Curves> {
        self.relatedness.params = settings.ewc;
        let rel = &self.relatedness;
        let base = run_topics(
            &self.index,
            &self.topics,
            &self.stoplist,
            None,
            &settings.run(RunMode::Baseline),
        )?;
        let exp = run_topics(
            &self.index,
            &self.topics,
            &self.stoplist,
            Some(rel),
            &settings.run(settings.run_mode()),
        )?;
        let summarize = |run: &qexpand::eval::RankedRun| {
            let mut curve = [0.0; 11];
            let mut map = 0.0;
            let mut n = 0.0;
            for (topic, docs) in run.topics() {
                let Some(relevant) = self.judgments.get(topic).filter(|r| !r.is_empty()) else {
                    continue;
                };
                let e = evaluate_topic(topic, docs, relevant);
                for (c, v) in curve.iter_mut().zip(e.interpolated) {
                    *c += v;
                }
                map += e.average_precision;
                n += 1.0;
            }
            if n > 0.0 {
                curve.iter_mut().for_each(|c| *c /= n);
                map /= n;
            }
            (curve, map)
        };
        let (baseline, map_baseline) = summarize(&base.run);
        let (expanded, map_expanded) = summarize(&exp.run);
        Ok(Curves {
            baseline,
            expanded,
            map_baseline,
            map_expanded,
        })
    }
}

fn js_err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

fn parse_settings(
    model: &str,
    mode: &str,
    t1: f64,
    t2: f64,
    lambda_wnp: f64,
    lambda_coll: f64,
    xi: f64,
) -> Result<Settings, JsError> {
    let ewc = EwcParams {
        lambda_wnp,
        lambda_coll,
        xi,
    };
    ewc.validate().map_err(js_err)?;
    Ok(Settings {
        model: model.parse().map_err(js_err)?,
        mode: mode.parse().map_err(js_err)?,
        t1,
        t2,
        ewc,
    })
}

/// JavaScript handle around [`Demo`]. All results are JSON strings.
#[wasm_bindgen]
pub struct DemoApp(Demo);

#[wasm_bindgen]
impl DemoApp {
    #[wasm_bindgen(constructor)]
    pub fn new() -> Result<DemoApp, JsError> {
        Demo::load().map(DemoApp).map_err(js_err)
    }

    /// `[{"id": .., "title": ..}, ...]`
    pub fn topics(&self) -> String {
        let list: Vec<serde_json::Value> = self
            .0
            .topics()
            .iter()
            .map(|t| serde_json::json!({ "id": t.topic_id, "title": t.title }))
            .collect();
        serde_json::Value::Array(list).to_string()
    }

    pub fn relatedness(
        &self,
        w1: &str,
        w2: &str,
        lambda_wnp: f64,
        lambda_coll: f64,
        xi: f64,
    ) -> Result<String, JsError> {
        let params = EwcParams {
            lambda_wnp,
            lambda_coll,
            xi,
        };
        params.validate().map_err(js_err)?;
        serde_json::to_string(&self.0.relatedness(w1, w2, &params)).map_err(js_err)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn selection(
        &mut self,
        topic_id: &str,
        model: &str,
        mode: &str,
        t1: f64,
        t2: f64,
        lambda_wnp: f64,
        lambda_coll: f64,
        xi: f64,
    ) -> Result<String, JsError> {
        let s = parse_settings(model, mode, t1, t2, lambda_wnp, lambda_coll, xi)?;
        serde_json::to_string(&self.0.selection(topic_id, &s).map_err(js_err)?).map_err(js_err)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn curves(
        &mut self,
        model: &str,
        mode: &str,
        t1: f64,
        t2: f64,
        lambda_wnp: f64,
        lambda_coll: f64,
        xi: f64,
    ) -> Result<String, JsError> {
        let s = parse_settings(model, mode, t1, t2, lambda_wnp, lambda_coll, xi)?;
        serde_json::to_string(&self.0.curves(&s).map_err(js_err)?).map_err(js_err)
    }
}
