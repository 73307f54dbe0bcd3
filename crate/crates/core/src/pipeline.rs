//! End-to-end topic processing: first-pass retrieval, optional expansion,
//! final retrieval.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::analysis::{analyze, AnalyzedText, Stoplist};
use crate::config::PipelineConfig;
use crate::error::{Error, Result};
use crate::eval::RankedRun;
use crate::expansion::{
    decide, expand_query, extract_candidates, write_trace, CandidateDecision, ExpansionCandidate,
    SelectionConfig, SelectionMode, TRACE_HEADER,
};
use crate::index::InvertedIndex;
use crate::relatedness::{
    CollocationTable, ConceptSpace, Relatedness, RelatednessModel, TaxonomyGraph,
};
use crate::retrieval::{search, Model, ScoredDoc};
use crate::trec::{read_documents, read_topics, RawDocument, Topic};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunMode {
    /// No expansion.
    Baseline,
    /// Select candidates by ESA alone.
    Esa,
    /// Select candidates by the combined measure.
    Ewc,
    /// Append every extracted candidate without selection.
    All,
}

impl RunMode {
    pub fn name(&self) -> &'static str {
        match self {
            RunMode::Baseline => "baseline",
            RunMode::Esa => "esa",
            RunMode::Ewc => "ewc",
            RunMode::All => "all",
        }
    }

    fn selection_mode(&self) -> Option<SelectionMode> {
        match self {
            RunMode::Esa => Some(SelectionMode::Esa),
            RunMode::Ewc => Some(SelectionMode::Ewc),
            _ => None,
        }
    }

    pub fn needs_relatedness(&self) -> bool {
        self.selection_mode().is_some()
    }
}

impl fmt::Display for RunMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RunMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "baseline" => Ok(RunMode::Baseline),
            "esa" => Ok(RunMode::Esa),
            "ewc" => Ok(RunMode::Ewc),
            "all" => Ok(RunMode::All),
            other => Err(Error::Config(format!("unknown run mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TopicOutcome {
    pub topic_id: String,
    pub query: AnalyzedText,
    pub expanded: AnalyzedText,
    pub decisions: Vec<CandidateDecision>,
    pub results: Vec<ScoredDoc>,
}

/// Retrieval and expansion settings for one run.
#[derive(Debug, Clone)]
pub struct RunSettings {
    pub model: Model,
    pub mode: RunMode,
    pub selection: SelectionConfig,
    pub depth: usize,
}

pub fn process_topic(
    index: &InvertedIndex,
    topic: &Topic,
    stoplist: &Stoplist,
    relatedness: Option<&dyn Relatedness>,
    settings: &RunSettings,
) -> Result<TopicOutcome> {
    let query = analyze(&topic.title, stoplist);
    let first = search(index, &query, &settings.model, settings.depth);
    let mut decisions = Vec::new();
    let expanded = match settings.mode {
        RunMode::Baseline => query.clone(),
        _ if query.is_empty() || first.is_empty() => query.clone(),
        RunMode::All => {
            let cands = extract_candidates(index, &first, &query, &settings.selection);
            expand_query(&query, &cands)
        }
        RunMode::Esa | RunMode::Ewc => {
            let rel = relatedness.ok_or_else(|| {
                Error::Config(format!(
                    "{} mode needs relatedness resources",
                    settings.mode
                ))
            })?;
            let cands = extract_candidates(index, &first, &query, &settings.selection);
            decisions = decide(&cands, &query.surfaces, rel, &settings.selection)?;
            let selected: Vec<ExpansionCandidate> = decisions
                .iter()
                .filter(|d| d.selected)
                .map(|d| d.candidate.clone())
                .collect();
            expand_query(&query, &selected)
        }
    };
    let results = if expanded == query {
        first
    } else {
        search(index, &expanded, &settings.model, settings.depth)
    };
    Ok(TopicOutcome {
        topic_id: topic.topic_id.clone(),
        query,
        expanded,
        decisions,
        results,
    })
}

/// Output of a full run: the ranked lists and the candidate trace.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub run: RankedRun,
    pub trace: String,
    pub outcomes: Vec<TopicOutcome>,
}

/// Process topics in input order.
pub fn run_topics(
    index: &InvertedIndex,
    topics: &[Topic],
    stoplist: &Stoplist,
    relatedness: Option<&dyn Relatedness>,
    settings: &RunSettings,
) -> Result<RunOutput> {
    let mut run = RankedRun::new();
    let mut trace = String::from(TRACE_HEADER);
    let mut outcomes = Vec::with_capacity(topics.len());
    for t in topics {
        let o = process_topic(index, t, stoplist, relatedness, settings)?;
        write_trace(&mut trace, &o.topic_id, &o.decisions);
        run.insert(&o.topic_id, o.results.clone())?;
        outcomes.push(o);
    }
    Ok(RunOutput {
        run,
        trace,
        outcomes,
    })
}

impl RunSettings {
    pub fn from_config(cfg: &PipelineConfig, mode: RunMode) -> Self {
        RunSettings {
            model: cfg.model(),
            mode,
            selection: cfg.selection(mode.selection_mode().unwrap_or(SelectionMode::Ewc)),
            depth: cfg.depth,
        }
    }
}

fn read_docs_file(path: &Path) -> Result<Vec<RawDocument>> {
    let f =
        std::fs::File::open(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    read_documents(std::io::BufReader::new(f))
}

pub fn load_stoplist(cfg: &PipelineConfig) -> Result<Stoplist> {
    match &cfg.stopwords {
        Some(_) => Ok(Stoplist::parse(&std::fs::read_to_string(
            cfg.require("stopwords")?,
        )?)),
        None => Ok(Stoplist::bundled()),
    }
}

pub fn load_corpus(cfg: &PipelineConfig) -> Result<Vec<RawDocument>> {
    read_docs_file(cfg.require("corpus")?)
}

pub fn load_topics(cfg: &PipelineConfig) -> Result<Vec<Topic>> {
    let f = std::fs::File::open(cfg.require("topics")?)?;
    read_topics(std::io::BufReader::new(f))
}

/// Build the concept space, WordNet graph and collocation table named by the
/// configuration. The collocation corpus defaults to the retrieval corpus.
pub fn load_relatedness(cfg: &PipelineConfig, stoplist: &Stoplist) -> Result<RelatednessModel> {
    let concept_docs = read_docs_file(cfg.require("concepts")?)?;
    let concepts = ConceptSpace::build(&concept_docs, stoplist)?;
    let taxonomy = TaxonomyGraph::load_dir(cfg.require("wordnet")?)?;
    let colloc_docs = match &cfg.collocations {
        Some(_) => read_docs_file(cfg.require("collocations")?)?,
        None => load_corpus(cfg)?,
    };
    let collocations = CollocationTable::build(&colloc_docs, stoplist);
    Ok(RelatednessModel {
        concepts,
        taxonomy,
        collocations,
        params: cfg.ewc,
    })
}
