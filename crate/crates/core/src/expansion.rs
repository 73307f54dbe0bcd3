//! Pseudo-relevance feedback: Bo1 candidate extraction and relatedness-based
//! term selection.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::analysis::AnalyzedText;
use crate::error::{Error, Result};
use crate::index::InvertedIndex;
use crate::relatedness::{EwcParams, PairMeasures, Relatedness};
use crate::retrieval::ScoredDoc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionMode {
    /// Gate on WordNet path and collocations, threshold the combined measure.
    Ewc,
    /// Threshold the ESA cosine alone.
    Esa,
}

impl FromStr for SelectionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ewc" => Ok(SelectionMode::Ewc),
            "esa" => Ok(SelectionMode::Esa),
            other => Err(Error::Config(format!("unknown selection mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionConfig {
    pub t1: f64,
    pub t2: f64,
    pub mode: SelectionMode,
    pub num_candidates: usize,
    pub num_feedback_docs: usize,
    pub ewc: EwcParams,
}

impl Default for SelectionConfig {
    fn default() -> Self {
        SelectionConfig {
            t1: 0.67,
            t2: 0.12,
            mode: SelectionMode::Ewc,
            num_candidates: 10,
            num_feedback_docs: 3,
            ewc: EwcParams::default(),
        }
    }
}

impl SelectionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.t1) {
            return Err(Error::Config(format!(
                "t1 must lie in [0, 1], got {}",
                self.t1
            )));
        }
        if !(self.t2.is_finite() && self.t2 >= 0.0) {
            return Err(Error::Config(format!(
                "t2 must be nonnegative, got {}",
                self.t2
            )));
        }
        if self.num_candidates == 0 || self.num_feedback_docs == 0 {
            return Err(Error::Config(
                "num_candidates and num_feedback_docs must be at least 1".into(),
            ));
        }
        self.ewc.validate()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionCandidate {
    pub stem: String,
    /// Most frequent original form in the feedback documents.
    pub surface: String,
    pub dfr_weight: f64,
}

/// Bo1 weight of a term seen `pool_tf` times in the feedback documents and
/// `cf` times in a collection of `num_docs` documents.
pub fn bo1_weight(pool_tf: u64, cf: u64, num_docs: usize) -> f64 {
    let pn = cf as f64 / num_docs as f64;
    pool_tf as f64 * ((1.0 + pn) / pn).log2() + (1.0 + pn).log2()
}

/// Rank the terms of the top `num_feedback_docs` documents of `first_pass`
/// by Bo1 weight and keep the best `num_candidates` that are not already in
/// the query. Ties go to the lexicographically smaller stem.
pub fn extract_candidates(
    index: &InvertedIndex,
    first_pass: &[ScoredDoc],
    query: &AnalyzedText,
    config: &SelectionConfig,
) -> Vec<ExpansionCandidate> {
    let mut pool: HashMap<u32, (u64, HashMap<&str, u64>)> = HashMap::new();
    for sd in first_pass.iter().take(config.num_feedback_docs) {
        let Some(doc) = index.doc_ordinal(&sd.doc_id) else {
            continue;
        };
        for dt in index.doc_terms(doc) {
            let e = pool.entry(dt.term).or_default();
            e.0 += u64::from(dt.tf);
            for (s, n) in &dt.surfaces {
                *e.1.entry(s.as_str()).or_default() += u64::from(*n);
            }
        }
    }
    let n = index.num_docs();
    let mut out: Vec<ExpansionCandidate> = pool
        .into_iter()
        .filter(|(term, _)| !query.tokens.iter().any(|q| q == index.term(*term)))
        .map(|(term, (tf, surfaces))| {
            let surface = surfaces
                .into_iter()
                .max_by(|a, b| a.1.cmp(&b.1).then_with(|| b.0.cmp(a.0)))
                .map(|(s, _)| s.to_owned())
                .unwrap_or_default();
            ExpansionCandidate {
                stem: index.term(term).to_owned(),
                surface,
                dfr_weight: bo1_weight(tf, index.stats_by_id(term).cf, n),
            }
        })
        .collect();
    out.sort_by(|a, b| {
        b.dfr_weight
            .partial_cmp(&a.dfr_weight)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.stem.cmp(&b.stem))
    });
    out.truncate(config.num_candidates);
    out
}

/// 1 when the pair passes the selection test for the configured mode.
pub fn pair_score(m: &PairMeasures, config: &SelectionConfig) -> u8 {
    let pass = match config.mode {
        SelectionMode::Ewc => m.wnp > 0.0 && m.coll > 0.0 && m.ewc > config.t2,
        SelectionMode::Esa => m.esa > config.t2,
    };
    u8::from(pass)
}

/// Decision record for one candidate against every original query word.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateDecision {
    pub candidate: ExpansionCandidate,
    pub pairs: Vec<PairMeasures>,
    pub scores: Vec<u8>,
    pub selected: bool,
}

/// Score a candidate surface word against all query words. The candidate is
/// kept when the mean pair score exceeds `t1`.
pub fn term_weight<R: Relatedness + ?Sized>(
    rel: &R,
    config: &SelectionConfig,
    candidate: &str,
    query_words: &[String],
) -> Result<(u8, Vec<PairMeasures>, Vec<u8>)> {
    if query_words.is_empty() {
        return Err(Error::EmptyQuery);
    }
    let pairs: Vec<PairMeasures> = query_words
        .iter()
        .map(|q| rel.measures(candidate, q))
        .collect();
    let scores: Vec<u8> = pairs.iter().map(|m| pair_score(m, config)).collect();
    let hits: u32 = scores.iter().map(|&s| u32::from(s)).sum();
    let weight = u8::from(f64::from(hits) / query_words.len() as f64 > config.t1);
    Ok((weight, pairs, scores))
}

/// Evaluate every candidate, in candidate order.
pub fn decide<R: Relatedness + ?Sized>(
    candidates: &[ExpansionCandidate],
    query_words: &[String],
    rel: &R,
    config: &SelectionConfig,
) -> Result<Vec<CandidateDecision>> {
    candidates
        .iter()
        .map(|c| {
            let (w, pairs, scores) = term_weight(rel, config, &c.surface, query_words)?;
            Ok(CandidateDecision {
                candidate: c.clone(),
                pairs,
                scores,
                selected: w == 1,
            })
        })
        .collect()
}

/// Candidates whose weight is 1, in candidate order.
pub fn select_terms<R: Relatedness + ?Sized>(
    candidates: &[ExpansionCandidate],
    query_words: &[String],
    rel: &R,
    config: &SelectionConfig,
) -> Result<Vec<ExpansionCandidate>> {
    Ok(decide(candidates, query_words, rel, config)?
        .into_iter()
        .filter(|d| d.selected)
        .map(|d| d.candidate)
        .collect())
}

/// Append selected stems that are not already in the query.
pub fn expand_query(query: &AnalyzedText, selected: &[ExpansionCandidate]) -> AnalyzedText {
    let mut out = query.clone();
    for c in selected {
        if !out.tokens.contains(&c.stem) {
            out.push(c.stem.clone(), c.surface.clone());
        }
    }
    out
}

fn join_f64(values: impl Iterator<Item = f64>) -> String {
    values
        .map(|v| format!("{v:.6}"))
        .collect::<Vec<_>>()
        .join(",")
}

/// Tab-separated trace line per candidate. Per-pair values are
/// comma-separated in query-word order.
pub fn write_trace(out: &mut String, topic_id: &str, decisions: &[CandidateDecision]) {
    for d in decisions {
        let weight = u8::from(d.selected);
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{:.6}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            topic_id,
            d.candidate.stem,
            d.candidate.surface,
            d.candidate.dfr_weight,
            join_f64(d.pairs.iter().map(|p| p.esa)),
            join_f64(d.pairs.iter().map(|p| p.wnp)),
            join_f64(d.pairs.iter().map(|p| p.coll)),
            join_f64(d.pairs.iter().map(|p| p.ewc)),
            d.scores
                .iter()
                .map(u8::to_string)
                .collect::<Vec<_>>()
                .join(","),
            weight,
            if d.selected { "selected" } else { "-" },
        );
    }
}

pub const TRACE_HEADER: &str =
    "topic\tstem\tsurface\tdfr_weight\tesa\twnp\tcoll\tewc\tpair_scores\tweight\tselected\n";
