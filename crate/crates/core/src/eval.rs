//! trec_eval-style effectiveness measures.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::retrieval::{rank_order, ScoredDoc};
use crate::trec::{format_run_line, QrelEntry, RunLine};

/// Recall levels of the interpolated precision-recall curve.
pub const RECALL_LEVELS: [f64; 11] = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];

/// Per-topic ranked lists, rank 1 first.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RankedRun {
    topics: BTreeMap<String, Vec<ScoredDoc>>,
}

impl RankedRun {
    pub fn new() -> Self {
        Self::default()
    }

    /// Add a ranked list, rejecting repeated documents.
    pub fn insert(&mut self, topic_id: &str, docs: Vec<ScoredDoc>) -> Result<()> {
        let mut seen = HashSet::new();
        for d in &docs {
            if !seen.insert(d.doc_id.as_str()) {
                return Err(Error::DuplicateRunEntry {
                    topic: topic_id.to_owned(),
                    doc_id: d.doc_id.clone(),
                });
            }
        }
        self.topics.insert(topic_id.to_owned(), docs);
        Ok(())
    }

    /// Group run-file lines by topic and order each topic by descending
    /// score, ties by ascending document id. The rank column is ignored.
    pub fn from_lines(lines: Vec<RunLine>) -> Result<Self> {
        let mut grouped: BTreeMap<String, Vec<ScoredDoc>> = BTreeMap::new();
        for l in lines {
            grouped.entry(l.topic_id).or_default().push(ScoredDoc {
                doc_id: l.doc_id,
                score: l.score,
            });
        }
        let mut run = RankedRun::new();
        for (topic, mut docs) in grouped {
            docs.sort_by(rank_order);
            run.insert(&topic, docs)?;
        }
        Ok(run)
    }

    pub fn topics(&self) -> impl Iterator<Item = (&str, &[ScoredDoc])> {
        self.topics.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    pub fn get(&self, topic_id: &str) -> Option<&[ScoredDoc]> {
        self.topics.get(topic_id).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.topics.len()
    }

    pub fn is_empty(&self) -> bool {
        self.topics.is_empty()
    }

    /// trec_eval run-file text with ranks from 1.
    pub fn to_trec(&self, tag: &str) -> String {
        let mut out = String::new();
        for (topic, docs) in &self.topics {
            for (i, d) in docs.iter().enumerate() {
                format_run_line(
                    &mut out,
                    &RunLine {
                        topic_id: topic.clone(),
                        doc_id: d.doc_id.clone(),
                        rank: i + 1,
                        score: d.score,
                        tag: tag.to_owned(),
                    },
                );
            }
        }
        out
    }
}

/// Topic -> relevant documents. Every judged topic is present, possibly
/// with an empty set.
pub type Judgments = BTreeMap<String, HashSet<String>>;

/// A document is relevant iff its grade is at least `threshold`.
pub fn binarize_qrels(qrels: &[QrelEntry], threshold: u32) -> Judgments {
    let mut out = Judgments::new();
    for q in qrels {
        let set = out.entry(q.topic_id.clone()).or_default();
        if q.grade >= threshold {
            set.insert(q.doc_id.clone());
        }
    }
    out
}

/// Sum of precision at each relevant retrieved document over the number of
/// relevant documents.
pub fn average_precision<S: AsRef<str>>(ranked: &[S], relevant: &HashSet<String>) -> f64 {
    if relevant.is_empty() {
        return 0.0;
    }
    let mut hits = 0usize;
    let mut sum = 0.0;
    for (i, d) in ranked.iter().enumerate() {
        if relevant.contains(d.as_ref()) {
            hits += 1;
            sum += hits as f64 / (i + 1) as f64;
        }
    }
    sum / relevant.len() as f64
}

/// Precision at rank R = |relevant|; missing ranks count as non-relevant.
pub fn r_precision<S: AsRef<str>>(ranked: &[S], relevant: &HashSet<String>) -> f64 {
    let r = relevant.len();
    if r == 0 {
        return 0.0;
    }
    let hits = ranked
        .iter()
        .take(r)
        .filter(|d| relevant.contains(d.as_ref()))
        .count();
    hits as f64 / r as f64
}

/// Interpolated precision at recall 0.0, 0.1, ..., 1.0: the best precision
/// at any rank whose recall reaches the level.
pub fn interpolated_pr_11pt<S: AsRef<str>>(ranked: &[S], relevant: &HashSet<String>) -> [f64; 11] {
    let mut out = [0.0; 11];
    let r = relevant.len();
    if r == 0 {
        return out;
    }
    // (hits, precision) at each relevant retrieved rank
    let mut points = Vec::new();
    let mut hits = 0usize;
    for (i, d) in ranked.iter().enumerate() {
        if relevant.contains(d.as_ref()) {
            hits += 1;
            points.push((hits, hits as f64 / (i + 1) as f64));
        }
    }
    for (level, slot) in out.iter_mut().enumerate() {
        // level/10 <= hits/r, kept in integers
        *slot = points
            .iter()
            .filter(|(h, _)| level * r <= 10 * h)
            .map(|&(_, p)| p)
            .fold(0.0, f64::max);
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct TopicEval {
    pub topic_id: String,
    pub num_relevant: usize,
    pub num_retrieved: usize,
    pub num_relevant_retrieved: usize,
    pub average_precision: f64,
    pub r_precision: f64,
    pub interpolated: [f64; 11],
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub topics: Vec<TopicEval>,
    /// Mean average precision over evaluated topics.
    pub map: f64,
    pub r_precision: f64,
    pub interpolated: [f64; 11],
    pub warnings: Vec<String>,
}

pub fn evaluate_topic(topic_id: &str, docs: &[ScoredDoc], relevant: &HashSet<String>) -> TopicEval {
    let ids: Vec<&str> = docs.iter().map(|d| d.doc_id.as_str()).collect();
    TopicEval {
        topic_id: topic_id.to_owned(),
        num_relevant: relevant.len(),
        num_retrieved: ids.len(),
        num_relevant_retrieved: ids.iter().filter(|d| relevant.contains(**d)).count(),
        average_precision: average_precision(&ids, relevant),
        r_precision: r_precision(&ids, relevant),
        interpolated: interpolated_pr_11pt(&ids, relevant),
    }
}

/// Evaluate every run topic that has at least one relevant document.
/// Skipped topics are listed in `warnings`.
pub fn evaluate_run(run: &RankedRun, qrels: &[QrelEntry], threshold: u32) -> Result<EvalReport> {
    let judgments = binarize_qrels(qrels, threshold);
    let mut warnings = Vec::new();
    let mut topics = Vec::new();
    for (topic, docs) in run.topics() {
        match judgments.get(topic) {
            None => warnings.push(format!("topic {topic}: not in qrels, skipped")),
            Some(rel) if rel.is_empty() => {
                warnings.push(format!("topic {topic}: no relevant documents, skipped"))
            }
            Some(rel) => topics.push(evaluate_topic(topic, docs, rel)),
        }
    }
    if topics.is_empty() {
        return Err(Error::NoEvaluableTopics);
    }
    let n = topics.len() as f64;
    let map = topics.iter().map(|t| t.average_precision).sum::<f64>() / n;
    let r_precision = topics.iter().map(|t| t.r_precision).sum::<f64>() / n;
    let mut interpolated = [0.0; 11];
    for (i, slot) in interpolated.iter_mut().enumerate() {
        *slot = topics.iter().map(|t| t.interpolated[i]).sum::<f64>() / n;
    }
    Ok(EvalReport {
        topics,
        map,
        r_precision,
        interpolated,
        warnings,
    })
}

impl EvalReport {
    /// Per-topic rows followed by an `all` row, tab separated.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("topic\tnum_rel\tnum_ret\tnum_rel_ret\tmap\tRprec\n");
        for t in &self.topics {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{:.4}\t{:.4}",
                t.topic_id,
                t.num_relevant,
                t.num_retrieved,
                t.num_relevant_retrieved,
                t.average_precision,
                t.r_precision
            );
        }
        let _ = writeln!(
            out,
            "all\t{}\t{}\t{}\t{:.4}\t{:.4}",
            self.topics.iter().map(|t| t.num_relevant).sum::<usize>(),
            self.topics.iter().map(|t| t.num_retrieved).sum::<usize>(),
            self.topics
                .iter()
                .map(|t| t.num_relevant_retrieved)
                .sum::<usize>(),
            self.map,
            self.r_precision
        );
        out
    }

    /// Topic-averaged interpolated precision, one `recall<TAB>precision`
    /// line per level.
    pub fn pr_table(&self) -> String {
        let mut out = String::new();
        for (r, p) in RECALL_LEVELS.iter().zip(&self.interpolated) {
            let _ = writeln!(out, "{r:.1}\t{p:.4}");
        }
        out
    }
}
