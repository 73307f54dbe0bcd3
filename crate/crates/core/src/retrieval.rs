//! Document ranking under TF-IDF, BM25 and InL2.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::analysis::AnalyzedText;
use crate::error::Error;
use crate::index::InvertedIndex;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bm25Params {
    pub k1: f64,
    pub b: f64,
    pub k3: f64,
}

impl Default for Bm25Params {
    fn default() -> Self {
        Bm25Params {
            k1: 1.2,
            b: 0.75,
            k3: 8.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inl2Params {
    pub c: f64,
}

impl Default for Inl2Params {
    fn default() -> Self {
        Inl2Params { c: 1.0 }
    }
}

/// Length-normalisation constant of the TF-IDF model.
pub const TFIDF_K: f64 = 1.2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    TfIdf,
    Bm25(Bm25Params),
    InL2(Inl2Params),
}

impl Model {
    pub fn name(&self) -> &'static str {
        match self {
            Model::TfIdf => "tfidf",
            Model::Bm25(_) => "bm25",
            Model::InL2(_) => "inl2",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;

    /// Parses a model name with default parameters.
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "tfidf" | "tf-idf" | "tf_idf" => Ok(Model::TfIdf),
            "bm25" => Ok(Model::Bm25(Bm25Params::default())),
            "inl2" => Ok(Model::InL2(Inl2Params::default())),
            other => Err(Error::Config(format!("unknown retrieval model {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredDoc {
    pub doc_id: String,
    pub score: f64,
}

/// Collection-level quantities shared by every per-term contribution.
#[derive(Debug, Clone, Copy)]
struct Collection {
    num_docs: f64,
    avg_len: f64,
}

impl Collection {
    fn of(index: &InvertedIndex) -> Self {
        Collection {
            num_docs: index.num_docs() as f64,
            avg_len: index.avg_doc_length(),
        }
    }
}

fn bm25_term(c: Collection, p: &Bm25Params, df: f64, tf: f64, dl: f64, qtf: f64) -> f64 {
    let idf = ((c.num_docs - df + 0.5) / (df + 0.5)).ln().max(0.0);
    let k = p.k1 * ((1.0 - p.b) + p.b * dl / c.avg_len);
    idf * ((p.k1 + 1.0) * tf) / (k + tf) * ((p.k3 + 1.0) * qtf) / (p.k3 + qtf)
}

fn tfidf_term(c: Collection, df: f64, tf: f64, dl: f64, qtf: f64) -> f64 {
    let ntf = tf / (tf + TFIDF_K * dl / c.avg_len);
    qtf * ntf * (1.0 + c.num_docs / df).ln()
}

fn inl2_term(c: Collection, p: &Inl2Params, df: f64, tf: f64, dl: f64, qtf: f64) -> f64 {
    let tfn = tf * (1.0 + p.c * c.avg_len / dl).log2();
    qtf * tfn / (tfn + 1.0) * ((c.num_docs + 1.0) / (df + 0.5)).log2()
}

fn term_score(model: &Model, c: Collection, df: f64, tf: f64, dl: f64, qtf: f64) -> f64 {
    match model {
        Model::TfIdf => tfidf_term(c, df, tf, dl, qtf),
        Model::Bm25(p) => bm25_term(c, p, df, tf, dl, qtf),
        Model::InL2(p) => inl2_term(c, p, df, tf, dl, qtf),
    }
}

/// Score one document by summing per-term contributions in query order.
/// Terms absent from the document contribute nothing.
pub fn score(index: &InvertedIndex, query: &AnalyzedText, doc: u32, model: &Model) -> f64 {
    let c = Collection::of(index);
    let dl = f64::from(index.doc_length(doc));
    let mut total = 0.0;
    for (term, qtf) in query.term_counts() {
        let tf = index.tf(term, doc);
        if tf == 0 {
            continue;
        }
        let df = f64::from(index.stats(term).map_or(0, |s| s.df));
        total += term_score(model, c, df, f64::from(tf), dl, f64::from(qtf));
    }
    total
}

pub fn score_bm25(
    index: &InvertedIndex,
    query: &AnalyzedText,
    doc: u32,
    params: Bm25Params,
) -> f64 {
    score(index, query, doc, &Model::Bm25(params))
}

pub fn score_tfidf(index: &InvertedIndex, query: &AnalyzedText, doc: u32) -> f64 {
    score(index, query, doc, &Model::TfIdf)
}

pub fn score_inl2(
    index: &InvertedIndex,
    query: &AnalyzedText,
    doc: u32,
    params: Inl2Params,
) -> f64 {
    score(index, query, doc, &Model::InL2(params))
}

/// Descending score, then ascending document id.
pub fn rank_order(a: &ScoredDoc, b: &ScoredDoc) -> Ordering {
    b.score
        .partial_cmp(&a.score)
        .unwrap_or(Ordering::Equal)
        .then_with(|| a.doc_id.cmp(&b.doc_id))
}

/// Term-at-a-time retrieval of the top `k` documents with positive score.
pub fn search(
    index: &InvertedIndex,
    query: &AnalyzedText,
    model: &Model,
    k: usize,
) -> Vec<ScoredDoc> {
    if k == 0 || query.is_empty() || index.num_docs() == 0 {
        return Vec::new();
    }
    let c = Collection::of(index);
    let mut acc = vec![0.0f64; index.num_docs()];
    let mut touched = vec![false; index.num_docs()];
    for (term, qtf) in query.term_counts() {
        let Some(stats) = index.stats(term) else {
            continue;
        };
        let df = f64::from(stats.df);
        for p in index.postings(term) {
            let dl = f64::from(index.doc_length(p.doc));
            acc[p.doc as usize] += term_score(model, c, df, f64::from(p.tf), dl, f64::from(qtf));
            touched[p.doc as usize] = true;
        }
    }
    let mut out: Vec<ScoredDoc> = acc
        .into_iter()
        .zip(touched)
        .enumerate()
        .filter(|(_, (s, t))| *t && *s > 0.0)
        .map(|(d, (score, _))| ScoredDoc {
            doc_id: index.doc_id(d as u32).to_owned(),
            score,
        })
        .collect();
    if out.len() > k {
        out.select_nth_unstable_by(k - 1, rank_order);
        out.truncate(k);
    }
    out.sort_by(rank_order);
    out
}
