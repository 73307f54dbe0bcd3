//! Plain-text `key = value` pipeline configuration.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::expansion::{SelectionConfig, SelectionMode};
use crate::relatedness::EwcParams;
use crate::retrieval::{Bm25Params, Inl2Params, Model};

/// Everything a pipeline run needs. Relative paths are resolved against the
/// directory of the configuration file.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub corpus: Option<PathBuf>,
    pub topics: Option<PathBuf>,
    pub qrels: Option<PathBuf>,
    pub concepts: Option<PathBuf>,
    pub wordnet: Option<PathBuf>,
    /// Defaults to the retrieval corpus.
    pub collocations: Option<PathBuf>,
    /// Defaults to the bundled list.
    pub stopwords: Option<PathBuf>,
    pub output: PathBuf,
    /// One of `tfidf`, `bm25`, `inl2`.
    pub model_name: String,
    pub bm25: Bm25Params,
    pub inl2: Inl2Params,
    pub t1: f64,
    pub t2_ewc: f64,
    pub t2_esa: f64,
    pub num_candidates: usize,
    pub num_feedback_docs: usize,
    pub ewc: EwcParams,
    pub relevance_threshold: u32,
    pub depth: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            corpus: None,
            topics: None,
            qrels: None,
            concepts: None,
            wordnet: None,
            collocations: None,
            stopwords: None,
            output: PathBuf::from("out"),
            model_name: "bm25".into(),
            bm25: Bm25Params::default(),
            inl2: Inl2Params::default(),
            t1: 0.67,
            t2_ewc: 0.12,
            t2_esa: 0.08,
            num_candidates: 10,
            num_feedback_docs: 3,
            ewc: EwcParams::default(),
            relevance_threshold: 2,
            depth: 1000,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse {value:?}")))
}

impl PipelineConfig {
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let mut cfg = PipelineConfig {
            output: base_dir.join("out"),
            ..Default::default()
        };
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
            cfg.set(k.trim(), v.trim(), base_dir)?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base)
    }

    /// Apply a `key=value` override; relative paths resolve against `base_dir`.
    pub fn apply_override(&mut self, assignment: &str, base_dir: &Path) -> Result<()> {
        let (k, v) = assignment
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("override {assignment:?} is not key=value")))?;
        self.set(k.trim(), v.trim(), base_dir)
    }

    pub fn set(&mut self, key: &str, value: &str, base_dir: &Path) -> Result<()> {
        let path = || Some(base_dir.join(value));
        match key {
            "corpus" => self.corpus = path(),
            "topics" => self.topics = path(),
            "qrels" => self.qrels = path(),
            "concepts" => self.concepts = path(),
            "wordnet" => self.wordnet = path(),
            "collocations" => self.collocations = path(),
            "stopwords" => self.stopwords = path(),
            "output" => self.output = base_dir.join(value),
            "model" => {
                let m: Model = value.parse()?;
                self.model_name = m.name().to_owned();
            }
            "bm25.k1" => self.bm25.k1 = parse_num(key, value)?,
            "bm25.b" => self.bm25.b = parse_num(key, value)?,
            "bm25.k3" => self.bm25.k3 = parse_num(key, value)?,
            "inl2.c" => self.inl2.c = parse_num(key, value)?,
            "t1" => self.t1 = parse_num(key, value)?,
            "t2" | "ewc.t2" => self.t2_ewc = parse_num(key, value)?,
            "esa.t2" => self.t2_esa = parse_num(key, value)?,
            "num_candidates" => self.num_candidates = parse_num(key, value)?,
            "num_feedback_docs" => self.num_feedback_docs = parse_num(key, value)?,
            "lambda_wnp" => self.ewc.lambda_wnp = parse_num(key, value)?,
            "lambda_coll" => self.ewc.lambda_coll = parse_num(key, value)?,
            "xi" => self.ewc.xi = parse_num(key, value)?,
            "relevance_threshold" => self.relevance_threshold = parse_num(key, value)?,
            "depth" => self.depth = parse_num(key, value)?,
            other => return Err(Error::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    pub fn model(&self) -> Model {
        match self.model_name.as_str() {
            "tfidf" => Model::TfIdf,
            "inl2" => Model::InL2(self.inl2),
            _ => Model::Bm25(self.bm25),
        }
    }

    /// Selection settings for a mode, with that mode's `t2`.
    pub fn selection(&self, mode: SelectionMode) -> SelectionConfig {
        SelectionConfig {
            t1: self.t1,
            t2: match mode {
                SelectionMode::Ewc => self.t2_ewc,
                SelectionMode::Esa => self.t2_esa,
            },
            mode,
            num_candidates: self.num_candidates,
            num_feedback_docs: self.num_feedback_docs,
            ewc: self.ewc,
        }
    }

    /// Check numeric ranges.
    pub fn validate(&self) -> Result<()> {
        let b = &self.bm25;
        if !(b.k1 > 0.0 && (0.0..=1.0).contains(&b.b) && b.k3 >= 0.0) {
            return Err(Error::Config(format!("invalid BM25 parameters {b:?}")));
        }
        if !(self.inl2.c > 0.0 && self.inl2.c.is_finite()) {
            return Err(Error::Config(format!(
                "invalid InL2 parameter c = {}",
                self.inl2.c
            )));
        }
        if self.relevance_threshold == 0 {
            return Err(Error::Config(
                "relevance_threshold must be at least 1".into(),
            ));
        }
        if self.depth == 0 {
            return Err(Error::Config("depth must be at least 1".into()));
        }
        self.selection(SelectionMode::Ewc).validate()?;
        self.selection(SelectionMode::Esa).validate()
    }

    /// Return the named path, failing when it is unset or does not exist.
    pub fn require(&self, key: &str) -> Result<&Path> {
        let p = match key {
            "corpus" => &self.corpus,
            "topics" => &self.topics,
            "qrels" => &self.qrels,
            "concepts" => &self.concepts,
            "wordnet" => &self.wordnet,
            "collocations" => &self.collocations,
            "stopwords" => &self.stopwords,
            other => return Err(Error::Config(format!("unknown path key {other:?}"))),
        };
        let p = p
            .as_deref()
            .ok_or_else(|| Error::Config(format!("{key} is not set")))?;
        if !p.exists() {
            return Err(Error::Config(format!(
                "{key}: {} does not exist",
                p.display()
            )));
        }
        Ok(p)
    }

    /// Render back to the file format with every key spelled out.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let paths = [
            ("corpus", &self.corpus),
            ("topics", &self.topics),
            ("qrels", &self.qrels),
            ("concepts", &self.concepts),
            ("wordnet", &self.wordnet),
            ("collocations", &self.collocations),
            ("stopwords", &self.stopwords),
        ];
        for (k, v) in paths {
            if let Some(p) = v {
                let _ = writeln!(out, "{k} = {}", p.display());
            }
        }
        let _ = writeln!(out, "output = {}", self.output.display());
        let _ = writeln!(out, "model = {}", self.model_name);
        let _ = writeln!(out, "bm25.k1 = {}", self.bm25.k1);
        let _ = writeln!(out, "bm25.b = {}", self.bm25.b);
        let _ = writeln!(out, "bm25.k3 = {}", self.bm25.k3);
        let _ = writeln!(out, "inl2.c = {}", self.inl2.c);
        let _ = writeln!(out, "t1 = {}", self.t1);
        let _ = writeln!(out, "ewc.t2 = {}", self.t2_ewc);
        let _ = writeln!(out, "esa.t2 = {}", self.t2_esa);
        let _ = writeln!(out, "num_candidates = {}", self.num_candidates);
        let _ = writeln!(out, "num_feedback_docs = {}", self.num_feedback_docs);
        let _ = writeln!(out, "lambda_wnp = {}", self.ewc.lambda_wnp);
        let _ = writeln!(out, "lambda_coll = {}", self.ewc.lambda_coll);
        let _ = writeln!(out, "xi = {}", self.ewc.xi);
        let _ = writeln!(out, "relevance_threshold = {}", self.relevance_threshold);
        let _ = writeln!(out, "depth = {}", self.depth);
        out
    }
}
