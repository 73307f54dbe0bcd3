use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    #[error("malformed document markup at byte {offset}: {message}")]
    DocumentMarkup { offset: usize, message: String },

    #[error("duplicate document id {0:?}")]
    DuplicateDocId(String),

    #[error("topic {topic}: {message}")]
    Topic { topic: String, message: String },

    #[error("malformed topic markup at byte {offset}: {message}")]
    TopicMarkup { offset: usize, message: String },

    #[error("{kind} line {line}: {message}")]
    Line {
        kind: &'static str,
        line: usize,
        message: String,
    },

    #[error("duplicate judgment for topic {topic} document {doc_id}")]
    DuplicateQrel { topic: String, doc_id: String },

    #[error("duplicate document {doc_id} in run for topic {topic}")]
    DuplicateRunEntry { topic: String, doc_id: String },

    #[error("index file: {0}")]
    IndexFormat(String),

    #[error("wordnet database: {0}")]
    WordNet(String),

    #[error("concept space needs at least one concept document")]
    EmptyConceptSet,

    #[error("cannot expand an empty query")]
    EmptyQuery,

    #[error("run and qrels share no evaluable topic")]
    NoEvaluableTopics,

    #[error("invalid configuration: {0}")]
    Config(String),
}
