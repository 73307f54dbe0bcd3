//! Automatic query expansion with a combined semantic relatedness measure.
//!
//! The crate indexes a TREC-style collection, ranks documents with TF-IDF,
//! BM25 or InL2, pulls expansion candidates from pseudo-relevant documents
//! with the Bo1 model, and keeps only candidates that are related to most
//! of the query according to ESA, WordNet path similarity and a mixed
//! collocation index. Runs are scored with trec_eval-compatible measures.

pub mod analysis;
pub mod config;
pub mod error;
pub mod eval;
pub mod expansion;
pub mod index;
pub mod pipeline;
pub mod relatedness;
pub mod retrieval;
pub mod synthetic;
pub mod trec;

pub use error::{Error, Result};
