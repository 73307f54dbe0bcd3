//! Explicit semantic analysis: words as TF-IDF vectors over concept documents.

use std::collections::HashMap;

use crate::analysis::{analyze, analyze_word, Stoplist};
use crate::error::{Error, Result};
use crate::trec::RawDocument;

/// Sparse weights over concepts, sorted by concept id, all strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub struct ConceptVector {
    weights: Vec<(u32, f64)>,
    norm: f64,
}

impl ConceptVector {
    pub fn new(mut weights: Vec<(u32, f64)>) -> Self {
        weights.retain(|(_, w)| *w > 0.0);
        weights.sort_by_key(|(c, _)| *c);
        let norm = weights.iter().map(|(_, w)| w * w).sum::<f64>().sqrt();
        ConceptVector { weights, norm }
    }

    pub fn weights(&self) -> &[(u32, f64)] {
        &self.weights
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn dot(&self, other: &ConceptVector) -> f64 {
        let (mut i, mut j, mut sum) = (0, 0, 0.0);
        let (a, b) = (&self.weights, &other.weights);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    sum += a[i].1 * b[j].1;
                    i += 1;
                    j += 1;
                }
            }
        }
        sum
    }

    pub fn cosine(&self, other: &ConceptVector) -> f64 {
        if self.norm == 0.0 || other.norm == 0.0 {
            return 0.0;
        }
        (self.dot(other) / (self.norm * other.norm)).clamp(0.0, 1.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConceptSpace {
    vectors: HashMap<String, ConceptVector>,
    concept_ids: Vec<String>,
    stoplist: Stoplist,
}

impl ConceptSpace {
    /// Each document is one concept. A word's weight in concept `c` is
    /// `tf(w, c) * ln(M / df(w))` over the `M` concepts, so words found in
    /// every concept drop out.
    pub fn build(concepts: &[RawDocument], stoplist: &Stoplist) -> Result<Self> {
        if concepts.is_empty() {
            return Err(Error::EmptyConceptSet);
        }
        let m = concepts.len() as f64;
        let mut postings: HashMap<String, Vec<(u32, u32)>> = HashMap::new();
        for (cid, doc) in concepts.iter().enumerate() {
            let mut tf: HashMap<String, u32> = HashMap::new();
            for t in analyze(&doc.text, stoplist).tokens {
                *tf.entry(t).or_default() += 1;
            }
            for (t, n) in tf {
                postings.entry(t).or_default().push((cid as u32, n));
            }
        }
        let vectors = postings
            .into_iter()
            .filter_map(|(term, plist)| {
                let idf = (m / plist.len() as f64).ln();
                let v = ConceptVector::new(
                    plist
                        .into_iter()
                        .map(|(c, n)| (c, f64::from(n) * idf))
                        .collect(),
                );
                (!v.weights.is_empty()).then_some((term, v))
            })
            .collect();
        Ok(ConceptSpace {
            vectors,
            concept_ids: concepts.iter().map(|d| d.doc_id.clone()).collect(),
            stoplist: stoplist.clone(),
        })
    }

    pub fn num_concepts(&self) -> usize {
        self.concept_ids.len()
    }

    pub fn concept_id(&self, c: u32) -> &str {
        &self.concept_ids[c as usize]
    }

    pub fn vocabulary_size(&self) -> usize {
        self.vectors.len()
    }

    /// Vector of a surface word, analyzed the same way as the concepts.
    pub fn vector(&self, word: &str) -> Option<&ConceptVector> {
        let stem = analyze_word(word, &self.stoplist)?;
        self.vectors.get(&stem)
    }

    /// Cosine of the two concept vectors; 0 when either word is unknown.
    pub fn relatedness(&self, w1: &str, w2: &str) -> f64 {
        match (self.vector(w1), self.vector(w2)) {
            (Some(a), Some(b)) => a.cosine(b),
            _ => 0.0,
        }
    }
}
