//! Unigram and ordered adjacent-bigram counts for the mixed collocation index.

use std::collections::HashMap;

use crate::analysis::{analyze, analyze_word, Stoplist};
use crate::trec::RawDocument;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CollocationTable {
    unigrams: HashMap<String, u64>,
    bigrams: HashMap<(String, String), u64>,
    stoplist: Stoplist,
}

impl CollocationTable {
    /// Count analyzed tokens and strictly adjacent ordered pairs. Pairs never
    /// span two documents.
    pub fn build(docs: &[RawDocument], stoplist: &Stoplist) -> Self {
        let mut table = CollocationTable {
            stoplist: stoplist.clone(),
            ..Default::default()
        };
        for d in docs {
            let tokens = analyze(&d.text, stoplist).tokens;
            for t in &tokens {
                *table.unigrams.entry(t.clone()).or_default() += 1;
            }
            for w in tokens.windows(2) {
                *table
                    .bigrams
                    .entry((w[0].clone(), w[1].clone()))
                    .or_default() += 1;
            }
        }
        table
    }

    pub fn is_empty(&self) -> bool {
        self.unigrams.is_empty()
    }

    /// Count of an analyzed term.
    pub fn unigram(&self, term: &str) -> u64 {
        self.unigrams.get(term).copied().unwrap_or(0)
    }

    /// Count of the ordered analyzed pair `first second`.
    pub fn bigram(&self, first: &str, second: &str) -> u64 {
        self.bigrams
            .get(&(first.to_owned(), second.to_owned()))
            .copied()
            .unwrap_or(0)
    }

    pub fn num_unigrams(&self) -> usize {
        self.unigrams.len()
    }

    pub fn num_bigrams(&self) -> usize {
        self.bigrams.len()
    }

    /// C_xi for two surface words.
    pub fn index(&self, w1: &str, w2: &str, xi: f64) -> f64 {
        let (Some(a), Some(b)) = (
            analyze_word(w1, &self.stoplist),
            analyze_word(w2, &self.stoplist),
        ) else {
            return 0.0;
        };
        collocation_index(
            self.bigram(&a, &b),
            self.bigram(&b, &a),
            self.unigram(&a),
            self.unigram(&b),
            xi,
        )
    }
}

/// `2 f(w1 w2) / (f(w1) + f(w2)) + xi * 2 f(w2 w1) / (f(w1) + f(w2))`, or 0
/// when neither word was seen.
pub fn collocation_index(forward: u64, backward: u64, f1: u64, f2: u64, xi: f64) -> f64 {
    let denom = (f1 + f2) as f64;
    if denom == 0.0 {
        return 0.0;
    }
    2.0 * forward as f64 / denom + xi * 2.0 * backward as f64 / denom
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn robot_arm_robot() {
        let t = CollocationTable::build(
            &[RawDocument::new("d", "robot arm robot")],
            &Stoplist::empty(),
        );
        assert_eq!(t.unigram("robot"), 2);
        assert_eq!(t.unigram("arm"), 1);
        assert_eq!(t.bigram("robot", "arm"), 1);
        assert_eq!(t.bigram("arm", "robot"), 1);
        assert_eq!(t.bigram("robot", "robot"), 0);
    }

    #[test]
    fn no_pairs_across_documents() {
        let t = CollocationTable::build(
            &[RawDocument::new("a", "robot"), RawDocument::new("b", "arm")],
            &Stoplist::empty(),
        );
        assert_eq!(t.bigram("robot", "arm"), 0);
        assert_eq!(t.index("robot", "arm", 0.55), 0.0);
    }

    #[test]
    fn empty_corpus() {
        let t = CollocationTable::build(&[], &Stoplist::empty());
        assert!(t.is_empty());
        assert_eq!(t.index("a", "b", 0.55), 0.0);
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(collocation_index(0, 0, 10, 10, 0.55), 0.0);
        assert_eq!(collocation_index(5, 0, 10, 10, 0.55), 0.5);
        assert_eq!(collocation_index(0, 5, 10, 10, 0.55), 0.275);
        assert_eq!(collocation_index(3, 1, 0, 0, 0.55), 0.0);
    }

    #[test]
    fn order_matters_unless_xi_is_one() {
        let t = CollocationTable::build(
            &[RawDocument::new(
                "d",
                "machine translation fish machine translation",
            )],
            &Stoplist::empty(),
        );
        let ab = t.index("machine", "translation", 0.55);
        let ba = t.index("translation", "machine", 0.55);
        assert!(ab > ba);
        let ab1 = t.index("machine", "translation", 1.0);
        let ba1 = t.index("translation", "machine", 1.0);
        assert_eq!(ab1, ba1);
    }
}
