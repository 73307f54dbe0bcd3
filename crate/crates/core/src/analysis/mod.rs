//! Text analysis: tokenization, stopword removal and Porter stemming.

mod porter;

use std::collections::HashSet;

pub use porter::stem;

const BUNDLED_STOPWORDS: &str = include_str!("stopwords.txt");

/// A set of lowercase words dropped before stemming.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Stoplist(HashSet<String>);

impl Stoplist {
    /// The list shipped with the crate. It approximates the general English
    /// list used by Terrier.
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_STOPWORDS)
    }

    /// One word per line; blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Self {
        Stoplist(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(str::to_lowercase)
                .collect(),
        )
    }

    pub fn empty() -> Self {
        Stoplist::default()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<S: Into<String>> FromIterator<S> for Stoplist {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        Stoplist(iter.into_iter().map(|s| s.into().to_lowercase()).collect())
    }
}

/// Stemmed tokens in text order, each paired with the lowercased surface
/// form it came from.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AnalyzedText {
    pub tokens: Vec<String>,
    pub surfaces: Vec<String>,
}

impl AnalyzedText {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn push(&mut self, token: String, surface: String) {
        self.tokens.push(token);
        self.surfaces.push(surface);
    }

    /// Distinct tokens with their in-text counts, in order of first occurrence.
    pub fn term_counts(&self) -> Vec<(&str, u32)> {
        let mut out: Vec<(&str, u32)> = Vec::new();
        for t in &self.tokens {
            match out.iter_mut().find(|(s, _)| *s == t.as_str()) {
                Some((_, n)) => *n += 1,
                None => out.push((t.as_str(), 1)),
            }
        }
        out
    }
}

/// Lowercased alphanumeric runs of `text`.
pub fn tokenize(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(str::to_lowercase)
}

pub fn analyze(text: &str, stoplist: &Stoplist) -> AnalyzedText {
    let mut out = AnalyzedText::default();
    for word in tokenize(text) {
        if stoplist.contains(&word) {
            continue;
        }
        let stemmed = stem(&word);
        if !stemmed.is_empty() {
            out.push(stemmed, word);
        }
    }
    out
}

/// Analyze a single surface word into its stem, or `None` when it is a
/// stopword or has no alphanumeric content.
pub fn analyze_word(word: &str, stoplist: &Stoplist) -> Option<String> {
    analyze(word, stoplist).tokens.into_iter().next()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn titles_from_table_one() {
        let sl = Stoplist::bundled();
        assert_eq!(
            analyze("Machine translation system", &sl).tokens,
            ["machin", "translat", "system"]
        );
        assert_eq!(analyze("Mining methods", &sl).tokens, ["mine", "method"]);
        assert_eq!(analyze("Robot", &sl).tokens, ["robot"]);
    }

    #[test]
    fn all_stopwords() {
        assert!(analyze("the of and", &Stoplist::bundled()).is_empty());
        assert!(analyze("", &Stoplist::bundled()).is_empty());
    }

    #[test]
    fn stopwords_removed_before_stemming() {
        // "being" would stem to "be" if it slipped through
        let a = analyze("being robots", &Stoplist::bundled());
        assert_eq!(a.tokens, ["robot"]);
        assert_eq!(a.surfaces, ["robots"]);
    }

    #[test]
    fn splits_on_punctuation_and_keeps_digits() {
        let a = analyze("ISO-9001, rev.2", &Stoplist::empty());
        assert_eq!(a.tokens, ["iso", "9001", "rev", "2"]);
    }

    #[test]
    fn term_counts_in_first_occurrence_order() {
        let a = analyze("robot arm robot", &Stoplist::empty());
        assert_eq!(a.term_counts(), vec![("robot", 2), ("arm", 1)]);
    }
}
