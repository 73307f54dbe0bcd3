//! Independent reference implementations used by the property and
//! acceptance suites. Nothing here touches the index or the production
//! scoring, selection or metric code.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::{HashMap, HashSet};

use qexpand::analysis::{analyze, Stoplist};
use qexpand::retrieval::Model;
use qexpand::trec::RawDocument;
use rand::seq::SliceRandom;
use rand::Rng;

pub const WORDS: [&str; 24] = [
    "ocean", "river", "mountain", "forest", "desert", "valley", "island", "glacier", "canyon",
    "meadow", "harbor", "lagoon", "plateau", "tundra", "prairie", "marsh", "delta", "summit",
    "cliff", "grove", "the", "of", "and", "running",
];

/// Random corpus of `1..=max_docs` documents over a small vocabulary, some
/// of them empty. Document ids are shuffled so that index order differs
/// from id order.
pub fn random_corpus<R: Rng>(rng: &mut R, max_docs: usize) -> Vec<RawDocument> {
    let n = rng.gen_range(1..=max_docs);
    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(rng);
    ids.into_iter()
        .map(|i| {
            let len = rng.gen_range(0..30);
            let vocab = rng.gen_range(3..=WORDS.len());
            let words: Vec<&str> = (0..len).map(|_| WORDS[rng.gen_range(0..vocab)]).collect();
            RawDocument::new(format!("D{i:03}"), words.join(" "))
        })
        .collect()
}

pub fn random_query<R: Rng>(rng: &mut R) -> String {
    let len = rng.gen_range(1..=5);
    (0..len)
        .map(|_| WORDS[rng.gen_range(0..WORDS.len())])
        .collect::<Vec<_>>()
        .join(" ")
}

/// Bag-of-stems view of a corpus, built by direct counting.
pub struct BruteCollection {
    pub ids: Vec<String>,
    pub bags: Vec<HashMap<String, u32>>,
    pub lengths: Vec<u32>,
}

impl BruteCollection {
    pub fn new(docs: &[RawDocument], stoplist: &Stoplist) -> Self {
        let mut ids = Vec::new();
        let mut bags = Vec::new();
        let mut lengths = Vec::new();
        for d in docs {
            let a = analyze(&d.text, stoplist);
            let mut bag = HashMap::new();
            for t in &a.tokens {
                *bag.entry(t.clone()).or_insert(0) += 1;
            }
            ids.push(d.doc_id.clone());
            lengths.push(a.tokens.len() as u32);
            bags.push(bag);
        }
        BruteCollection { ids, bags, lengths }
    }

    pub fn df(&self, term: &str) -> u32 {
        self.bags.iter().filter(|b| b.contains_key(term)).count() as u32
    }

    pub fn cf(&self, term: &str) -> u64 {
        self.bags
            .iter()
            .map(|b| u64::from(b.get(term).copied().unwrap_or(0)))
            .sum()
    }

    pub fn avgdl(&self) -> f64 {
        let total: u64 = self.lengths.iter().map(|&l| u64::from(l)).sum();
        total as f64 / self.ids.len() as f64
    }

    /// Exhaustive score of document `d`, one term at a time in query order.
    pub fn score(&self, query: &[(String, u32)], d: usize, model: &Model) -> f64 {
        let n = self.ids.len() as f64;
        let avgdl = self.avgdl();
        let dl = f64::from(self.lengths[d]);
        let mut total = 0.0;
        for (term, qtf) in query {
            let Some(&tf) = self.bags[d].get(term) else {
                continue;
            };
            let tf = f64::from(tf);
            let qtf = f64::from(*qtf);
            let df = f64::from(self.df(term));
            total += match model {
                Model::Bm25(p) => {
                    let idf = f64::max(((n - df + 0.5) / (df + 0.5)).ln(), 0.0);
                    let k = p.k1 * ((1.0 - p.b) + p.b * dl / avgdl);
                    idf * ((p.k1 + 1.0) * tf) / (k + tf) * ((p.k3 + 1.0) * qtf) / (p.k3 + qtf)
                }
                Model::TfIdf => qtf * (tf / (tf + 1.2 * dl / avgdl)) * (1.0 + n / df).ln(),
                Model::InL2(p) => {
                    let tfn = tf * (1.0 + p.c * avgdl / dl).log2();
                    qtf * tfn / (tfn + 1.0) * ((n + 1.0) / (df + 0.5)).log2()
                }
            };
        }
        total
    }

    /// Every positive-scoring document, best first, ties by doc id.
    pub fn ranking(&self, query: &[(String, u32)], model: &Model) -> Vec<(String, f64)> {
        let mut out: Vec<(String, f64)> = (0..self.ids.len())
            .map(|d| (self.ids[d].clone(), self.score(query, d, model)))
            .filter(|(_, s)| *s > 0.0)
            .collect();
        out.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        out
    }
}

/// Query stems with counts, in first-occurrence order.
pub fn query_terms(text: &str, stoplist: &Stoplist) -> Vec<(String, u32)> {
    let mut out: Vec<(String, u32)> = Vec::new();
    for t in analyze(text, stoplist).tokens {
        match out.iter_mut().find(|(s, _)| *s == t) {
            Some(e) => e.1 += 1,
            None => out.push((t, 1)),
        }
    }
    out
}

/// Average precision from the definition: mean over relevant documents of
/// the precision at their rank, unretrieved ones contributing zero.
pub fn ap(ranked: &[String], relevant: &HashSet<String>) -> f64 {
    if relevant.is_empty() {
        return 0.0;
    }
    let mut sum = 0.0;
    for k in 0..ranked.len() {
        if relevant.contains(&ranked[k]) {
            let rel_at_or_above = ranked[..=k]
                .iter()
                .filter(|d| relevant.contains(*d))
                .count();
            sum += rel_at_or_above as f64 / (k + 1) as f64;
        }
    }
    sum / relevant.len() as f64
}

pub fn r_prec(ranked: &[String], relevant: &HashSet<String>) -> f64 {
    let r = relevant.len();
    if r == 0 {
        return 0.0;
    }
    let mut hits = 0;
    for k in 0..r {
        if ranked.get(k).is_some_and(|d| relevant.contains(d)) {
            hits += 1;
        }
    }
    f64::from(hits) / r as f64
}

/// Interpolated precision: max precision over every cutoff whose recall
/// reaches the level.
pub fn pr11(ranked: &[String], relevant: &HashSet<String>) -> [f64; 11] {
    let mut out = [0.0; 11];
    let r = relevant.len();
    if r == 0 {
        return out;
    }
    for (level, slot) in out.iter_mut().enumerate() {
        let target = level as f64 / 10.0;
        let mut hits = 0usize;
        for k in 0..ranked.len() {
            if relevant.contains(&ranked[k]) {
                hits += 1;
            }
            let recall = hits as f64 / r as f64;
            let precision = hits as f64 / (k + 1) as f64;
            if recall >= target && precision > *slot {
                *slot = precision;
            }
        }
    }
    out
}

/// One selection fixture: candidate words, query words and the three raw
/// components for every (candidate, query word) pair.
#[derive(Debug, Clone)]
pub struct SelectionFixture {
    pub candidates: Vec<String>,
    pub query: Vec<String>,
    /// components[c][q] = (esa, wnp, coll)
    pub components: Vec<Vec<(f64, f64, f64)>>,
}

pub fn random_selection_fixture<R: Rng>(rng: &mut R) -> SelectionFixture {
    let nc = rng.gen_range(0..=10);
    let nq = rng.gen_range(1..=6);
    let pick = |rng: &mut R, zero_p: f64, hi: f64| {
        if rng.gen_bool(zero_p) {
            0.0
        } else {
            rng.gen_range(0.0..hi)
        }
    };
    let components = (0..nc)
        .map(|_| {
            (0..nq)
                .map(|_| {
                    (
                        pick(rng, 0.2, 1.0),
                        pick(rng, 0.4, 1.0),
                        pick(rng, 0.4, 0.2),
                    )
                })
                .collect()
        })
        .collect();
    SelectionFixture {
        candidates: (0..nc).map(|i| format!("cand{i}")).collect(),
        query: (0..nq).map(|i| format!("q{i}")).collect(),
        components,
    }
}

/// Direct evaluation of the selection rule. `t1_hundredths` is t1 in
/// hundredths so the mean comparison is exact integer arithmetic.
pub fn select_oracle(
    fx: &SelectionFixture,
    ewc_mode: bool,
    t1_hundredths: u32,
    t2: f64,
    lambda: f64,
    lambda_prime: f64,
) -> Vec<String> {
    let n = fx.query.len() as u32;
    let mut out = Vec::new();
    for (c, row) in fx.candidates.iter().zip(&fx.components) {
        let mut hits = 0u32;
        for &(esa, wnp, coll) in row {
            let pass = if ewc_mode {
                let mu = esa * (1.0 + lambda * wnp) * (1.0 + lambda_prime * coll);
                wnp != 0.0 && coll != 0.0 && mu > t2
            } else {
                esa > t2
            };
            if pass {
                hits += 1;
            }
        }
        if hits * 100 > t1_hundredths * n {
            out.push(c.clone());
        }
    }
    out
}
