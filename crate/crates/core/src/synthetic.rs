//! A small synthetic test collection where relevant documents mostly use
//! synonyms of the topic title, together with a matching toy WordNet
//! database and concept corpus.
//!
//! Per topic there are two "seed" documents that use the title word next to
//! its synonyms (and carry a couple of author names), four documents that
//! use only the synonyms, and two off-topic documents that mention the
//! title once. Author names reappear in unrelated proceedings documents, so
//! appending them to a query pulls in non-relevant material. Background
//! documents contain filler words only.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::trec::{write_documents, write_qrels, write_topics, QrelEntry, RawDocument, Topic};

pub const DEFAULT_SEED: u64 = 20111;

struct Cluster {
    title: &'static str,
    synonyms: [&'static str; 2],
    category: &'static str,
}

const CLUSTERS: [Cluster; 12] = [
    Cluster {
        title: "car",
        synonyms: ["automobile", "motorcar"],
        category: "vehicle",
    },
    Cluster {
        title: "robot",
        synonyms: ["automaton", "android"],
        category: "mechanism",
    },
    Cluster {
        title: "doctor",
        synonyms: ["physician", "medic"],
        category: "healer",
    },
    Cluster {
        title: "lawyer",
        synonyms: ["attorney", "counsel"],
        category: "advocate",
    },
    Cluster {
        title: "boat",
        synonyms: ["vessel", "ship"],
        category: "craft",
    },
    Cluster {
        title: "film",
        synonyms: ["movie", "flick"],
        category: "show",
    },
    Cluster {
        title: "disease",
        synonyms: ["illness", "sickness"],
        category: "ailment",
    },
    Cluster {
        title: "forest",
        synonyms: ["woodland", "woods"],
        category: "land",
    },
    Cluster {
        title: "money",
        synonyms: ["cash", "currency"],
        category: "medium",
    },
    Cluster {
        title: "house",
        synonyms: ["dwelling", "residence"],
        category: "housing",
    },
    Cluster {
        title: "teacher",
        synonyms: ["instructor", "educator"],
        category: "professional",
    },
    Cluster {
        title: "mining",
        synonyms: ["excavation", "quarrying"],
        category: "industry",
    },
];

const FILLER: [&str; 60] = [
    "study",
    "result",
    "analysis",
    "model",
    "data",
    "process",
    "approach",
    "report",
    "value",
    "level",
    "group",
    "effect",
    "problem",
    "structure",
    "design",
    "development",
    "evaluation",
    "measurement",
    "sample",
    "experiment",
    "theory",
    "factor",
    "method",
    "survey",
    "paper",
    "conference",
    "proposal",
    "framework",
    "technique",
    "performance",
    "quality",
    "network",
    "function",
    "property",
    "parameter",
    "variation",
    "condition",
    "region",
    "period",
    "series",
    "pattern",
    "feature",
    "response",
    "control",
    "standard",
    "practice",
    "review",
    "policy",
    "strategy",
    "resource",
    "capacity",
    "environment",
    "growth",
    "change",
    "impact",
    "outcome",
    "distribution",
    "estimate",
    "trend",
    "sector",
];

const NAMES: [&str; 20] = [
    "tadashi", "masahiro", "kenji", "hiroshi", "takeshi", "yuki", "satoshi", "akira", "naoki",
    "kazuo", "shinji", "noboru", "osamu", "ryota", "daisuke", "kohei", "shigeru", "tomoko",
    "yasuo", "fumio",
];

/// All files of the toy collection, as text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToyCollection {
    pub corpus: Vec<RawDocument>,
    pub topics: Vec<Topic>,
    pub qrels: Vec<QrelEntry>,
    pub concepts: Vec<RawDocument>,
    pub wordnet_data_noun: String,
    pub wordnet_index_noun: String,
}

fn fillers(rng: &mut ChaCha8Rng, n: usize) -> Vec<String> {
    (0..n)
        .map(|_| FILLER[rng.gen_range(0..FILLER.len())].to_owned())
        .collect()
}

fn repeat(word: &str, n: usize) -> Vec<String> {
    vec![word.to_owned(); n]
}

fn shuffled_text(rng: &mut ChaCha8Rng, mut phrases: Vec<String>) -> String {
    phrases.shuffle(rng);
    phrases.join(" ")
}

pub fn generate(seed: u64) -> ToyCollection {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut corpus = Vec::new();
    let mut topics = Vec::new();
    let mut qrels = Vec::new();

    for (ti, c) in CLUSTERS.iter().enumerate() {
        let topic_id = format!("{:04}", ti + 1);
        topics.push(Topic {
            topic_id: topic_id.clone(),
            title: capitalize(c.title),
        });
        let mut authors: Vec<&str> = NAMES.choose_multiple(&mut rng, 2).copied().collect();
        authors.sort_unstable();
        let judge = |qrels: &mut Vec<QrelEntry>, doc_id: &str, grade: u32| {
            qrels.push(QrelEntry {
                topic_id: topic_id.clone(),
                doc_id: doc_id.to_owned(),
                grade,
            })
        };

        for k in 0..2 {
            let doc_id = format!("T{:02}-S{}", ti + 1, k);
            let mut p = fillers(&mut rng, 18);
            p.push(format!("{} {}", c.title, c.synonyms[0]));
            p.push(format!("{} {}", c.synonyms[1], c.title));
            p.extend(repeat(c.title, 2));
            p.extend(repeat(c.synonyms[0], 1));
            p.extend(repeat(c.synonyms[1], 1));
            for a in &authors {
                p.extend(repeat(a, 3));
            }
            corpus.push(RawDocument::new(&doc_id, shuffled_text(&mut rng, p)));
            judge(&mut qrels, &doc_id, 2);
        }
        for k in 0..4 {
            let doc_id = format!("T{:02}-H{}", ti + 1, k);
            let mut p = fillers(&mut rng, 20);
            p.extend(repeat(c.synonyms[k % 2], 2));
            p.extend(repeat(c.synonyms[(k + 1) % 2], 1 + k % 2));
            p.push(c.category.to_owned());
            corpus.push(RawDocument::new(&doc_id, shuffled_text(&mut rng, p)));
            // one of the synonym-only documents is judged partially relevant
            judge(&mut qrels, &doc_id, if k == 3 { 1 } else { 2 });
        }
        for k in 0..2 {
            let doc_id = format!("T{:02}-M{}", ti + 1, k);
            let mut p = fillers(&mut rng, 40);
            p.push(c.title.to_owned());
            corpus.push(RawDocument::new(&doc_id, shuffled_text(&mut rng, p)));
            judge(&mut qrels, &doc_id, 0);
        }
    }

    for k in 0..32 {
        let doc_id = format!("P{k:02}");
        let mut p = fillers(&mut rng, 16);
        for a in NAMES.choose_multiple(&mut rng, 4) {
            p.extend(repeat(a, 2));
        }
        corpus.push(RawDocument::new(&doc_id, shuffled_text(&mut rng, p)));
    }
    for k in 0..72 {
        let n = rng.gen_range(15..35);
        corpus.push(RawDocument::new(
            format!("B{k:02}"),
            fillers(&mut rng, n).join(" "),
        ));
    }

    let mut concepts = Vec::new();
    for c in &CLUSTERS {
        for k in 0..2 {
            let mut p = fillers(&mut rng, 6);
            p.extend(repeat(c.title, 3));
            p.extend(repeat(c.synonyms[0], 2 + k));
            p.extend(repeat(c.synonyms[1], 3 - k));
            p.extend(repeat(c.category, 2));
            concepts.push(RawDocument::new(
                format!("C-{}-{k}", c.title),
                shuffled_text(&mut rng, p),
            ));
        }
    }
    for k in 0..12 {
        concepts.push(RawDocument::new(
            format!("C-general-{k:02}"),
            fillers(&mut rng, 30).join(" "),
        ));
    }

    let (wordnet_data_noun, wordnet_index_noun) = toy_wordnet();
    ToyCollection {
        corpus,
        topics,
        qrels,
        concepts,
        wordnet_data_noun,
        wordnet_index_noun,
    }
}

fn capitalize(w: &str) -> String {
    let mut c = w.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

struct ToySynset {
    words: Vec<String>,
    gloss: String,
    hypernym: Option<usize>,
}

/// WordNet-format `data.noun` and `index.noun` for the toy taxonomy:
/// entity > {object, abstraction}; object > categories > topic synsets;
/// abstraction > one synset per filler word.
fn toy_wordnet() -> (String, String) {
    let mut synsets = vec![
        ToySynset {
            words: vec!["entity".into()],
            gloss: "that which exists".into(),
            hypernym: None,
        },
        ToySynset {
            words: vec!["object".into()],
            gloss: "a tangible thing".into(),
            hypernym: Some(0),
        },
        ToySynset {
            words: vec!["abstraction".into()],
            gloss: "a general concept".into(),
            hypernym: Some(0),
        },
    ];
    for c in &CLUSTERS {
        let cat = synsets.len();
        synsets.push(ToySynset {
            words: vec![c.category.into()],
            gloss: format!("a kind of {}", c.category),
            hypernym: Some(1),
        });
        let mut words = vec![c.title.to_owned()];
        words.extend(c.synonyms.iter().map(|s| s.to_string()));
        synsets.push(ToySynset {
            words,
            gloss: format!("a {}", c.title),
            hypernym: Some(cat),
        });
    }
    for f in FILLER {
        if CLUSTERS.iter().any(|c| c.category == f) {
            continue;
        }
        synsets.push(ToySynset {
            words: vec![f.into()],
            gloss: format!("a {f}"),
            hypernym: Some(2),
        });
    }

    let header = "  1 Toy noun taxonomy in WordNet 3.0 database format.\n  2 Generated for tests; not derived from WordNet.\n";
    let children: Vec<Vec<usize>> = (0..synsets.len())
        .map(|i| {
            (0..synsets.len())
                .filter(|&j| synsets[j].hypernym == Some(i))
                .collect()
        })
        .collect();
    let pointers = |i: usize| -> Vec<(char, usize)> {
        let mut v: Vec<(char, usize)> = synsets[i].hypernym.iter().map(|&h| ('@', h)).collect();
        v.extend(children[i].iter().map(|&c| ('~', c)));
        v
    };
    let render = |i: usize, offsets: &[usize]| -> String {
        let s = &synsets[i];
        let mut line = format!("{:08} 03 n {:02x}", offsets[i], s.words.len());
        for w in &s.words {
            let _ = write!(line, " {w} 0");
        }
        let ptrs = pointers(i);
        let _ = write!(line, " {:03}", ptrs.len());
        for (sym, target) in ptrs {
            let _ = write!(line, " {sym} {:08} n 0000", offsets[target]);
        }
        let _ = writeln!(line, " | {}", s.gloss);
        line
    };
    // every line has the same length whatever the offsets, so lay out first
    let zeros = vec![0usize; synsets.len()];
    let mut offsets = Vec::with_capacity(synsets.len());
    let mut pos = header.len();
    for i in 0..synsets.len() {
        offsets.push(pos);
        pos += render(i, &zeros).len();
    }
    let mut data = header.to_owned();
    for i in 0..synsets.len() {
        data.push_str(&render(i, &offsets));
    }

    let mut lemmas: Vec<(String, usize)> = synsets
        .iter()
        .enumerate()
        .flat_map(|(i, s)| s.words.iter().map(move |w| (w.clone(), i)))
        .collect();
    lemmas.sort();
    let mut index = header.to_owned();
    for (lemma, i) in lemmas {
        let mut symbols: Vec<char> = pointers(i).into_iter().map(|(s, _)| s).collect();
        symbols.dedup();
        let syms: String = symbols.iter().map(|s| format!(" {s}")).collect();
        let _ = writeln!(
            index,
            "{lemma} n 1 {}{syms} 1 0 {:08}",
            symbols.len(),
            offsets[i]
        );
    }
    (data, index)
}

impl ToyCollection {
    /// Write the collection plus a ready-to-use `toy.conf` into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir.join("wordnet"))?;
        fs::write(dir.join("corpus.trec"), write_documents(&self.corpus))?;
        fs::write(dir.join("topics.trec"), write_topics(&self.topics))?;
        fs::write(dir.join("qrels.txt"), write_qrels(&self.qrels))?;
        fs::write(dir.join("concepts.trec"), write_documents(&self.concepts))?;
        fs::write(dir.join("wordnet/data.noun"), &self.wordnet_data_noun)?;
        fs::write(dir.join("wordnet/index.noun"), &self.wordnet_index_noun)?;
        fs::write(dir.join("toy.conf"), TOY_CONF)?;
        Ok(())
    }
}

pub const TOY_CONF: &str = "\
# Synthetic collection generated by `qexpand gen-toy`.
corpus = corpus.trec
topics = topics.trec
qrels = qrels.txt
concepts = concepts.trec
wordnet = wordnet
output = out
model = bm25
t1 = 0.67
ewc.t2 = 0.12
esa.t2 = 0.08
num_candidates = 10
num_feedback_docs = 3
relevance_threshold = 2
";
