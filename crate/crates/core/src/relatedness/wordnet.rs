//! WordNet hypernym/hyponym graph and the shortest-path similarity over it.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// A synset is identified by its data file (`n`, `v`, `a`, `r`) and byte offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SynsetId {
    pub pos: char,
    pub offset: u32,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TaxonomyGraph {
    ids: Vec<SynsetId>,
    index_of: HashMap<SynsetId, u32>,
    adjacency: Vec<Vec<u32>>,
    lemmas: HashMap<String, Vec<u32>>,
}

const POS_FILES: [(&str, char); 4] = [("noun", 'n'), ("verb", 'v'), ("adj", 'a'), ("adv", 'r')];

/// Satellite adjectives live in the adjective files.
fn file_pos(c: char) -> Option<char> {
    match c {
        'n' | 'v' | 'a' | 'r' => Some(c),
        's' => Some('a'),
        _ => None,
    }
}

fn normalize_lemma(word: &str) -> String {
    word.trim().to_lowercase().replace(' ', "_")
}

impl TaxonomyGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Add (or find) a synset node.
    pub fn add_synset(&mut self, id: SynsetId) -> u32 {
        if let Some(&i) = self.index_of.get(&id) {
            return i;
        }
        let i = self.ids.len() as u32;
        self.ids.push(id);
        self.index_of.insert(id, i);
        self.adjacency.push(Vec::new());
        i
    }

    /// Map a lemma to a synset, creating the synset if needed.
    pub fn add_lemma(&mut self, lemma: &str, id: SynsetId) {
        let node = self.add_synset(id);
        let entry = self.lemmas.entry(normalize_lemma(lemma)).or_default();
        if !entry.contains(&node) {
            entry.push(node);
        }
    }

    /// Add an undirected edge. Self-loops and repeated edges are ignored.
    pub fn add_edge(&mut self, a: SynsetId, b: SynsetId) {
        let (x, y) = (self.add_synset(a), self.add_synset(b));
        if x == y || self.adjacency[x as usize].contains(&y) {
            return;
        }
        self.adjacency[x as usize].push(y);
        self.adjacency[y as usize].push(x);
    }

    pub fn num_synsets(&self) -> usize {
        self.ids.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn num_lemmas(&self) -> usize {
        self.lemmas.len()
    }

    pub fn neighbors(&self, id: SynsetId) -> Vec<SynsetId> {
        self.index_of.get(&id).map_or_else(Vec::new, |&i| {
            let mut v: Vec<SynsetId> = self.adjacency[i as usize]
                .iter()
                .map(|&j| self.ids[j as usize])
                .collect();
            v.sort();
            v
        })
    }

    /// Synsets of a surface word. Inflected forms fall back to their base
    /// forms using WordNet's detachment rules.
    pub fn synsets(&self, word: &str) -> Vec<SynsetId> {
        let mut v: Vec<SynsetId> = self
            .synset_nodes(word)
            .into_iter()
            .map(|i| self.ids[i as usize])
            .collect();
        v.sort();
        v
    }

    fn synset_nodes(&self, word: &str) -> Vec<u32> {
        let w = normalize_lemma(word);
        if let Some(s) = self.lemmas.get(&w) {
            return s.clone();
        }
        let mut out: Vec<u32> = Vec::new();
        for base in base_forms(&w) {
            if let Some(s) = self.lemmas.get(&base) {
                for &n in s {
                    if !out.contains(&n) {
                        out.push(n);
                    }
                }
            }
        }
        out
    }

    /// Fewest edges between any synset of `w1` and any synset of `w2`.
    pub fn distance(&self, w1: &str, w2: &str) -> Option<usize> {
        let sources = self.synset_nodes(w1);
        let targets: HashSet<u32> = self.synset_nodes(w2).into_iter().collect();
        if sources.is_empty() || targets.is_empty() {
            return None;
        }
        let mut dist = vec![usize::MAX; self.ids.len()];
        let mut queue = VecDeque::new();
        for &s in &sources {
            if targets.contains(&s) {
                return Some(0);
            }
            dist[s as usize] = 0;
            queue.push_back(s);
        }
        while let Some(u) = queue.pop_front() {
            let d = dist[u as usize] + 1;
            for &v in &self.adjacency[u as usize] {
                if dist[v as usize] != usize::MAX {
                    continue;
                }
                if targets.contains(&v) {
                    return Some(d);
                }
                dist[v as usize] = d;
                queue.push_back(v);
            }
        }
        None
    }

    /// `1 / (1 + d)` for the shortest synset-to-synset path, 0 when either
    /// word is unknown or the synsets are disconnected.
    pub fn path_similarity(&self, w1: &str, w2: &str) -> f64 {
        self.distance(w1, w2)
            .map_or(0.0, |d| 1.0 / (1.0 + d as f64))
    }

    /// Load `index.{noun,verb,adj,adv}` and `data.*` from a WordNet database
    /// directory. Only hypernym (`@`) and hyponym (`~`) pointers become edges.
    pub fn load_dir(dir: &Path) -> Result<Self> {
        let mut g = TaxonomyGraph::new();
        let mut found = false;
        for (name, pos) in POS_FILES {
            let data = dir.join(format!("data.{name}"));
            if data.exists() {
                found = true;
                g.read_data(pos, &fs::read_to_string(&data)?)?;
            }
        }
        if !found {
            return Err(Error::WordNet(format!(
                "no data.* files in {}",
                dir.display()
            )));
        }
        for (name, _) in POS_FILES {
            let index = dir.join(format!("index.{name}"));
            if index.exists() {
                g.read_index(&fs::read_to_string(&index)?)?;
            }
        }
        Ok(g)
    }

    /// Parse a `data.<pos>` file.
    pub fn read_data(&mut self, file_pos_char: char, text: &str) -> Result<()> {
        for (lineno, line) in text.lines().enumerate() {
            if line.starts_with(' ') || line.trim().is_empty() {
                continue;
            }
            self.read_data_line(file_pos_char, line).map_err(|m| {
                Error::WordNet(format!("data.{file_pos_char} line {}: {m}", lineno + 1))
            })?;
        }
        Ok(())
    }

    fn read_data_line(
        &mut self,
        file_pos_char: char,
        line: &str,
    ) -> std::result::Result<(), String> {
        let body = line.split(" | ").next().unwrap_or(line);
        let mut f = body.split_whitespace();
        let mut next = |what: &str| f.next().ok_or_else(|| format!("missing {what}"));
        let offset: u32 = next("offset")?.parse().map_err(|_| "bad offset")?;
        next("lex_filenum")?;
        let ss_type = next("ss_type")?.chars().next().unwrap_or('?');
        if file_pos(ss_type) != Some(file_pos_char) {
            return Err(format!("synset type {ss_type:?} in wrong file"));
        }
        let id = SynsetId {
            pos: file_pos_char,
            offset,
        };
        self.add_synset(id);
        let w_cnt = usize::from_str_radix(next("w_cnt")?, 16).map_err(|_| "bad w_cnt")?;
        for _ in 0..w_cnt {
            let word = next("word")?;
            next("lex_id")?;
            // adjective position markers such as "(a)" or "(ip)"
            let word = word.split('(').next().unwrap_or(word);
            self.add_lemma(word, id);
        }
        let p_cnt: usize = next("p_cnt")?.parse().map_err(|_| "bad p_cnt")?;
        for _ in 0..p_cnt {
            let symbol = next("pointer symbol")?;
            let target: u32 = next("pointer offset")?
                .parse()
                .map_err(|_| "bad pointer offset")?;
            let tpos = next("pointer pos")?
                .chars()
                .next()
                .and_then(file_pos)
                .ok_or("bad pointer pos")?;
            next("source/target")?;
            if symbol == "@" || symbol == "~" {
                self.add_edge(
                    id,
                    SynsetId {
                        pos: tpos,
                        offset: target,
                    },
                );
            }
        }
        Ok(())
    }

    /// Parse an `index.<pos>` file. Every referenced synset must already be
    /// known from the data files.
    pub fn read_index(&mut self, text: &str) -> Result<()> {
        for (lineno, line) in text.lines().enumerate() {
            if line.starts_with(' ') || line.trim().is_empty() {
                continue;
            }
            let err = |m: &str| Error::WordNet(format!("index line {}: {m}", lineno + 1));
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() < 4 {
                return Err(err("too few fields"));
            }
            let lemma = f[0];
            let pos = f[1]
                .chars()
                .next()
                .and_then(file_pos)
                .ok_or_else(|| err("bad pos"))?;
            let synset_cnt: usize = f[2].parse().map_err(|_| err("bad synset_cnt"))?;
            let p_cnt: usize = f[3].parse().map_err(|_| err("bad p_cnt"))?;
            let first = 4 + p_cnt + 2;
            if f.len() < first + synset_cnt {
                return Err(err("too few synset offsets"));
            }
            for off in &f[first..first + synset_cnt] {
                let offset: u32 = off.parse().map_err(|_| err("bad synset offset"))?;
                let id = SynsetId { pos, offset };
                if !self.index_of.contains_key(&id) {
                    return Err(err(&format!("synset {pos} {offset:08} not in data file")));
                }
                self.add_lemma(lemma, id);
            }
        }
        Ok(())
    }
}

const DETACHMENTS: [(&str, &str); 18] = [
    ("s", ""),
    ("ses", "s"),
    ("xes", "x"),
    ("zes", "z"),
    ("ches", "ch"),
    ("shes", "sh"),
    ("men", "man"),
    ("ies", "y"),
    ("es", "e"),
    ("es", ""),
    ("ed", "e"),
    ("ed", ""),
    ("ing", "e"),
    ("ing", ""),
    ("er", ""),
    ("est", ""),
    ("er", "e"),
    ("est", "e"),
];

fn base_forms(word: &str) -> Vec<String> {
    DETACHMENTS
        .iter()
        .filter_map(|(suffix, repl)| {
            word.strip_suffix(suffix)
                .filter(|stem| !stem.is_empty())
                .map(|stem| format!("{stem}{repl}"))
        })
        .collect()
}
