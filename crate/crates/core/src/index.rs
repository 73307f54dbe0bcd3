//! In-memory inverted index with a per-document direct file.

use std::collections::{HashMap, HashSet};
use std::io::{Read, Write};

use crate::analysis::{analyze, Stoplist};
use crate::error::{Error, Result};
use crate::trec::RawDocument;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Posting {
    pub doc: u32,
    pub tf: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TermStats {
    pub df: u32,
    pub cf: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct LexiconEntry {
    term: String,
    cf: u64,
    postings: Vec<Posting>,
}

/// One term of a document's direct-file row. `surfaces` lists the original
/// (lowercased) word forms that stemmed to this term, with counts, sorted
/// by form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocTerm {
    pub term: u32,
    pub tf: u32,
    pub surfaces: Vec<(String, u32)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct DocEntry {
    doc_id: String,
    length: u32,
    terms: Vec<DocTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InvertedIndex {
    lexicon: Vec<LexiconEntry>,
    term_ids: HashMap<String, u32>,
    docs: Vec<DocEntry>,
    doc_ordinals: HashMap<String, u32>,
    total_tokens: u64,
}

impl InvertedIndex {
    /// Index `docs` in order; document ordinals follow input order.
    pub fn build(docs: &[RawDocument], stoplist: &Stoplist) -> Result<Self> {
        let mut seen = HashSet::new();
        for d in docs {
            if !seen.insert(d.doc_id.as_str()) {
                return Err(Error::DuplicateDocId(d.doc_id.clone()));
            }
        }

        // (term, tf, sorted surface counts)
        type Row = Vec<(String, u32, Vec<(String, u32)>)>;
        // term -> [(doc ordinal, tf)]
        let mut vocab: HashMap<String, Vec<(u32, u32)>> = HashMap::new();
        let mut doc_rows: Vec<(String, u32, Row)> = Vec::with_capacity(docs.len());
        let mut total_tokens = 0u64;
        for (ord, d) in docs.iter().enumerate() {
            let analyzed = analyze(&d.text, stoplist);
            let mut counts: HashMap<&str, (u32, HashMap<&str, u32>)> = HashMap::new();
            for (tok, surf) in analyzed.tokens.iter().zip(&analyzed.surfaces) {
                let e = counts.entry(tok.as_str()).or_default();
                e.0 += 1;
                *e.1.entry(surf.as_str()).or_default() += 1;
            }
            let mut row: Row = counts
                .into_iter()
                .map(|(t, (tf, surf))| {
                    let mut s: Vec<(String, u32)> =
                        surf.into_iter().map(|(k, v)| (k.to_owned(), v)).collect();
                    s.sort();
                    (t.to_owned(), tf, s)
                })
                .collect();
            row.sort_by(|a, b| a.0.cmp(&b.0));
            for (t, tf, _) in &row {
                vocab.entry(t.clone()).or_default().push((ord as u32, *tf));
            }
            let length = analyzed.tokens.len() as u32;
            total_tokens += u64::from(length);
            doc_rows.push((d.doc_id.clone(), length, row));
        }

        let mut terms: Vec<String> = vocab.keys().cloned().collect();
        terms.sort();
        let term_ids: HashMap<&str, u32> = terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.as_str(), i as u32))
            .collect();
        let docs: Vec<DocEntry> = doc_rows
            .into_iter()
            .map(|(doc_id, length, row)| DocEntry {
                doc_id,
                length,
                terms: row
                    .into_iter()
                    .map(|(t, tf, surfaces)| DocTerm {
                        term: term_ids[t.as_str()],
                        tf,
                        surfaces,
                    })
                    .collect(),
            })
            .collect();
        let lexicon = terms
            .into_iter()
            .map(|term| {
                let plist = vocab.remove(&term).unwrap_or_default();
                let postings: Vec<Posting> = plist
                    .into_iter()
                    .map(|(doc, tf)| Posting { doc, tf })
                    .collect();
                let cf = postings.iter().map(|p| u64::from(p.tf)).sum();
                LexiconEntry { term, cf, postings }
            })
            .collect();
        Ok(InvertedIndex::assemble(lexicon, docs, total_tokens))
    }

    fn assemble(lexicon: Vec<LexiconEntry>, docs: Vec<DocEntry>, total_tokens: u64) -> Self {
        let term_ids = lexicon
            .iter()
            .enumerate()
            .map(|(i, e)| (e.term.clone(), i as u32))
            .collect();
        let doc_ordinals = docs
            .iter()
            .enumerate()
            .map(|(i, d)| (d.doc_id.clone(), i as u32))
            .collect();
        InvertedIndex {
            lexicon,
            term_ids,
            docs,
            doc_ordinals,
            total_tokens,
        }
    }

    pub fn num_docs(&self) -> usize {
        self.docs.len()
    }

    pub fn num_terms(&self) -> usize {
        self.lexicon.len()
    }

    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    /// Mean document length in tokens; 0 for an empty index.
    pub fn avg_doc_length(&self) -> f64 {
        if self.docs.is_empty() {
            0.0
        } else {
            self.total_tokens as f64 / self.docs.len() as f64
        }
    }

    pub fn term_id(&self, term: &str) -> Option<u32> {
        self.term_ids.get(term).copied()
    }

    pub fn term(&self, id: u32) -> &str {
        &self.lexicon[id as usize].term
    }

    /// Indexed terms in ascending order.
    pub fn terms(&self) -> impl Iterator<Item = &str> {
        self.lexicon.iter().map(|e| e.term.as_str())
    }

    pub fn stats(&self, term: &str) -> Option<TermStats> {
        self.term_id(term).map(|id| self.stats_by_id(id))
    }

    pub fn stats_by_id(&self, id: u32) -> TermStats {
        let e = &self.lexicon[id as usize];
        TermStats {
            df: e.postings.len() as u32,
            cf: e.cf,
        }
    }

    /// Postings for an analyzed term, ascending by document ordinal.
    pub fn postings(&self, term: &str) -> &[Posting] {
        self.term_id(term)
            .map_or(&[], |id| &self.lexicon[id as usize].postings)
    }

    pub fn doc_id(&self, doc: u32) -> &str {
        &self.docs[doc as usize].doc_id
    }

    pub fn doc_length(&self, doc: u32) -> u32 {
        self.docs[doc as usize].length
    }

    /// Direct-file row for a document, sorted by term id.
    pub fn doc_terms(&self, doc: u32) -> &[DocTerm] {
        &self.docs[doc as usize].terms
    }

    /// Term frequency of `term` in `doc` (0 when absent).
    pub fn tf(&self, term: &str, doc: u32) -> u32 {
        match self.term_id(term) {
            Some(id) => {
                let row = self.doc_terms(doc);
                row.binary_search_by_key(&id, |dt| dt.term)
                    .map_or(0, |i| row[i].tf)
            }
            None => 0,
        }
    }

    pub fn doc_ordinal(&self, doc_id: &str) -> Option<u32> {
        self.doc_ordinals.get(doc_id).copied()
    }
}

const MAGIC: &[u8; 8] = b"QXINDEX\0";
const VERSION: u32 = 1;

struct Writer<W: Write>(W);

impl<W: Write> Writer<W> {
    fn u32(&mut self, v: u32) -> Result<()> {
        Ok(self.0.write_all(&v.to_le_bytes())?)
    }
    fn u64(&mut self, v: u64) -> Result<()> {
        Ok(self.0.write_all(&v.to_le_bytes())?)
    }
    fn str(&mut self, s: &str) -> Result<()> {
        self.u32(s.len() as u32)?;
        Ok(self.0.write_all(s.as_bytes())?)
    }
}

struct Reader<R: Read>(R);

impl<R: Read> Reader<R> {
    fn u32(&mut self) -> Result<u32> {
        let mut b = [0u8; 4];
        self.0.read_exact(&mut b).map_err(truncated)?;
        Ok(u32::from_le_bytes(b))
    }
    fn u64(&mut self) -> Result<u64> {
        let mut b = [0u8; 8];
        self.0.read_exact(&mut b).map_err(truncated)?;
        Ok(u64::from_le_bytes(b))
    }
    fn str(&mut self) -> Result<String> {
        let n = self.u32()? as usize;
        let mut b = Vec::new();
        (&mut self.0).take(n as u64).read_to_end(&mut b)?;
        if b.len() != n {
            return Err(Error::IndexFormat("truncated string".into()));
        }
        String::from_utf8(b).map_err(|_| Error::IndexFormat("invalid utf-8".into()))
    }
}

fn truncated(e: std::io::Error) -> Error {
    if e.kind() == std::io::ErrorKind::UnexpectedEof {
        Error::IndexFormat("unexpected end of file".into())
    } else {
        Error::Io(e)
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::IndexFormat(msg.into())
}

impl InvertedIndex {
    /// Layout: magic, version, doc table (id, length, direct row), then the
    /// lexicon in term order (term, cf, postings). All integers little endian.
    pub fn write_to<W: Write>(&self, out: W) -> Result<()> {
        let mut w = Writer(out);
        w.0.write_all(MAGIC)?;
        w.u32(VERSION)?;
        w.u64(self.total_tokens)?;
        w.u32(self.docs.len() as u32)?;
        for d in &self.docs {
            w.str(&d.doc_id)?;
            w.u32(d.length)?;
            w.u32(d.terms.len() as u32)?;
            for dt in &d.terms {
                w.u32(dt.term)?;
                w.u32(dt.tf)?;
                w.u32(dt.surfaces.len() as u32)?;
                for (s, n) in &dt.surfaces {
                    w.str(s)?;
                    w.u32(*n)?;
                }
            }
        }
        w.u32(self.lexicon.len() as u32)?;
        for e in &self.lexicon {
            w.str(&e.term)?;
            w.u64(e.cf)?;
            w.u32(e.postings.len() as u32)?;
            for p in &e.postings {
                w.u32(p.doc)?;
                w.u32(p.tf)?;
            }
        }
        w.0.flush()?;
        Ok(())
    }

    pub fn read_from<R: Read>(input: R) -> Result<Self> {
        let mut r = Reader(input);
        let mut magic = [0u8; 8];
        r.0.read_exact(&mut magic).map_err(truncated)?;
        if &magic != MAGIC {
            return Err(bad("not an index file"));
        }
        let version = r.u32()?;
        if version != VERSION {
            return Err(bad(format!("unsupported version {version}")));
        }
        let total_tokens = r.u64()?;
        let ndocs = r.u32()? as usize;
        let mut docs = Vec::with_capacity(ndocs.min(1 << 20));
        for _ in 0..ndocs {
            let doc_id = r.str()?;
            let length = r.u32()?;
            let nterms = r.u32()? as usize;
            let mut terms = Vec::with_capacity(nterms.min(1 << 16));
            for _ in 0..nterms {
                let term = r.u32()?;
                let tf = r.u32()?;
                let ns = r.u32()? as usize;
                let mut surfaces = Vec::with_capacity(ns.min(64));
                for _ in 0..ns {
                    let s = r.str()?;
                    surfaces.push((s, r.u32()?));
                }
                terms.push(DocTerm { term, tf, surfaces });
            }
            docs.push(DocEntry {
                doc_id,
                length,
                terms,
            });
        }
        let nterms = r.u32()? as usize;
        let mut lexicon = Vec::with_capacity(nterms.min(1 << 20));
        for _ in 0..nterms {
            let term = r.str()?;
            let cf = r.u64()?;
            let np = r.u32()? as usize;
            let mut postings = Vec::with_capacity(np.min(1 << 20));
            for _ in 0..np {
                let doc = r.u32()?;
                postings.push(Posting { doc, tf: r.u32()? });
            }
            lexicon.push(LexiconEntry { term, cf, postings });
        }
        let index = InvertedIndex::assemble(lexicon, docs, total_tokens);
        if index.doc_ordinals.len() != index.docs.len() {
            return Err(bad("duplicate document ids"));
        }
        index.check()?;
        Ok(index)
    }

    /// Verify the structural invariants, mainly for freshly loaded files.
    pub fn check(&self) -> Result<()> {
        let n = self.docs.len() as u32;
        if self.term_ids.len() != self.lexicon.len() {
            return Err(bad("duplicate terms in lexicon"));
        }
        for w in self.lexicon.windows(2) {
            if w[0].term >= w[1].term {
                return Err(bad("lexicon not sorted"));
            }
        }
        for e in &self.lexicon {
            if e.postings.iter().map(|p| u64::from(p.tf)).sum::<u64>() != e.cf {
                return Err(bad(format!(
                    "collection frequency mismatch for {:?}",
                    e.term
                )));
            }
            if e.postings.windows(2).any(|w| w[0].doc >= w[1].doc)
                || e.postings.iter().any(|p| p.doc >= n || p.tf == 0)
            {
                return Err(bad(format!("bad postings for {:?}", e.term)));
            }
        }
        let mut total = 0u64;
        for d in &self.docs {
            total += u64::from(d.length);
            let row_sum: u64 = d.terms.iter().map(|t| u64::from(t.tf)).sum();
            if row_sum != u64::from(d.length)
                || d.terms
                    .iter()
                    .any(|t| t.term as usize >= self.lexicon.len())
            {
                return Err(bad(format!("bad direct row for {:?}", d.doc_id)));
            }
        }
        if total != self.total_tokens {
            return Err(bad("document lengths do not sum to total tokens"));
        }
        Ok(())
    }
}
