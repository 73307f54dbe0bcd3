//! Readers and writers for TREC-style collections: SGML document files,
//! topic files, qrels and run files.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::io::Read;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawDocument {
    pub doc_id: String,
    pub text: String,
}

impl RawDocument {
    pub fn new(doc_id: impl Into<String>, text: impl Into<String>) -> Self {
        RawDocument {
            doc_id: doc_id.into(),
            text: text.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topic {
    pub topic_id: String,
    pub title: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QrelEntry {
    pub topic_id: String,
    pub doc_id: String,
    pub grade: u32,
}

/// One line of a trec_eval run file.
#[derive(Debug, Clone, PartialEq)]
pub struct RunLine {
    pub topic_id: String,
    pub doc_id: String,
    pub rank: usize,
    pub score: f64,
    pub tag: String,
}

fn read_utf8<R: Read>(mut source: R) -> Result<String> {
    let mut s = String::new();
    source.read_to_string(&mut s)?;
    Ok(s)
}

/// A start or end tag found in SGML-ish markup.
struct Tag<'a> {
    start: usize,
    end: usize,
    name: &'a str,
    closing: bool,
}

fn next_tag(src: &str, from: usize) -> Option<Tag<'_>> {
    let rel = src[from..].find('<')?;
    let start = from + rel;
    let close = src[start..].find('>')? + start;
    let inner = src[start + 1..close].trim();
    let (closing, name) = match inner.strip_prefix('/') {
        Some(n) => (true, n.trim()),
        None => (false, inner),
    };
    let name = name.split_whitespace().next().unwrap_or("");
    Some(Tag {
        start,
        end: close + 1,
        name,
        closing,
    })
}

fn decode_entities(s: &str) -> String {
    if !s.contains('&') {
        return s.to_owned();
    }
    s.replace("&lt;", "<")
        .replace("&gt;", ">")
        .replace("&amp;", "&")
}

fn encode_entities(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn markup_err(offset: usize, message: impl Into<String>) -> Error {
    Error::DocumentMarkup {
        offset,
        message: message.into(),
    }
}

/// Parse `<DOC>` elements. Everything inside a document except the `DOCNO`
/// element is indexable; separate fields are joined with a single space.
pub fn parse_documents(src: &str) -> Result<Vec<RawDocument>> {
    let mut docs = Vec::new();
    let mut seen = HashSet::new();
    let mut pos = 0;
    loop {
        let skipped = src[pos..].len() - src[pos..].trim_start().len();
        pos += skipped;
        if pos >= src.len() {
            break;
        }
        let open = next_tag(src, pos)
            .filter(|t| t.start == pos && !t.closing && t.name.eq_ignore_ascii_case("DOC"))
            .ok_or_else(|| markup_err(pos, "expected <DOC>"))?;
        let body_start = open.end;
        let body_end = find_close(src, body_start, "DOC")
            .ok_or_else(|| markup_err(open.start, "unclosed <DOC>"))?;
        let doc = parse_doc_body(src, body_start, body_end.0)?
            .ok_or_else(|| markup_err(open.start, "document without <DOCNO>"))?;
        if !seen.insert(doc.doc_id.clone()) {
            return Err(Error::DuplicateDocId(doc.doc_id));
        }
        docs.push(doc);
        pos = body_end.1;
    }
    Ok(docs)
}

pub fn read_documents<R: Read>(source: R) -> Result<Vec<RawDocument>> {
    parse_documents(&read_utf8(source)?)
}

/// Position of the matching close tag as (start, end).
fn find_close(src: &str, from: usize, name: &str) -> Option<(usize, usize)> {
    let mut pos = from;
    while let Some(tag) = next_tag(src, pos) {
        if tag.name.eq_ignore_ascii_case(name) {
            if tag.closing {
                return Some((tag.start, tag.end));
            }
            // nested open of the same element means the previous one was never closed
            return None;
        }
        pos = tag.end;
    }
    None
}

fn parse_doc_body(src: &str, start: usize, end: usize) -> Result<Option<RawDocument>> {
    let body = &src[..end];
    let mut doc_id: Option<String> = None;
    let mut chunks: Vec<String> = Vec::new();
    let mut pos = start;
    let mut push_chunk = |s: &str| {
        let t = s.trim();
        if !t.is_empty() {
            chunks.push(decode_entities(t));
        }
    };
    while pos < end {
        match next_tag(body, pos) {
            Some(tag) => {
                push_chunk(&body[pos..tag.start]);
                if !tag.closing && tag.name.eq_ignore_ascii_case("DOCNO") {
                    let (cs, ce) = find_close(body, tag.end, "DOCNO")
                        .ok_or_else(|| markup_err(tag.start, "unclosed <DOCNO>"))?;
                    let id = body[tag.end..cs].trim();
                    if id.is_empty() {
                        return Err(markup_err(tag.start, "empty <DOCNO>"));
                    }
                    if doc_id.is_some() {
                        return Err(markup_err(tag.start, "second <DOCNO> in document"));
                    }
                    doc_id = Some(id.to_owned());
                    pos = ce;
                } else {
                    pos = tag.end;
                }
            }
            None => {
                push_chunk(&body[pos..end]);
                pos = end;
            }
        }
    }
    Ok(doc_id.map(|doc_id| RawDocument {
        doc_id,
        text: chunks.join(" "),
    }))
}

pub fn write_documents(docs: &[RawDocument]) -> String {
    let mut out = String::new();
    for d in docs {
        let _ = writeln!(
            out,
            "<DOC>\n<DOCNO>{}</DOCNO>\n<TEXT>\n{}\n</TEXT>\n</DOC>",
            d.doc_id,
            encode_entities(&d.text)
        );
    }
    out
}

/// Parse `<top>` elements, keeping only the number and the title.
pub fn parse_topics(src: &str) -> Result<Vec<Topic>> {
    let mut topics = Vec::new();
    let mut pos = 0;
    while let Some(tag) = next_tag(src, pos) {
        if tag.closing || !tag.name.eq_ignore_ascii_case("top") {
            pos = tag.end;
            continue;
        }
        let (body_end, after) =
            find_close(src, tag.end, "top").ok_or_else(|| Error::TopicMarkup {
                offset: tag.start,
                message: "unclosed <top>".into(),
            })?;
        let body = &src[..body_end];
        let num = field_text(body, tag.end, "num").map(|n| {
            let n = n.trim();
            let n = n
                .strip_prefix("Number:")
                .or_else(|| n.strip_prefix("number:"))
                .unwrap_or(n);
            n.trim().to_owned()
        });
        let topic_id = match num {
            Some(n) if !n.is_empty() => n,
            _ => {
                return Err(Error::TopicMarkup {
                    offset: tag.start,
                    message: "topic without <num>".into(),
                })
            }
        };
        let title = field_text(body, tag.end, "title")
            .map(|t| collapse_ws(&decode_entities(t)))
            .unwrap_or_default();
        if title.is_empty() {
            return Err(Error::Topic {
                topic: topic_id,
                message: "missing or empty <title>".into(),
            });
        }
        topics.push(Topic { topic_id, title });
        pos = after;
    }
    Ok(topics)
}

pub fn read_topics<R: Read>(source: R) -> Result<Vec<Topic>> {
    parse_topics(&read_utf8(source)?)
}

/// Text after `<name>` up to the next tag of any kind.
fn field_text<'a>(body: &'a str, from: usize, name: &str) -> Option<&'a str> {
    let mut pos = from;
    while let Some(tag) = next_tag(body, pos) {
        if !tag.closing && tag.name.eq_ignore_ascii_case(name) {
            let end = body[tag.end..]
                .find('<')
                .map_or(body.len(), |i| tag.end + i);
            return Some(&body[tag.end..end]);
        }
        pos = tag.end;
    }
    None
}

fn collapse_ws(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

pub fn write_topics(topics: &[Topic]) -> String {
    let mut out = String::new();
    for t in topics {
        let _ = writeln!(
            out,
            "<top>\n<num> Number: {}\n<title> {}\n</top>\n",
            t.topic_id,
            encode_entities(&t.title)
        );
    }
    out
}

fn line_err(kind: &'static str, line: usize, message: impl Into<String>) -> Error {
    Error::Line {
        kind,
        line,
        message: message.into(),
    }
}

/// Parse `topic_id iteration doc_id grade` lines.
pub fn parse_qrels(src: &str) -> Result<Vec<QrelEntry>> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (i, line) in src.lines().enumerate() {
        let lineno = i + 1;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() != 4 {
            return Err(line_err(
                "qrels",
                lineno,
                format!("expected 4 fields, found {}", fields.len()),
            ));
        }
        let grade: i64 = fields[3].parse().map_err(|_| {
            line_err(
                "qrels",
                lineno,
                format!("grade {:?} is not an integer", fields[3]),
            )
        })?;
        let grade = u32::try_from(grade)
            .map_err(|_| line_err("qrels", lineno, format!("negative grade {grade}")))?;
        let entry = QrelEntry {
            topic_id: fields[0].to_owned(),
            doc_id: fields[2].to_owned(),
            grade,
        };
        if !seen.insert((entry.topic_id.clone(), entry.doc_id.clone())) {
            return Err(Error::DuplicateQrel {
                topic: entry.topic_id,
                doc_id: entry.doc_id,
            });
        }
        out.push(entry);
    }
    Ok(out)
}

pub fn read_qrels<R: Read>(source: R) -> Result<Vec<QrelEntry>> {
    parse_qrels(&read_utf8(source)?)
}

pub fn write_qrels(qrels: &[QrelEntry]) -> String {
    let mut out = String::new();
    for q in qrels {
        let _ = writeln!(out, "{} 0 {} {}", q.topic_id, q.doc_id, q.grade);
    }
    out
}

/// Parse `topic_id Q0 doc_id rank score tag` lines.
pub fn parse_run(src: &str) -> Result<Vec<RunLine>> {
    let mut out = Vec::new();
    for (i, line) in src.lines().enumerate() {
        let lineno = i + 1;
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.is_empty() {
            continue;
        }
        if f.len() != 6 {
            return Err(line_err(
                "run",
                lineno,
                format!("expected 6 fields, found {}", f.len()),
            ));
        }
        let rank = f[3]
            .parse()
            .map_err(|_| line_err("run", lineno, format!("rank {:?} is not an integer", f[3])))?;
        let score: f64 = f[4]
            .parse()
            .map_err(|_| line_err("run", lineno, format!("score {:?} is not a number", f[4])))?;
        if !score.is_finite() {
            return Err(line_err("run", lineno, "score is not finite"));
        }
        out.push(RunLine {
            topic_id: f[0].to_owned(),
            doc_id: f[2].to_owned(),
            rank,
            score,
            tag: f[5].to_owned(),
        });
    }
    Ok(out)
}

pub fn read_run<R: Read>(source: R) -> Result<Vec<RunLine>> {
    parse_run(&read_utf8(source)?)
}

pub fn format_run_line(out: &mut String, line: &RunLine) {
    let _ = writeln!(
        out,
        "{} Q0 {} {} {:.6} {}",
        line.topic_id, line.doc_id, line.rank, line.score, line.tag
    );
}
