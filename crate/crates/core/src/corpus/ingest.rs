use std::fmt;
use std::path::Path;
use std::str::FromStr;

use super::{Corpus, Document, Topic};
use crate::error::{Error, Result};

/// On-disk corpus layouts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorpusFormat {
    /// One document per line: `doc_id<TAB>text`.
    Lines,
    /// TREC SGML: `<DOC><DOCNO>id</DOCNO> ... </DOC>`.
    Trec,
}

impl FromStr for CorpusFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lines" | "tsv" => Ok(CorpusFormat::Lines),
            "trec" | "sgml" => Ok(CorpusFormat::Trec),
            other => Err(Error::InvalidParameter(format!("unknown corpus format {other:?}"))),
        }
    }
}

impl fmt::Display for CorpusFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CorpusFormat::Lines => "lines",
            CorpusFormat::Trec => "trec",
        })
    }
}

impl Corpus {
    /// Reads and parses a corpus file.
    pub fn ingest(path: impl AsRef<Path>, format: CorpusFormat) -> Result<Corpus> {
        let path = path.as_ref();
        let raw = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Corpus::parse(&raw, format)
    }

    pub fn parse(raw: &str, format: CorpusFormat) -> Result<Corpus> {
        match format {
            CorpusFormat::Lines => parse_lines(raw),
            CorpusFormat::Trec => parse_trec(raw),
        }
    }

    /// Serializes in the line format. Tabs and line breaks inside the text
    /// become spaces, which the tokenizer treats identically.
    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        for doc in self.iter() {
            out.push_str(&doc.id);
            out.push('\t');
            out.extend(doc.text.chars().map(|c| match c {
                '\t' | '\n' | '\r' => ' ',
                c => c,
            }));
            out.push('\n');
        }
        out
    }
}

fn parse_lines(raw: &str) -> Result<Corpus> {
    let mut corpus = Corpus::new();
    for (lineno, line) in raw.lines().enumerate() {
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.trim().is_empty() {
            continue;
        }
        let (id, text) = line
            .split_once('\t')
            .ok_or_else(|| Error::malformed(format!("line {}", lineno + 1), "missing TAB separator"))?;
        let id = id.trim();
        if id.is_empty() {
            return Err(Error::malformed(format!("line {}", lineno + 1), "empty document id"));
        }
        corpus.push(Document::new(id, text))?;
    }
    Ok(corpus)
}

fn parse_trec(raw: &str) -> Result<Corpus> {
    let mut corpus = Corpus::new();
    let mut rest = raw;
    let mut record = 0usize;
    while let Some(start) = rest.find("<DOC>") {
        record += 1;
        let body_start = start + "<DOC>".len();
        let end = rest[body_start..]
            .find("</DOC>")
            .ok_or_else(|| Error::malformed(format!("record {record}"), "unterminated <DOC>"))?;
        let body = &rest[body_start..body_start + end];
        rest = &rest[body_start + end + "</DOC>".len()..];

        let no_start = body
            .find("<DOCNO>")
            .ok_or_else(|| Error::malformed(format!("record {record}"), "missing <DOCNO>"))?;
        let no_end = body[no_start..]
            .find("</DOCNO>")
            .map(|e| no_start + e)
            .ok_or_else(|| Error::malformed(format!("record {record}"), "unterminated <DOCNO>"))?;
        let id = body[no_start + "<DOCNO>".len()..no_end].trim();
        if id.is_empty() {
            return Err(Error::malformed(format!("record {record}"), "empty <DOCNO>"));
        }
        let mut text = String::with_capacity(body.len());
        text.push_str(&body[..no_start]);
        text.push(' ');
        text.push_str(&body[no_end + "</DOCNO>".len()..]);
        corpus.push(Document::new(id, strip_tags(&text)))?;
    }
    Ok(corpus)
}

fn strip_tags(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut in_tag = false;
    for c in s.chars() {
        match c {
            '<' => {
                in_tag = true;
                out.push(' ');
            }
            '>' if in_tag => in_tag = false,
            c if !in_tag => out.push(c),
            _ => {}
        }
    }
    out.trim().to_string()
}

/// Reads `topic_id<TAB>seed_query<TAB>description` records.
pub fn read_topics(path: impl AsRef<Path>) -> Result<Vec<Topic>> {
    let path = path.as_ref();
    let raw = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_topics(&raw)
}

pub fn parse_topics(raw: &str) -> Result<Vec<Topic>> {
    let mut topics: Vec<Topic> = Vec::new();
    for (lineno, line) in raw.lines().enumerate() {
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.splitn(3, '\t');
        let id = fields.next().unwrap_or("").trim();
        let query = fields.next().ok_or_else(|| {
            Error::malformed(format!("line {}", lineno + 1), "expected topic_id<TAB>seed_query<TAB>description")
        })?;
        if id.is_empty() {
            return Err(Error::malformed(format!("line {}", lineno + 1), "empty topic id"));
        }
        if topics.iter().any(|t| t.id == id) {
            return Err(Error::malformed(format!("line {}", lineno + 1), format!("duplicate topic {id:?}")));
        }
        topics.push(Topic {
            id: id.to_string(),
            seed_query: query.trim().to_string(),
            description: fields.next().unwrap_or("").trim().to_string(),
        });
    }
    Ok(topics)
}
