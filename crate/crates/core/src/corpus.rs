//! Line-delimited corpus records.
//!
//! Each non-blank line is one JSON object:
//!
//! ```text
//! {"id": "1", "text": "I watch a movie.", "spans": [[0, 1, "PERSON", "Individual"], [2, 15, "EVENT", null]]}
//! ```
//!
//! `spans` is optional. Each span is `[start, end, class]`, optionally followed
//! by the gold subclass (or `null`) and the expected surface text.

use std::collections::HashSet;
use std::fs::File;
use std::io::{self, BufRead, BufReader};
use std::path::Path;

use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawSpan {
    pub start: usize,
    pub end: usize,
    pub class: String,
    pub subclass: Option<String>,
    pub surface: Option<String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SpanRepr {
    WithSurface(usize, usize, String, Option<String>, String),
    WithSubclass(usize, usize, String, Option<String>),
    Bare(usize, usize, String),
}

impl<'de> Deserialize<'de> for RawSpan {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(match SpanRepr::deserialize(deserializer)? {
            SpanRepr::WithSurface(start, end, class, subclass, surface) => RawSpan {
                start,
                end,
                class,
                subclass,
                surface: Some(surface),
            },
            SpanRepr::WithSubclass(start, end, class, subclass) => RawSpan {
                start,
                end,
                class,
                subclass,
                surface: None,
            },
            SpanRepr::Bare(start, end, class) => RawSpan {
                start,
                end,
                class,
                subclass: None,
                surface: None,
            },
        })
    }
}

impl Serialize for RawSpan {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let len = if self.surface.is_some() { 5 } else { 4 };
        let mut seq = serializer.serialize_seq(Some(len))?;
        seq.serialize_element(&self.start)?;
        seq.serialize_element(&self.end)?;
        seq.serialize_element(&self.class)?;
        seq.serialize_element(&self.subclass)?;
        if let Some(surface) = &self.surface {
            seq.serialize_element(surface)?;
        }
        seq.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub id: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spans: Option<Vec<RawSpan>>,
}

impl CorpusRecord {
    /// True when any span carries a gold subclass.
    pub fn has_gold(&self) -> bool {
        self.spans
            .as_ref()
            .is_some_and(|s| s.iter().any(|span| span.subclass.is_some()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strictness {
    /// Malformed lines are skipped and counted.
    #[default]
    Lenient,
    /// The first malformed line aborts loading.
    Strict,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("line {line}: malformed record: {reason}")]
    MalformedRecord { line: usize, reason: String },
    #[error("line {line}: duplicate id `{id}`")]
    DuplicateId { id: String, line: usize },
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedLine {
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Default)]
pub struct LoadedCorpus {
    pub records: Vec<CorpusRecord>,
    pub skipped: Vec<SkippedLine>,
}

pub fn load_corpus<R: BufRead>(
    reader: R,
    strictness: Strictness,
) -> Result<LoadedCorpus, CorpusError> {
    let mut out = LoadedCorpus::default();
    let mut seen = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: CorpusRecord = match serde_json::from_str(&line) {
            Ok(r) => r,
            Err(e) => {
                let reason = e.to_string();
                match strictness {
                    Strictness::Strict => {
                        return Err(CorpusError::MalformedRecord {
                            line: line_no,
                            reason,
                        })
                    }
                    Strictness::Lenient => {
                        out.skipped.push(SkippedLine {
                            line: line_no,
                            reason,
                        });
                        continue;
                    }
                }
            }
        };
        if !seen.insert(record.id.clone()) {
            return Err(CorpusError::DuplicateId {
                id: record.id,
                line: line_no,
            });
        }
        out.records.push(record);
    }
    Ok(out)
}

pub fn load_corpus_path(
    path: impl AsRef<Path>,
    strictness: Strictness,
) -> Result<LoadedCorpus, CorpusError> {
    load_corpus(BufReader::new(File::open(path)?), strictness)
}
