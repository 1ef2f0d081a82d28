//! Entity spans for messages, either ingested from external annotations or
//! produced by the keyword gazetteer, and the message-level privacy verdict.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::classifier::SubclassDecision;
use crate::corpus::CorpusRecord;
use crate::ontology::{EntityClass, OntologyModel};
use crate::text::{char_slice, joined_by_separators, token_spans};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    External,
    Gazetteer,
    Gold,
}

/// A labeled character range of a message. Offsets count Unicode scalar
/// values; `surface` is exactly the text between them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EntitySpan {
    pub start: usize,
    pub end: usize,
    pub surface: String,
    pub label: EntityClass,
    pub origin: Origin,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Message {
    pub id: String,
    pub text: String,
    pub annotations: Option<Vec<EntitySpan>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IngestError {
    #[error("message {id}: text is empty")]
    EmptyText { id: String },
    #[error("message {id}: span ({start}, {end}) is outside the text")]
    SpanOutOfBounds {
        id: String,
        start: usize,
        end: usize,
    },
    #[error("message {id}: span ({start}, {end}) reads `{actual}`, annotation says `{expected}`")]
    SurfaceMismatch {
        id: String,
        start: usize,
        end: usize,
        expected: String,
        actual: String,
    },
    #[error("message {id}: unknown label `{label}`")]
    UnknownLabel { id: String, label: String },
}

/// Validates a corpus record's spans against its text and turns it into a
/// [`Message`]. Spans are tagged with `origin`.
pub fn ingest_annotations(record: &CorpusRecord, origin: Origin) -> Result<Message, IngestError> {
    let id = &record.id;
    if record.text.is_empty() {
        return Err(IngestError::EmptyText { id: id.clone() });
    }
    let annotations = match &record.spans {
        None => None,
        Some(spans) => {
            let mut out = Vec::with_capacity(spans.len());
            for raw in spans {
                let label: EntityClass =
                    raw.class.parse().map_err(|_| IngestError::UnknownLabel {
                        id: id.clone(),
                        label: raw.class.clone(),
                    })?;
                let out_of_bounds = || IngestError::SpanOutOfBounds {
                    id: id.clone(),
                    start: raw.start,
                    end: raw.end,
                };
                if raw.start >= raw.end {
                    return Err(out_of_bounds());
                }
                let surface =
                    char_slice(&record.text, raw.start, raw.end).ok_or_else(out_of_bounds)?;
                if let Some(expected) = &raw.surface {
                    if expected != surface {
                        return Err(IngestError::SurfaceMismatch {
                            id: id.clone(),
                            start: raw.start,
                            end: raw.end,
                            expected: expected.clone(),
                            actual: surface.to_string(),
                        });
                    }
                }
                out.push(EntitySpan {
                    start: raw.start,
                    end: raw.end,
                    surface: surface.to_string(),
                    label,
                    origin,
                });
            }
            Some(out)
        }
    };
    Ok(Message {
        id: id.clone(),
        text: record.text.clone(),
        annotations,
    })
}

/// Dictionary tagger over the ontology keywords: longest match first,
/// left to right, no overlaps, case-insensitive on whole tokens.
#[derive(Debug, Clone)]
pub struct Gazetteer {
    entries: HashMap<Vec<String>, EntityClass>,
    max_len: usize,
}

impl Gazetteer {
    pub fn new(model: &OntologyModel) -> Self {
        let mut entries = HashMap::new();
        let mut max_len = 0;
        for term in model.all_terms() {
            // a keyword shared by two classes is tagged with the first class declared
            entries
                .entry(term.tokens.clone())
                .or_insert(term.subclass.parent);
            max_len = max_len.max(term.tokens.len());
        }
        Gazetteer { entries, max_len }
    }

    pub fn recognize(&self, text: &str) -> Vec<EntitySpan> {
        let tokens = token_spans(text);
        let chars: Vec<char> = text.chars().collect();
        let mut spans = Vec::new();
        let mut i = 0;
        'outer: while i < tokens.len() {
            let longest = self.max_len.min(tokens.len() - i);
            for len in (1..=longest).rev() {
                let window = &tokens[i..i + len];
                let contiguous = window
                    .windows(2)
                    .all(|w| joined_by_separators(&chars, w[0].end, w[1].start));
                if !contiguous {
                    continue;
                }
                let key: Vec<String> = window.iter().map(|t| t.text.clone()).collect();
                if let Some(&label) = self.entries.get(&key) {
                    let (start, end) = (window[0].start, window[len - 1].end);
                    spans.push(EntitySpan {
                        start,
                        end,
                        surface: chars[start..end].iter().collect(),
                        label,
                        origin: Origin::Gazetteer,
                    });
                    i += len;
                    continue 'outer;
                }
            }
            i += 1;
        }
        spans
    }
}

pub fn gazetteer_recognize(text: &str, model: &OntologyModel) -> Vec<EntitySpan> {
    Gazetteer::new(model).recognize(text)
}

/// A recognized span together with its subclass decision.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Finding {
    pub span: EntitySpan,
    pub decision: SubclassDecision,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reason {
    pub class: EntityClass,
    pub subclass: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrivacyVerdict {
    pub leaking: bool,
    pub reasons: Vec<Reason>,
}

/// A message leaks when it mentions a person and at least one trait,
/// preference or event.
pub fn privacy_verdict(findings: &[Finding]) -> PrivacyVerdict {
    let has_person = findings.iter().any(|f| f.span.label == EntityClass::Person);
    let has_detail = findings.iter().any(|f| f.span.label != EntityClass::Person);
    let reasons = findings
        .iter()
        .filter_map(|f| {
            f.decision.subclass().map(|s| Reason {
                class: f.span.label,
                subclass: s.to_string(),
            })
        })
        .collect();
    PrivacyVerdict {
        leaking: has_person && has_detail,
        reasons,
    }
}
