//! Batch driver: recognition followed by subclass classification for every
//! message of a corpus.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::classifier::{tokenize_entity, Classifier};
use crate::corpus::CorpusRecord;
use crate::embeddings::EmbeddingTable;
use crate::ontology::{EntityClass, OntologyModel};
use crate::recognition::{
    ingest_annotations, privacy_verdict, Finding, Gazetteer, IngestError, Origin, PrivacyVerdict,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RecognizerMode {
    /// Use the spans carried by each record.
    #[default]
    External,
    /// Tag keywords with the ontology gazetteer; record spans are ignored.
    Gazetteer,
}

impl FromStr for RecognizerMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "external" => Ok(RecognizerMode::External),
            "gazetteer" => Ok(RecognizerMode::Gazetteer),
            other => Err(format!(
                "unknown recognizer `{other}` (expected external or gazetteer)"
            )),
        }
    }
}

impl fmt::Display for RecognizerMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RecognizerMode::External => "external",
            RecognizerMode::Gazetteer => "gazetteer",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MessageError {
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error("message {id}: `{subclass}` is not a subclass of {class}")]
    UnknownSubclass {
        id: String,
        class: EntityClass,
        subclass: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classified {
    pub findings: Vec<Finding>,
    pub verdict: PrivacyVerdict,
}

/// Outcome for one message, in corpus order.
#[derive(Debug, Clone, PartialEq)]
pub struct MessageResult {
    pub id: String,
    pub text: String,
    pub outcome: Result<Classified, MessageError>,
}

impl MessageResult {
    pub fn findings(&self) -> &[Finding] {
        match &self.outcome {
            Ok(c) => &c.findings,
            Err(_) => &[],
        }
    }
}

/// Shared, immutable state for classifying many messages.
pub struct Pipeline<'a> {
    classifier: Classifier<'a>,
    gazetteer: Gazetteer,
    mode: RecognizerMode,
}

impl<'a> Pipeline<'a> {
    pub fn new(model: &'a OntologyModel, table: &'a EmbeddingTable, mode: RecognizerMode) -> Self {
        Pipeline {
            classifier: Classifier::new(model, table),
            gazetteer: Gazetteer::new(model),
            mode,
        }
    }

    pub fn process(&self, record: &CorpusRecord) -> MessageResult {
        MessageResult {
            id: record.id.clone(),
            text: record.text.clone(),
            outcome: self.classify_record(record),
        }
    }

    fn classify_record(&self, record: &CorpusRecord) -> Result<Classified, MessageError> {
        check_gold_subclasses(record, self.classifier.model())?;
        let message = ingest_annotations(record, Origin::External)?;
        let spans = match self.mode {
            RecognizerMode::External => message.annotations.unwrap_or_default(),
            RecognizerMode::Gazetteer => self.gazetteer.recognize(&message.text),
        };
        let findings: Vec<Finding> = spans
            .into_iter()
            .map(|span| {
                let decision = self.classifier.classify(&tokenize_entity(&span));
                Finding { span, decision }
            })
            .collect();
        let verdict = privacy_verdict(&findings);
        Ok(Classified { findings, verdict })
    }

    /// Processes records in parallel; results keep input order.
    pub fn run(&self, records: &[CorpusRecord]) -> Vec<MessageResult> {
        records.par_iter().map(|r| self.process(r)).collect()
    }
}

fn check_gold_subclasses(record: &CorpusRecord, model: &OntologyModel) -> Result<(), MessageError> {
    for span in record.spans.iter().flatten() {
        let (Some(name), Ok(class)) = (&span.subclass, span.class.parse::<EntityClass>()) else {
            continue;
        };
        if model.find_subclass(class, name).is_none() {
            return Err(MessageError::UnknownSubclass {
                id: record.id.clone(),
                class,
                subclass: name.clone(),
            });
        }
    }
    Ok(())
}

pub fn run_classification(
    records: &[CorpusRecord],
    model: &OntologyModel,
    table: &EmbeddingTable,
    mode: RecognizerMode,
) -> Vec<MessageResult> {
    Pipeline::new(model, table, mode).run(records)
}
