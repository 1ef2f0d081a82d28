//! Privacy-leak classification for short social-media messages.
//!
//! Messages are scanned for privacy-related entity spans (PERSON, TRAIT, PREF,
//! EVENT). Each span is assigned to a fine-grained subclass of a privacy
//! ontology by comparing its words to the subclass keywords in a pre-trained
//! word-embedding space: per keyword term the cosine similarities of all
//! entity words are summed, and the best-scoring term decides the subclass.
//!
//! ```
//! use privleak::{classify_entity, default_ontology, EmbeddingTable, EntityClass, TokenizedEntity};
//!
//! let table = EmbeddingTable::from_reader(
//!     "movie 0.9 0.1\nwatch 0.8 0.3\nwedding 0.1 0.9\n".as_bytes(),
//!     "inline",
//! )
//! .unwrap();
//! let model = default_ontology();
//! let entity = TokenizedEntity::new(EntityClass::Event, vec!["watch".into(), "movie".into()]);
//! let decision = classify_entity(&entity, &model, &table);
//! assert_eq!(decision.subclass(), Some("Private Event"));
//! ```

pub mod classifier;
pub mod corpus;
pub mod embeddings;
pub mod evaluation;
pub mod keywords;
pub mod ontology;
pub mod pipeline;
pub mod recognition;
pub mod report;
pub mod text;

pub use classifier::{
    classify_entity, pair_similarity, score_terms, term_vector, tokenize_entity, Abstention,
    Classifier, ScoreVector, Status, SubclassDecision, TokenizedEntity, Winner,
};
pub use corpus::{load_corpus, load_corpus_path, CorpusError, CorpusRecord, RawSpan, Strictness};
pub use embeddings::{cosine, EmbeddingError, EmbeddingTable, Vector};
pub use evaluation::{evaluate, EvaluationReport, Metric, Predicted, SubclassMetrics};
pub use keywords::{entity_values, extract_keywords, Candidate, KeywordCandidateList};
pub use ontology::{
    default_ontology, parse_ontology, CoverageReport, EntityClass, KeywordTerm, OntologyError,
    OntologyModel, Subclass,
};
pub use pipeline::{
    run_classification, Classified, MessageError, MessageResult, Pipeline, RecognizerMode,
};
pub use recognition::{
    gazetteer_recognize, ingest_annotations, privacy_verdict, EntitySpan, Finding, Gazetteer,
    IngestError, Message, Origin, PrivacyVerdict,
};
pub use report::{distribution, DistributionReport};
