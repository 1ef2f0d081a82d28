//! Subclass assignment by summed embedding similarity.
//!
//! For an entity with tokens `e_1..e_n` and the keyword terms `t_0..t_{N-1}`
//! of its class, each term receives the score `sum_j cos(e_j, t_i)`. The
//! term with the largest score wins (smallest index on ties) and its subclass
//! is the decision.

use serde::Serialize;

use crate::embeddings::{cosine, EmbeddingTable, Vector};
use crate::ontology::{EntityClass, KeywordTerm, OntologyModel};
use crate::recognition::EntitySpan;
use crate::text::tokenize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenizedEntity {
    pub tokens: Vec<String>,
    pub class: EntityClass,
    pub source_span: Option<(usize, usize)>,
}

impl TokenizedEntity {
    pub fn new(class: EntityClass, tokens: Vec<String>) -> Self {
        TokenizedEntity {
            tokens,
            class,
            source_span: None,
        }
    }

    /// An entity with no usable tokens cannot be scored.
    pub fn is_unclassifiable(&self) -> bool {
        self.tokens.is_empty()
    }
}

pub fn tokenize_entity(span: &EntitySpan) -> TokenizedEntity {
    TokenizedEntity {
        tokens: tokenize(&span.surface),
        class: span.label,
        source_span: Some((span.start, span.end)),
    }
}

/// Vector for a keyword term: the token's vector for single-token keywords,
/// the componentwise mean of the in-vocabulary token vectors otherwise.
/// `None` when no token is in the table.
pub fn term_vector(term: &KeywordTerm, table: &EmbeddingTable) -> Option<Vector> {
    match term.tokens.as_slice() {
        [single] => table.lookup(single).cloned(),
        tokens => Vector::mean(tokens.iter().filter_map(|t| table.lookup(t))),
    }
}

/// Cosine between an entity token and a keyword term. `None` when the token is
/// out of vocabulary (or degenerate), in which case it contributes nothing.
pub fn pair_similarity(token: &str, term: &KeywordTerm, table: &EmbeddingTable) -> Option<f64> {
    let term_vec = term_vector(term, table)?;
    table
        .lookup(token)
        .and_then(|tv| cosine(tv, &term_vec).ok())
}

/// Per-term score sums for one entity. `per_term[i]` is `None` for terms
/// without a vector; those never win.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreVector {
    pub per_term: Vec<Option<f64>>,
    pub contributing_tokens: usize,
    pub skipped_tokens: usize,
}

impl ScoreVector {
    /// Largest score and the smallest index attaining it.
    pub fn argmax(&self) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for (i, score) in self.per_term.iter().enumerate() {
            if let Some(s) = *score {
                if best.is_none_or(|(_, b)| s > b) {
                    best = Some((i, s));
                }
            }
        }
        best
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Abstention {
    /// No tokens left after normalization.
    EmptyEntity,
    /// Every entity token is out of vocabulary.
    AllTokensOov,
    /// No keyword term of the class has a vector.
    AllTermsOov,
    /// The ontology has no terms for the entity's class.
    UnknownClass,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "reason")]
pub enum Status {
    Classified,
    Unclassifiable(Abstention),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Winner {
    pub term_index: usize,
    pub term: String,
    pub subclass: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubclassDecision {
    pub class: EntityClass,
    pub status: Status,
    pub winner: Option<Winner>,
    pub scores: ScoreVector,
}

impl SubclassDecision {
    pub fn is_classified(&self) -> bool {
        self.status == Status::Classified
    }

    pub fn subclass(&self) -> Option<&str> {
        self.winner.as_ref().map(|w| w.subclass.as_str())
    }

    fn abstain(class: EntityClass, reason: Abstention, scores: ScoreVector) -> Self {
        SubclassDecision {
            class,
            status: Status::Unclassifiable(reason),
            winner: None,
            scores,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("no keyword term of {0} has an embedding")]
pub struct AllTermsOov(pub EntityClass);

/// Keyword term vectors of one ontology resolved against one embedding
/// table, reusable across entities.
#[derive(Debug, Clone)]
pub struct Classifier<'a> {
    model: &'a OntologyModel,
    table: &'a EmbeddingTable,
    term_vectors: Vec<(EntityClass, Vec<Option<Vector>>)>,
}

impl<'a> Classifier<'a> {
    pub fn new(model: &'a OntologyModel, table: &'a EmbeddingTable) -> Self {
        let term_vectors = model
            .classes()
            .map(|class| {
                let vectors = model
                    .terms(class)
                    .iter()
                    .map(|t| term_vector(t, table).filter(|v| v.norm() > 0.0))
                    .collect();
                (class, vectors)
            })
            .collect();
        Classifier {
            model,
            table,
            term_vectors,
        }
    }

    pub fn model(&self) -> &OntologyModel {
        self.model
    }

    pub fn table(&self) -> &EmbeddingTable {
        self.table
    }

    fn vectors(&self, class: EntityClass) -> &[Option<Vector>] {
        self.term_vectors
            .iter()
            .find(|(c, _)| *c == class)
            .map(|(_, v)| v.as_slice())
            .unwrap_or(&[])
    }

    pub fn score_terms(&self, entity: &TokenizedEntity) -> Result<ScoreVector, AllTermsOov> {
        let vectors = self.vectors(entity.class);
        if vectors.iter().all(Option::is_none) {
            return Err(AllTermsOov(entity.class));
        }
        let token_vectors: Vec<Option<&Vector>> = entity
            .tokens
            .iter()
            .map(|t| self.table.lookup(t).filter(|v| v.norm() > 0.0))
            .collect();
        let contributing = token_vectors.iter().filter(|v| v.is_some()).count();
        let per_term = vectors
            .iter()
            .map(|term| {
                term.as_ref().map(|term| {
                    // summed in sorted order so the result does not depend on token order
                    let mut sims: Vec<f64> = token_vectors
                        .iter()
                        .flatten()
                        .map(|tok| cosine(tok, term).unwrap_or(0.0))
                        .collect();
                    sims.sort_by(f64::total_cmp);
                    sims.iter().fold(0.0, |acc, s| acc + s)
                })
            })
            .collect();
        Ok(ScoreVector {
            per_term,
            contributing_tokens: contributing,
            skipped_tokens: entity.tokens.len() - contributing,
        })
    }

    pub fn classify(&self, entity: &TokenizedEntity) -> SubclassDecision {
        let class = entity.class;
        let empty = ScoreVector {
            per_term: vec![None; self.model.term_count(class)],
            contributing_tokens: 0,
            skipped_tokens: entity.tokens.len(),
        };
        if self.model.term_count(class) == 0 {
            return SubclassDecision::abstain(class, Abstention::UnknownClass, empty);
        }
        if entity.tokens.is_empty() {
            return SubclassDecision::abstain(class, Abstention::EmptyEntity, empty);
        }
        let scores = match self.score_terms(entity) {
            Ok(scores) => scores,
            Err(AllTermsOov(_)) => {
                return SubclassDecision::abstain(class, Abstention::AllTermsOov, empty)
            }
        };
        if scores.contributing_tokens == 0 {
            return SubclassDecision::abstain(class, Abstention::AllTokensOov, scores);
        }
        let (index, score) = scores.argmax().expect("at least one term has a vector");
        let term = &self.model.terms(class)[index];
        SubclassDecision {
            class,
            status: Status::Classified,
            winner: Some(Winner {
                term_index: index,
                term: term.surface.clone(),
                subclass: term.subclass.name.clone(),
                score,
            }),
            scores,
        }
    }
}

pub fn score_terms(
    entity: &TokenizedEntity,
    model: &OntologyModel,
    table: &EmbeddingTable,
) -> Result<ScoreVector, AllTermsOov> {
    Classifier::new(model, table).score_terms(entity)
}

pub fn classify_entity(
    entity: &TokenizedEntity,
    model: &OntologyModel,
    table: &EmbeddingTable,
) -> SubclassDecision {
    Classifier::new(model, table).classify(entity)
}
