#![allow(dead_code)]

use std::path::PathBuf;

use privleak::{
    parse_ontology, EmbeddingTable, EntityClass, OntologyModel, TokenizedEntity, Vector,
};
use rand::Rng;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

pub fn glove_path() -> PathBuf {
    data_path("glove.6B.100d.top5k.txt")
}

pub fn table(entries: &[(&str, &[f64])]) -> EmbeddingTable {
    EmbeddingTable::from_entries(
        "fixture",
        entries
            .iter()
            .map(|(w, v)| (w.to_string(), Vector::new(v.to_vec()).unwrap())),
    )
    .unwrap()
}

/// A random classification problem: an EVENT-only ontology whose keywords are
/// `kw0..kwN`, a table covering some of them, and an entity of `tok*` tokens,
/// some of which are missing from the table.
pub struct Instance {
    pub model: OntologyModel,
    pub table: EmbeddingTable,
    pub entity: TokenizedEntity,
    pub terms: Vec<String>,
}

pub fn random_vector<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        if v.iter().any(|x| x.abs() > 1e-3) {
            return v;
        }
    }
}

pub fn random_instance<R: Rng>(rng: &mut R) -> Instance {
    let dim = rng.gen_range(2..=10);
    let n_terms: usize = rng.gen_range(1..=10);
    let n_tokens = rng.gen_range(1..=8);
    let n_subclasses = rng.gen_range(1..=n_terms.min(3));

    let terms: Vec<String> = (0..n_terms).map(|i| format!("kw{i}")).collect();
    let mut config = String::new();
    let per = n_terms.div_ceil(n_subclasses);
    for (s, chunk) in terms.chunks(per).enumerate() {
        config.push_str(&format!("[EVENT Sub {s}]\n{}\n", chunk.join(", ")));
    }
    let model = parse_ontology(config.as_bytes()).unwrap();

    let mut entries = Vec::new();
    // keep at least one term in vocabulary
    let anchor = rng.gen_range(0..n_terms);
    for (i, t) in terms.iter().enumerate() {
        if i == anchor || rng.gen_bool(0.85) {
            entries.push((t.clone(), Vector::new(random_vector(rng, dim)).unwrap()));
        }
    }
    let tokens: Vec<String> = (0..n_tokens).map(|j| format!("tok{j}")).collect();
    for t in &tokens {
        if rng.gen_bool(0.8) {
            entries.push((t.clone(), Vector::new(random_vector(rng, dim)).unwrap()));
        }
    }
    // occasionally reuse a keyword as an entity token
    let mut entity_tokens = tokens;
    if rng.gen_bool(0.3) {
        entity_tokens.push(terms[anchor].clone());
    }
    let table = EmbeddingTable::from_entries("random", entries).unwrap();
    Instance {
        model,
        table,
        entity: TokenizedEntity::new(EntityClass::Event, entity_tokens),
        terms,
    }
}

fn naive_cosine(u: &[f64], v: &[f64]) -> f64 {
    let mut dot = 0.0;
    let mut uu = 0.0;
    let mut vv = 0.0;
    for k in 0..u.len() {
        dot += u[k] * v[k];
        uu += u[k] * u[k];
        vv += v[k] * v[k];
    }
    dot / (uu.sqrt() * vv.sqrt())
}

/// Straight double loop over terms and tokens. Returns per-term scores
/// (`None` for terms without a vector) and the winning index.
pub fn naive_oracle(
    tokens: &[String],
    terms: &[String],
    table: &EmbeddingTable,
) -> (Vec<Option<f64>>, Option<usize>) {
    let mut scores = Vec::new();
    for term in terms {
        let Some(tv) = table.lookup(term) else {
            scores.push(None);
            continue;
        };
        let mut sum = 0.0;
        for tok in tokens {
            if let Some(ev) = table.lookup(tok) {
                sum += naive_cosine(ev.as_slice(), tv.as_slice());
            }
        }
        scores.push(Some(sum));
    }
    let mut best: Option<usize> = None;
    for (i, s) in scores.iter().enumerate() {
        if let Some(s) = s {
            match best {
                Some(b) if scores[b].unwrap() >= *s => {}
                _ => best = Some(i),
            }
        }
    }
    (scores, best)
}

/// Synthetic corpus line generator shared by the throughput check and the
/// examples.
pub const FILLER: &[&str] = &[
    "today", "really", "so", "with", "my", "friends", "after", "work", "again", "finally",
    "tonight", "we", "they", "good", "new", "the", "at", "for", "and", "love",
];
