// Score one entity against every keyword of its class and show the winner.
//
//     cargo run --example classify_entity

use std::path::PathBuf;

use privleak::text::tokenize;
use privleak::{default_ontology, Classifier, EmbeddingTable, EntityClass, TokenizedEntity};

pub fn run_example() -> anyhow::Result<()> {
    let table = EmbeddingTable::from_path(
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/glove.6B.100d.top5k.txt"),
    )?;
    let model = default_ontology();
    let classifier = Classifier::new(&model, &table);

    let entities = [
        (EntityClass::Event, "watch a movie"),
        (EntityClass::Event, "flying to the island"),
        (EntityClass::Trait, "23 years-old"),
        (EntityClass::Pref, "green tea"),
        (EntityClass::Person, "I"),
    ];
    for (class, surface) in entities {
        let entity = TokenizedEntity::new(class, tokenize(surface));
        let decision = classifier.classify(&entity);
        match &decision.winner {
            Some(w) => println!(
                "{class} {surface:?} -> {} (term {:?}, score {:.3}, {} of {} tokens used)",
                w.subclass,
                w.term,
                w.score,
                decision.scores.contributing_tokens,
                entity.tokens.len()
            ),
            None => println!(
                "{class} {surface:?} -> unclassifiable: {:?}",
                decision.status
            ),
        }
    }

    // full score vector for one entity
    let entity = TokenizedEntity::new(EntityClass::Event, tokenize("watch a movie"));
    let scores = classifier.score_terms(&entity)?;
    for (term, score) in model.terms(EntityClass::Event).iter().zip(&scores.per_term) {
        if let Some(s) = score {
            println!("  {:<12} {:<16} {s:+.3}", term.surface, term.subclass.name);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
