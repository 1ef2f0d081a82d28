// Frequent words inside annotated entities, as raw material for new keywords.
//
//     cargo run --example keywords

use std::path::PathBuf;

use privleak::{entity_values, extract_keywords, load_corpus_path, EntityClass, Strictness};

pub fn run_example() -> anyhow::Result<()> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/sample_corpus.jsonl");
    let records = load_corpus_path(path, Strictness::Strict)?.records;
    let values = entity_values(&records);
    let list = extract_keywords(values.iter().map(|(c, s)| (*c, s.as_str())), 4);
    for class in EntityClass::ALL {
        let ranked: Vec<String> = list
            .get(class)
            .iter()
            .map(|c| format!("{} ({})", c.term, c.count))
            .collect();
        println!("{class:<6} {}", ranked.join(", "));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
