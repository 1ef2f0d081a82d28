// Compare predicted subclasses with the gold ones, with given spans
// (decoupled) and with gazetteer spans (coupled).
//
//     cargo run --example evaluate

use std::path::PathBuf;

use privleak::report::evaluation_table;
use privleak::{
    default_ontology, evaluate, load_corpus_path, EmbeddingTable, Pipeline, RecognizerMode,
    Strictness,
};

pub fn run_example() -> anyhow::Result<()> {
    let data = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let table = EmbeddingTable::from_path(data.join("glove.6B.100d.top5k.txt"))?;
    let records = load_corpus_path(data.join("sample_corpus.jsonl"), Strictness::Strict)?.records;
    let model = default_ontology();

    for (name, mode) in [
        ("decoupled", RecognizerMode::External),
        ("coupled", RecognizerMode::Gazetteer),
    ] {
        let results = Pipeline::new(&model, &table, mode).run(&records);
        let report = evaluate(&results, &records, &model);
        print!("{}", evaluation_table(name, &report));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
