// Which kinds of private information the corpus leaks, in percent.
//
//     cargo run --example distribution

use std::path::PathBuf;

use privleak::report::{distribution_table, write_distribution};
use privleak::{
    default_ontology, distribution, load_corpus_path, EmbeddingTable, Pipeline, RecognizerMode,
    Strictness,
};

pub fn run_example() -> anyhow::Result<()> {
    let data = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let table = EmbeddingTable::from_path(data.join("glove.6B.100d.top5k.txt"))?;
    let records = load_corpus_path(data.join("sample_corpus.jsonl"), Strictness::Strict)?.records;
    let model = default_ontology();

    let results = Pipeline::new(&model, &table, RecognizerMode::External).run(&records);
    let report = distribution(&results, &model);
    print!("{}", distribution_table(&report));

    let mut lines = Vec::new();
    write_distribution(&report, &mut lines)?;
    print!("{}", String::from_utf8(lines)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
