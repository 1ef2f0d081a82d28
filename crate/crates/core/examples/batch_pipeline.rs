// Classify a whole corpus and write the results file.
//
//     cargo run --example batch_pipeline

use std::path::PathBuf;

use privleak::report::write_results;
use privleak::{
    default_ontology, load_corpus_path, EmbeddingTable, Pipeline, RecognizerMode, Strictness,
};

pub fn run_example() -> anyhow::Result<()> {
    let data = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let table = EmbeddingTable::from_path(data.join("glove.6B.100d.top5k.txt"))?;
    let corpus = load_corpus_path(data.join("sample_corpus.jsonl"), Strictness::Strict)?;
    let model = default_ontology();

    for mode in [RecognizerMode::External, RecognizerMode::Gazetteer] {
        let results = Pipeline::new(&model, &table, mode).run(&corpus.records);
        let leaking = results
            .iter()
            .filter(|r| r.outcome.as_ref().is_ok_and(|c| c.verdict.leaking))
            .count();
        println!("{mode}: {leaking} of {} messages leak", results.len());
        if mode == RecognizerMode::External {
            for r in results.iter().take(3) {
                let labels: Vec<String> = r
                    .findings()
                    .iter()
                    .map(|f| {
                        format!(
                            "{:?}={}",
                            f.span.surface,
                            f.decision.subclass().unwrap_or("?")
                        )
                    })
                    .collect();
                println!("  {} {:?}: {}", r.id, r.text, labels.join(", "));
            }
        }
        let mut buf = Vec::new();
        write_results(&results, &mut buf)?;
        println!("  {} bytes of results", buf.len());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
