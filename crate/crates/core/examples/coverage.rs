// How much of the ontology the embedding vocabulary covers.
//
//     cargo run --example coverage

use std::path::PathBuf;

use privleak::report::coverage_table;
use privleak::{default_ontology, EmbeddingTable};

pub fn run_example() -> anyhow::Result<()> {
    let table = EmbeddingTable::from_path(
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/glove.6B.100d.top5k.txt"),
    )?;
    let coverage = default_ontology().vocabulary_coverage(&table);
    print!("{}", coverage_table(&coverage));
    println!(
        "overall {:.1}% in vocabulary",
        100.0 * coverage.in_vocabulary_fraction()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
