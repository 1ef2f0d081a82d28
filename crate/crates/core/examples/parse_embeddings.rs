// Load a GloVe-format text file and query it.
//
//     cargo run --example parse_embeddings

use std::path::PathBuf;

use privleak::{cosine, EmbeddingTable};

pub fn run_example() -> anyhow::Result<()> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/glove.6B.100d.top5k.txt");
    let table = EmbeddingTable::from_path(&path)?;
    println!(
        "{}: {} tokens, {} dimensions, {} duplicates",
        table.source_id(),
        table.len(),
        table.dimension(),
        table.duplicate_count()
    );

    let pairs = [
        ("movie", "concert"),
        ("movie", "wedding"),
        ("holiday", "travel"),
        ("tea", "lawyer"),
    ];
    for (a, b) in pairs {
        let (Some(u), Some(v)) = (table.lookup(a), table.lookup(b)) else {
            println!("{a} / {b}: out of vocabulary");
            continue;
        };
        println!("cos({a}, {b}) = {:.4}", cosine(u, v)?);
    }
    // lookups are case-insensitive
    assert!(table.contains("Movie"));
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
