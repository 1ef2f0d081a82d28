// Replace the built-in ontology with one read from a config file.
//
//     cargo run --example custom_ontology

use privleak::{
    classify_entity, default_ontology, parse_ontology, EmbeddingTable, EntityClass, TokenizedEntity,
};

const CONFIG: &str = "\
# pets get their own preference subclass
[PREF Pet]
dog, cat, puppy

[PREF Item]
book, tea

[PERSON Individual]
i
";

pub fn run_example() -> anyhow::Result<()> {
    let model = parse_ontology(CONFIG.as_bytes())?;
    let table = EmbeddingTable::from_reader(
        "dog 0.9 0.1 0.0\ncat 0.8 0.2 0.1\npuppy 0.95 0.0 0.1\nbook 0.0 0.9 0.3\ntea 0.1 0.3 0.9\nkitten 0.85 0.1 0.1\n"
            .as_bytes(),
        "inline",
    )?;
    let entity = TokenizedEntity::new(EntityClass::Pref, vec!["kitten".into()]);
    let decision = classify_entity(&entity, &model, &table);
    println!(
        "kitten -> {}",
        decision.subclass().unwrap_or("unclassifiable")
    );

    // the config format is what Display writes, so the default ontology can be
    // dumped, edited and loaded back
    let dumped = default_ontology().to_string();
    let reloaded = parse_ontology(dumped.as_bytes())?;
    println!(
        "default ontology: {} lines, {} keywords",
        dumped.lines().count(),
        reloaded.all_terms().count()
    );
    println!("{model}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
