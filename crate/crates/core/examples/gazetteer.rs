// Dictionary recognition with the ontology keywords, no annotations needed.
//
//     cargo run --example gazetteer

use privleak::{default_ontology, Gazetteer};

pub fn run_example() -> anyhow::Result<()> {
    let model = default_ontology();
    let gazetteer = Gazetteer::new(&model);
    let texts = [
        "I watch a movie.",
        "She is 30 years-old and lives in Auckland",
        "Off to the airport, holiday time!",
        "nothing to see here",
    ];
    for text in texts {
        let spans = gazetteer.recognize(text);
        let shown: Vec<String> = spans
            .iter()
            .map(|s| format!("{}[{}..{}] {:?}", s.label, s.start, s.end, s.surface))
            .collect();
        println!(
            "{text:?}\n  {}",
            if shown.is_empty() {
                "-".into()
            } else {
                shown.join(", ")
            }
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
