//! Term-frequency keyword candidates from recognized entity values, used when
//! building or extending an ontology.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::corpus::CorpusRecord;
use crate::ontology::EntityClass;
use crate::text::{char_slice, tokenize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub term: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct KeywordCandidateList {
    /// Ranked candidates per class: descending count, then lexicographic.
    pub per_class: BTreeMap<EntityClass, Vec<Candidate>>,
}

impl KeywordCandidateList {
    pub fn get(&self, class: EntityClass) -> &[Candidate] {
        self.per_class.get(&class).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Ranks the tokens of entity surfaces by frequency per class, keeping the
/// `top_k` most frequent. Tokens shorter than two characters are ignored.
pub fn extract_keywords<'a, I>(values: I, top_k: usize) -> KeywordCandidateList
where
    I: IntoIterator<Item = (EntityClass, &'a str)>,
{
    let mut counts: BTreeMap<EntityClass, HashMap<String, usize>> = BTreeMap::new();
    for (class, surface) in values {
        let per_class = counts.entry(class).or_default();
        for token in tokenize(surface) {
            if token.chars().count() >= 2 {
                *per_class.entry(token).or_default() += 1;
            }
        }
    }
    let per_class = counts
        .into_iter()
        .filter(|(_, c)| !c.is_empty())
        .map(|(class, c)| {
            let mut ranked: Vec<Candidate> = c
                .into_iter()
                .map(|(term, count)| Candidate { term, count })
                .collect();
            ranked.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.term.cmp(&b.term)));
            ranked.truncate(top_k);
            (class, ranked)
        })
        .collect();
    KeywordCandidateList { per_class }
}

/// `(class, surface)` pairs for every well-formed annotated span in a corpus.
pub fn entity_values(records: &[CorpusRecord]) -> Vec<(EntityClass, String)> {
    records
        .iter()
        .flat_map(|r| {
            r.spans.iter().flatten().filter_map(move |s| {
                let class = s.class.parse().ok()?;
                let surface = char_slice(&r.text, s.start, s.end)?;
                Some((class, surface.to_string()))
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::RawSpan;

    #[test]
    fn frequency_count() {
        let values = [
            (EntityClass::Event, "go shopping"),
            (EntityClass::Event, "shopping list"),
            (EntityClass::Event, "eat out"),
        ];
        let list = extract_keywords(values, 1);
        assert_eq!(
            list.get(EntityClass::Event),
            &[Candidate {
                term: "shopping".into(),
                count: 2
            }]
        );
    }

    #[test]
    fn empty_input() {
        let list = extract_keywords(std::iter::empty(), 5);
        assert!(list.per_class.is_empty());
    }

    #[test]
    fn truncation_and_ties() {
        let values = [
            (EntityClass::Pref, "tea, a book"),
            (EntityClass::Pref, "Tea"),
        ];
        let list = extract_keywords(values, 10);
        let terms: Vec<_> = list
            .get(EntityClass::Pref)
            .iter()
            .map(|c| (c.term.as_str(), c.count))
            .collect();
        assert_eq!(terms, vec![("tea", 2), ("book", 1)]);

        let values = [(EntityClass::Event, "zoo bar"), (EntityClass::Event, "art")];
        let list = extract_keywords(values, 2);
        let terms: Vec<_> = list
            .get(EntityClass::Event)
            .iter()
            .map(|c| c.term.as_str())
            .collect();
        assert_eq!(terms, vec!["art", "bar"]);
    }

    #[test]
    fn values_from_corpus() {
        let r = CorpusRecord {
            id: "1".into(),
            text: "I watch a movie.".into(),
            spans: Some(vec![
                RawSpan {
                    start: 2,
                    end: 15,
                    class: "EVENT".into(),
                    subclass: None,
                    surface: None,
                },
                RawSpan {
                    start: 2,
                    end: 99,
                    class: "EVENT".into(),
                    subclass: None,
                    surface: None,
                },
            ]),
        };
        assert_eq!(
            entity_values(&[r]),
            vec![(EntityClass::Event, "watch a movie".to_string())]
        );
    }
}
