//! Subclass assignment quality against gold annotations.
//!
//! Predicted spans are aligned to gold spans by exact `(start, end, class)`
//! within the same message. Only records that carry a `spans` field are
//! evaluated; gold spans without a subclass are not scored.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::corpus::CorpusRecord;
use crate::ontology::{EntityClass, OntologyModel, Subclass};
use crate::pipeline::MessageResult;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Predicted {
    Subclass(String),
    Unclassifiable,
}

/// A ratio whose denominator may be zero. Undefined ratios report `0.0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Metric {
    pub value: f64,
    pub undefined: bool,
}

impl Metric {
    fn ratio(num: usize, den: usize) -> Self {
        if den == 0 {
            Metric {
                value: 0.0,
                undefined: true,
            }
        } else {
            Metric {
                value: num as f64 / den as f64,
                undefined: false,
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubclassMetrics {
    pub class: EntityClass,
    pub subclass: String,
    pub true_positives: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
    pub support: usize,
    pub precision: Metric,
    pub recall: Metric,
    pub f1: Metric,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfusionCell {
    pub class: EntityClass,
    pub gold: String,
    pub predicted: Predicted,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationReport {
    pub per_subclass: Vec<SubclassMetrics>,
    /// Correct subclass assignments over all gold spans with a subclass.
    pub accuracy: Metric,
    /// Correct subclass assignments over gold spans that have a matching prediction.
    pub matched_accuracy: Metric,
    pub correct: usize,
    pub gold_spans: usize,
    pub matched_gold: usize,
    pub unmatched_gold: usize,
    /// Predicted spans with no gold span at the same position.
    pub spurious_predictions: usize,
    /// Gold spans annotated with a class only.
    pub unlabeled_gold: usize,
    pub confusion: Vec<ConfusionCell>,
}

type SpanKey = (usize, usize, EntityClass);

pub fn evaluate(
    results: &[MessageResult],
    gold: &[CorpusRecord],
    model: &OntologyModel,
) -> EvaluationReport {
    let predictions: HashMap<&str, &MessageResult> =
        results.iter().map(|r| (r.id.as_str(), r)).collect();

    let mut tp: HashMap<Subclass, usize> = HashMap::new();
    let mut fp: HashMap<Subclass, usize> = HashMap::new();
    let mut support: HashMap<Subclass, usize> = HashMap::new();
    let mut confusion: BTreeMap<(Subclass, Predicted), usize> = BTreeMap::new();
    let mut extra: Vec<Subclass> = Vec::new();

    let mut correct = 0;
    let mut gold_spans = 0;
    let mut matched_gold = 0;
    let mut spurious = 0;
    let mut unlabeled = 0;

    for record in gold {
        let Some(spans) = &record.spans else { continue };
        let mut gold_here: HashMap<SpanKey, Option<Subclass>> = HashMap::new();
        for span in spans {
            let Ok(class) = span.class.parse::<EntityClass>() else {
                continue;
            };
            let sub = span
                .subclass
                .as_ref()
                .map(|name| Subclass::new(class, name.clone()));
            gold_here.insert((span.start, span.end, class), sub);
        }

        let mut predicted_here: HashMap<SpanKey, Predicted> = HashMap::new();
        if let Some(result) = predictions.get(record.id.as_str()) {
            for f in result.findings() {
                let key = (f.span.start, f.span.end, f.span.label);
                let p = match f.decision.subclass() {
                    Some(s) => Predicted::Subclass(s.to_string()),
                    None => Predicted::Unclassifiable,
                };
                predicted_here.entry(key).or_insert(p);
            }
        }

        for (key, sub) in &gold_here {
            let Some(sub) = sub else {
                unlabeled += 1;
                continue;
            };
            if model.find_subclass(sub.parent, &sub.name).is_none() && !extra.contains(sub) {
                extra.push(sub.clone());
            }
            gold_spans += 1;
            *support.entry(sub.clone()).or_default() += 1;
            let Some(pred) = predicted_here.get(key) else {
                continue;
            };
            matched_gold += 1;
            *confusion.entry((sub.clone(), pred.clone())).or_default() += 1;
            match pred {
                Predicted::Subclass(name) if *name == sub.name => {
                    correct += 1;
                    *tp.entry(sub.clone()).or_default() += 1;
                }
                Predicted::Subclass(name) => {
                    *fp.entry(Subclass::new(sub.parent, name.clone()))
                        .or_default() += 1;
                }
                Predicted::Unclassifiable => {}
            }
        }

        for (key, pred) in &predicted_here {
            if gold_here.contains_key(key) {
                continue;
            }
            spurious += 1;
            if let Predicted::Subclass(name) = pred {
                *fp.entry(Subclass::new(key.2, name.clone())).or_default() += 1;
            }
        }
    }

    extra.sort();
    let per_subclass = model
        .all_subclasses()
        .cloned()
        .chain(extra)
        .map(|sub| {
            let t = tp.get(&sub).copied().unwrap_or(0);
            let f = fp.get(&sub).copied().unwrap_or(0);
            let s = support.get(&sub).copied().unwrap_or(0);
            let precision = Metric::ratio(t, t + f);
            let recall = Metric::ratio(t, s);
            let f1 = f1_score(precision, recall);
            SubclassMetrics {
                class: sub.parent,
                subclass: sub.name,
                true_positives: t,
                false_positives: f,
                false_negatives: s - t,
                support: s,
                precision,
                recall,
                f1,
            }
        })
        .collect();

    EvaluationReport {
        per_subclass,
        accuracy: Metric::ratio(correct, gold_spans),
        matched_accuracy: Metric::ratio(correct, matched_gold),
        correct,
        gold_spans,
        matched_gold,
        unmatched_gold: gold_spans - matched_gold,
        spurious_predictions: spurious,
        unlabeled_gold: unlabeled,
        confusion: confusion
            .into_iter()
            .map(|((gold, predicted), count)| ConfusionCell {
                class: gold.parent,
                gold: gold.name,
                predicted,
                count,
            })
            .collect(),
    }
}

fn f1_score(precision: Metric, recall: Metric) -> Metric {
    let (p, r) = (precision.value, recall.value);
    if p + r == 0.0 {
        Metric {
            value: 0.0,
            undefined: precision.undefined || recall.undefined,
        }
    } else {
        Metric {
            value: 2.0 * p * r / (p + r),
            undefined: false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::{Abstention, ScoreVector, Status, SubclassDecision, Winner};
    use crate::corpus::RawSpan;
    use crate::ontology::default_ontology;
    use crate::pipeline::Classified;
    use crate::recognition::{privacy_verdict, EntitySpan, Finding, Origin};

    fn gold_span(start: usize, end: usize, class: &str, sub: Option<&str>) -> RawSpan {
        RawSpan {
            start,
            end,
            class: class.into(),
            subclass: sub.map(str::to_string),
            surface: None,
        }
    }

    fn finding(start: usize, end: usize, class: EntityClass, sub: Option<&str>) -> Finding {
        Finding {
            span: EntitySpan {
                start,
                end,
                surface: String::new(),
                label: class,
                origin: Origin::External,
            },
            decision: SubclassDecision {
                class,
                status: if sub.is_some() {
                    Status::Classified
                } else {
                    Status::Unclassifiable(Abstention::AllTokensOov)
                },
                winner: sub.map(|s| Winner {
                    term_index: 0,
                    term: String::new(),
                    subclass: s.into(),
                    score: 1.0,
                }),
                scores: ScoreVector {
                    per_term: vec![],
                    contributing_tokens: 0,
                    skipped_tokens: 0,
                },
            },
        }
    }

    fn result(id: &str, findings: Vec<Finding>) -> MessageResult {
        let verdict = privacy_verdict(&findings);
        MessageResult {
            id: id.into(),
            text: String::new(),
            outcome: Ok(Classified { findings, verdict }),
        }
    }

    fn record(id: &str, spans: Vec<RawSpan>) -> CorpusRecord {
        CorpusRecord {
            id: id.into(),
            text: "x".repeat(40),
            spans: Some(spans),
        }
    }

    fn metrics<'a>(r: &'a EvaluationReport, name: &str) -> &'a SubclassMetrics {
        r.per_subclass.iter().find(|m| m.subclass == name).unwrap()
    }

    #[test]
    fn perfect_predictions() {
        use EntityClass::*;
        let gold = vec![record(
            "1",
            vec![
                gold_span(0, 1, "PERSON", Some("Individual")),
                gold_span(2, 9, "EVENT", Some("Private Event")),
            ],
        )];
        let results = vec![result(
            "1",
            vec![
                finding(0, 1, Person, Some("Individual")),
                finding(2, 9, Event, Some("Private Event")),
            ],
        )];
        let r = evaluate(&results, &gold, &default_ontology());
        assert_eq!(r.accuracy.value, 1.0);
        for name in ["Individual", "Private Event"] {
            let m = metrics(&r, name);
            assert_eq!(
                (m.precision.value, m.recall.value, m.f1.value),
                (1.0, 1.0, 1.0)
            );
        }
        assert_eq!(r.per_subclass.len(), 10);
    }

    #[test]
    fn zero_denominators() {
        // one Journey gold span predicted as Unclassifiable
        let gold = vec![record("1", vec![gold_span(0, 4, "EVENT", Some("Journey"))])];
        let results = vec![result("1", vec![finding(0, 4, EntityClass::Event, None)])];
        let r = evaluate(&results, &gold, &default_ontology());
        let m = metrics(&r, "Journey");
        assert_eq!(
            (m.true_positives, m.false_positives, m.false_negatives),
            (0, 0, 1)
        );
        assert!(m.precision.undefined);
        assert_eq!(m.precision.value, 0.0);
        assert_eq!(m.recall.value, 0.0);
        assert!(!m.recall.undefined);
        assert_eq!(m.f1.value, 0.0);
        assert_eq!(r.confusion[0].predicted, Predicted::Unclassifiable);
        let hobby = metrics(&r, "Hobby");
        assert!(hobby.precision.undefined && hobby.recall.undefined && hobby.f1.undefined);
    }

    #[test]
    fn four_span_fixture() {
        use EntityClass::*;
        // gold: 2 Private Event, 2 Journey; one Journey predicted as Private Event
        let gold = vec![
            record(
                "1",
                vec![
                    gold_span(0, 3, "EVENT", Some("Private Event")),
                    gold_span(5, 8, "EVENT", Some("Journey")),
                ],
            ),
            record(
                "2",
                vec![
                    gold_span(0, 3, "EVENT", Some("Private Event")),
                    gold_span(5, 8, "EVENT", Some("Journey")),
                ],
            ),
        ];
        let results = vec![
            result(
                "1",
                vec![
                    finding(0, 3, Event, Some("Private Event")),
                    finding(5, 8, Event, Some("Journey")),
                ],
            ),
            result(
                "2",
                vec![
                    finding(0, 3, Event, Some("Private Event")),
                    finding(5, 8, Event, Some("Private Event")),
                ],
            ),
        ];
        let r = evaluate(&results, &gold, &default_ontology());
        assert_eq!(r.accuracy.value, 0.75);

        // naive oracle: walk the aligned (gold, predicted) pairs directly
        let pairs = [
            ("Private Event", "Private Event"),
            ("Journey", "Journey"),
            ("Private Event", "Private Event"),
            ("Journey", "Private Event"),
        ];
        for name in ["Private Event", "Journey"] {
            let tp = pairs
                .iter()
                .filter(|(g, p)| *g == name && *p == name)
                .count() as f64;
            let pred = pairs.iter().filter(|(_, p)| *p == name).count() as f64;
            let actual = pairs.iter().filter(|(g, _)| *g == name).count() as f64;
            let (p, rc) = (tp / pred, tp / actual);
            let f1 = 2.0 * p * rc / (p + rc);
            let m = metrics(&r, name);
            assert!((m.precision.value - p).abs() < 1e-12);
            assert!((m.recall.value - rc).abs() < 1e-12);
            assert!((m.f1.value - f1).abs() < 1e-12);
        }
    }

    #[test]
    fn unmatched_and_spurious() {
        use EntityClass::*;
        let gold = vec![
            record(
                "1",
                vec![
                    gold_span(0, 3, "EVENT", Some("Journey")),
                    gold_span(5, 8, "PERSON", None),
                ],
            ),
            record("2", vec![gold_span(0, 3, "PREF", Some("Item"))]),
        ];
        let results = vec![
            result(
                "1",
                vec![
                    finding(0, 4, Event, Some("Journey")),
                    finding(5, 8, Person, Some("Third Party")),
                ],
            ),
            MessageResult {
                id: "2".into(),
                text: String::new(),
                outcome: Err(crate::pipeline::MessageError::UnknownSubclass {
                    id: "2".into(),
                    class: Pref,
                    subclass: "x".into(),
                }),
            },
        ];
        let r = evaluate(&results, &gold, &default_ontology());
        assert_eq!(r.gold_spans, 2);
        assert_eq!(r.unlabeled_gold, 1);
        assert_eq!(r.matched_gold, 0);
        assert_eq!(r.unmatched_gold, 2);
        assert_eq!(r.spurious_predictions, 1);
        assert_eq!(metrics(&r, "Journey").false_positives, 1);
        assert_eq!(r.accuracy.value, 0.0);
        assert!(r.matched_accuracy.undefined);
    }
}
