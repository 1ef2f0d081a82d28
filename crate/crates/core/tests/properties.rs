mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use privleak::corpus::RawSpan;
use privleak::report::distribution_of;
use privleak::text::{char_slice, tokenize};
use privleak::{
    classify_entity, cosine, default_ontology, evaluate, parse_ontology, privacy_verdict,
    score_terms, Abstention, Classified, CorpusRecord, EmbeddingTable, EntityClass, EntitySpan,
    Finding, Gazetteer, MessageResult, Origin, ScoreVector, Status, SubclassDecision,
    TokenizedEntity, Vector, Winner,
};

fn vector(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0f64..10.0, dim)
        .prop_filter("nonzero", |v| v.iter().any(|x| x.abs() > 1e-6))
}

fn vector_pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1usize..12).prop_flat_map(|d| (vector(d), vector(d)))
}

fn decided(class: EntityClass, subclass: Option<&str>) -> SubclassDecision {
    let scores = ScoreVector {
        per_term: vec![Some(1.0)],
        contributing_tokens: 1,
        skipped_tokens: 0,
    };
    match subclass {
        Some(name) => SubclassDecision {
            class,
            status: Status::Classified,
            winner: Some(Winner {
                term_index: 0,
                term: "x".into(),
                subclass: name.into(),
                score: 1.0,
            }),
            scores,
        },
        None => SubclassDecision {
            class,
            status: Status::Unclassifiable(Abstention::AllTokensOov),
            winner: None,
            scores,
        },
    }
}

fn class() -> impl Strategy<Value = EntityClass> {
    prop::sample::select(EntityClass::ALL.to_vec())
}

proptest! {
    #[test]
    fn cosine_is_symmetric_and_bounded((u, v) in vector_pair()) {
        let (u, v) = (Vector::new(u).unwrap(), Vector::new(v).unwrap());
        let a = cosine(&u, &v).unwrap();
        let b = cosine(&v, &u).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
        prop_assert!((-1.0..=1.0).contains(&a));
    }

    #[test]
    fn cosine_ignores_positive_scale((u, v) in vector_pair(), k in 1e-3f64..1e3) {
        let (u, v) = (Vector::new(u).unwrap(), Vector::new(v).unwrap());
        let a = cosine(&u, &v).unwrap();
        let b = cosine(&u.scaled(k), &v).unwrap();
        prop_assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn self_cosine_is_one(u in (1usize..12).prop_flat_map(vector)) {
        let u = Vector::new(u).unwrap();
        prop_assert!((cosine(&u, &u).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn embedding_file_round_trip(
        rows in (1usize..8).prop_flat_map(|d| prop::collection::btree_map("[a-z]{1,8}", vector(d), 1..40))
    ) {
        let table = EmbeddingTable::from_entries(
            "prop",
            rows.iter().map(|(w, v)| (w.clone(), Vector::new(v.clone()).unwrap())),
        ).unwrap();
        let mut buf = Vec::new();
        table.write_to(&mut buf).unwrap();
        let back = EmbeddingTable::from_reader(buf.as_slice(), "prop").unwrap();
        prop_assert_eq!(back.len(), table.len());
        for (w, v) in table.iter() {
            prop_assert_eq!(back.lookup(w).unwrap().as_slice(), v.as_slice());
        }
    }

    #[test]
    fn ontology_config_round_trip(
        sections in prop::collection::btree_map(
            (class(), "[A-Z][a-z]{2,8}( [A-Z][a-z]{2,6})?"),
            prop::collection::btree_set("[a-z]{2,8}(-[a-z]{2,5})?( [a-z]{2,6})?", 1..6),
            1..8,
        )
    ) {
        // keywords must be unique within a class
        let mut seen = std::collections::HashSet::new();
        let mut config = String::new();
        for ((class, name), words) in &sections {
            let words: Vec<_> = words.iter().filter(|w| seen.insert((*class, (*w).clone()))).cloned().collect();
            if words.is_empty() {
                continue;
            }
            config.push_str(&format!("[{class} {name}]\n{}\n", words.join(", ")));
        }
        prop_assume!(!config.is_empty());
        let model = parse_ontology(config.as_bytes()).unwrap();
        let text = model.to_string();
        let again = parse_ontology(text.as_bytes()).unwrap();
        prop_assert_eq!(again.to_string(), text);
        let a: Vec<_> = model.all_terms().map(|t| (t.surface.clone(), t.subclass.clone(), t.index)).collect();
        let b: Vec<_> = again.all_terms().map(|t| (t.surface.clone(), t.subclass.clone(), t.index)).collect();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn tokenize_is_idempotent(s in "\\PC{0,60}") {
        let once = tokenize(&s);
        prop_assert_eq!(tokenize(&once.join(" ")), once);
    }

    #[test]
    fn scores_match_oracle_and_stay_bounded(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = common::random_instance(&mut rng);
        let scores = score_terms(&inst.entity, &inst.model, &inst.table).unwrap();
        let (oracle, _) = common::naive_oracle(&inst.entity.tokens, &inst.terms, &inst.table);
        let n = scores.contributing_tokens as f64;
        for (got, want) in scores.per_term.iter().zip(&oracle) {
            match (got, want) {
                (Some(g), Some(w)) => {
                    prop_assert!((g - w).abs() < 1e-9);
                    prop_assert!(g.abs() <= n + 1e-9);
                }
                (None, None) => {}
                _ => prop_assert!(false, "vocabulary disagreement"),
            }
        }
    }

    #[test]
    fn token_order_does_not_matter(seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = common::random_instance(&mut rng);
        let mut shuffled = inst.entity.tokens.clone();
        shuffled.shuffle(&mut rng);
        let other = TokenizedEntity::new(inst.entity.class, shuffled);
        let a = classify_entity(&inst.entity, &inst.model, &inst.table);
        let b = classify_entity(&other, &inst.model, &inst.table);
        prop_assert_eq!(a.winner, b.winner);
        prop_assert_eq!(a.scores.per_term, b.scores.per_term);
    }

    #[test]
    fn gazetteer_spans_are_ordered_and_disjoint(words in prop::collection::vec(
        prop::sample::select(vec![
            "i", "watch", "a", "movie", "years-old", "years", "old", "tea", "Holiday", "party,",
            "we", "went", "to", "the", "airport.", "my", "girlfriend", "-", "  ",
        ]),
        0..25,
    )) {
        let model = default_ontology();
        let text = words.join(" ");
        let spans = Gazetteer::new(&model).recognize(&text);
        for w in spans.windows(2) {
            prop_assert!(w[0].end <= w[1].start);
        }
        for s in &spans {
            prop_assert!(s.start < s.end);
            prop_assert_eq!(char_slice(&text, s.start, s.end), Some(s.surface.as_str()));
            prop_assert!(model.terms(s.label).iter().any(|t| t.tokens == tokenize(&s.surface)));
        }
        // recognizing the recognized surfaces again finds each one whole
        for s in &spans {
            let again = Gazetteer::new(&model).recognize(&s.surface);
            prop_assert_eq!(again.len(), 1);
            prop_assert_eq!(&again[0].surface, &s.surface);
        }
    }

    #[test]
    fn adding_findings_never_clears_a_leak(
        labels in prop::collection::vec(class(), 0..6),
        extra in class(),
    ) {
        let finding = |label: EntityClass| {
            let span = EntitySpan { start: 0, end: 1, surface: "x".into(), label, origin: Origin::Gold };
            Finding { span, decision: decided(label, None) }
        };
        let mut findings: Vec<Finding> = labels.iter().map(|&l| finding(l)).collect();
        let before = privacy_verdict(&findings).leaking;
        findings.push(finding(extra));
        let after = privacy_verdict(&findings).leaking;
        prop_assert!(!before || after);
        let has_person = findings.iter().any(|f| f.span.label == EntityClass::Person);
        let has_other = findings.iter().any(|f| f.span.label != EntityClass::Person);
        prop_assert_eq!(after, has_person && has_other);
    }

    #[test]
    fn distribution_sums_to_one_hundred(
        picks in prop::collection::vec((0usize..10, prop::bool::weighted(0.9)), 0..200)
    ) {
        let model = default_ontology();
        let subs: Vec<_> = model.all_subclasses().cloned().collect();
        let report = distribution_of(
            picks.iter().map(|&(i, ok)| (subs[i].parent, ok.then_some(subs[i].name.as_str()))),
            &model,
        );
        if report.total == 0 {
            prop_assert!(report.per_subclass.is_empty());
        } else {
            let sum: f64 = report.per_subclass.iter().map(|e| e.percent).sum();
            prop_assert!((sum - 100.0).abs() < 1e-6);
            prop_assert!(report.per_subclass.iter().all(|e| e.percent >= 0.0));
            prop_assert!(report.per_subclass.iter().all(|e| e.class != EntityClass::Person));
        }
    }

    #[test]
    fn evaluation_identities(
        spans in prop::collection::vec((0usize..10, prop::option::weighted(0.8, 0usize..10), prop::bool::ANY), 0..40)
    ) {
        let model = default_ontology();
        let subs: Vec<_> = model.all_subclasses().cloned().collect();
        let mut gold = Vec::new();
        let mut findings = Vec::new();
        // each span sits at its own offset, in a record of its own
        for (k, &(g, p, has_gold)) in spans.iter().enumerate() {
            let class = subs[g].parent;
            if has_gold {
                gold.push(RawSpan {
                    start: k,
                    end: k + 1,
                    class: class.to_string(),
                    subclass: Some(subs[g].name.clone()),
                    surface: None,
                });
            }
            // a prediction from another class falls back to the gold subclass
            let decision = match p {
                Some(p) if subs[p].parent == class => decided(class, Some(&subs[p].name)),
                Some(_) => decided(class, Some(&subs[g].name)),
                None => decided(class, None),
            };
            findings.push(Finding {
                span: EntitySpan { start: k, end: k + 1, surface: "x".into(), label: class, origin: Origin::External },
                decision,
            });
        }
        let record = CorpusRecord { id: "m".into(), text: "x".repeat(spans.len() + 1), spans: Some(gold) };
        let verdict = privacy_verdict(&findings);
        let results = vec![MessageResult {
            id: "m".into(),
            text: record.text.clone(),
            outcome: Ok(Classified { findings, verdict }),
        }];
        let report = evaluate(&results, std::slice::from_ref(&record), &model);

        let tp: usize = report.per_subclass.iter().map(|m| m.true_positives).sum();
        let support: usize = report.per_subclass.iter().map(|m| m.support).sum();
        prop_assert_eq!(tp, report.correct);
        prop_assert_eq!(support, report.gold_spans);
        if support > 0 {
            prop_assert!((report.accuracy.value - tp as f64 / support as f64).abs() < 1e-12);
        } else {
            prop_assert!(report.accuracy.undefined);
        }
        for m in &report.per_subclass {
            let (p, r) = (m.precision.value, m.recall.value);
            if p + r == 0.0 {
                prop_assert_eq!(m.f1.value, 0.0);
            } else {
                prop_assert!((m.f1.value - 2.0 * p * r / (p + r)).abs() < 1e-12);
            }
            prop_assert_eq!(m.false_negatives, m.support - m.true_positives);
        }
    }
}
