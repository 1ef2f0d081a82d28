//! Leak-type distribution and the line-delimited report formats.
//!
//! Every structured line carries a `schema` field naming its record type and
//! version. Human-readable tables start with a `# <schema>` line.

use std::fmt::Write as _;
use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classifier::Status;
use crate::evaluation::EvaluationReport;
use crate::keywords::KeywordCandidateList;
use crate::ontology::{CoverageReport, EntityClass, OntologyModel};
use crate::pipeline::MessageResult;
use crate::recognition::Origin;

pub const RESULTS_SCHEMA: &str = "privleak.results/v1";
pub const DISTRIBUTION_SCHEMA: &str = "privleak.distribution/v1";
pub const EVALUATION_SCHEMA: &str = "privleak.evaluation/v1";
pub const KEYWORDS_SCHEMA: &str = "privleak.keywords/v1";
pub const COVERAGE_SCHEMA: &str = "privleak.coverage/v1";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistributionEntry {
    pub class: EntityClass,
    pub subclass: String,
    pub count: usize,
    pub percent: f64,
}

/// Share of each non-PERSON subclass among classified findings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistributionReport {
    pub total: usize,
    /// Empty when there are no qualifying findings.
    pub per_subclass: Vec<DistributionEntry>,
}

impl DistributionReport {
    pub fn percent(&self, subclass: &str) -> Option<f64> {
        self.per_subclass
            .iter()
            .find(|e| e.subclass == subclass)
            .map(|e| e.percent)
    }
}

/// Counts classified findings per subclass, leaving out PERSON and
/// unclassifiable findings.
pub fn distribution_of<'a, I>(findings: I, model: &OntologyModel) -> DistributionReport
where
    I: IntoIterator<Item = (EntityClass, Option<&'a str>)>,
{
    let subclasses: Vec<_> = model
        .all_subclasses()
        .filter(|s| s.parent != EntityClass::Person)
        .collect();
    let mut counts = vec![0usize; subclasses.len()];
    for (class, sub) in findings {
        let Some(sub) = sub else { continue };
        if let Some(i) = subclasses
            .iter()
            .position(|s| s.parent == class && s.name == sub)
        {
            counts[i] += 1;
        }
    }
    let total: usize = counts.iter().sum();
    if total == 0 {
        return DistributionReport {
            total,
            per_subclass: Vec::new(),
        };
    }
    let per_subclass = subclasses
        .iter()
        .zip(counts)
        .map(|(s, count)| DistributionEntry {
            class: s.parent,
            subclass: s.name.clone(),
            count,
            percent: count as f64 * 100.0 / total as f64,
        })
        .collect();
    DistributionReport {
        total,
        per_subclass,
    }
}

pub fn distribution(results: &[MessageResult], model: &OntologyModel) -> DistributionReport {
    distribution_of(
        results
            .iter()
            .flat_map(|r| r.findings())
            .map(|f| (f.span.label, f.decision.subclass())),
        model,
    )
}

/// One finding as written to a results file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FindingLine {
    pub start: usize,
    pub end: usize,
    pub surface: String,
    pub class: EntityClass,
    pub origin: String,
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subclass: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub term: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub term_index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub score: Option<f64>,
    pub contributing_tokens: usize,
    pub skipped_tokens: usize,
    pub scores: Vec<Option<f64>>,
}

/// One message as written to a results file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultLine {
    pub schema: String,
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default)]
    pub leaking: bool,
    #[serde(default)]
    pub findings: Vec<FindingLine>,
}

impl From<&MessageResult> for ResultLine {
    fn from(r: &MessageResult) -> Self {
        match &r.outcome {
            Err(e) => ResultLine {
                schema: RESULTS_SCHEMA.into(),
                id: r.id.clone(),
                error: Some(e.to_string()),
                leaking: false,
                findings: Vec::new(),
            },
            Ok(c) => ResultLine {
                schema: RESULTS_SCHEMA.into(),
                id: r.id.clone(),
                error: None,
                leaking: c.verdict.leaking,
                findings: c
                    .findings
                    .iter()
                    .map(|f| {
                        let d = &f.decision;
                        let (status, reason) = match d.status {
                            Status::Classified => ("classified", None),
                            Status::Unclassifiable(a) => (
                                "unclassifiable",
                                serde_json::to_value(a)
                                    .ok()
                                    .and_then(|v| v.as_str().map(str::to_string)),
                            ),
                        };
                        FindingLine {
                            start: f.span.start,
                            end: f.span.end,
                            surface: f.span.surface.clone(),
                            class: f.span.label,
                            origin: match f.span.origin {
                                Origin::External => "external",
                                Origin::Gazetteer => "gazetteer",
                                Origin::Gold => "gold",
                            }
                            .into(),
                            status: status.into(),
                            reason,
                            subclass: d.winner.as_ref().map(|w| w.subclass.clone()),
                            term: d.winner.as_ref().map(|w| w.term.clone()),
                            term_index: d.winner.as_ref().map(|w| w.term_index),
                            score: d.winner.as_ref().map(|w| w.score),
                            contributing_tokens: d.scores.contributing_tokens,
                            skipped_tokens: d.scores.skipped_tokens,
                            scores: d.scores.per_term.clone(),
                        }
                    })
                    .collect(),
            },
        }
    }
}

#[derive(Debug, Error)]
pub enum ReadError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub fn write_results<W: Write>(results: &[MessageResult], mut out: W) -> io::Result<()> {
    for r in results {
        serde_json::to_writer(&mut out, &ResultLine::from(r))?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

pub fn read_results<R: BufRead>(reader: R) -> Result<Vec<ResultLine>, ReadError> {
    let mut lines = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: ResultLine = serde_json::from_str(&line).map_err(|e| ReadError::Malformed {
            line: idx + 1,
            reason: e.to_string(),
        })?;
        if parsed.schema != RESULTS_SCHEMA {
            return Err(ReadError::Malformed {
                line: idx + 1,
                reason: format!("unexpected schema `{}`", parsed.schema),
            });
        }
        lines.push(parsed);
    }
    Ok(lines)
}

/// Distribution over results read back from a results file.
pub fn distribution_from_lines(lines: &[ResultLine], model: &OntologyModel) -> DistributionReport {
    distribution_of(
        lines.iter().flat_map(|l| &l.findings).map(|f| {
            let sub = (f.status == "classified")
                .then_some(f.subclass.as_deref())
                .flatten();
            (f.class, sub)
        }),
        model,
    )
}

#[derive(Serialize)]
struct Tagged<'a, T: Serialize> {
    schema: &'a str,
    #[serde(flatten)]
    body: T,
}

fn write_line<W: Write, T: Serialize>(out: &mut W, schema: &str, body: T) -> io::Result<()> {
    serde_json::to_writer(&mut *out, &Tagged { schema, body })?;
    out.write_all(b"\n")
}

/// One line per subclass, then a totals line.
pub fn write_distribution<W: Write>(report: &DistributionReport, mut out: W) -> io::Result<()> {
    for entry in &report.per_subclass {
        write_line(&mut out, DISTRIBUTION_SCHEMA, entry)?;
    }
    #[derive(Serialize)]
    struct Total {
        total: usize,
    }
    write_line(
        &mut out,
        DISTRIBUTION_SCHEMA,
        Total {
            total: report.total,
        },
    )?;
    out.flush()
}

pub fn distribution_table(report: &DistributionReport) -> String {
    let mut s = format!("# {DISTRIBUTION_SCHEMA}\n");
    if report.per_subclass.is_empty() {
        s.push_str("no classified TRAIT/PREF/EVENT findings\n");
        return s;
    }
    let _ = writeln!(
        s,
        "{:<6} {:<20} {:>7} {:>8}",
        "class", "subclass", "count", "percent"
    );
    for e in &report.per_subclass {
        let _ = writeln!(
            s,
            "{:<6} {:<20} {:>7} {:>7.2}%",
            e.class.as_str(),
            e.subclass,
            e.count,
            e.percent
        );
    }
    let _ = writeln!(s, "{:<27} {:>7}", "total", report.total);
    s
}

/// Evaluation sections, each labelled (for example `decoupled` and `coupled`).
pub fn write_evaluation<W: Write>(
    sections: &[(&str, &EvaluationReport)],
    mut out: W,
) -> io::Result<()> {
    #[derive(Serialize)]
    struct Section<'a> {
        mode: &'a str,
        #[serde(flatten)]
        report: &'a EvaluationReport,
    }
    for (mode, report) in sections {
        write_line(&mut out, EVALUATION_SCHEMA, Section { mode, report })?;
    }
    out.flush()
}

pub fn evaluation_table(mode: &str, report: &EvaluationReport) -> String {
    let mut s = format!("# {EVALUATION_SCHEMA} ({mode})\n");
    let _ = writeln!(
        s,
        "{:<6} {:<20} {:>9} {:>9} {:>9} {:>8}",
        "class", "subclass", "precision", "recall", "f1", "support"
    );
    let cell = |m: crate::evaluation::Metric| {
        if m.undefined {
            "-".to_string()
        } else {
            format!("{:.4}", m.value)
        }
    };
    for m in &report.per_subclass {
        let _ = writeln!(
            s,
            "{:<6} {:<20} {:>9} {:>9} {:>9} {:>8}",
            m.class.as_str(),
            m.subclass,
            cell(m.precision),
            cell(m.recall),
            cell(m.f1),
            m.support
        );
    }
    let _ = writeln!(
        s,
        "accuracy {} ({} / {} gold spans); matched {} of {}; spurious predictions {}",
        cell(report.accuracy),
        report.correct,
        report.gold_spans,
        report.matched_gold,
        report.gold_spans,
        report.spurious_predictions
    );
    s
}

pub fn coverage_table(report: &CoverageReport) -> String {
    let mut s = format!("# {COVERAGE_SCHEMA}\n");
    for c in &report.per_subclass {
        let _ = writeln!(
            s,
            "{:<6} {:<20} {:>3}/{:<3} {:.3}",
            c.class.as_str(),
            c.subclass,
            c.in_vocabulary,
            c.total,
            c.fraction
        );
    }
    for o in &report.oov {
        let _ = writeln!(s, "oov {} / {} / {}", o.class, o.subclass, o.keyword);
    }
    s
}

/// One line per ranked candidate.
pub fn write_keywords<W: Write>(list: &KeywordCandidateList, mut out: W) -> io::Result<()> {
    #[derive(Serialize)]
    struct Row<'a> {
        class: EntityClass,
        rank: usize,
        term: &'a str,
        count: usize,
    }
    for (class, candidates) in &list.per_class {
        for (i, c) in candidates.iter().enumerate() {
            let row = Row {
                class: *class,
                rank: i + 1,
                term: &c.term,
                count: c.count,
            };
            write_line(&mut out, KEYWORDS_SCHEMA, row)?;
        }
    }
    out.flush()
}
