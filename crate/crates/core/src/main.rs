use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use privleak::report;
use privleak::{
    default_ontology, entity_values, evaluate, extract_keywords, load_corpus_path, parse_ontology,
    EmbeddingTable, OntologyModel, Pipeline, RecognizerMode, Strictness,
};

/// Privacy-leak detection and subclass classification for message corpora.
#[derive(Parser)]
#[command(name = "privleak", version)]
struct Cli {
    /// Abort on the first malformed corpus line or message-level error.
    #[arg(long, global = true)]
    strict: bool,
    /// Suppress summaries and tables on the terminal.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Recognize and classify every message, writing one result line per message.
    Classify {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        embeddings: PathBuf,
        #[arg(long)]
        ontology: Option<PathBuf>,
        #[arg(long, default_value = "external")]
        recognizer: RecognizerMode,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score subclass assignment against the gold subclasses in the corpus.
    Evaluate {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        embeddings: PathBuf,
        #[arg(long)]
        ontology: Option<PathBuf>,
        #[arg(long)]
        report: PathBuf,
    },
    /// Leak-type distribution over a results file.
    Report {
        #[arg(long)]
        results: PathBuf,
        #[arg(long)]
        ontology: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Most frequent tokens of the annotated entity values, per class.
    Keywords {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        top_k: u32,
    },
    /// Which ontology keywords have vectors in an embedding file.
    Coverage {
        #[arg(long)]
        ontology: Option<PathBuf>,
        #[arg(long)]
        embeddings: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn strictness(cli: &Cli) -> Strictness {
    if cli.strict {
        Strictness::Strict
    } else {
        Strictness::Lenient
    }
}

fn load_ontology(path: Option<&Path>) -> Result<OntologyModel> {
    match path {
        None => Ok(default_ontology()),
        Some(p) => {
            let file = File::open(p).with_context(|| format!("opening {}", p.display()))?;
            parse_ontology(BufReader::new(file))
                .with_context(|| format!("ontology {}", p.display()))
        }
    }
}

fn load_embeddings(path: &Path, quiet: bool) -> Result<EmbeddingTable> {
    let table = EmbeddingTable::from_path(path)
        .with_context(|| format!("embeddings {}", path.display()))?;
    if !quiet && table.duplicate_count() > 0 {
        eprintln!(
            "warning: {} duplicate tokens ignored in {}",
            table.duplicate_count(),
            path.display()
        );
    }
    Ok(table)
}

fn load_records(cli: &Cli, path: &Path) -> Result<Vec<privleak::CorpusRecord>> {
    let corpus = load_corpus_path(path, strictness(cli))
        .with_context(|| format!("corpus {}", path.display()))?;
    if !cli.quiet && !corpus.skipped.is_empty() {
        for s in &corpus.skipped {
            eprintln!("warning: {}: line {}: {}", path.display(), s.line, s.reason);
        }
        eprintln!("warning: {} malformed lines skipped", corpus.skipped.len());
    }
    Ok(corpus.records)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("creating {}", path.display()))?,
    ))
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Classify {
            corpus,
            embeddings,
            ontology,
            recognizer,
            out,
        } => {
            let model = load_ontology(ontology.as_deref())?;
            let table = load_embeddings(embeddings, cli.quiet)?;
            let records = load_records(cli, corpus)?;
            let results = Pipeline::new(&model, &table, *recognizer).run(&records);
            let errors: Vec<_> = results
                .iter()
                .filter_map(|r| r.outcome.as_ref().err())
                .collect();
            if cli.strict {
                if let Some(e) = errors.first() {
                    bail!("{e}");
                }
            }
            report::write_results(&results, create(out)?)?;
            if !cli.quiet {
                for e in &errors {
                    eprintln!("warning: {e}");
                }
                let leaking = results
                    .iter()
                    .filter(|r| r.outcome.as_ref().is_ok_and(|c| c.verdict.leaking))
                    .count();
                eprintln!(
                    "{} messages classified ({} leaking, {} errors) with {} recognition",
                    results.len(),
                    leaking,
                    errors.len(),
                    recognizer
                );
            }
        }
        Command::Evaluate {
            corpus,
            embeddings,
            ontology,
            report: report_path,
        } => {
            let model = load_ontology(ontology.as_deref())?;
            let table = load_embeddings(embeddings, cli.quiet)?;
            let records = load_records(cli, corpus)?;
            let decoupled_results =
                Pipeline::new(&model, &table, RecognizerMode::External).run(&records);
            if cli.strict {
                if let Some(e) = decoupled_results
                    .iter()
                    .find_map(|r| r.outcome.as_ref().err())
                {
                    bail!("{e}");
                }
            }
            let coupled_results =
                Pipeline::new(&model, &table, RecognizerMode::Gazetteer).run(&records);
            let decoupled = evaluate(&decoupled_results, &records, &model);
            let coupled = evaluate(&coupled_results, &records, &model);
            report::write_evaluation(
                &[("decoupled", &decoupled), ("coupled", &coupled)],
                create(report_path)?,
            )?;
            if !cli.quiet {
                print!("{}", report::evaluation_table("decoupled", &decoupled));
                print!("{}", report::evaluation_table("coupled", &coupled));
            }
        }
        Command::Report {
            results,
            ontology,
            out,
        } => {
            let model = load_ontology(ontology.as_deref())?;
            let file =
                File::open(results).with_context(|| format!("opening {}", results.display()))?;
            let lines = report::read_results(BufReader::new(file))
                .with_context(|| format!("results {}", results.display()))?;
            let dist = report::distribution_from_lines(&lines, &model);
            report::write_distribution(&dist, create(out)?)?;
            if !cli.quiet {
                print!("{}", report::distribution_table(&dist));
            }
        }
        Command::Keywords { corpus, top_k } => {
            let records = load_records(cli, corpus)?;
            let values = entity_values(&records);
            let list = extract_keywords(
                values.iter().map(|(c, s)| (*c, s.as_str())),
                *top_k as usize,
            );
            let mut out = io::stdout().lock();
            report::write_keywords(&list, &mut out)?;
            out.flush()?;
        }
        Command::Coverage {
            ontology,
            embeddings,
        } => {
            let model = load_ontology(ontology.as_deref())?;
            let table = load_embeddings(embeddings, cli.quiet)?;
            let coverage = model.vocabulary_coverage(&table);
            print!("{}", report::coverage_table(&coverage));
        }
    }
    Ok(())
}
