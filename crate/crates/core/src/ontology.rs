//! Privacy ontology: entity classes, their subclasses, and the ordered
//! representative keyword terms that anchor each subclass.
//!
//! Terms are indexed per class, `0..N`, in subclass declaration order and then
//! keyword declaration order. The classifier scores against that index.

use std::fmt;
use std::io::{self, BufRead};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embeddings::EmbeddingTable;
use crate::text::tokenize;

/// The closed set of privacy-related entity labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum EntityClass {
    Person,
    Trait,
    Pref,
    Event,
}

impl EntityClass {
    pub const ALL: [EntityClass; 4] = [
        EntityClass::Person,
        EntityClass::Trait,
        EntityClass::Pref,
        EntityClass::Event,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EntityClass::Person => "PERSON",
            EntityClass::Trait => "TRAIT",
            EntityClass::Pref => "PREF",
            EntityClass::Event => "EVENT",
        }
    }
}

impl fmt::Display for EntityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown entity label `{0}`")]
pub struct UnknownLabel(pub String);

impl FromStr for EntityClass {
    type Err = UnknownLabel;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "PERSON" => Ok(EntityClass::Person),
            "TRAIT" => Ok(EntityClass::Trait),
            "PREF" => Ok(EntityClass::Pref),
            "EVENT" => Ok(EntityClass::Event),
            other => Err(UnknownLabel(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subclass {
    pub parent: EntityClass,
    pub name: String,
}

impl Subclass {
    pub fn new(parent: EntityClass, name: impl Into<String>) -> Self {
        Subclass {
            parent,
            name: name.into(),
        }
    }
}

impl fmt::Display for Subclass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.parent, self.name)
    }
}

/// A representative keyword. `index` is its position within its class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeywordTerm {
    pub surface: String,
    pub tokens: Vec<String>,
    pub subclass: Subclass,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct ClassEntry {
    class: EntityClass,
    subclasses: Vec<Subclass>,
    terms: Vec<KeywordTerm>,
}

#[derive(Debug, Error)]
pub enum OntologyError {
    #[error("{class}: keyword `{keyword}` listed under both `{first}` and `{second}`")]
    DuplicateKeyword {
        class: EntityClass,
        keyword: String,
        first: String,
        second: String,
    },
    #[error("line {line}: unknown class `{label}`")]
    UnknownClass { line: usize, label: String },
    #[error("subclass `{0}` has no keywords")]
    EmptySubclass(String),
    #[error("line {0}: subclass declared twice")]
    DuplicateSubclass(usize),
    #[error("line {0}: expected `[CLASS Subclass Name]` header")]
    MalformedHeader(usize),
    #[error("line {0}: keywords appear before any section header")]
    KeywordOutsideSection(usize),
    #[error("line {line}: keyword `{keyword}` has no word characters")]
    EmptyKeyword { line: usize, keyword: String },
    #[error("{class} has {count} terms, index {index} is out of range")]
    IndexOutOfRange {
        class: EntityClass,
        index: usize,
        count: usize,
    },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Ordered class → subclass → keyword hierarchy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OntologyModel {
    classes: Vec<ClassEntry>,
}

const DEFAULT_TABLE: &[(EntityClass, &str, &[&str])] = &[
    (EntityClass::Person, "Individual", &["i"]),
    (
        EntityClass::Person,
        "Third Party",
        &["you", "we", "they", "he", "she", "classmate", "uncle"],
    ),
    (
        EntityClass::Pref,
        "Item",
        &["book", "chocolate", "keyboard", "tea"],
    ),
    (
        EntityClass::Pref,
        "Hobby",
        &["cosplay", "paint", "fishing", "dancing", "reading"],
    ),
    (
        EntityClass::Pref,
        "Specific Person",
        &["girlfriend", "teacher"],
    ),
    (
        EntityClass::Event,
        "Private Event",
        &["eat", "shopping", "concert", "movie", "exercise", "spa"],
    ),
    (
        EntityClass::Event,
        "Corporate Event",
        &[
            "wedding",
            "interview",
            "meeting",
            "conference",
            "festival",
            "party",
            "parade",
            "salon",
        ],
    ),
    (
        EntityClass::Event,
        "Journey",
        &["fly", "holiday", "travel", "island", "hotel", "airport"],
    ),
    (
        EntityClass::Trait,
        "Individual Identity",
        &["years-old", "auckland"],
    ),
    (
        EntityClass::Trait,
        "Linked Information",
        &[
            "lawyer",
            "female",
            "gay",
            "christian",
            "married",
            "white",
            "disable",
        ],
    ),
];

/// The built-in privacy ontology with ten subclasses and their keywords.
pub fn default_ontology() -> OntologyModel {
    let mut builder = Builder::default();
    for (class, subclass, keywords) in DEFAULT_TABLE {
        builder
            .open_subclass(*class, subclass, 0)
            .expect("default table is valid");
        for keyword in *keywords {
            builder
                .add_keyword(keyword, 0)
                .expect("default table is valid");
        }
    }
    builder.finish().expect("default table is valid")
}

#[derive(Default)]
struct Builder {
    classes: Vec<ClassEntry>,
    current: Option<(usize, Subclass)>,
}

impl Builder {
    fn open_subclass(
        &mut self,
        class: EntityClass,
        name: &str,
        line: usize,
    ) -> Result<(), OntologyError> {
        self.close_subclass()?;
        let pos = match self.classes.iter().position(|c| c.class == class) {
            Some(pos) => pos,
            None => {
                self.classes.push(ClassEntry {
                    class,
                    subclasses: Vec::new(),
                    terms: Vec::new(),
                });
                self.classes.len() - 1
            }
        };
        let subclass = Subclass::new(class, name);
        if self.classes[pos].subclasses.contains(&subclass) {
            return Err(OntologyError::DuplicateSubclass(line));
        }
        self.classes[pos].subclasses.push(subclass.clone());
        self.current = Some((pos, subclass));
        Ok(())
    }

    fn add_keyword(&mut self, raw: &str, line: usize) -> Result<(), OntologyError> {
        let (pos, subclass) = self
            .current
            .as_ref()
            .ok_or(OntologyError::KeywordOutsideSection(line))?;
        let surface = raw.trim().to_lowercase();
        let tokens = tokenize(&surface);
        if tokens.is_empty() {
            return Err(OntologyError::EmptyKeyword {
                line,
                keyword: raw.trim().to_string(),
            });
        }
        let entry = &mut self.classes[*pos];
        if let Some(existing) = entry.terms.iter().find(|t| t.surface == surface) {
            return Err(OntologyError::DuplicateKeyword {
                class: entry.class,
                keyword: surface,
                first: existing.subclass.name.clone(),
                second: subclass.name.clone(),
            });
        }
        let index = entry.terms.len();
        entry.terms.push(KeywordTerm {
            surface,
            tokens,
            subclass: subclass.clone(),
            index,
        });
        Ok(())
    }

    fn close_subclass(&mut self) -> Result<(), OntologyError> {
        if let Some((pos, subclass)) = self.current.take() {
            if !self.classes[pos]
                .terms
                .iter()
                .any(|t| t.subclass == subclass)
            {
                return Err(OntologyError::EmptySubclass(subclass.name));
            }
        }
        Ok(())
    }

    fn finish(mut self) -> Result<OntologyModel, OntologyError> {
        self.close_subclass()?;
        Ok(OntologyModel {
            classes: self.classes,
        })
    }
}

/// Parses the ontology config format.
///
/// ```text
/// # comment
/// [EVENT Private Event]
/// eat, shopping
/// concert
/// ```
pub fn parse_ontology<R: BufRead>(reader: R) -> Result<OntologyModel, OntologyError> {
    let mut builder = Builder::default();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let inner = rest
                .strip_suffix(']')
                .ok_or(OntologyError::MalformedHeader(line_no))?
                .trim();
            let (label, name) = inner
                .split_once(char::is_whitespace)
                .ok_or(OntologyError::MalformedHeader(line_no))?;
            let class: EntityClass = label.parse().map_err(|_| OntologyError::UnknownClass {
                line: line_no,
                label: label.to_string(),
            })?;
            let name = name.trim();
            if name.is_empty() {
                return Err(OntologyError::MalformedHeader(line_no));
            }
            builder.open_subclass(class, name, line_no)?;
            continue;
        }
        for keyword in line.split(',').filter(|k| !k.trim().is_empty()) {
            builder.add_keyword(keyword, line_no)?;
        }
    }
    builder.finish()
}

impl FromStr for OntologyModel {
    type Err = OntologyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_ontology(s.as_bytes())
    }
}

impl fmt::Display for OntologyModel {
    /// Serializes to the config format accepted by [`parse_ontology`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for entry in &self.classes {
            for subclass in &entry.subclasses {
                if !first {
                    writeln!(f)?;
                }
                first = false;
                writeln!(f, "[{} {}]", entry.class, subclass.name)?;
                let keywords: Vec<&str> = entry
                    .terms
                    .iter()
                    .filter(|t| &t.subclass == subclass)
                    .map(|t| t.surface.as_str())
                    .collect();
                writeln!(f, "{}", keywords.join(", "))?;
            }
        }
        Ok(())
    }
}

impl OntologyModel {
    /// Classes in declaration order.
    pub fn classes(&self) -> impl Iterator<Item = EntityClass> + '_ {
        self.classes.iter().map(|c| c.class)
    }

    pub fn has_class(&self, class: EntityClass) -> bool {
        self.entry(class).is_some()
    }

    fn entry(&self, class: EntityClass) -> Option<&ClassEntry> {
        self.classes.iter().find(|c| c.class == class)
    }

    pub fn subclasses(&self, class: EntityClass) -> &[Subclass] {
        self.entry(class)
            .map(|e| e.subclasses.as_slice())
            .unwrap_or(&[])
    }

    /// Every subclass, classes in declaration order.
    pub fn all_subclasses(&self) -> impl Iterator<Item = &Subclass> + '_ {
        self.classes.iter().flat_map(|c| c.subclasses.iter())
    }

    pub fn terms(&self, class: EntityClass) -> &[KeywordTerm] {
        self.entry(class).map(|e| e.terms.as_slice()).unwrap_or(&[])
    }

    pub fn all_terms(&self) -> impl Iterator<Item = &KeywordTerm> + '_ {
        self.classes.iter().flat_map(|c| c.terms.iter())
    }

    pub fn term_count(&self, class: EntityClass) -> usize {
        self.terms(class).len()
    }

    pub fn find_subclass(&self, class: EntityClass, name: &str) -> Option<&Subclass> {
        self.subclasses(class).iter().find(|s| s.name == name)
    }

    /// The subclass that owns the term at `index` within `class`.
    pub fn subclass_of(
        &self,
        class: EntityClass,
        index: usize,
    ) -> Result<&Subclass, OntologyError> {
        let terms = self.terms(class);
        terms
            .get(index)
            .map(|t| &t.subclass)
            .ok_or(OntologyError::IndexOutOfRange {
                class,
                index,
                count: terms.len(),
            })
    }

    /// Reports which keyword terms have no vector in `table`.
    pub fn vocabulary_coverage(&self, table: &EmbeddingTable) -> CoverageReport {
        let mut per_subclass = Vec::new();
        let mut oov = Vec::new();
        for entry in &self.classes {
            for subclass in &entry.subclasses {
                let mut total = 0;
                let mut in_vocabulary = 0;
                for term in entry.terms.iter().filter(|t| &t.subclass == subclass) {
                    total += 1;
                    if term.tokens.iter().any(|tok| table.contains(tok)) {
                        in_vocabulary += 1;
                    } else {
                        oov.push(OovTerm {
                            class: entry.class,
                            subclass: subclass.name.clone(),
                            keyword: term.surface.clone(),
                        });
                    }
                }
                per_subclass.push(SubclassCoverage {
                    class: entry.class,
                    subclass: subclass.name.clone(),
                    in_vocabulary,
                    total,
                    fraction: in_vocabulary as f64 / total as f64,
                });
            }
        }
        CoverageReport { per_subclass, oov }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubclassCoverage {
    pub class: EntityClass,
    pub subclass: String,
    pub in_vocabulary: usize,
    pub total: usize,
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OovTerm {
    pub class: EntityClass,
    pub subclass: String,
    pub keyword: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageReport {
    pub per_subclass: Vec<SubclassCoverage>,
    pub oov: Vec<OovTerm>,
}

impl CoverageReport {
    pub fn in_vocabulary_fraction(&self) -> f64 {
        let total: usize = self.per_subclass.iter().map(|s| s.total).sum();
        let hit: usize = self.per_subclass.iter().map(|s| s.in_vocabulary).sum();
        if total == 0 {
            0.0
        } else {
            hit as f64 / total as f64
        }
    }
}
