//! Pre-trained word embeddings in the whitespace-delimited text format
//! (`token c1 c2 ... cd`, one token per line, optional `count dim` header).

use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use indexmap::IndexMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EmbeddingError {
    #[error("embedding source contains no vectors")]
    EmptyVocabulary,
    #[error("line {line}: expected {expected} components, found {actual}")]
    DimensionMismatch {
        line: usize,
        expected: usize,
        actual: usize,
    },
    #[error("line {line}, column {column}: malformed number")]
    MalformedNumber { line: usize, column: usize },
    #[error("line {line}: token has no vector components")]
    MissingComponents { line: usize },
    #[error("vector with zero norm")]
    ZeroNormVector,
    #[error("vectors differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// A dense embedding vector. Components are finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector(Vec<f64>);

impl Vector {
    /// Builds a vector, rejecting empty input and non-finite components.
    pub fn new(components: Vec<f64>) -> Option<Self> {
        if components.is_empty() || components.iter().any(|c| !c.is_finite()) {
            return None;
        }
        Some(Vector(components))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .fold(0.0, |acc, (a, b)| acc + a * b)
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Multiplies every component by `factor`.
    pub fn scaled(&self, factor: f64) -> Vector {
        Vector(self.0.iter().map(|c| c * factor).collect())
    }

    /// Componentwise mean of a nonempty set of equal-length vectors.
    pub fn mean<'a, I>(vectors: I) -> Option<Vector>
    where
        I: IntoIterator<Item = &'a Vector>,
    {
        let mut iter = vectors.into_iter();
        let first = iter.next()?;
        let mut sum = first.0.clone();
        let mut count = 1usize;
        for v in iter {
            if v.len() != sum.len() {
                return None;
            }
            for (s, c) in sum.iter_mut().zip(&v.0) {
                *s += c;
            }
            count += 1;
        }
        let n = count as f64;
        sum.iter_mut().for_each(|s| *s /= n);
        Some(Vector(sum))
    }
}

/// Cosine similarity `dot(u, v) / (|u| |v|)`, clamped to `[-1, 1]`.
///
/// The dot product is accumulated left to right, which makes the result
/// exactly symmetric in its arguments.
pub fn cosine(u: &Vector, v: &Vector) -> Result<f64, EmbeddingError> {
    if u.len() != v.len() {
        return Err(EmbeddingError::LengthMismatch(u.len(), v.len()));
    }
    let nu = u.norm();
    let nv = v.norm();
    if nu == 0.0 || nv == 0.0 {
        return Err(EmbeddingError::ZeroNormVector);
    }
    Ok((u.dot(v) / (nu * nv)).clamp(-1.0, 1.0))
}

/// Read-only token → vector table with a fixed dimension.
///
/// Tokens are stored lowercased and keep the order in which they were read.
#[derive(Debug, Clone)]
pub struct EmbeddingTable {
    dimension: usize,
    entries: IndexMap<String, Vector>,
    source_id: String,
    duplicates: usize,
}

impl EmbeddingTable {
    /// Builds a table from in-memory entries. Tokens are lowercased; later
    /// duplicates are dropped and counted.
    pub fn from_entries<I>(source_id: impl Into<String>, entries: I) -> Result<Self, EmbeddingError>
    where
        I: IntoIterator<Item = (String, Vector)>,
    {
        let mut map = IndexMap::new();
        let mut dimension = None;
        let mut duplicates = 0;
        for (i, (token, vector)) in entries.into_iter().enumerate() {
            let expected = *dimension.get_or_insert(vector.len());
            if vector.len() != expected {
                return Err(EmbeddingError::DimensionMismatch {
                    line: i + 1,
                    expected,
                    actual: vector.len(),
                });
            }
            match map.entry(token.to_lowercase()) {
                indexmap::map::Entry::Occupied(_) => duplicates += 1,
                indexmap::map::Entry::Vacant(slot) => {
                    slot.insert(vector);
                }
            }
        }
        match dimension {
            Some(dimension) if !map.is_empty() => Ok(EmbeddingTable {
                dimension,
                entries: map,
                source_id: source_id.into(),
                duplicates,
            }),
            _ => Err(EmbeddingError::EmptyVocabulary),
        }
    }

    /// Parses the text embedding format from a buffered reader.
    pub fn from_reader<R: BufRead>(
        reader: R,
        source_id: impl Into<String>,
    ) -> Result<Self, EmbeddingError> {
        let mut entries: IndexMap<String, Vector> = IndexMap::new();
        let mut dimension: Option<usize> = None;
        let mut duplicates = 0;

        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let line = line?;
            let line = line.strip_suffix('\r').unwrap_or(&line);
            if line.trim().is_empty() {
                continue;
            }
            if line_no == 1 && is_header(line) {
                continue;
            }
            let mut fields = line.split(' ');
            let token = fields.next().unwrap_or_default();
            let mut components = Vec::with_capacity(dimension.unwrap_or(0));
            let mut fields = fields.peekable();
            while let Some(field) = fields.next() {
                // a single trailing space is tolerated
                if field.is_empty() && fields.peek().is_none() {
                    break;
                }
                let column = components.len() + 1;
                let value: f64 = field.parse().map_err(|_| EmbeddingError::MalformedNumber {
                    line: line_no,
                    column,
                })?;
                if !value.is_finite() {
                    return Err(EmbeddingError::MalformedNumber {
                        line: line_no,
                        column,
                    });
                }
                components.push(value);
            }
            if token.is_empty() || components.is_empty() {
                return Err(EmbeddingError::MissingComponents { line: line_no });
            }
            let expected = *dimension.get_or_insert(components.len());
            if components.len() != expected {
                return Err(EmbeddingError::DimensionMismatch {
                    line: line_no,
                    expected,
                    actual: components.len(),
                });
            }
            match entries.entry(token.to_lowercase()) {
                indexmap::map::Entry::Occupied(_) => duplicates += 1,
                indexmap::map::Entry::Vacant(slot) => {
                    slot.insert(Vector(components));
                }
            }
        }

        match dimension {
            Some(dimension) => Ok(EmbeddingTable {
                dimension,
                entries,
                source_id: source_id.into(),
                duplicates,
            }),
            None => Err(EmbeddingError::EmptyVocabulary),
        }
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, EmbeddingError> {
        let path = path.as_ref();
        let file = File::open(path)?;
        Self::from_reader(BufReader::new(file), path.display().to_string())
    }

    /// Looks up a token after lowercasing it. `None` means out of vocabulary.
    pub fn lookup(&self, token: &str) -> Option<&Vector> {
        match self.entries.get(token) {
            Some(v) => Some(v),
            None => self.entries.get(&token.to_lowercase()),
        }
    }

    pub fn contains(&self, token: &str) -> bool {
        self.lookup(token).is_some()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn source_id(&self) -> &str {
        &self.source_id
    }

    /// Number of duplicate tokens that were dropped while loading.
    pub fn duplicate_count(&self) -> usize {
        self.duplicates
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Vector)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Returns a copy with every vector multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> EmbeddingTable {
        EmbeddingTable {
            dimension: self.dimension,
            entries: self
                .entries
                .iter()
                .map(|(k, v)| (k.clone(), v.scaled(factor)))
                .collect(),
            source_id: self.source_id.clone(),
            duplicates: self.duplicates,
        }
    }

    /// Writes the table in the text format, one token per line, LF endings,
    /// no header. Components use the shortest representation that parses
    /// back to the same `f64`.
    pub fn write_to<W: Write>(&self, mut out: W) -> io::Result<()> {
        let mut line = String::new();
        for (token, vector) in &self.entries {
            line.clear();
            line.push_str(token);
            for c in vector.as_slice() {
                let _ = write!(line, " {c}");
            }
            line.push('\n');
            out.write_all(line.as_bytes())?;
        }
        out.flush()
    }
}

fn is_header(line: &str) -> bool {
    let fields: Vec<&str> = line.split_whitespace().collect();
    fields.len() == 2 && fields.iter().all(|f| f.parse::<u64>().is_ok())
}
