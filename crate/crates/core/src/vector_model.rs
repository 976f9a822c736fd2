//! Word-vector models in word2vec text or binary format, with exact
//! brute-force cosine neighbourhood queries.
//!
//! Rows are L2-normalised once at load time, so cosine similarity is a plain
//! dot product. Neighbour queries scan the full matrix and select the top `k`
//! with ties broken by ascending row id.

use std::collections::HashMap;
use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("I/O error reading model: {0}")]
    Io(#[from] io::Error),
    #[error("malformed header: {0}")]
    Header(String),
    #[error("line {line}: expected {expected} values for '{token}', found {found}")]
    DimensionMismatch {
        line: usize,
        token: String,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: invalid value '{value}' for '{token}'")]
    BadValue {
        line: usize,
        token: String,
        value: String,
    },
    #[error("line {line}: duplicate token '{token}'")]
    DuplicateToken { line: usize, token: String },
    #[error("line {line}: zero-norm vector for '{token}'")]
    ZeroVector { line: usize, token: String },
    #[error("entry {entry}: {message}")]
    Entry { entry: usize, message: String },
    #[error("header declares {declared} entries but the file holds {found}")]
    Truncated { declared: usize, found: usize },
    #[error("token '{0}' is not in the model vocabulary")]
    OutOfVocabulary(String),
}

/// On-disk model encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelFormat {
    Word2VecText,
    Word2VecBinary,
}

impl ModelFormat {
    /// Binary for a `.bin` extension, text otherwise.
    pub fn infer(path: &Path) -> ModelFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("bin") => ModelFormat::Word2VecBinary,
            _ => ModelFormat::Word2VecText,
        }
    }
}

impl fmt::Display for ModelFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelFormat::Word2VecText => f.write_str("text"),
            ModelFormat::Word2VecBinary => f.write_str("binary"),
        }
    }
}

impl FromStr for ModelFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" | "word2vec-text" => Ok(ModelFormat::Word2VecText),
            "binary" | "bin" | "word2vec-binary" => Ok(ModelFormat::Word2VecBinary),
            other => Err(format!("unknown model format '{other}'")),
        }
    }
}

/// A neighbouring token and its cosine similarity to the query.
#[derive(Debug, Clone, PartialEq)]
pub struct Neighbor {
    pub token: String,
    pub similarity: f64,
}

/// Immutable vocabulary plus row-normalised embedding matrix.
#[derive(Debug, Clone)]
pub struct VectorModel {
    vocab: Vec<String>,
    dim: usize,
    matrix: Vec<f32>,
    index: HashMap<String, usize>,
}

impl VectorModel {
    /// Build a model from `(token, vector)` rows, normalising each row.
    pub fn from_rows<I, S>(dim: usize, rows: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = (S, Vec<f32>)>,
        S: Into<String>,
    {
        let mut builder = Builder::new(dim, 0)?;
        for (i, (token, values)) in rows.into_iter().enumerate() {
            builder.push(i + 1, token.into(), &values)?;
        }
        Ok(builder.finish())
    }

    pub fn load(path: impl AsRef<Path>, format: ModelFormat) -> Result<Self, ModelError> {
        let reader = BufReader::with_capacity(1 << 20, File::open(path.as_ref())?);
        match format {
            ModelFormat::Word2VecText => Self::read_text(reader),
            ModelFormat::Word2VecBinary => Self::read_binary(reader),
        }
    }

    pub fn read_text<R: BufRead>(reader: R) -> Result<Self, ModelError> {
        let mut lines = reader.lines();
        let header = lines
            .next()
            .ok_or_else(|| ModelError::Header("empty file".into()))??;
        let (count, dim) = parse_header(&header)?;
        let mut builder = Builder::new(dim, count)?;
        let mut values = Vec::with_capacity(dim);

        for (i, line) in lines.enumerate() {
            let line = line?;
            let line_no = i + 2;
            let line = line.trim_end();
            if line.is_empty() {
                continue;
            }
            if builder.len() == count {
                return Err(ModelError::Header(format!(
                    "line {line_no}: more entries than the declared {count}"
                )));
            }
            let mut fields = line.split(' ').filter(|f| !f.is_empty());
            let token = fields.next().unwrap_or_default();
            values.clear();
            for field in fields {
                let v = field.parse::<f32>().map_err(|_| ModelError::BadValue {
                    line: line_no,
                    token: token.to_string(),
                    value: field.to_string(),
                })?;
                values.push(v);
            }
            builder.push(line_no, token.to_string(), &values)?;
        }
        if builder.len() != count {
            return Err(ModelError::Truncated {
                declared: count,
                found: builder.len(),
            });
        }
        Ok(builder.finish())
    }

    pub fn read_binary<R: BufRead>(mut reader: R) -> Result<Self, ModelError> {
        let mut header = String::new();
        reader.read_line(&mut header)?;
        let (count, dim) = parse_header(&header)?;
        let mut builder = Builder::new(dim, count)?;
        let mut raw = vec![0u8; dim * 4];
        let mut values = vec![0f32; dim];
        let mut token = Vec::new();

        for entry in 1..=count {
            token.clear();
            reader.read_until(b' ', &mut token)?;
            if token.last() != Some(&b' ') {
                return Err(ModelError::Truncated {
                    declared: count,
                    found: entry - 1,
                });
            }
            token.pop();
            // the reference writer terminates each vector with a newline
            let start = token.iter().position(|&b| b != b'\n').unwrap_or(token.len());
            let word = std::str::from_utf8(&token[start..])
                .map_err(|_| ModelError::Entry {
                    entry,
                    message: "token is not valid UTF-8".into(),
                })?
                .to_string();
            reader.read_exact(&mut raw).map_err(|e| match e.kind() {
                io::ErrorKind::UnexpectedEof => ModelError::Entry {
                    entry,
                    message: format!("vector for '{word}' is shorter than {dim} floats"),
                },
                _ => ModelError::Io(e),
            })?;
            for (v, bytes) in values.iter_mut().zip(raw.chunks_exact(4)) {
                *v = f32::from_le_bytes(bytes.try_into().expect("chunk of four bytes"));
            }
            builder.push(entry, word, &values)?;
        }
        Ok(builder.finish())
    }

    pub fn write_text<W: Write>(&self, mut writer: W) -> io::Result<()> {
        writeln!(writer, "{} {}", self.len(), self.dim)?;
        for (id, token) in self.vocab.iter().enumerate() {
            write!(writer, "{token}")?;
            for v in self.row(id) {
                write!(writer, " {v}")?;
            }
            writeln!(writer)?;
        }
        writer.flush()
    }

    pub fn write_binary<W: Write>(&self, mut writer: W) -> io::Result<()> {
        writeln!(writer, "{} {}", self.len(), self.dim)?;
        for (id, token) in self.vocab.iter().enumerate() {
            writer.write_all(token.as_bytes())?;
            writer.write_all(b" ")?;
            for v in self.row(id) {
                writer.write_all(&v.to_le_bytes())?;
            }
            writer.write_all(b"\n")?;
        }
        writer.flush()
    }

    pub fn len(&self) -> usize {
        self.vocab.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vocab.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vocab(&self) -> &[String] {
        &self.vocab
    }

    pub fn token(&self, id: usize) -> &str {
        &self.vocab[id]
    }

    pub fn id(&self, token: &str) -> Option<usize> {
        self.index.get(token).copied()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.index.contains_key(token)
    }

    /// Unit-normalised embedding of row `id`.
    pub fn row(&self, id: usize) -> &[f32] {
        &self.matrix[id * self.dim..(id + 1) * self.dim]
    }

    fn lookup(&self, token: &str) -> Result<usize, ModelError> {
        self.id(token)
            .ok_or_else(|| ModelError::OutOfVocabulary(token.to_string()))
    }

    pub fn cosine(&self, a: &str, b: &str) -> Result<f64, ModelError> {
        let (a, b) = (self.lookup(a)?, self.lookup(b)?);
        Ok(self.cosine_ids(a, b))
    }

    pub fn cosine_ids(&self, a: usize, b: usize) -> f64 {
        dot(self.row(a), self.row(b))
    }

    /// The `k` tokens most similar to `token`, excluding itself.
    pub fn most_similar(&self, token: &str, k: usize) -> Result<Vec<Neighbor>, ModelError> {
        let id = self.lookup(token)?;
        Ok(self
            .most_similar_ids(id, k)
            .into_iter()
            .map(|(other, similarity)| Neighbor {
                token: self.vocab[other].clone(),
                similarity,
            })
            .collect())
    }

    /// Row ids and similarities of the `k` nearest rows to row `id`, sorted by
    /// descending similarity then ascending row id.
    pub fn most_similar_ids(&self, id: usize, k: usize) -> Vec<(usize, f64)> {
        let query = self.row(id);
        let mut scored = self.score_all(query);
        scored.swap_remove(id);
        let k = k.min(scored.len());
        if k == 0 {
            return Vec::new();
        }
        if k < scored.len() {
            scored.select_nth_unstable_by(k - 1, rank_order);
            scored.truncate(k);
        }
        scored.sort_unstable_by(rank_order);
        scored
    }

    #[cfg(feature = "parallel")]
    fn score_all(&self, query: &[f32]) -> Vec<(usize, f64)> {
        use rayon::prelude::*;

        const ROWS_PER_TASK: usize = 4096;
        if self.len() < ROWS_PER_TASK {
            return self.score_range(query, 0, self.len());
        }
        let mut scored = vec![(0usize, 0f64); self.len()];
        scored
            .par_chunks_mut(ROWS_PER_TASK)
            .enumerate()
            .for_each(|(chunk, out)| {
                let base = chunk * ROWS_PER_TASK;
                for (offset, slot) in out.iter_mut().enumerate() {
                    let id = base + offset;
                    *slot = (id, dot(query, self.row(id)));
                }
            });
        scored
    }

    #[cfg(not(feature = "parallel"))]
    fn score_all(&self, query: &[f32]) -> Vec<(usize, f64)> {
        self.score_range(query, 0, self.len())
    }

    fn score_range(&self, query: &[f32], start: usize, end: usize) -> Vec<(usize, f64)> {
        (start..end).map(|id| (id, dot(query, self.row(id)))).collect()
    }
}

fn rank_order(a: &(usize, f64), b: &(usize, f64)) -> std::cmp::Ordering {
    b.1.total_cmp(&a.1).then(a.0.cmp(&b.0))
}

fn dot(a: &[f32], b: &[f32]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| f64::from(x) * f64::from(y))
        .sum()
}

fn parse_header(line: &str) -> Result<(usize, usize), ModelError> {
    let mut parts = line.split_whitespace();
    let mut field = |name: &str| -> Result<usize, ModelError> {
        let raw = parts
            .next()
            .ok_or_else(|| ModelError::Header(format!("missing {name} in '{}'", line.trim())))?;
        raw.parse()
            .map_err(|_| ModelError::Header(format!("invalid {name} '{raw}'")))
    };
    let count = field("vocabulary size")?;
    let dim = field("dimension")?;
    if parts.next().is_some() {
        return Err(ModelError::Header(format!(
            "expected '<vocab_size> <dim>', found '{}'",
            line.trim()
        )));
    }
    Ok((count, dim))
}

struct Builder {
    dim: usize,
    vocab: Vec<String>,
    matrix: Vec<f32>,
    index: HashMap<String, usize>,
}

impl Builder {
    fn new(dim: usize, capacity: usize) -> Result<Self, ModelError> {
        if dim == 0 {
            return Err(ModelError::Header("dimension must be positive".into()));
        }
        // the header is untrusted; cap the up-front reservation
        let capacity = capacity.min(1 << 20);
        Ok(Builder {
            dim,
            vocab: Vec::with_capacity(capacity),
            matrix: Vec::with_capacity(capacity.saturating_mul(dim).min(1 << 28)),
            index: HashMap::with_capacity(capacity),
        })
    }

    fn len(&self) -> usize {
        self.vocab.len()
    }

    fn push(&mut self, line: usize, token: String, values: &[f32]) -> Result<(), ModelError> {
        if token.is_empty() {
            return Err(ModelError::Entry {
                entry: line,
                message: "empty token".into(),
            });
        }
        if values.len() != self.dim {
            return Err(ModelError::DimensionMismatch {
                line,
                token,
                expected: self.dim,
                found: values.len(),
            });
        }
        if self.index.contains_key(&token) {
            return Err(ModelError::DuplicateToken { line, token });
        }
        let norm = values
            .iter()
            .map(|&v| f64::from(v) * f64::from(v))
            .sum::<f64>()
            .sqrt();
        if !norm.is_finite() {
            return Err(ModelError::BadValue {
                line,
                token,
                value: "non-finite component".into(),
            });
        }
        if norm == 0.0 {
            return Err(ModelError::ZeroVector { line, token });
        }
        self.matrix
            .extend(values.iter().map(|&v| (f64::from(v) / norm) as f32));
        self.index.insert(token.clone(), self.vocab.len());
        self.vocab.push(token);
        Ok(())
    }

    fn finish(self) -> VectorModel {
        VectorModel {
            vocab: self.vocab,
            dim: self.dim,
            matrix: self.matrix,
            index: self.index,
        }
    }
}

/// Hex SHA-256 of a file's bytes, streamed.
pub fn file_digest(path: impl AsRef<Path>) -> io::Result<String> {
    use sha2::{Digest, Sha256};

    let mut file = File::open(path)?;
    let mut hasher = Sha256::new();
    let mut buf = vec![0u8; 1 << 20];
    loop {
        let n = file.read(&mut buf)?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(hex::encode(hasher.finalize()))
}
