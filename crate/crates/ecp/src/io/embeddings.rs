//! Embedding pools in two encodings.
//!
//! Text: one `{"id": ..., "vector": [...]}` object per line.
//!
//! Binary: the magic `ECPEMB1\n`, then `dim` and `count` as `u64` LE, then
//! per row a `u16` LE id length, the UTF-8 id and `dim` `f32` LE values.
//! Values are stored in single precision and widened on load.

use std::collections::HashSet;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use ecp_core::field::{DemoPool, EmbeddingVector};
use serde::{Deserialize, Serialize};

use crate::{Error, FormatError, Location, Result};

pub const MAGIC: &[u8; 8] = b"ECPEMB1\n";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Encoding {
    /// Binary when the file starts with anything but JSON text.
    #[default]
    Auto,
    Text,
    Binary,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TextRow {
    id: String,
    vector: Vec<f64>,
}

fn looks_like_text(bytes: &[u8]) -> bool {
    bytes.iter().find(|b| !b.is_ascii_whitespace()).map_or(true, |&b| b == b'{')
}

pub fn read_embeddings(bytes: &[u8], encoding: Encoding) -> std::result::Result<DemoPool, FormatError> {
    let binary = match encoding {
        Encoding::Auto => !looks_like_text(bytes),
        Encoding::Text => false,
        Encoding::Binary => true,
    };
    let entries = if binary { read_binary(bytes)? } else { read_text(bytes)? };
    // rows were checked individually, so the pool is valid
    Ok(DemoPool::new(entries).expect("validated embedding rows"))
}

fn finite(values: &[f64], at: Location) -> std::result::Result<(), FormatError> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(FormatError::Invalid { at, message: "non-finite embedding value".into() });
    }
    Ok(())
}

fn read_text(bytes: &[u8]) -> std::result::Result<Vec<EmbeddingVector>, FormatError> {
    let mut entries: Vec<EmbeddingVector> = Vec::new();
    let mut ids = HashSet::new();
    let mut offset = 0u64;
    for raw in bytes.split_inclusive(|&b| b == b'\n') {
        let at = Location::Byte(offset);
        offset += raw.len() as u64;
        let line = std::str::from_utf8(raw)
            .map_err(|e| FormatError::Syntax { at, message: format!("invalid UTF-8: {e}") })?
            .trim();
        if line.is_empty() {
            continue;
        }
        let row: TextRow =
            serde_json::from_str(line).map_err(|e| FormatError::Syntax { at, message: e.to_string() })?;
        if row.vector.is_empty() {
            return Err(FormatError::Invalid { at, message: format!("embedding {} is empty", row.id) });
        }
        if let Some(first) = entries.first() {
            if first.dim() != row.vector.len() {
                return Err(FormatError::DimensionMismatch { at, expected: first.dim(), found: row.vector.len() });
            }
        }
        if !ids.insert(row.id.clone()) {
            return Err(FormatError::DuplicateId { at, id: row.id });
        }
        finite(&row.vector, at)?;
        entries.push(EmbeddingVector { id: row.id, values: row.vector });
    }
    Ok(entries)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize, what: &'static str) -> std::result::Result<&'a [u8], FormatError> {
        if self.bytes.len() - self.pos < n {
            return Err(FormatError::Truncated { at: Location::Byte(self.pos as u64), what });
        }
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u64(&mut self, what: &'static str) -> std::result::Result<u64, FormatError> {
        Ok(u64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }
}

fn read_binary(bytes: &[u8]) -> std::result::Result<Vec<EmbeddingVector>, FormatError> {
    let n = bytes.len().min(MAGIC.len());
    if bytes[..n] != MAGIC[..n] {
        return Err(FormatError::BadMagic { at: Location::Byte(0), expected: "ECPEMB1\\n" });
    }
    let mut cur = Cursor { bytes, pos: 0 };
    cur.take(MAGIC.len(), "header")?;
    let dim = cur.u64("header")?;
    let count = cur.u64("header")?;
    if dim == 0 || dim > u32::MAX as u64 {
        return Err(FormatError::Invalid { at: Location::Byte(8), message: format!("dimension {dim} out of range") });
    }
    let dim = dim as usize;
    let mut entries = Vec::new();
    let mut ids = HashSet::new();
    for _ in 0..count {
        let at = Location::Byte(cur.pos as u64);
        let len = u16::from_le_bytes(cur.take(2, "row")?.try_into().unwrap()) as usize;
        let id = std::str::from_utf8(cur.take(len, "row")?)
            .map_err(|e| FormatError::Invalid { at, message: format!("id is not UTF-8: {e}") })?
            .to_string();
        let raw = cur.take(dim.checked_mul(4).ok_or(FormatError::Truncated { at, what: "row" })?, "row")?;
        let values: Vec<f64> =
            raw.chunks_exact(4).map(|c| f32::from_le_bytes(c.try_into().unwrap()) as f64).collect();
        finite(&values, at)?;
        if !ids.insert(id.clone()) {
            return Err(FormatError::DuplicateId { at, id });
        }
        entries.push(EmbeddingVector { id, values });
    }
    if cur.pos != bytes.len() {
        return Err(FormatError::TrailingData { at: Location::Byte(cur.pos as u64) });
    }
    Ok(entries)
}

pub fn write_embeddings_text<W: Write>(mut w: W, pool: &DemoPool) -> std::io::Result<()> {
    for e in pool.entries() {
        serde_json::to_writer(&mut w, &TextRow { id: e.id.clone(), vector: e.values.clone() })?;
        w.write_all(b"\n")?;
    }
    w.flush()
}

/// Writes the binary encoding; values are narrowed to `f32`. An empty pool
/// is written with dimension 1.
pub fn write_embeddings_binary<W: Write>(mut w: W, pool: &DemoPool) -> std::io::Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&(pool.dim().unwrap_or(1) as u64).to_le_bytes())?;
    w.write_all(&(pool.len() as u64).to_le_bytes())?;
    for e in pool.entries() {
        let len = u16::try_from(e.id.len()).map_err(|_| {
            std::io::Error::new(std::io::ErrorKind::InvalidInput, format!("embedding id {:?} is too long", e.id))
        })?;
        w.write_all(&len.to_le_bytes())?;
        w.write_all(e.id.as_bytes())?;
        for &v in &e.values {
            w.write_all(&(v as f32).to_le_bytes())?;
        }
    }
    w.flush()
}

pub fn load_embeddings(path: impl AsRef<Path>, encoding: Encoding) -> Result<DemoPool> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    read_embeddings(&bytes, encoding).map_err(|e| Error::format(path, e))
}

/// Saves `pool`; `Auto` writes text.
pub fn save_embeddings(path: impl AsRef<Path>, pool: &DemoPool, encoding: Encoding) -> Result<()> {
    let path = path.as_ref();
    let file = BufWriter::new(fs::File::create(path).map_err(|e| Error::io(path, e))?);
    match encoding {
        Encoding::Binary => write_embeddings_binary(file, pool),
        Encoding::Auto | Encoding::Text => write_embeddings_text(file, pool),
    }
    .map_err(|e| Error::io(path, e))
}
