//! On-disk persistence for counting tables, in a JSON and a binary format.
//!
//! File names carry the table identity (`p_h12_k30.json`), so a directory of
//! cache files can be scanned for any table that covers a request. Both
//! formats are versioned and fully validated on read; a file that fails any
//! check is reported as corrupt and callers fall back to recomputing.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::count::{CountTable, TableKind};
use crate::Nat;

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &[u8; 4] = b"SLCT";

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache io: {0}")]
    Io(#[from] io::Error),
    #[error("corrupt cache: {0}")]
    Corrupt(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheFormat {
    Json,
    Binary,
}

impl CacheFormat {
    pub fn extension(self) -> &'static str {
        match self {
            CacheFormat::Json => "json",
            CacheFormat::Binary => "bin",
        }
    }

    pub fn from_extension(ext: &str) -> Option<Self> {
        match ext {
            "json" => Some(CacheFormat::Json),
            "bin" => Some(CacheFormat::Binary),
            _ => None,
        }
    }
}

/// `p_h12_k30.json` style name for a table at the given bounds.
pub fn file_name(kind: TableKind, max_h: usize, max_k: usize, format: CacheFormat) -> String {
    format!(
        "{}_h{}_k{}.{}",
        kind.code(),
        max_h,
        max_k,
        format.extension()
    )
}

/// Parses a cache file name back into `(kind, max_h, max_k, format)`.
pub fn parse_file_name(name: &str) -> Option<(TableKind, usize, usize, CacheFormat)> {
    let (stem, ext) = name.rsplit_once('.')?;
    let format = CacheFormat::from_extension(ext)?;
    let mut parts = stem.split('_');
    let kind: TableKind = parts.next()?.parse().ok()?;
    let max_h = parts.next()?.strip_prefix('h')?.parse().ok()?;
    let max_k = parts.next()?.strip_prefix('k')?.parse().ok()?;
    if parts.next().is_some() {
        return None;
    }
    Some((kind, max_h, max_k, format))
}

#[derive(Serialize, Deserialize)]
struct JsonTable {
    format_version: u32,
    kind: String,
    max_h: usize,
    max_k: usize,
    rows: Vec<Vec<String>>,
}

/// Writes `table` into `dir` under its canonical file name.
pub fn store(
    dir: &Path,
    table: &CountTable<Nat>,
    format: CacheFormat,
) -> Result<PathBuf, CacheError> {
    fs::create_dir_all(dir)?;
    let path = dir.join(file_name(table.kind(), table.max_h(), table.max_k(), format));
    let bytes = match format {
        CacheFormat::Json => encode_json(table)?,
        CacheFormat::Binary => encode_binary(table),
    };
    fs::write(&path, bytes)?;
    Ok(path)
}

/// Reads a table from `path`, inferring the format from the extension.
pub fn read_table(path: &Path) -> Result<CountTable<Nat>, CacheError> {
    let format = path
        .extension()
        .and_then(|e| e.to_str())
        .and_then(CacheFormat::from_extension)
        .ok_or_else(|| CacheError::Corrupt(format!("unrecognized extension on {path:?}")))?;
    let bytes = fs::read(path)?;
    match format {
        CacheFormat::Json => decode_json(&bytes),
        CacheFormat::Binary => decode_binary(&bytes),
    }
}

/// Scans `dir` for a valid cached table of `kind` whose bounds cover
/// `(max_h, max_k)`. Unreadable or corrupt candidates are skipped.
pub fn load_covering(
    dir: &Path,
    kind: TableKind,
    max_h: usize,
    max_k: usize,
) -> Option<CountTable<Nat>> {
    let entries = fs::read_dir(dir).ok()?;
    let mut candidates: Vec<(usize, usize, PathBuf)> = Vec::new();
    for entry in entries.flatten() {
        let name = entry.file_name();
        let Some(name) = name.to_str() else { continue };
        let Some((k, h, kk, _)) = parse_file_name(name) else {
            continue;
        };
        if k == kind && h >= max_h && kk >= max_k {
            candidates.push((h, kk, entry.path()));
        }
    }
    // Prefer the tightest covering table: less to parse.
    candidates.sort();
    for (h, kk, path) in candidates {
        match read_table(&path) {
            Ok(table) if table.kind() == kind && table.max_h() == h && table.max_k() == kk => {
                return Some(table);
            }
            _ => continue,
        }
    }
    None
}

fn encode_json(table: &CountTable<Nat>) -> Result<Vec<u8>, CacheError> {
    let rows = (0..=table.max_h())
        .map(|h| table.row(h).iter().map(|v| v.to_string()).collect())
        .collect();
    let doc = JsonTable {
        format_version: FORMAT_VERSION,
        kind: table.kind().code().to_string(),
        max_h: table.max_h(),
        max_k: table.max_k(),
        rows,
    };
    serde_json::to_vec(&doc).map_err(|e| CacheError::Corrupt(e.to_string()))
}

fn decode_json(bytes: &[u8]) -> Result<CountTable<Nat>, CacheError> {
    let doc: JsonTable =
        serde_json::from_slice(bytes).map_err(|e| CacheError::Corrupt(e.to_string()))?;
    if doc.format_version != FORMAT_VERSION {
        return Err(CacheError::Corrupt(format!(
            "format version {} (expected {FORMAT_VERSION})",
            doc.format_version
        )));
    }
    let kind: TableKind = doc.kind.parse().map_err(CacheError::Corrupt)?;
    let mut rows = Vec::with_capacity(doc.rows.len());
    for row in &doc.rows {
        let mut parsed = Vec::with_capacity(row.len());
        for entry in row {
            let v: Nat = entry
                .parse()
                .map_err(|_| CacheError::Corrupt(format!("bad decimal entry {entry:?}")))?;
            parsed.push(v);
        }
        rows.push(parsed);
    }
    CountTable::from_rows(kind, doc.max_h, doc.max_k, rows).map_err(CacheError::Corrupt)
}

fn put_u64(out: &mut Vec<u8>, v: u64) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn encode_binary(table: &CountTable<Nat>) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    let code = table.kind().code().as_bytes();
    out.push(code.len() as u8);
    out.extend_from_slice(code);
    put_u64(&mut out, table.max_h() as u64);
    put_u64(&mut out, table.max_k() as u64);
    for h in 0..=table.max_h() {
        let row = table.row(h);
        put_u64(&mut out, row.len() as u64);
        for v in row {
            // Little-endian magnitude; zero is the empty byte string.
            let bytes = if v.is_zero() { Vec::new() } else { v.to_bytes_le() };
            out.extend_from_slice(&(bytes.len() as u32).to_le_bytes());
            out.extend_from_slice(&bytes);
        }
    }
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], CacheError> {
        if self.bytes.len() < n {
            return Err(CacheError::Corrupt("truncated binary table".into()));
        }
        let (head, tail) = self.bytes.split_at(n);
        self.bytes = tail;
        Ok(head)
    }

    fn u32(&mut self) -> Result<u32, CacheError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64, CacheError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

fn decode_binary(bytes: &[u8]) -> Result<CountTable<Nat>, CacheError> {
    let mut r = Reader { bytes };
    if r.take(4)? != MAGIC {
        return Err(CacheError::Corrupt("bad magic".into()));
    }
    let version = r.u32()?;
    if version != FORMAT_VERSION {
        return Err(CacheError::Corrupt(format!(
            "format version {version} (expected {FORMAT_VERSION})"
        )));
    }
    let code_len = r.take(1)?[0] as usize;
    let code = std::str::from_utf8(r.take(code_len)?)
        .map_err(|_| CacheError::Corrupt("bad kind code".into()))?;
    let kind: TableKind = code.parse().map_err(CacheError::Corrupt)?;
    let max_h = r.u64()? as usize;
    let max_k = r.u64()? as usize;
    if max_h > 1 << 20 || max_k > 1 << 20 {
        return Err(CacheError::Corrupt("implausible table bounds".into()));
    }
    let mut rows = Vec::with_capacity(max_h + 1);
    for _ in 0..=max_h {
        let len = r.u64()? as usize;
        if len > max_k + 1 {
            return Err(CacheError::Corrupt("row longer than the bounds allow".into()));
        }
        let mut row = Vec::with_capacity(len);
        for _ in 0..len {
            let n = r.u32()? as usize;
            row.push(Nat::from_bytes_le(r.take(n)?));
        }
        rows.push(row);
    }
    if !r.bytes.is_empty() {
        return Err(CacheError::Corrupt("trailing bytes".into()));
    }
    CountTable::from_rows(kind, max_h, max_k, rows).map_err(CacheError::Corrupt)
}
