//! Versioned single-file JSON cache for partition counts and statistic tables.
//!
//! A cache file is one JSON object with sorted keys:
//!
//! ```text
//! {"checksum":"<16 hex>","format_version":1,"kind":"crank_table","max_n":N,"payload":[...]}
//! ```
//!
//! The checksum is the first 64 bits of SHA-256 over the compact JSON
//! serialization of `payload`. Any mismatch (version, kind, coverage,
//! checksum, parse error) means the file is rebuilt; files are replaced by
//! write-to-temp-then-rename.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use cranklab_core::{build_stat_table, partition_counts, CountValue, Method, StatKind, StatTable};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CacheKind {
    PartitionCounts,
    RankTable,
    CrankTable,
}

impl CacheKind {
    pub fn file_name(self) -> &'static str {
        match self {
            CacheKind::PartitionCounts => "partition_counts.json",
            CacheKind::RankTable => "rank_table.json",
            CacheKind::CrankTable => "crank_table.json",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "partition_counts" | "pcount" | "partition-counts" => Some(CacheKind::PartitionCounts),
            "rank_table" | "rank" => Some(CacheKind::RankTable),
            "crank_table" | "crank" => Some(CacheKind::CrankTable),
            _ => None,
        }
    }
}

impl fmt::Display for CacheKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CacheKind::PartitionCounts => "partition_counts",
            CacheKind::RankTable => "rank_table",
            CacheKind::CrankTable => "crank_table",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CachedData {
    PartitionCounts(Vec<CountValue>),
    Table(StatTable),
}

impl CachedData {
    pub fn max_n(&self) -> usize {
        match self {
            CachedData::PartitionCounts(v) => v.len() - 1,
            CachedData::Table(t) => t.max_n(),
        }
    }

    pub fn into_table(self) -> Option<StatTable> {
        match self {
            CachedData::Table(t) => Some(t),
            CachedData::PartitionCounts(_) => None,
        }
    }

    pub fn into_counts(self) -> Option<Vec<CountValue>> {
        match self {
            CachedData::PartitionCounts(v) => Some(v),
            CachedData::Table(_) => None,
        }
    }

    fn truncated(self, max_n: usize) -> Self {
        match self {
            CachedData::PartitionCounts(mut v) => {
                v.truncate(max_n + 1);
                CachedData::PartitionCounts(v)
            }
            CachedData::Table(t) => CachedData::Table(
                t.truncated(max_n)
                    .expect("coverage checked before truncating"),
            ),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CacheEnvelope {
    pub format_version: u32,
    pub kind: CacheKind,
    pub max_n: usize,
    pub checksum: String,
    pub payload: Value,
}

/// How a cache request was satisfied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CacheStatus {
    Loaded,
    /// Computed and written; `reason` says why an existing file was not used.
    Built {
        reason: Option<String>,
    },
}

#[derive(Debug)]
pub enum CacheError {
    Io(std::io::Error),
    Build(cranklab_core::Error),
}

impl fmt::Display for CacheError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CacheError::Io(e) => write!(f, "cache I/O error: {e}"),
            CacheError::Build(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CacheError {}

impl From<std::io::Error> for CacheError {
    fn from(e: std::io::Error) -> Self {
        CacheError::Io(e)
    }
}

pub fn checksum(payload: &Value) -> String {
    let canonical = serde_json::to_string(payload).expect("JSON values always serialize");
    let digest = Sha256::digest(canonical.as_bytes());
    let mut word = [0u8; 8];
    word.copy_from_slice(&digest[..8]);
    format!("{:016x}", u64::from_be_bytes(word))
}

/// Rows as arrays of `[m, "count"]` pairs, nonzero entries only.
fn table_payload(table: &StatTable) -> Value {
    Value::Array(
        (0..=table.max_n())
            .map(|n| {
                Value::Array(
                    table
                        .row(n)
                        .map(|(m, c)| {
                            Value::Array(vec![Value::from(m), Value::String(c.to_string())])
                        })
                        .collect(),
                )
            })
            .collect(),
    )
}

fn payload_of(data: &CachedData) -> Value {
    match data {
        CachedData::PartitionCounts(v) => {
            Value::Array(v.iter().map(|c| Value::String(c.to_string())).collect())
        }
        CachedData::Table(t) => table_payload(t),
    }
}

pub fn envelope_for(kind: CacheKind, data: &CachedData) -> CacheEnvelope {
    let payload = payload_of(data);
    CacheEnvelope {
        format_version: FORMAT_VERSION,
        kind,
        max_n: data.max_n(),
        checksum: checksum(&payload),
        payload,
    }
}

/// Canonical file bytes: sorted keys, compact, trailing newline.
pub fn serialize(kind: CacheKind, data: &CachedData) -> Vec<u8> {
    let value = serde_json::to_value(envelope_for(kind, data)).expect("envelope serializes");
    let mut bytes = serde_json::to_vec(&value).expect("envelope serializes");
    bytes.push(b'\n');
    bytes
}

fn decode_payload(kind: CacheKind, max_n: usize, payload: Value) -> Result<CachedData, String> {
    let Value::Array(items) = payload else {
        return Err("payload is not an array".into());
    };
    if items.len() != max_n + 1 {
        return Err(format!(
            "payload has {} rows, expected {}",
            items.len(),
            max_n + 1
        ));
    }
    match kind {
        CacheKind::PartitionCounts => {
            let counts = items
                .into_iter()
                .map(|v| {
                    v.as_str()
                        .and_then(|s| s.parse::<CountValue>().ok())
                        .ok_or_else(|| "count is not a decimal string".to_string())
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(CachedData::PartitionCounts(counts))
        }
        CacheKind::RankTable | CacheKind::CrankTable => {
            let rows = items
                .into_iter()
                .map(|row| -> Result<BTreeMap<i64, CountValue>, String> {
                    let entries: Vec<(i64, CountValue)> =
                        serde_json::from_value(row).map_err(|e| e.to_string())?;
                    Ok(entries.into_iter().collect())
                })
                .collect::<Result<Vec<_>, _>>()?;
            let stat = if kind == CacheKind::RankTable {
                StatKind::Rank
            } else {
                StatKind::Crank
            };
            StatTable::from_rows(stat, rows)
                .map(CachedData::Table)
                .map_err(|e| e.to_string())
        }
    }
}

/// Reads and validates a cache file; `Err` carries the reason it cannot
/// serve `kind` up to `max_n`.
pub fn load(path: &Path, kind: CacheKind, max_n: usize) -> Result<CachedData, String> {
    let bytes = fs::read(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let env: CacheEnvelope =
        serde_json::from_slice(&bytes).map_err(|e| format!("corrupt cache file: {e}"))?;
    if env.format_version != FORMAT_VERSION {
        return Err(format!(
            "format version {} does not match {FORMAT_VERSION}",
            env.format_version
        ));
    }
    if env.kind != kind {
        return Err(format!("cache holds {}, wanted {kind}", env.kind));
    }
    if env.max_n < max_n {
        return Err(format!("cache covers n <= {}, wanted {max_n}", env.max_n));
    }
    if checksum(&env.payload) != env.checksum {
        return Err("checksum mismatch".into());
    }
    let data = decode_payload(kind, env.max_n, env.payload)?;
    Ok(data.truncated(max_n))
}

/// Writes atomically: temp file in the same directory, then rename.
pub fn store(path: &Path, kind: CacheKind, data: &CachedData) -> Result<(), CacheError> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(&serialize(kind, data))?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| CacheError::Io(e.error))?;
    Ok(())
}

pub fn build(kind: CacheKind, max_n: usize) -> Result<CachedData, CacheError> {
    Ok(match kind {
        CacheKind::PartitionCounts => CachedData::PartitionCounts(partition_counts(max_n)),
        CacheKind::RankTable => CachedData::Table(
            build_stat_table(StatKind::Rank, max_n, Method::Enumeration)
                .map_err(CacheError::Build)?,
        ),
        CacheKind::CrankTable => CachedData::Table(
            build_stat_table(StatKind::Crank, max_n, Method::Series).map_err(CacheError::Build)?,
        ),
    })
}

/// Serves `kind` up to `max_n` from `path` when the file is valid and
/// large enough, otherwise rebuilds and replaces it.
pub fn load_or_build(
    kind: CacheKind,
    max_n: usize,
    path: &Path,
) -> Result<(CachedData, CacheStatus), CacheError> {
    let reason = match load(path, kind, max_n) {
        Ok(data) => return Ok((data, CacheStatus::Loaded)),
        Err(reason) => path.exists().then_some(reason),
    };
    let data = build(kind, max_n)?;
    store(path, kind, &data)?;
    Ok((data, CacheStatus::Built { reason }))
}

pub fn path_in(dir: &Path, kind: CacheKind) -> PathBuf {
    dir.join(kind.file_name())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checksum_is_stable_hex() {
        let c = checksum(&serde_json::json!(["1", "1", "2"]));
        assert_eq!(c.len(), 16);
        assert_eq!(c, checksum(&serde_json::json!(["1", "1", "2"])));
        assert_ne!(c, checksum(&serde_json::json!(["1", "1", "3"])));
    }

    #[test]
    fn envelope_keys_are_sorted_with_payload_last() {
        let data = build(CacheKind::PartitionCounts, 3).unwrap();
        let text = String::from_utf8(serialize(CacheKind::PartitionCounts, &data)).unwrap();
        assert!(text.starts_with("{\"checksum\":"));
        assert!(text.ends_with("\"max_n\":3,\"payload\":[\"1\",\"1\",\"2\",\"3\"]}\n"));
    }

    #[test]
    fn kind_names() {
        for kind in [
            CacheKind::PartitionCounts,
            CacheKind::RankTable,
            CacheKind::CrankTable,
        ] {
            assert_eq!(CacheKind::parse(&kind.to_string()), Some(kind));
        }
        assert_eq!(CacheKind::parse("bogus"), None);
    }
}
