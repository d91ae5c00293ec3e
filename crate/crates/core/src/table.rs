//! Memo table of local counts, optionally backed by an append-only JSON-lines file.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Mutex, RwLock};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `(ring digest, p, m, unital)`.
pub type CountKey = (String, u64, u32, bool);

/// One line of the cache file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub ring: String,
    pub p: u64,
    pub m: u32,
    pub unital: bool,
    pub count: String,
}

impl CacheRecord {
    pub fn key(&self) -> CountKey {
        (self.ring.clone(), self.p, self.m, self.unital)
    }

    pub fn value(&self) -> Result<BigUint> {
        parse_decimal(&self.count)
    }
}

fn parse_decimal(s: &str) -> Result<BigUint> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("count {s:?} is not a decimal string")));
    }
    s.parse::<BigUint>()
        .map_err(|e| Error::Parse(format!("count {s:?}: {e}")))
}

/// Parse and sanity-check one cache line.
pub fn parse_cache_line(line: &str) -> Result<CacheRecord> {
    let rec: CacheRecord = serde_json::from_str(line)?;
    rec.value()?;
    if rec.m == 0 && rec.count != "1" {
        return Err(Error::Parse("index p^0 must have count 1".into()));
    }
    Ok(rec)
}

#[derive(Debug, Default)]
pub struct LocalCountTable {
    entries: RwLock<BTreeMap<CountKey, BigUint>>,
    file: Option<Mutex<File>>,
    path: Option<PathBuf>,
}

impl LocalCountTable {
    /// In-memory only.
    pub fn new() -> Self {
        LocalCountTable::default()
    }

    /// Load every record in `path` (creating it if absent) and append new ones to it.
    /// A malformed final line, as left by an interrupted write, is skipped with a warning.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut entries = BTreeMap::new();
        if path.exists() {
            let text = std::fs::read_to_string(&path)?;
            let mut offset = 0usize;
            let mut keep = text.len();
            let total = text.split_inclusive('\n').count();
            for (n, raw) in text.split_inclusive('\n').enumerate() {
                let start = offset;
                offset += raw.len();
                let line = raw.trim();
                if line.is_empty() {
                    continue;
                }
                match parse_cache_line(line) {
                    Ok(rec) => {
                        let v = rec.value()?;
                        let key = rec.key();
                        if let Some(old) = entries.get(&key) {
                            if old != &v {
                                return Err(Error::Parse(format!(
                                    "{}:{}: conflicting counts {old} and {v} for one key",
                                    path.display(),
                                    n + 1
                                )));
                            }
                        }
                        entries.insert(key, v);
                    }
                    Err(e) if n + 1 == total && !raw.ends_with('\n') => {
                        log::warn!("{}: dropping truncated last line: {e}", path.display());
                        keep = start;
                    }
                    Err(e) => {
                        return Err(Error::Parse(format!("{}:{}: {e}", path.display(), n + 1)))
                    }
                }
            }
            if keep < text.len() {
                OpenOptions::new()
                    .write(true)
                    .open(&path)?
                    .set_len(keep as u64)?;
            } else if !text.is_empty() && !text.ends_with('\n') {
                OpenOptions::new()
                    .append(true)
                    .open(&path)?
                    .write_all(b"\n")?;
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(&path)?;
        Ok(LocalCountTable {
            entries: RwLock::new(entries),
            file: Some(Mutex::new(file)),
            path: Some(path),
        })
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn get(&self, ring: &str, p: u64, m: u32, unital: bool) -> Option<BigUint> {
        if m == 0 {
            return Some(BigUint::from(1u8));
        }
        self.entries
            .read()
            .expect("table lock")
            .get(&(ring.to_string(), p, m, unital))
            .cloned()
    }

    pub fn insert(&self, ring: &str, p: u64, m: u32, unital: bool, count: BigUint) -> Result<()> {
        let key = (ring.to_string(), p, m, unital);
        let mut entries = self.entries.write().expect("table lock");
        if let Some(old) = entries.get(&key) {
            if old != &count {
                return Err(Error::Parse(format!(
                    "conflicting counts {old} and {count} for ring {ring}, p={p}, m={m}"
                )));
            }
            return Ok(());
        }
        if let Some(f) = &self.file {
            let rec = CacheRecord {
                ring: ring.to_string(),
                p,
                m,
                unital,
                count: count.to_string(),
            };
            let mut f = f.lock().expect("cache file lock");
            writeln!(f, "{}", serde_json::to_string(&rec)?)?;
        }
        entries.insert(key, count);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("table lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Snapshot of every entry in key order.
    pub fn records(&self) -> Vec<CacheRecord> {
        self.entries
            .read()
            .expect("table lock")
            .iter()
            .map(|((ring, p, m, unital), v)| CacheRecord {
                ring: ring.clone(),
                p: *p,
                m: *m,
                unital: *unital,
                count: v.to_string(),
            })
            .collect()
    }
}
