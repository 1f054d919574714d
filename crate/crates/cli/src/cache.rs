//! Append-only JSONL result store. Each record carries the tool version
//! and a checksum of its value; a stale or damaged record is a miss.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use kho_core::{PlanarDiagram, Ring, Variant};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const FILE_NAME: &str = "cache.jsonl";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: String,
    pub version: String,
    pub value: Value,
    pub checksum: String,
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn checksum(value: &Value) -> String {
    sha256_hex(value.to_string().as_bytes())
}

/// Key for one kind of result on a diagram; the diagram enters through its
/// canonical numbering.
pub fn cache_key(d: &PlanarDiagram, ring: Ring, variant: Variant, kind: &str) -> String {
    sha256_hex(format!("{}|{ring}|{variant}|{kind}", d.content_hash()).as_bytes())
}

#[derive(Clone, Debug)]
pub struct Cache {
    path: PathBuf,
    version: String,
}

impl Cache {
    pub fn open(dir: &Path) -> Result<Self> {
        Self::with_version(dir, env!("CARGO_PKG_VERSION"))
    }

    pub fn with_version(dir: &Path, version: &str) -> Result<Self> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating cache directory {}", dir.display()))?;
        Ok(Cache { path: dir.join(FILE_NAME), version: version.to_string() })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Latest intact record for `key` written by this version.
    pub fn get_entry(&self, key: &str) -> Result<Option<CacheEntry>> {
        let file = match File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e).with_context(|| format!("opening {}", self.path.display())),
        };
        file.lock_shared().with_context(|| format!("locking {}", self.path.display()))?;
        let mut found = None;
        for line in BufReader::new(&file).lines() {
            let line = line.with_context(|| format!("reading {}", self.path.display()))?;
            let Ok(entry) = serde_json::from_str::<CacheEntry>(&line) else { continue };
            if entry.key == key && entry.version == self.version && entry.checksum == checksum(&entry.value) {
                found = Some(entry);
            }
        }
        Ok(found)
    }

    pub fn get<T: DeserializeOwned>(&self, key: &str) -> Result<Option<T>> {
        Ok(self.get_entry(key)?.and_then(|e| serde_json::from_value(e.value).ok()))
    }

    pub fn put<T: Serialize>(&self, key: &str, value: &T) -> Result<()> {
        let value = serde_json::to_value(value)?;
        let entry = CacheEntry { key: key.to_string(), version: self.version.clone(), checksum: checksum(&value), value };
        let mut line = serde_json::to_string(&entry)?;
        line.push('\n');
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .with_context(|| format!("opening {}", self.path.display()))?;
        file.lock().with_context(|| format!("locking {}", self.path.display()))?;
        file.write_all(line.as_bytes()).with_context(|| format!("writing {}", self.path.display()))?;
        Ok(())
    }

    /// Cached value, or `compute` followed by a write.
    pub fn get_or_insert<T, F>(&self, key: &str, compute: F) -> Result<T>
    where
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> Result<T>,
    {
        if let Some(v) = self.get(key)? {
            return Ok(v);
        }
        let v = compute()?;
        self.put(key, &v)?;
        Ok(v)
    }
}
