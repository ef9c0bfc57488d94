//! Content-addressed on-disk cache of serialized characters.
//!
//! Each entry is one JSON file named by the SHA-256 of the key's canonical
//! form. Files are written to a temporary name and renamed into place.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Bumped whenever the serialized form or the algorithms change.
pub const ENGINE_VERSION: &str = concat!("qtchar-", env!("CARGO_PKG_VERSION"), "/1");

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObjectKind {
    ChiQ,
    ChiQt,
    Ft,
    Et,
    Twisted,
}

impl ObjectKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ObjectKind::ChiQ => "chiq",
            ObjectKind::ChiQt => "chiqt",
            ObjectKind::Ft => "ft",
            ObjectKind::Et => "et",
            ObjectKind::Twisted => "twisted",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheKey {
    pub family: char,
    pub rank: usize,
    pub kind: ObjectKind,
    /// Canonical text form of the monomial (sorted factors, no whitespace).
    pub monomial: String,
    pub version: String,
}

impl CacheKey {
    pub fn new(family: char, rank: usize, kind: ObjectKind, monomial: String) -> Self {
        Self { family, rank, kind, monomial, version: ENGINE_VERSION.to_string() }
    }

    pub fn canonical(&self) -> String {
        format!("{}|{}{}|{}|{}", self.version, self.family, self.rank, self.kind.as_str(), self.monomial)
    }

    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }
}

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    value: Value,
}

pub enum Lookup {
    Hit(Value),
    Miss,
    /// Present but unreadable or written for another key.
    Corrupt(String),
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating cache directory {}", dir.display()))?;
        Ok(Self { dir: dir.to_path_buf() })
    }

    pub fn path(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(format!("{}.json", key.digest()))
    }

    pub fn load(&self, key: &CacheKey) -> Lookup {
        let bytes = match fs::read(self.path(key)) {
            Ok(b) => b,
            Err(_) => return Lookup::Miss,
        };
        match serde_json::from_slice::<Entry>(&bytes) {
            Ok(e) if e.key == key.canonical() => Lookup::Hit(e.value),
            Ok(e) => Lookup::Corrupt(format!("entry holds key {}", e.key)),
            Err(e) => Lookup::Corrupt(e.to_string()),
        }
    }

    pub fn store(&self, key: &CacheKey, value: &Value) -> Result<()> {
        let entry = Entry { key: key.canonical(), value: value.clone() };
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        serde_json::to_writer(&mut tmp, &entry)?;
        tmp.flush()?;
        tmp.persist(self.path(key)).map_err(|e| e.error)?;
        Ok(())
    }

    /// Returns the cached value, or computes, stores and returns it. A
    /// corrupt entry is reported through `warn` and overwritten.
    pub fn get_or_compute<F>(&self, key: &CacheKey, warn: impl Fn(&str), compute: F) -> anyhow::Result<Value>
    where
        F: FnOnce() -> anyhow::Result<Value>,
    {
        match self.load(key) {
            Lookup::Hit(v) => return Ok(v),
            Lookup::Corrupt(why) => warn(&format!("discarding corrupt cache entry {}: {why}", key.digest())),
            Lookup::Miss => {}
        }
        let v = compute()?;
        self.store(key, &v)?;
        Ok(v)
    }
}
