//! Content-addressed store of canonical forms and automorphism orders.
//!
//! Entries are keyed by the sha256 of the structure's text form and live
//! one per file, written through a temporary file and a rename so an
//! interrupted run never leaves a half-written entry under the final name.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub const CACHE_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub version: u32,
    pub key: String,
    /// Digest of the canonical form.
    pub digest: String,
    pub aut_order: String,
}

#[derive(Debug)]
pub struct Cache {
    dir: Option<PathBuf>,
    hits: AtomicU64,
    misses: AtomicU64,
    discarded: AtomicU64,
}

pub fn content_key(kind: &str, text: &str) -> String {
    let mut h = Sha256::new();
    h.update(kind.as_bytes());
    h.update([0]);
    h.update(text.as_bytes());
    hex::encode(h.finalize())
}

impl Cache {
    pub fn open(dir: impl Into<PathBuf>) -> CliResult<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
        Ok(Cache {
            dir: Some(dir),
            hits: AtomicU64::new(0),
            misses: AtomicU64::new(0),
            discarded: AtomicU64::new(0),
        })
    }

    /// A cache that stores nothing.
    pub fn disabled() -> Self {
        Cache {
            dir: None,
            hits: AtomicU64::new(0),
            misses: AtomicU64::new(0),
            discarded: AtomicU64::new(0),
        }
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.dir
            .as_ref()
            .map(|d| d.join(&key[..2]).join(format!("{key}.json")))
    }

    fn read(&self, key: &str, path: &Path) -> Option<CacheEntry> {
        let text = fs::read_to_string(path).ok()?;
        match serde_json::from_str::<CacheEntry>(&text) {
            Ok(e) if e.version == CACHE_VERSION && e.key == key => Some(e),
            Ok(_) | Err(_) => {
                log::warn!("discarding cache entry {}", path.display());
                self.discarded.fetch_add(1, Ordering::Relaxed);
                let _ = fs::remove_file(path);
                None
            }
        }
    }

    fn write(&self, path: &Path, entry: &CacheEntry) -> CliResult<()> {
        let parent = path.parent().expect("cache entries live in a subdirectory");
        fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        let text = serde_json::to_string(entry).map_err(|e| CliError::Encode(e.to_string()))?;
        fs::write(&tmp, text).map_err(|e| CliError::io(&tmp, e))?;
        fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
    }

    /// Looks `key` up, computing and storing `(digest, aut_order)` on a miss.
    pub fn get_or_compute<F>(&self, key: &str, compute: F) -> CliResult<CacheEntry>
    where
        F: FnOnce() -> CliResult<(String, String)>,
    {
        let path = self.path(key);
        if let Some(p) = &path {
            if let Some(e) = self.read(key, p) {
                self.hits.fetch_add(1, Ordering::Relaxed);
                return Ok(e);
            }
        }
        self.misses.fetch_add(1, Ordering::Relaxed);
        let (digest, aut_order) = compute()?;
        let entry = CacheEntry {
            version: CACHE_VERSION,
            key: key.to_string(),
            digest,
            aut_order,
        };
        if let Some(p) = &path {
            self.write(p, &entry)?;
        }
        Ok(entry)
    }

    pub fn hits(&self) -> u64 {
        self.hits.load(Ordering::Relaxed)
    }

    pub fn misses(&self) -> u64 {
        self.misses.load(Ordering::Relaxed)
    }

    pub fn discarded(&self) -> u64 {
        self.discarded.load(Ordering::Relaxed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn compute() -> CliResult<(String, String)> {
        Ok(("abc".into(), "7920".into()))
    }

    #[test]
    fn second_lookup_hits() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::open(dir.path()).unwrap();
        let key = content_key("design", "11 1 11");
        let a = c.get_or_compute(&key, compute).unwrap();
        let b = c
            .get_or_compute(&key, || panic!("should not recompute"))
            .unwrap();
        assert_eq!(a, b);
        assert_eq!((c.hits(), c.misses()), (1, 1));
    }

    #[test]
    fn corrupt_and_stale_entries_are_discarded() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::open(dir.path()).unwrap();
        let key = content_key("design", "x");
        c.get_or_compute(&key, compute).unwrap();
        let path = c.path(&key).unwrap();
        fs::write(&path, "{not json").unwrap();
        c.get_or_compute(&key, compute).unwrap();
        assert_eq!(c.discarded(), 1);

        let stale = CacheEntry {
            version: CACHE_VERSION + 1,
            key: key.clone(),
            digest: "zzz".into(),
            aut_order: "1".into(),
        };
        fs::write(&path, serde_json::to_string(&stale).unwrap()).unwrap();
        let e = c.get_or_compute(&key, compute).unwrap();
        assert_eq!(e.digest, "abc");
        assert_eq!(c.discarded(), 2);
    }

    #[test]
    fn disabled_cache_always_computes() {
        let c = Cache::disabled();
        c.get_or_compute("ab", compute).unwrap();
        c.get_or_compute("ab", compute).unwrap();
        assert_eq!(c.misses(), 2);
    }
}
