//! Content-addressed result store.
//!
//! An entry is a directory named by the SHA-256 of a canonical JSON key
//! (spec document, region, digits, algorithm version, ...) holding the exact
//! output bytes, so a hit reproduces a run byte for byte. Partial results
//! (tiles, scan windows, audit orders) use the same store as checkpoints.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use sha2::{Digest, Sha256};

use crate::config::CacheMode;

pub const CACHE_ENV: &str = "HGZEROS_CACHE_DIR";
pub const ALGORITHM_VERSION: &str = concat!("hgzeros-", env!("CARGO_PKG_VERSION"), "/1");

const COMPLETE: &str = ".complete";

pub type Files = BTreeMap<String, Vec<u8>>;

#[derive(Clone, Debug)]
pub struct ResultCache {
    root: PathBuf,
    mode: CacheMode,
}

pub fn hash_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Key of a JSON value; `serde_json` maps are ordered, so this is canonical.
pub fn key_of(value: &serde_json::Value) -> String {
    hash_hex(value.to_string().as_bytes())
}

impl ResultCache {
    pub fn at(root: impl Into<PathBuf>, mode: CacheMode) -> Self {
        Self { root: root.into(), mode }
    }

    /// Root from `HGZEROS_CACHE_DIR`, else `$HOME/.cache/hgzeros`, else
    /// `./.hgzeros-cache`.
    pub fn from_env(mode: CacheMode) -> Self {
        let root = std::env::var_os(CACHE_ENV)
            .map(PathBuf::from)
            .or_else(|| std::env::var_os("HOME").map(|h| Path::new(&h).join(".cache").join("hgzeros")))
            .unwrap_or_else(|| PathBuf::from(".hgzeros-cache"));
        Self::at(root, mode)
    }

    pub fn mode(&self) -> CacheMode {
        self.mode
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn entry(&self, key: &str) -> PathBuf {
        self.root.join(&key[..2]).join(key)
    }

    pub fn get(&self, key: &str) -> anyhow::Result<Option<Files>> {
        if self.mode == CacheMode::Off {
            return Ok(None);
        }
        let dir = self.entry(key);
        if !dir.join(COMPLETE).exists() {
            return Ok(None);
        }
        let mut files = Files::new();
        for item in fs::read_dir(&dir).with_context(|| format!("reading cache entry {}", dir.display()))? {
            let item = item?;
            let name = item.file_name().to_string_lossy().into_owned();
            if name != COMPLETE {
                files.insert(name, fs::read(item.path())?);
            }
        }
        Ok(Some(files))
    }

    pub fn put(&self, key: &str, files: &Files) -> anyhow::Result<()> {
        if self.mode != CacheMode::ReadWrite {
            return Ok(());
        }
        let dir = self.entry(key);
        let tmp = dir.with_extension(format!("tmp{}", std::process::id()));
        if tmp.exists() {
            fs::remove_dir_all(&tmp)?;
        }
        fs::create_dir_all(&tmp).with_context(|| format!("creating {}", tmp.display()))?;
        for (name, bytes) in files {
            fs::write(tmp.join(name), bytes)?;
        }
        fs::write(tmp.join(COMPLETE), b"")?;
        if dir.exists() {
            fs::remove_dir_all(&dir)?;
        }
        fs::rename(&tmp, &dir).with_context(|| format!("publishing cache entry {}", dir.display()))?;
        Ok(())
    }

    /// Returns the stored files for `key`, computing and storing them on a
    /// miss.
    pub fn get_or_compute(&self, key: &str, compute: impl FnOnce() -> anyhow::Result<Files>) -> anyhow::Result<Files> {
        if let Some(hit) = self.get(key)? {
            log::info!("cache hit {key}");
            return Ok(hit);
        }
        let files = compute()?;
        self.put(key, &files)?;
        Ok(files)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_modes() {
        let dir = tempfile::tempdir().unwrap();
        let key = key_of(&serde_json::json!({"b": 1, "a": [1, 2]}));
        assert_eq!(key, key_of(&serde_json::json!({"a": [1, 2], "b": 1})));
        let mut files = Files::new();
        files.insert("x.csv".into(), b"re,im\n1,2\n".to_vec());
        let ro = ResultCache::at(dir.path(), CacheMode::ReadOnly);
        ro.put(&key, &files).unwrap();
        assert!(ro.get(&key).unwrap().is_none());
        let rw = ResultCache::at(dir.path(), CacheMode::ReadWrite);
        rw.put(&key, &files).unwrap();
        assert_eq!(rw.get(&key).unwrap().unwrap(), files);
        assert_eq!(ro.get(&key).unwrap().unwrap(), files);
        assert!(ResultCache::at(dir.path(), CacheMode::Off).get(&key).unwrap().is_none());
        let mut calls = 0;
        let got = rw
            .get_or_compute(&key, || {
                calls += 1;
                Ok(Files::new())
            })
            .unwrap();
        assert_eq!((got, calls), (files, 0));
    }
}
