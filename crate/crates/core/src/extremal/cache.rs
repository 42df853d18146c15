//! On-disk memo of solved instances: one JSON file per instance, named by
//! the SHA-256 of its canonical inputs.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::Result;

/// Bumped whenever a change could alter a stored value or witness.
pub const ENGINE_VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "+engine.1");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub key: String,
    pub kind: String,
    pub inputs: Value,
    pub value: usize,
    pub witness: Value,
    pub engine_version: String,
}

#[derive(Debug, Clone)]
pub struct ResultCache {
    dir: PathBuf,
}

impl ResultCache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(ResultCache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Hex SHA-256 of the kind and the inputs serialized with sorted keys.
    pub fn key(kind: &str, inputs: &Value) -> String {
        let mut h = Sha256::new();
        h.update(kind.as_bytes());
        h.update(b"\n");
        h.update(inputs.to_string().as_bytes());
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// A stored record for these inputs from the current engine, if any.
    /// Unreadable or mismatched files are treated as misses.
    pub fn load(&self, kind: &str, inputs: &Value) -> Option<CacheRecord> {
        let key = Self::key(kind, inputs);
        let text = fs::read_to_string(self.path(&key)).ok()?;
        let rec: CacheRecord = serde_json::from_str(&text).ok()?;
        (rec.key == key && rec.kind == kind && &rec.inputs == inputs && rec.engine_version == ENGINE_VERSION)
            .then_some(rec)
    }

    pub fn store(&self, kind: &str, inputs: Value, value: usize, witness: Value) -> Result<CacheRecord> {
        let rec = CacheRecord {
            key: Self::key(kind, &inputs),
            kind: kind.to_string(),
            inputs,
            value,
            witness,
            engine_version: ENGINE_VERSION.to_string(),
        };
        let tmp = self.dir.join(format!("{}.tmp{}", rec.key, std::process::id()));
        fs::write(&tmp, serde_json::to_string_pretty(&rec)?)?;
        fs::rename(&tmp, self.path(&rec.key))?;
        Ok(rec)
    }
}
