//! On-disk cache of trace-field descriptors. Every entry is re-verified when
//! the file is loaded, so a stale or edited cache is reported, never used.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tracefield::{build_trace_field, TraceFieldDescriptor, TraceFieldError};

pub const CACHE_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache I/O: {0}")]
    Io(#[from] io::Error),
    #[error("cache is not valid JSON: {0}")]
    Parse(String),
    #[error("cache schema version {found}, expected {CACHE_SCHEMA_VERSION}")]
    Schema { found: u32 },
    #[error("cache entry {key} holds the descriptor for n = {n}")]
    KeyMismatch { key: u64, n: u64 },
    #[error("cache entry n = {n} failed re-verification: {source}")]
    Verification { n: u64, source: TraceFieldError },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheFile {
    pub schema_version: u32,
    pub fields: BTreeMap<u64, TraceFieldDescriptor>,
}

#[derive(Debug, Default)]
pub struct TraceFieldCache {
    file: CacheFile,
    dirty: bool,
}

impl TraceFieldCache {
    pub fn new() -> Self {
        Self {
            file: CacheFile {
                schema_version: CACHE_SCHEMA_VERSION,
                fields: BTreeMap::new(),
            },
            dirty: false,
        }
    }

    /// Reads and re-verifies a cache. A missing file is an empty cache.
    pub fn load(path: &Path) -> Result<Self, CacheError> {
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Self::new()),
            Err(e) => return Err(e.into()),
        };
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, CacheError> {
        let file: CacheFile =
            serde_json::from_str(text).map_err(|e| CacheError::Parse(e.to_string()))?;
        if file.schema_version != CACHE_SCHEMA_VERSION {
            return Err(CacheError::Schema {
                found: file.schema_version,
            });
        }
        for (&key, d) in &file.fields {
            if key != d.n {
                return Err(CacheError::KeyMismatch { key, n: d.n });
            }
            d.verify()
                .map_err(|source| CacheError::Verification { n: key, source })?;
        }
        Ok(Self { file, dirty: false })
    }

    pub fn len(&self) -> usize {
        self.file.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.file.fields.is_empty()
    }

    pub fn is_dirty(&self) -> bool {
        self.dirty
    }

    pub fn get(&self, n: u64) -> Option<&TraceFieldDescriptor> {
        self.file.fields.get(&n)
    }

    pub fn get_or_build(&mut self, n: u64) -> Result<TraceFieldDescriptor, TraceFieldError> {
        if let Some(d) = self.file.fields.get(&n) {
            return Ok(d.clone());
        }
        let d = build_trace_field(n)?;
        self.insert(d.clone());
        Ok(d)
    }

    pub fn insert(&mut self, d: TraceFieldDescriptor) {
        self.file.fields.insert(d.n, d);
        self.dirty = true;
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.file).expect("cache serializes")
    }

    /// Writes through a sibling temporary file and a rename, so readers never
    /// see a half-written cache.
    pub fn save(&self, path: &Path) -> Result<(), CacheError> {
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(".tmp");
        fs::write(&tmp, self.to_json())?;
        fs::rename(&tmp, path)?;
        Ok(())
    }
}
