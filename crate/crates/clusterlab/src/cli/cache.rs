//! Content-addressed result cache for sweep points.
//!
//! Keys hash the tool version together with every parameter that affects
//! the value, so stale entries can never be replayed across releases or
//! changed inputs. Writes go to a temporary file in the cache directory
//! and are renamed into place, which keeps concurrent workers from ever
//! observing a half-written entry.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use sha2::{Digest, Sha256};

use crate::error::Result;

/// Environment variable overriding the cache location.
pub const CACHE_DIR_ENV: &str = "CLUSTERLAB_CACHE_DIR";

/// Cache directory: `$CLUSTERLAB_CACHE_DIR` or `./.clusterlab-cache`.
pub fn cache_dir() -> PathBuf {
    std::env::var_os(CACHE_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(".clusterlab-cache"))
}

/// Hex digest of the joined key parts (unit-separator delimited, so no
/// concatenation ambiguity).
pub fn key(parts: &[&str]) -> String {
    let mut hasher = Sha256::new();
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            hasher.update([0x1f]);
        }
        hasher.update(p.as_bytes());
    }
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn entry_path(dir: &Path, key: &str) -> PathBuf {
    dir.join(format!("{key}.json"))
}

/// Cached payload for `key`, if present and readable.
pub fn load(dir: &Path, key: &str) -> Option<String> {
    std::fs::read_to_string(entry_path(dir, key)).ok()
}

static TEMP_COUNTER: AtomicU64 = AtomicU64::new(0);

/// Stores `payload` under `key` atomically (temp file + rename).
pub fn store(dir: &Path, key: &str, payload: &str) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let nonce = TEMP_COUNTER.fetch_add(1, Ordering::Relaxed);
    let tmp = dir.join(format!(".{key}.{}.{nonce}.tmp", std::process::id()));
    std::fs::write(&tmp, payload)?;
    std::fs::rename(&tmp, entry_path(dir, key))?;
    Ok(())
}
