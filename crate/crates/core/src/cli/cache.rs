use std::fs::{self, OpenOptions};
use std::io::{ErrorKind, Write};
use std::path::{Path, PathBuf};
use std::thread::sleep;
use std::time::{Duration, SystemTime};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::CliError;

pub const CACHE_ENV: &str = "STABLEHOM_CACHE_DIR";
/// Locks older than this are assumed to belong to a dead process.
const STALE_LOCK: Duration = Duration::from_secs(600);

pub fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn sha256_hex(data: &[u8]) -> String {
    hex(&Sha256::digest(data))
}

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    payload_sha256: String,
    exit_code: i32,
    payload: String,
}

/// Finished reports keyed by the hash of the canonical job. An entry is used only when
/// its stored key and payload hash both check out; anything else is recomputed.
pub struct ResultCache {
    dir: PathBuf,
}

struct Lock(PathBuf);

impl Drop for Lock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.0);
    }
}

impl ResultCache {
    pub fn open(dir: impl Into<PathBuf>) -> Result<ResultCache, CliError> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        Ok(ResultCache { dir })
    }

    pub fn from_env() -> Result<Option<ResultCache>, CliError> {
        std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(ResultCache::open).transpose()
    }

    fn entry_path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    fn lock(&self, key: &str) -> Result<Lock, CliError> {
        let path = self.dir.join(format!("{key}.lock"));
        loop {
            match OpenOptions::new().write(true).create_new(true).open(&path) {
                Ok(mut f) => {
                    let _ = writeln!(f, "{}", std::process::id());
                    return Ok(Lock(path));
                }
                Err(e) if e.kind() == ErrorKind::AlreadyExists => {
                    if is_stale(&path) {
                        let _ = fs::remove_file(&path);
                    } else {
                        sleep(Duration::from_millis(50));
                    }
                }
                Err(e) => return Err(CliError::Io(format!("{}: {e}", path.display()))),
            }
        }
    }

    fn read(&self, key: &str) -> Option<(i32, String)> {
        let text = fs::read_to_string(self.entry_path(key)).ok()?;
        let entry: Entry = serde_json::from_str(&text).ok()?;
        (entry.key == key && entry.payload_sha256 == sha256_hex(entry.payload.as_bytes())).then_some((entry.exit_code, entry.payload))
    }

    fn write(&self, key: &str, exit_code: i32, payload: &str) -> Result<(), CliError> {
        let entry = Entry { key: key.to_string(), payload_sha256: sha256_hex(payload.as_bytes()), exit_code, payload: payload.to_string() };
        let tmp = self.dir.join(format!("{key}.{}.tmp", std::process::id()));
        let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", tmp.display()));
        fs::write(&tmp, serde_json::to_string(&entry).expect("entries serialize")).map_err(io)?;
        fs::rename(&tmp, self.entry_path(key)).map_err(io)
    }

    /// The cached `(exit code, payload)` for `key`, computing and storing it on a miss.
    /// Errors are never cached. The flag reports a hit.
    pub fn get_or_compute(&self, key: &str, compute: impl FnOnce() -> Result<(i32, String), CliError>) -> Result<(i32, String, bool), CliError> {
        if let Some((code, payload)) = self.read(key) {
            return Ok((code, payload, true));
        }
        let _lock = self.lock(key)?;
        // another process may have finished while we waited
        if let Some((code, payload)) = self.read(key) {
            return Ok((code, payload, true));
        }
        let (code, payload) = compute()?;
        self.write(key, code, &payload)?;
        Ok((code, payload, false))
    }
}

fn is_stale(path: &Path) -> bool {
    fs::metadata(path)
        .and_then(|m| m.modified())
        .map(|t| SystemTime::now().duration_since(t).unwrap_or_default() > STALE_LOCK)
        .unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hits_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ResultCache::open(dir.path()).unwrap();
        let (c, p, hit) = cache.get_or_compute("abc", || Ok((0, "{}".into()))).unwrap();
        assert_eq!((c, p.as_str(), hit), (0, "{}", false));
        let (_, p, hit) = cache.get_or_compute("abc", || panic!("should hit")).unwrap();
        assert_eq!((p.as_str(), hit), ("{}", true));
        // a tampered payload fails validation and is recomputed
        let path = dir.path().join("abc.json");
        let text = fs::read_to_string(&path).unwrap().replace("\"payload\":\"{}\"", "\"payload\":\"{1}\"");
        fs::write(&path, text).unwrap();
        let (_, p, hit) = cache.get_or_compute("abc", || Ok((2, "[]".into()))).unwrap();
        assert_eq!((p.as_str(), hit), ("[]", false));
        assert!(cache.get_or_compute("err", || Err(CliError::Job("x".into()))).is_err());
        assert!(!dir.path().join("err.json").exists());
        assert!(!dir.path().join("abc.lock").exists());
    }

    #[test]
    fn concurrent_writers_compute_once() {
        let dir = tempfile::tempdir().unwrap();
        let count = std::sync::atomic::AtomicUsize::new(0);
        std::thread::scope(|s| {
            for _ in 0..4 {
                s.spawn(|| {
                    let cache = ResultCache::open(dir.path()).unwrap();
                    cache
                        .get_or_compute("k", || {
                            count.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                            sleep(Duration::from_millis(100));
                            Ok((0, "v".into()))
                        })
                        .unwrap();
                });
            }
        });
        assert_eq!(count.load(std::sync::atomic::Ordering::SeqCst), 1);
    }
}
