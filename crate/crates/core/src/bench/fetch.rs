//! SuiteSparse download with a local cache.
//!
//! Files land in `$SPMV_CACHE_DIR/{group}/{name}.mtx` (default
//! `./.spmv-cache`). Benchmarks only ever read the cache; [`fetch`] is the
//! one place that touches the network.

use std::fs::{self, File};
use std::io::{self, Read};
use std::path::{Path, PathBuf};

use flate2::read::GzDecoder;

use crate::error::{Error, Result};

pub const CACHE_ENV: &str = "SPMV_CACHE_DIR";
pub const BASE_URL: &str = "https://sparse.tamu.edu/MM";

pub fn cache_dir() -> PathBuf {
    std::env::var_os(CACHE_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(".spmv-cache"))
}

pub fn cached_path(cache: &Path, group: &str, name: &str) -> PathBuf {
    cache.join(group).join(format!("{name}.mtx"))
}

/// Cached path if the matrix has been fetched.
pub fn lookup(cache: &Path, group: &str, name: &str) -> Option<PathBuf> {
    let p = cached_path(cache, group, name);
    p.is_file().then_some(p)
}

/// Pull `{name}/{name}.mtx` out of a SuiteSparse `.tar.gz` stream.
pub fn extract_mtx<R: Read>(archive: R, name: &str, dest: &Path) -> Result<()> {
    let wanted = format!("{name}.mtx");
    let mut tar = tar::Archive::new(GzDecoder::new(archive));
    let entries = tar.entries().map_err(|e| Error::Fetch(e.to_string()))?;
    for entry in entries {
        let mut entry = entry.map_err(|e| Error::Fetch(e.to_string()))?;
        let path = entry.path().map_err(|e| Error::Fetch(e.to_string()))?;
        if path.file_name().and_then(|f| f.to_str()) != Some(&wanted) {
            continue;
        }
        if let Some(dir) = dest.parent() {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        let tmp = dest.with_extension("mtx.part");
        let mut out = File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
        io::copy(&mut entry, &mut out).map_err(|e| Error::io(&tmp, e))?;
        fs::rename(&tmp, dest).map_err(|e| Error::io(dest, e))?;
        return Ok(());
    }
    Err(Error::Fetch(format!("{wanted} not found in archive")))
}

/// Download `group/name` unless it is already cached; returns the path.
pub fn fetch(cache: &Path, group: &str, name: &str) -> Result<PathBuf> {
    if let Some(p) = lookup(cache, group, name) {
        return Ok(p);
    }
    let url = format!("{BASE_URL}/{group}/{name}.tar.gz");
    let res = ureq::get(&url)
        .call()
        .map_err(|e| Error::Fetch(format!("{url}: {e}")))?;
    let dest = cached_path(cache, group, name);
    extract_mtx(res.into_body().into_reader(), name, &dest)?;
    Ok(dest)
}
